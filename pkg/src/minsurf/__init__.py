"""Minimal surfaces in S2 x S2: catalog, invariants, Frenet reconstruction and Gauss maps."""

from .cxgrid import ComplexGrid
from .s2xs2 import ProductImmersion, invariants

__version__ = "0.1.0"

__all__ = ["ComplexGrid", "ProductImmersion", "invariants"]
