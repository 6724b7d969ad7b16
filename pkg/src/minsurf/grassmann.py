"""Bivectors of R^4, the star operator and the Grassmannian of oriented planes.

Bivectors are stored as 6 components in the basis
(e12, e13, e14, e23, e24, e34).  All functions broadcast over leading axes.

Self-dual and anti-self-dual bases:
    E1+- = (e12 +- e34)/sqrt2,  E2+- = (e13 -+ e24)/sqrt2,  E3+- = (e14 +- e23)/sqrt2
so that e12 + *e12 = e12 + e34, e13 + *e13 = e13 + e42, e14 + *e14 = e14 + e23.
"""

from dataclasses import dataclass

import numpy as np

PAIRS = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))
_S = 1 / np.sqrt(2)

# rows: E1+, E2+, E3+ in bivector coordinates
EPLUS = _S * np.array([
    [1, 0, 0, 0, 0, 1],
    [0, 1, 0, 0, -1, 0],
    [0, 0, 1, 1, 0, 0],
], dtype=float)
EMINUS = _S * np.array([
    [1, 0, 0, 0, 0, -1],
    [0, 1, 0, 0, 1, 0],
    [0, 0, 1, -1, 0, 0],
], dtype=float)


@dataclass
class DualSplit:
    p: np.ndarray
    m: np.ndarray

    def bivector(self):
        return self.p @ EPLUS + self.m @ EMINUS


def wedge(v, w):
    v = np.asarray(v)
    w = np.asarray(w)
    return np.stack([v[..., a] * w[..., b] - v[..., b] * w[..., a] for a, b in PAIRS], axis=-1)


def inner(B, C):
    """Inner product making the six basis bivectors orthonormal (bilinear for complex input)."""
    return np.sum(np.asarray(B) * np.asarray(C), axis=-1)


def star(B):
    B = np.asarray(B)
    b12, b13, b14, b23, b24, b34 = np.moveaxis(B, -1, 0)
    return np.stack([b34, -b24, b23, b14, -b13, b12], axis=-1)


def split(B):
    """Coordinates of the +1 and -1 eigencomponents of star."""
    B = np.asarray(B)
    return DualSplit(B @ EPLUS.T, B @ EMINUS.T)


def to_matrix(B):
    """Antisymmetric 4x4 matrix M with M[a, b] = B_ab."""
    B = np.asarray(B)
    M = np.zeros(B.shape[:-1] + (4, 4), dtype=B.dtype)
    for k, (a, b) in enumerate(PAIRS):
        M[..., a, b] = B[..., k]
        M[..., b, a] = -B[..., k]
    return M


def from_matrix(M):
    return np.stack([M[..., a, b] for a, b in PAIRS], axis=-1)


def _check_orthonormal(v, w, tol=1e-10):
    g = np.stack([
        np.sum(v * v, -1) - 1, np.sum(w * w, -1) - 1, np.sum(v * w, -1)
    ])
    if np.max(np.abs(g)) > tol:
        raise ValueError("plane_to_spheres needs an orthonormal pair")


def plane_to_spheres(v, w, check=True):
    """Image of the oriented plane spanned by orthonormal (v, w) in the two unit spheres.

    Returns sqrt2 times the (+) and (-) coordinates of v^w, which are the
    E+- coordinates of (v^w +- *(v^w))/sqrt2.
    """
    v = np.asarray(v, dtype=float)
    w = np.asarray(w, dtype=float)
    if check:
        _check_orthonormal(v, w)
    s = split(wedge(v, w))
    return np.sqrt(2) * s.p, np.sqrt(2) * s.m


def induced_isometry(A, B, tol=1e-10):
    """Action of A in O(4) on bivectors: (v^w) -> (Av)^(Aw)."""
    A = np.asarray(A, dtype=float)
    if np.max(np.abs(A.T @ A - np.eye(4))) > tol:
        raise ValueError("matrix is not orthogonal")
    M = to_matrix(B)
    return from_matrix(A @ M @ A.T)


def induced_on_spheres(A):
    """3x3 blocks of the induced isometry in E+- coordinates.

    For det A = 1 returns (R+, R-) acting on each factor; for det A = -1
    returns (R+-, R-+) mapping the (+) factor to the (-) factor and back.
    """
    images = np.array([induced_isometry(A, E) for E in np.vstack([EPLUS, EMINUS])])
    coords_p = images @ EPLUS.T
    coords_m = images @ EMINUS.T
    if np.linalg.det(A) > 0:
        return coords_p[:3].T, coords_m[3:].T
    return coords_m[:3].T, coords_p[3:].T


def iso_I(p):
    """Identification Lambda2+ -> Lambda2- sending E_i+ to E_i-; identity on coordinates."""
    return np.array(p, dtype=float, copy=True)


def iso_I_inv(m):
    return np.array(m, dtype=float, copy=True)
