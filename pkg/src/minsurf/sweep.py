"""Classical RK4 integration of a first-order PDE system over a grid.

The system is given by its two directional derivatives,
``rhs(state, x, y, axis)`` returning d(state)/dx (axis 0) or d(state)/dy
(axis 1) for a batch of states of shape (m, d) at points x, y of shape (m,).
Integration runs from a base node along one grid line and then sweeps all
transverse lines at once.
"""

import math

import numpy as np


def substeps(h, max_step):
    return max(1, math.ceil(h / max_step - 1e-12))


def _rk4(rhs, s, x, y, axis, dt):
    if axis == 0:
        def f(st, t):
            return rhs(st, x + t, y, 0)
    else:
        def f(st, t):
            return rhs(st, x, y + t, 1)
    k1 = f(s, 0.0)
    k2 = f(s + 0.5 * dt * k1, 0.5 * dt)
    k3 = f(s + 0.5 * dt * k2, 0.5 * dt)
    k4 = f(s + dt * k3, dt)
    return s + dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4)


def march_line(rhs, s0, xs, ys, axis, h, i0, n, k):
    """States at nodes 0..n-1 along ``axis`` starting from node i0 with state s0.

    xs, ys are the coordinates of the batch at node i0.
    """
    out = np.empty((n,) + s0.shape, dtype=s0.dtype)
    out[i0] = s0
    for sign, idx in ((1, range(i0 + 1, n)), (-1, range(i0 - 1, -1, -1))):
        s = s0.copy()
        dt = sign * h / k
        prev = i0
        for node in idx:
            for q in range(k):
                off = (prev - i0) * h + q * dt
                if axis == 0:
                    s = _rk4(rhs, s, xs + off, ys, 0, dt)
                else:
                    s = _rk4(rhs, s, xs, ys + off, 1, dt)
            out[node] = s
            prev = node
    return out


def sweep(rhs, grid, state0, base, max_step=1e-3, order="xy"):
    """Integrate from ``state0`` at node ``base``; returns states of shape (nx, ny, d).

    order "xy" runs along the base row first and then all columns; "yx" the
    other way round.  Comparing both orders measures path dependence.
    """
    i0, j0 = base
    s0 = np.asarray(state0, dtype=float)[None, :]
    xb = np.array([grid.x[i0]])
    yb = np.array([grid.y[j0]])
    kx = substeps(grid.hx, max_step)
    ky = substeps(grid.hy, max_step)
    if order == "xy":
        row = march_line(rhs, s0, xb, yb, 0, grid.hx, i0, grid.nx, kx)[:, 0]
        cols = march_line(rhs, row, grid.x, np.full(grid.nx, yb[0]), 1, grid.hy, j0, grid.ny, ky)
        return np.transpose(cols, (1, 0, 2))
    if order == "yx":
        col = march_line(rhs, s0, xb, yb, 1, grid.hy, j0, grid.ny, ky)[:, 0]
        return march_line(rhs, col, np.full(grid.ny, xb[0]), grid.y, 0, grid.hx, i0, grid.nx, kx)
    raise ValueError("order must be 'xy' or 'yx'")
