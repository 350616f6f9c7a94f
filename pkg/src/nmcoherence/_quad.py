"""Quadrature node builders shared by the solvers and the steady-state module."""

from functools import lru_cache

import numpy as np
from scipy.special import roots_jacobi


@lru_cache(maxsize=64)
def _leggauss(order: int):
    return np.polynomial.legendre.leggauss(order)


def panel_nodes(edges, order: int = 16):
    """Composite Gauss-Legendre nodes/weights over the panels defined by ``edges``."""
    edges = np.asarray(edges, dtype=float)
    xg, wg = _leggauss(order)
    mid = 0.5 * (edges[:-1] + edges[1:])
    half = 0.5 * np.diff(edges)
    nodes = (mid[:, None] + half[:, None] * xg[None, :]).ravel()
    weights = (half[:, None] * wg[None, :]).ravel()
    return nodes, weights


def power_head_nodes(s: float, w_head: float, order: int = 64):
    """Nodes/weights for integrating w^(s-1) * f(w) over [0, w_head], f smooth.

    Gauss-Jacobi with the algebraic endpoint weight folded into the returned
    weights, so that sum(weights * f(nodes)) approximates the full integral
    including the w^(s-1) factor.
    """
    x, wq = roots_jacobi(order, 0.0, s - 1.0)
    w = 0.5 * w_head * (x + 1.0)
    return w, wq * (0.5 * w_head) ** s / w ** (s - 1.0)


def sqrt_head_nodes(w_head: float, order: int = 64):
    """Nodes/weights on [0, w_head] under the substitution w = y**2.

    Regularizes half-integer endpoint behavior (w^(k/2) terms become
    polynomial in y).
    """
    xg, wg = _leggauss(order)
    y = 0.5 * np.sqrt(w_head) * (xg + 1.0)
    return y**2, wg * np.sqrt(w_head) * y


def geometric_edges(a: float, b: float, ratio: float, first: float):
    """Panel edges from a to b with widths growing geometrically from ``first``."""
    edges = [a]
    w = first
    while edges[-1] + w < b:
        edges.append(edges[-1] + w)
        w *= ratio
    edges.append(b)
    return np.asarray(edges)
