"""Small Gauss-Legendre quadrature helpers (fixed panels and adaptive)."""

from __future__ import annotations

from typing import Callable

import numpy as np

from .errors import QuadratureError

_NODE_CACHE: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def _nodes(n: int) -> tuple[np.ndarray, np.ndarray]:
    if n not in _NODE_CACHE:
        _NODE_CACHE[n] = np.polynomial.legendre.leggauss(n)
    return _NODE_CACHE[n]


def _gl(f: Callable[[float], complex], a: float, b: float, n: int) -> complex:
    x, w = _nodes(n)
    mid = 0.5 * (a + b)
    half = 0.5 * (b - a)
    total = 0.0 + 0.0j
    for xi, wi in zip(x, w):
        total += wi * f(mid + half * xi)
    return half * total


def gauss_legendre_panels(
    f: Callable[[float], complex], a: float, b: float, width: float, order: int = 24
) -> complex:
    """Integrate f over [a, b] with fixed-width panels of Gauss-Legendre nodes."""
    n_panels = max(1, int(np.ceil((b - a) / width)))
    edges = np.linspace(a, b, n_panels + 1)
    total = 0.0 + 0.0j
    for lo, hi in zip(edges[:-1], edges[1:]):
        total += _gl(f, lo, hi, order)
    return total


def gauss_legendre_adaptive(
    f: Callable[[float], complex],
    a: float,
    b: float,
    tol: float,
    max_panels: int = 4000,
) -> complex:
    """Adaptive bisecting Gauss-Legendre integration of f over [a, b].

    Each panel compares 15- and 31-point rules; panels whose difference
    exceeds their share of tol are bisected.  Raises QuadratureError when
    the panel budget is exhausted.
    """
    stack = [(a, b)]
    total = 0.0 + 0.0j
    used = 0
    while stack:
        lo, hi = stack.pop()
        coarse = _gl(f, lo, hi, 15)
        fine = _gl(f, lo, hi, 31)
        used += 1
        if used > max_panels:
            raise QuadratureError("adaptive quadrature exhausted its panel budget")
        err = abs(fine - coarse)
        if err <= tol * max(1.0, (hi - lo) / (b - a)) or (hi - lo) < 1e-14 * (b - a):
            total += fine
        else:
            mid = 0.5 * (lo + hi)
            stack.append((lo, mid))
            stack.append((mid, hi))
    return total
