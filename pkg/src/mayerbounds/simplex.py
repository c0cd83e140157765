"""Nested quadrature over the ordered inverse-temperature simplex.

Evaluates, for difference coefficients d_1..d_m,

    I = int_0^beta e^{-d_1 x_1} int_0^{x_1} e^{-d_2 x_2} ... int_0^{x_{m-1}}
        e^{-d_m x_m} dx_m ... dx_1

which is the ordered-simplex integral of exp(-sum_k (b_k - b_{k+1}) c_k) once
the level coefficients c are converted to differences d_k = c_k - c_{k-1}.

Each level is a one-dimensional integral of a smooth function; levels are
built innermost-first as piecewise-Chebyshev antiderivatives on a shared
panel grid (degree doubles adaptively per panel, panels split further when a
fit stalls).  The innermost level is the exact one-dimensional integral
s * (1 - e^{-d_m s})/(d_m s), which stays stable for any sign or size of d_m,
including d_m = 0, so no coefficient configuration needs special casing.

The panel count scales with beta * sum |d_k| so the within-panel dynamic
range of the exponentials stays bounded; this keeps the relative accuracy of
every level fit meaningful across the whole domain.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np
from numpy.polynomial import chebyshev as cheb

from .quadrature import QuadratureConvergenceError, stable_ratio

__all__ = ["simplex_integral_from_diffs"]

_DEGREES = (16, 32, 64, 128, 256)
_EXPONENT_SPAN_PER_PANEL = 20.0
_MAX_PANEL_SPLITS = 12


@lru_cache(maxsize=None)
def _cheb_points(count: int) -> np.ndarray:
    """Chebyshev points of the first kind on [-1, 1] (no endpoints)."""
    return np.cos(np.pi * (np.arange(count) + 0.5) / count)


@lru_cache(maxsize=None)
def _fit_matrix(count: int) -> np.ndarray:
    """Matrix mapping values at the first-kind points to Chebyshev coefficients."""
    k = np.arange(count)
    theta = np.pi * (k + 0.5) / count
    mat = 2.0 / count * np.cos(np.outer(k, theta))
    mat[0] *= 0.5
    return mat


class _Panel:
    """One antiderivative piece: F(x) = base + scale * (T(t(x)) - T(-1))."""

    __slots__ = ("lo", "hi", "mid", "half", "coeffs", "left_val", "base")

    def __init__(self, lo: float, hi: float, coeffs: np.ndarray, base: float):
        self.lo = lo
        self.hi = hi
        self.mid = 0.5 * (lo + hi)
        self.half = 0.5 * (hi - lo)
        self.coeffs = coeffs
        self.left_val = cheb.chebval(-1.0, coeffs)
        self.base = base

    def value(self, x: np.ndarray) -> np.ndarray:
        t = (x - self.mid) / self.half
        return self.base + self.half * (cheb.chebval(t, self.coeffs) - self.left_val)

    def right_value(self) -> float:
        return float(self.base + self.half * (cheb.chebval(1.0, self.coeffs) - self.left_val))


class _PiecewiseAntiderivative:
    """F(s) = int_0^s g, represented as Chebyshev antiderivatives per panel."""

    def __init__(self, panels: list[_Panel]):
        self.panels = panels
        self.edges = np.array([p.lo for p in panels] + [panels[-1].hi])
        self.total = panels[-1].right_value()

    def __call__(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        idx = np.clip(np.searchsorted(self.edges, x, side="right") - 1, 0, len(self.panels) - 1)
        out = np.empty_like(x)
        for p in np.unique(idx):
            sel = idx == p
            out[sel] = self.panels[p].value(x[sel])
        return out


def _fit_panel(g, lo: float, hi: float, rel_tol: float, depth: int, base: float) -> list[_Panel]:
    mid = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)
    for degree in _DEGREES:
        count = degree + 1
        values = g(mid + half * _cheb_points(count))
        coeffs = _fit_matrix(count) @ values
        scale = np.max(np.abs(coeffs))
        tail = np.max(np.abs(coeffs[-3:]))
        if tail <= rel_tol * scale or scale == 0.0:
            anti = cheb.chebint(coeffs)
            return [_Panel(lo, hi, anti, base)]
    if depth >= _MAX_PANEL_SPLITS:
        raise QuadratureConvergenceError(
            f"simplex level fit stalled on [{lo}, {hi}]",
            value=math.nan,
            achieved_error=float(tail / scale),
        )
    left = _fit_panel(g, lo, mid, rel_tol, depth + 1, base)
    right = _fit_panel(g, mid, hi, rel_tol, depth + 1, left[-1].right_value())
    return left + right


def _build_level(g, edges: np.ndarray, rel_tol: float) -> _PiecewiseAntiderivative:
    panels: list[_Panel] = []
    base = 0.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        pieces = _fit_panel(g, lo, hi, rel_tol, 0, base)
        panels.extend(pieces)
        base = pieces[-1].right_value()
    return _PiecewiseAntiderivative(panels)


def simplex_integral_from_diffs(diffs, beta: float, rel_tol: float = 1e-8) -> float:
    """Nested-quadrature value of the simplex integral for difference
    coefficients d_1..d_m at inverse temperature beta."""
    if beta < 0:
        raise ValueError("beta must be non-negative")
    if beta == 0.0:
        return 0.0
    diffs = tuple(float(d) for d in diffs)
    m = len(diffs)
    if m == 0:
        raise ValueError("at least one difference coefficient required")
    if m == 1:
        return float(beta * stable_ratio(diffs[0] * beta))

    span = beta * sum(abs(d) for d in diffs)
    n_panels = min(80, max(1, math.ceil(span / _EXPONENT_SPAN_PER_PANEL)))
    edges = np.linspace(0.0, beta, n_panels + 1)

    d_last = diffs[-1]
    level: _PiecewiseAntiderivative | None = None
    for j in range(m - 2, -1, -1):
        inner = level

        def g(x, _d=diffs[j], _inner=inner):
            if _inner is None:
                inner_vals = x * stable_ratio(d_last * x)
            else:
                inner_vals = _inner(x)
            return np.exp(-_d * x) * inner_vals

        level = _build_level(g, edges, rel_tol)
    return level.total
