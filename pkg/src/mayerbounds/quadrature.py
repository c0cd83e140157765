"""Adaptive one-dimensional quadrature with explicit error accounting.

Panel rule: Gauss-Legendre 16 vs 32 nodes; the difference is the panel error
estimate.  Refinement always splits the panel with the largest estimate, so
narrow features (the Lennard-Jones integrands have a boundary layer of
relative width ~1e-7 at the cut radius) are localized automatically; callers
seed `breakpoints` when the feature location is known.

Integrands must accept numpy arrays.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

__all__ = [
    "QuadratureConvergenceError",
    "TemperednessError",
    "QuadratureSpec",
    "integrate_adaptive",
    "radial_integral",
    "stable_ratio",
    "expm1_over_x",
]


class QuadratureConvergenceError(ArithmeticError):
    """Tolerance not reached within the subdivision budget.

    Carries the best value and the achieved error estimate so callers can
    decide whether the partial result is still usable.
    """

    def __init__(self, message: str, value: float, achieved_error: float):
        super().__init__(message)
        self.value = value
        self.achieved_error = achieved_error


class TemperednessError(ValueError):
    """An improper integral has a non-integrable declared tail."""


@dataclass(frozen=True)
class QuadratureSpec:
    """Tolerances and budgets for the radial integrals.

    `tail_cut` is the radius beyond which declared power-law tails are
    integrated in closed form instead of numerically; it must lie beyond
    every feature radius of the potential in use.
    """

    rel_tol: float = 1e-8
    abs_tol: float = 1e-12
    tail_cut: float = 50.0
    max_subdivisions: int = 4000

    def __post_init__(self):
        if self.rel_tol <= 0 or self.abs_tol <= 0:
            raise ValueError("tolerances must be positive")
        if self.tail_cut <= 0 or self.max_subdivisions < 1:
            raise ValueError("invalid tail cut or subdivision budget")

    def halved(self) -> "QuadratureSpec":
        return QuadratureSpec(
            rel_tol=self.rel_tol / 2.0,
            abs_tol=self.abs_tol / 2.0,
            tail_cut=self.tail_cut,
            max_subdivisions=self.max_subdivisions,
        )


DEFAULT_SPEC = QuadratureSpec()


_GL_CACHE: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def _gl_rule(order: int) -> tuple[np.ndarray, np.ndarray]:
    rule = _GL_CACHE.get(order)
    if rule is None:
        rule = np.polynomial.legendre.leggauss(order)
        _GL_CACHE[order] = rule
    return rule


def _panel(f: Callable[[np.ndarray], np.ndarray], a: float, b: float) -> tuple[float, float]:
    """Return (GL32 value, |GL32 - GL16|) on [a, b]."""
    mid = 0.5 * (a + b)
    half = 0.5 * (b - a)
    x16, w16 = _gl_rule(16)
    x32, w32 = _gl_rule(32)
    coarse = half * float(np.dot(w16, f(mid + half * x16)))
    fine = half * float(np.dot(w32, f(mid + half * x32)))
    return fine, abs(fine - coarse)


def integrate_adaptive(
    f: Callable[[np.ndarray], np.ndarray],
    lo: float,
    hi: float,
    *,
    rel_tol: float = 1e-8,
    abs_tol: float = 1e-12,
    max_panels: int = 4000,
    breakpoints: Iterable[float] = (),
) -> tuple[float, float]:
    """Integrate f on [lo, hi]; return (value, error estimate).

    Raises QuadratureConvergenceError when the estimate cannot be pushed
    below max(abs_tol, rel_tol * |value|) within max_panels panels.
    """
    if hi < lo:
        raise ValueError(f"inverted integration range [{lo}, {hi}]")
    if hi == lo:
        return 0.0, 0.0

    edges = [lo]
    for p in sorted(set(float(b) for b in breakpoints)):
        if lo < p < hi:
            edges.append(p)
    edges.append(hi)

    heap: list[tuple[float, float, float, float, float]] = []
    total = 0.0
    total_err = 0.0
    n_panels = 0
    for a, b in zip(edges[:-1], edges[1:]):
        value, err = _panel(f, a, b)
        heapq.heappush(heap, (-err, a, b, value, err))
        total += value
        total_err += err
        n_panels += 1

    while total_err > max(abs_tol, rel_tol * abs(total)):
        if n_panels >= max_panels:
            raise QuadratureConvergenceError(
                f"quadrature did not reach tolerance after {n_panels} panels "
                f"(achieved {total_err:.3e}, value {total:.6e})",
                value=total,
                achieved_error=total_err,
            )
        _, a, b, value, err = heapq.heappop(heap)
        total -= value
        total_err -= err
        mid = 0.5 * (a + b)
        if mid <= a or mid >= b:
            # panel narrower than floating-point resolution: keep as is
            total += value
            total_err += err
            heapq.heappush(heap, (0.0, a, b, value, 0.0))
            continue
        for aa, bb in ((a, mid), (mid, b)):
            v, e = _panel(f, aa, bb)
            heapq.heappush(heap, (-e, aa, bb, v, e))
            total += v
            total_err += e
        n_panels += 1

    return total, total_err


def radial_integral(
    g: Callable[[np.ndarray], np.ndarray],
    d: int,
    lo: float,
    hi: float,
    spec: QuadratureSpec | None = None,
    *,
    tail: Sequence[tuple[float, float]] | None = None,
    breakpoints: Iterable[float] = (),
) -> float:
    """Integral of g(|x|) over the radial shell lo <= |x| <= hi in R^d.

    Evaluates S_{d-1} * int r^{d-1} g(r) dr adaptively.  An infinite upper
    limit requires `tail`, the exact power-law form g(r) = sum c_i r^{-p_i}
    valid for r >= spec.tail_cut (empty tuple = zero tail); the tail part is
    then integrated in closed form so no mass is silently truncated.
    """
    return radial_integral_err(g, d, lo, hi, spec, tail=tail, breakpoints=breakpoints)[0]


def radial_integral_err(
    g: Callable[[np.ndarray], np.ndarray],
    d: int,
    lo: float,
    hi: float,
    spec: QuadratureSpec | None = None,
    *,
    tail: Sequence[tuple[float, float]] | None = None,
    breakpoints: Iterable[float] = (),
) -> tuple[float, float]:
    """radial_integral plus the quadrature error estimate."""
    spec = spec or DEFAULT_SPEC
    surface = sphere_surface(d)

    def integrand(r: np.ndarray) -> np.ndarray:
        return surface * r ** (d - 1) * g(r)

    if math.isinf(hi):
        if tail is None:
            raise TemperednessError(
                "infinite upper limit requires declared power-law tail terms"
            )
        cut = spec.tail_cut
        tail_value = power_tail_integral(tail, d, max(lo, cut))
        if lo >= cut:
            return tail_value, 0.0
        value, err = integrate_adaptive(
            integrand,
            lo,
            cut,
            rel_tol=spec.rel_tol,
            abs_tol=spec.abs_tol,
            max_panels=spec.max_subdivisions,
            breakpoints=breakpoints,
        )
        return value + tail_value, err
    value, err = integrate_adaptive(
        integrand,
        lo,
        hi,
        rel_tol=spec.rel_tol,
        abs_tol=spec.abs_tol,
        max_panels=spec.max_subdivisions,
        breakpoints=breakpoints,
    )
    return value, err


def edge_ladder(lo: float, hi: float, depth: int = 48) -> list[float]:
    """Breakpoints accumulating geometrically at `hi`.

    Seeds panels that resolve a boundary layer just inside `hi` down to
    relative width 2^-depth.
    """
    width = hi - lo
    pts = [hi - width * 0.5**j for j in range(1, depth + 1)]
    return [p for p in pts if lo < p < hi]


def power_tail_integral(tail: Sequence[tuple[float, float]], d: int, start: float) -> float:
    """Closed form of S_{d-1} * int_start^inf r^{d-1} (sum_i c_i r^{-p_i}) dr.

    Each (c_i, p_i) term must have p_i > d; otherwise the tail is not
    integrable and a TemperednessError is raised.
    """
    total = 0.0
    for coef, p in tail:
        if p <= d:
            raise TemperednessError(
                f"tail term r^-{p} is not integrable against r^{d - 1} in d={d}"
            )
        total += coef * start ** (d - p) / (p - d)
    return sphere_surface(d) * total


def sphere_surface(d: int) -> float:
    """Surface area of the unit sphere in R^d (4*pi for d=3)."""
    return 2.0 * math.pi ** (d / 2.0) / math.gamma(d / 2.0)


def sphere_volume(radius: float, d: int) -> float:
    """Volume of the ball of the given radius in R^d."""
    return sphere_surface(d) / d * radius**d


def stable_ratio(x):
    """(1 - e^-x)/x without cancellation; 1 at the removable singularity x=0.

    Total function: decays to 0 as x -> +inf, grows like e^|x|/|x| for
    x -> -inf.  A short series takes over for |x| < 1e-5.  Accepts scalars or
    arrays; scalar in, scalar out.
    """
    arr = np.asarray(x, dtype=float)
    small = np.abs(arr) < 1e-5
    safe = np.where(small, 1.0, arr)
    tiny = np.where(small, arr, 0.0)
    with np.errstate(over="ignore"):
        out = np.where(
            small,
            1.0 - tiny / 2.0 + tiny * tiny / 6.0 - tiny * tiny * tiny / 24.0,
            -np.expm1(-safe) / safe,
        )
    return float(out) if np.isscalar(x) or arr.ndim == 0 else out


def expm1_over_x(x):
    """(e^x - 1)/x with the removable singularity filled in (value 1 at 0)."""
    arr = np.asarray(x, dtype=float)
    small = np.abs(arr) < 1e-5
    safe = np.where(small, 1.0, arr)
    tiny = np.where(small, arr, 0.0)
    with np.errstate(over="ignore"):
        out = np.where(
            small,
            1.0 + tiny / 2.0 + tiny * tiny / 6.0 + tiny * tiny * tiny / 24.0,
            np.expm1(safe) / safe,
        )
    return float(out) if np.isscalar(x) or arr.ndim == 0 else out
