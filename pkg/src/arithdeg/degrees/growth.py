"""Arithmetic-degree estimation from exact height sequences.

Heights along an orbit of ``P -> M P + Q`` form a linear recurrence sequence:
they are a quadratic form in the state of the affine map, so they satisfy a
recurrence whose roots are pairwise products of eigenvalues of
``[[M, Q], [0, 1]]``. The default estimator recovers the minimal recurrence
exactly with Berlekamp-Massey over Q and reports its largest root modulus,
which is ``lim h_n^(1/n)``. A least-squares fit on the tail of ``log h_n``
is kept as a fallback and as a diagnostic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Literal, Sequence

import numpy as np

from ..heightmodel import AbelianModel, PointCoords, SelfMap, height, orbit
from .. import _exact
from ..polyalgebra import IntPoly, RatPoly, _binomial_poly
from .spectral import root_modulus_enclosure

__all__ = [
    "AlphaEstimate",
    "GrowthProfile",
    "height_sequence",
    "minimal_recurrence",
    "estimate_from_heights",
    "arithmetic_degree_estimate",
    "growth_profile",
    "polynomial_fit",
]

POLY_SLOPE_CUTOFF = math.log1p(1e-4)


@dataclass(frozen=True)
class AlphaEstimate:
    value: float
    n_used: int
    mode: Literal["exponential", "polynomial"]
    poly_degree_fit: int | None
    residual: float
    method: str = "recurrence"
    lower: Fraction | None = None
    upper: Fraction | None = None
    recurrence: IntPoly | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.value < 1:
            raise ValueError("arithmetic degree below 1")
        if self.mode == "polynomial" and self.value != 1:
            raise ValueError("polynomial regime must report value 1")


def height_sequence(A: AbelianModel, phi: SelfMap, P: PointCoords, n_max: int) -> list[Fraction]:
    return [height(A, X) for X in orbit(phi, P, n_max)]


def minimal_recurrence(seq: Sequence[Fraction], margin: int = 4) -> IntPoly | None:
    """Characteristic polynomial of the shortest recurrence generating ``seq``.

    Berlekamp-Massey over Q. Returns None when the sequence is too short to
    pin the recurrence down (fewer than ``2 L + margin`` terms).
    """
    s = [Fraction(x) for x in seq]
    N = len(s)
    C = [Fraction(1)]
    B = [Fraction(1)]
    L, m, b = 0, 1, Fraction(1)
    for n in range(N):
        d = s[n]
        for i in range(1, L + 1):
            if i < len(C):
                d += C[i] * s[n - i]
        if d == 0:
            m += 1
            continue
        coef = d / b
        T = list(C)
        need = len(B) + m
        if len(C) < need:
            C = C + [Fraction(0)] * (need - len(C))
        for i, x in enumerate(B):
            C[i + m] -= coef * x
        if 2 * L <= n:
            L, B, b, m = n + 1 - L, T, d, 1
        else:
            m += 1
    if 2 * L + margin > N:
        return None
    C = (C + [Fraction(0)] * (L + 1))[: L + 1]
    # s_n + C1 s_{n-1} + ... + CL s_{n-L} = 0  ->  X^L + C1 X^(L-1) + ... + CL
    return IntPoly.from_rational(list(reversed(C)))


def _root_one_multiplicity(p: IntPoly) -> int:
    s = 0
    coeffs = list(p.coeffs)
    while len(coeffs) > 1 and sum(coeffs) == 0:
        out = [0] * (len(coeffs) - 1)
        acc = 0
        for i in range(len(coeffs) - 1, 0, -1):
            acc += coeffs[i]
            out[i - 1] = acc
        coeffs = out
        s += 1
    return s


def _lstsq(x: np.ndarray, y: np.ndarray) -> tuple[float, float, float]:
    """Slope, intercept and RMS residual of the line fit ``y ~ a x + b``."""
    A = np.vstack([x, np.ones_like(x)]).T
    coef, *_ = np.linalg.lstsq(A, y, rcond=None)
    resid = y - A @ coef
    return float(coef[0]), float(coef[1]), float(np.sqrt(np.mean(resid**2)))


def _log(h: Fraction) -> float:
    return math.log(h.numerator) - math.log(h.denominator)


def _tail(heights: Sequence[Fraction], tail_window) -> tuple[np.ndarray, np.ndarray]:
    n_max = len(heights) - 1
    w = tail_window if isinstance(tail_window, int) else max(4, int(round(tail_window * n_max)))
    w = min(max(w, 4), n_max)
    pts = [(n, _log(h)) for n, h in enumerate(heights) if n >= n_max - w + 1 and n >= 1 and h > 0]
    if not pts:
        return np.array([]), np.array([])
    ns, ys = zip(*pts)
    return np.array(ns, dtype=float), np.array(ys)


def _regression(heights, tail_window) -> AlphaEstimate:
    ns, ys = _tail(heights, tail_window)
    n_used = len(heights) - 1
    if len(ns) < 2:
        return AlphaEstimate(1.0, n_used, "polynomial", 0, 0.0, "regression")
    b, _, res_exp = _lstsq(ns, ys)
    c, _, res_poly = _lstsq(np.log(ns), ys)
    if b < POLY_SLOPE_CUTOFF or res_poly < res_exp:
        return AlphaEstimate(1.0, n_used, "polynomial", max(0, int(round(c))), res_poly, "regression")
    return AlphaEstimate(math.exp(b), n_used, "exponential", None, res_exp, "regression")


def estimate_from_heights(
    heights: Sequence[Fraction],
    tail_window: float | int = 0.25,
    method: Literal["recurrence", "regression"] = "recurrence",
) -> AlphaEstimate:
    """Estimate ``lim h_n^(1/n)`` from ``h_0 .. h_n_max``."""
    heights = [Fraction(h) for h in heights]
    n_used = len(heights) - 1
    ns, ys = _tail(heights, tail_window)
    if len(ns) == 0:
        # orbit sits at height 0 on the whole tail
        return AlphaEstimate(1.0, n_used, "polynomial", 0, 0.0, method)
    if method == "regression":
        return _regression(heights, tail_window)
    if method != "recurrence":
        raise ValueError(f"unknown method {method!r}")
    rec = minimal_recurrence(heights)
    if rec is None:
        return _regression(heights, tail_window)
    _, _, residual = _lstsq(ns, ys) if len(ns) > 1 else (0, 0, 0.0)
    if rec.degree < 1:
        return AlphaEstimate(1.0, n_used, "polynomial", 0, residual, method, recurrence=rec)
    lo, hi, approx = root_modulus_enclosure(rec)
    if approx < 1 + 1e-4 or approx <= 1:
        s = _root_one_multiplicity(rec)
        return AlphaEstimate(
            1.0, n_used, "polynomial", max(s - 1, 0), residual, method, Fraction(1), max(hi, Fraction(1)), rec
        )
    return AlphaEstimate(approx, n_used, "exponential", None, residual, method, lo, hi, rec)


def arithmetic_degree_estimate(
    A: AbelianModel,
    phi: SelfMap,
    P: PointCoords,
    n_max: int = 80,
    tail_window: float | int = 0.25,
    method: Literal["recurrence", "regression"] = "recurrence",
) -> AlphaEstimate:
    """``alpha(phi, P)`` from the exact heights of ``phi^n(P)``, n = 0 .. n_max."""
    if n_max < 4:
        raise ValueError("n_max must be at least 4")
    return estimate_from_heights(height_sequence(A, phi, P, n_max), tail_window, method)


def polynomial_fit(values: Sequence[Fraction]) -> RatPoly | None:
    """The polynomial ``p`` with ``p(n) == values[n]`` for every n, if one of low enough degree exists.

    Uses forward differences; requires at least two spare terms beyond the
    degree as confirmation, otherwise returns None.
    """
    diffs = [Fraction(v) for v in values]
    leading = []
    while diffs and any(diffs):
        leading.append(diffs[0])
        diffs = [b - a for a, b in zip(diffs, diffs[1:])]
    if not diffs and leading and len(leading) > len(values) - 2:
        return None
    if len(leading) + 2 > len(values):
        return None
    p = RatPoly([])
    for k, c in enumerate(leading):
        p = p + _binomial_poly(k) * c
    return p


@dataclass(frozen=True)
class GrowthProfile:
    """``fitted_degree`` is the degree of the zero-residual polynomial fit of ``n -> h_n``;
    ``loglog_slope`` is the least-squares slope of ``log h_n`` against ``log n`` on the tail,
    which only tends to the degree as n grows."""

    r: int
    fitted_degree: int
    loglog_slope: float
    bound_constant: Fraction
    bound_holds: bool


def _unipotent_index(M) -> int | None:
    d = len(M)
    N = _exact.sub(M, _exact.identity(d))
    P = _exact.identity(d)
    for r in range(0, d + 1):
        if _exact.is_zero(P):
            return r
        P = _exact.matmul(P, N)
    return None


def growth_profile(
    A: AbelianModel, phi: SelfMap, P: PointCoords, n_max: int = 80, r: int | None = None
) -> GrowthProfile:
    """Polynomial growth of heights under a unipotent ``phi`` with ``(M - I)**r == 0``.

    ``fitted_degree`` is the degree of ``n -> h_n`` as an exact polynomial;
    ``bound_constant`` is the sum of the absolute values of its coefficients,
    so ``h_n <= C n**(2r)`` for every n >= 1 once ``exact_degree <= 2r``.
    """
    M = phi.M
    r_min = _unipotent_index(M)
    if r is None:
        if r_min is None:
            raise ValueError("M is not unipotent")
        r = r_min
    if r_min is None or r_min > r:
        raise ValueError(f"(M - I)^{r} != 0")
    hs = height_sequence(A, phi, P, n_max)
    p = polynomial_fit(hs)
    if p is None:
        raise ArithmeticError("heights are not polynomial in n over the sampled range")
    degree = max(p.degree, 0)
    C = sum((abs(Fraction(c)) for c in p.coeffs), Fraction(0))
    bound_holds = degree <= 2 * r and all(h <= C * n ** (2 * r) for n, h in enumerate(hs) if n >= 1)
    ns, ys = _tail(hs, 0.25)
    slope = _lstsq(np.log(ns), ys)[0] if len(ns) > 1 else 0.0
    return GrowthProfile(r, degree, slope, C, bound_holds)
