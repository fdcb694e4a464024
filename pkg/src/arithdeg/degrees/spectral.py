"""Certified enclosures of spectral radii.

The spectral radius of an integer matrix is the largest root modulus of its
characteristic polynomial. Roots are approximated with mpmath, then certified
in exact Gaussian-rational arithmetic with Weierstrass inclusion disks:
for a squarefree polynomial of degree N with approximations ``z_i``, every
root lies in the union of the disks ``|z - z_i| <= N |W_i|`` where
``W_i = p(z_i) / (lc * prod_{j != i} (z_i - z_j))``, and a connected
component made of m disks holds exactly m roots. Pairwise disjoint disks
therefore give a two-sided enclosure of every root modulus.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt

import mpmath

from .. import _exact
from .._exact import Matrix
from ..polyalgebra import IntPoly, charpoly_exact, gcd_rational

__all__ = [
    "SpectralCertificate",
    "squarefree_part",
    "root_moduli",
    "root_modulus_enclosure",
    "has_unit_modulus_root",
    "spectral_radius_certified",
    "dynamical_degree",
    "frobenius_norms",
    "gelfand_oracle",
]

_PRECISIONS = (60, 120, 240, 480)


@dataclass(frozen=True)
class SpectralCertificate:
    """A real value with a rational enclosure ``lower <= value <= upper``."""

    value: float
    lower: Fraction
    upper: Fraction

    def __post_init__(self):
        if not self.lower <= Fraction(self.value) <= self.upper:
            raise ValueError("value outside its enclosure")

    @property
    def width(self) -> Fraction:
        return self.upper - self.lower

    def encloses(self, x) -> bool:
        return self.lower <= Fraction(x) <= self.upper

    def overlaps(self, other: "SpectralCertificate", slack=0) -> bool:
        slack = Fraction(slack)
        return self.lower - slack <= other.upper and other.lower - slack <= self.upper

    def squared(self) -> "SpectralCertificate":
        lo = max(self.lower, Fraction(0))
        return _certificate(self.value * self.value, lo * lo, self.upper * self.upper)


def _certificate(value: float, lo: Fraction, hi: Fraction) -> SpectralCertificate:
    # widen to contain the rounded float value; enlarging an enclosure keeps it valid
    fv = Fraction(value)
    return SpectralCertificate(value, min(lo, fv), max(hi, fv))


def squarefree_part(p: IntPoly) -> IntPoly:
    if p.degree <= 0:
        return p.primitive()
    g = gcd_rational(p, p.derivative())
    return p.exact_div(g).primitive() if g.degree > 0 else p.primitive()


# Gaussian rationals as (re, im) pairs of Fractions


def _cmul(a, b):
    return (a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0])


def _csub(a, b):
    return (a[0] - b[0], a[1] - b[1])


def _cabs2(a) -> Fraction:
    return a[0] * a[0] + a[1] * a[1]


def _ceval(coeffs, z):
    acc = (Fraction(0), Fraction(0))
    for c in reversed(coeffs):
        acc = _cmul(acc, z)
        acc = (acc[0] + c, acc[1])
    return acc


def _sqrt_bounds(q: Fraction, bits: int) -> tuple[Fraction, Fraction]:
    """Rationals ``lo <= sqrt(q) <= hi`` with ``hi - lo = 2**-bits``."""
    if q < 0:
        raise ValueError("negative argument")
    scaled = q.numerator * (1 << (2 * bits)) // q.denominator
    s = isqrt(scaled)
    unit = Fraction(1, 1 << bits)
    return s * unit, (s + 1) * unit


def _to_gauss(z, bits: int):
    # round to a dyadic grid to keep the exact arithmetic small
    scale = 1 << bits
    re = Fraction(int(mpmath.nint(z.real * scale)), scale)
    im = Fraction(int(mpmath.nint(z.imag * scale)), scale)
    return (re, im)


def root_moduli(p: IntPoly) -> list[tuple[Fraction, Fraction, float]]:
    """Certified ``(lo, hi, approx)`` for the modulus of every distinct root of ``p``."""
    if p.degree < 1:
        raise ValueError("polynomial has no roots")
    q = squarefree_part(p)
    N = q.degree
    if N == 1:
        root = abs(Fraction(-q.coeffs[0], q.coeffs[1]))
        return [(root, root, float(root))]
    for dps in _PRECISIONS:
        bits = int(dps * 3.33) + 8
        with mpmath.workdps(dps):
            try:
                approx = mpmath.polyroots(list(reversed(q.coeffs)), maxsteps=200 + 20 * dps, extraprec=4 * dps)
            except mpmath.libmp.NoConvergence:
                continue
            zs = [_to_gauss(mpmath.mpc(z), bits) for z in approx]
        if len(set(zs)) < N:
            continue
        lc = Fraction(q.lc)
        radii = []
        for i, z in enumerate(zs):
            denom = (lc, Fraction(0))
            for j, w in enumerate(zs):
                if j != i:
                    denom = _cmul(denom, _csub(z, w))
            w2 = _cabs2(_ceval(q.coeffs, z)) / _cabs2(denom)
            radii.append(N * _sqrt_bounds(w2, bits)[1])
        disjoint = all(
            _cabs2(_csub(zs[i], zs[j])) > (radii[i] + radii[j]) ** 2
            for i in range(N)
            for j in range(i + 1, N)
        )
        if not disjoint:
            continue
        out = []
        for z, r in zip(zs, radii):
            lo, hi = _sqrt_bounds(_cabs2(z), bits)
            out.append((max(lo - r, Fraction(0)), hi + r, math.hypot(float(z[0]), float(z[1]))))
        return out
    raise ArithmeticError(f"could not isolate the roots of {q}")


def root_modulus_enclosure(p: IntPoly) -> tuple[Fraction, Fraction, float]:
    """Certified ``(lo, hi, approx)`` for the largest root modulus of ``p``."""
    mods = root_moduli(p)
    return max(m[0] for m in mods), max(m[1] for m in mods), max(m[2] for m in mods)


def has_unit_modulus_root(p: IntPoly) -> bool:
    """True unless every root modulus is certified to differ from 1."""
    return any(lo <= 1 <= hi for lo, hi, _ in root_moduli(p))


def spectral_radius_certified(M: Matrix, tol: float = 1e-9) -> SpectralCertificate:
    """``rho(M)`` with a rational enclosure of width at most ``tol``."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    M = _exact.as_matrix(M)
    if not M or not _exact.is_square(M):
        raise ValueError("matrix is not square")
    if _exact.det(M) == 0:
        raise ValueError("M singular")
    lo, hi, approx = root_modulus_enclosure(charpoly_exact(M))
    cert = _certificate(approx, lo, hi)
    if cert.width > Fraction(tol):
        raise ArithmeticError(f"enclosure width {float(cert.width)} exceeds tol {tol}")
    return cert


def dynamical_degree(phi, tol: float = 1e-9) -> SpectralCertificate:
    """``delta(phi) = rho(M)**2``; the translation part of ``phi`` never enters."""
    rho = spectral_radius_certified(phi.M, tol / 8)
    cert = rho.squared()
    if cert.width > Fraction(tol):
        raise ArithmeticError("squared enclosure too wide")
    return cert


def frobenius_norms(M: Matrix, n_max: int) -> list[int]:
    """Exact ``||M^n||_F^2`` for n = 1 .. n_max."""
    M = _exact.as_matrix(M)
    out = []
    P = M
    for n in range(1, n_max + 1):
        if n > 1:
            P = _exact.matmul(P, M)
        out.append(sum(x * x for row in P for x in row))
    return out


def gelfand_oracle(M: Matrix, n_max: int) -> list[float]:
    """``(||M^n||_F^2)^(1/n)`` for n = 1 .. n_max; tends to ``rho(M)**2``."""
    if n_max < 2:
        raise ValueError("n_max must be at least 2")
    return [math.exp(math.log(v) / n) for n, v in enumerate(frobenius_norms(M, n_max), start=1)]
