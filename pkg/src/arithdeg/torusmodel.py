"""Torsion bookkeeping in the rational-torus model ``A = Q^(2d) / Z^(2d)``.

An isogeny given by the d x d integer matrix ``M`` acts on the torus through
its rational representation ``R = M (x) I_2``. Images of polynomials in ``R``
are subtori, and their torsion points are enumerated exactly: a point
``a / D`` lies in the image of ``F(R)`` iff ``K a = 0 (mod D)``, where the
rows of ``K`` are a saturated basis of the integer left kernel of ``F(R)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Iterator, Sequence

import numpy as np

from . import _exact
from ._exact import Matrix
from .polyalgebra import BezoutCertificate, IntPoly, X, eval_poly_matrix

__all__ = [
    "TorusPoint",
    "Sublattice",
    "rational_rep",
    "image_sublattice",
    "verify_sum_full",
    "verify_intersection_torsion",
    "verify_unipotent_kernel_bound",
    "restricted_unit_invertibility",
    "bezout_matrix_identity",
    "torsion_points",
]

_CHUNK = 1 << 20


@dataclass(frozen=True)
class TorusPoint:
    """A point of ``Q^n / Z^n`` stored by its representative in ``[0, 1)^n``."""

    coords: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(Fraction(c) % 1 for c in self.coords))

    @classmethod
    def from_numerators(cls, a: Sequence[int], D: int) -> "TorusPoint":
        return cls(tuple(Fraction(int(x), D) for x in a))

    @property
    def order(self) -> int:
        return lcm(1, *(c.denominator for c in self.coords))

    def __rmul__(self, m: int) -> "TorusPoint":
        return TorusPoint(tuple(m * c for c in self.coords))

    def apply(self, R: Matrix) -> "TorusPoint":
        return TorusPoint(_exact.matvec(R, self.coords))

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)


@dataclass(frozen=True)
class Sublattice:
    """Subgroup of ``Z^n`` kept as the nonzero columns of its column HNF."""

    basis: Matrix
    ambient: int

    @classmethod
    def from_generators(cls, G: Matrix, ambient: int | None = None) -> "Sublattice":
        G = _exact.as_matrix(G)
        n = len(G) if G else (ambient or 0)
        if not G or not G[0]:
            return cls(_exact.zeros(n, 0), n)
        H, _ = _exact.hnf_column(G)
        r = _exact.hnf_rank(H)
        return cls(_exact.columns(H, range(r)), n)

    @property
    def rank(self) -> int:
        return _exact.shape(self.basis)[1] if self.basis else 0

    def __add__(self, other: "Sublattice") -> "Sublattice":
        if self.ambient != other.ambient:
            raise ValueError("ambient dimension mismatch")
        if self.rank == 0:
            return other
        if other.rank == 0:
            return self
        return Sublattice.from_generators(_exact.hstack(self.basis, other.basis), self.ambient)

    def index(self) -> int | None:
        """``[Z^n : L]`` for full-rank lattices, None otherwise."""
        if self.rank < self.ambient:
            return None
        return abs(int(_exact.det(self.basis)))

    def __contains__(self, v) -> bool:
        if self.rank == 0:
            return all(x == 0 for x in v)
        sol = _exact.solve(self.basis, tuple((x,) for x in v))
        return sol is not None and _exact.is_integral(sol)


def rational_rep(M: Matrix) -> Matrix:
    """The 2d x 2d integer matrix ``M (x) I_2`` through which ``M`` acts on the torus."""
    M = _exact.as_matrix(M)
    if not _exact.is_square(M):
        raise ValueError("matrix is not square")
    if _exact.det(M) == 0:
        raise ValueError("not an isogeny")
    return _exact.kron(M, _exact.identity(2))


def image_sublattice(f: IntPoly, R: Matrix) -> Sublattice:
    R = _exact.as_matrix(R)
    if not _exact.is_square(R):
        raise ValueError("matrix is not square")
    return Sublattice.from_generators(eval_poly_matrix(f, R), len(R))


def verify_sum_full(L1: Sublattice, L2: Sublattice) -> tuple[bool, int | None]:
    """Whether ``L1 + L2`` has full rank, with the index ``[Z^n : L1 + L2]`` when it does."""
    if L1.ambient != L2.ambient:
        raise ValueError("ambient dimension mismatch")
    S = L1 + L2
    idx = S.index()
    return idx is not None, idx


def _annihilator(F: Matrix) -> np.ndarray:
    """Rows spanning the saturated integer left kernel of ``F``."""
    n = len(F)
    K = _exact.integer_kernel(_exact.transpose(F, n))
    return np.array(_exact.transpose(K, 0) if K and K[0] else np.zeros((0, n)), dtype=object).reshape(-1, n)


def _in_image(K: np.ndarray, pts: np.ndarray, D: int) -> np.ndarray:
    if K.shape[0] == 0:
        return np.ones(len(pts), dtype=bool)
    Kd = (K % D).astype(np.int64)
    return np.all((pts @ Kd.T) % D == 0, axis=1)


def _grid_chunks(n: int, D: int) -> Iterator[np.ndarray]:
    total = D ** n
    powers = D ** np.arange(n, dtype=np.int64)
    for start in range(0, total, _CHUNK):
        idx = np.arange(start, min(start + _CHUNK, total), dtype=np.int64)
        yield (idx[:, None] // powers[None, :]) % D


def torsion_points(F: Matrix, D: int) -> Iterator[TorusPoint]:
    """All points of order dividing ``D`` on the subtorus ``F(Q^n / Z^n)``."""
    if D <= 0:
        raise ValueError("sample_denominator must be positive")
    F = _exact.as_matrix(F)
    K = _annihilator(F)
    for pts in _grid_chunks(len(F), D):
        for a in pts[_in_image(K, pts, D)]:
            yield TorusPoint.from_numerators(a, D)


def _check_annihilates(f: IntPoly, R: Matrix):
    if not _exact.is_zero(eval_poly_matrix(f, R)):
        raise ValueError("f1*f2 does not annihilate R")


def verify_intersection_torsion(f1: IntPoly, f2: IntPoly, R: Matrix, rho: int, sample_denominator: int) -> bool:
    """Exhaustive check that every ``D``-torsion point of ``f1(R)T & f2(R)T`` is killed by ``rho``."""
    if sample_denominator <= 0:
        raise ValueError("sample_denominator must be positive")
    if rho == 0:
        raise ValueError("not coprime")
    R = _exact.as_matrix(R)
    _check_annihilates(f1 * f2, R)
    D = sample_denominator
    K1 = _annihilator(eval_poly_matrix(f1, R))
    K2 = _annihilator(eval_poly_matrix(f2, R))
    for pts in _grid_chunks(len(R), D):
        both = pts[_in_image(K1, pts, D) & _in_image(K2, pts, D)]
        if np.any((both * (rho % D)) % D != 0):
            return False
    return True


def verify_unipotent_kernel_bound(
    F1: IntPoly, F2: IntPoly, cert: BezoutCertificate, R: Matrix, sample_denominator: int
) -> bool:
    """Every ``D``-torsion point of ``F1(R)T`` fixed by ``R`` is killed by ``rho**2``."""
    if sample_denominator <= 0:
        raise ValueError("sample_denominator must be positive")
    r = F1.degree
    if F1 != (X - 1) ** r:
        raise ValueError("F1 is not a power of (X - 1)")
    if cert.f1 != F1 or cert.f2 != F2 or not cert.check():
        raise ValueError("certificate does not match (F1, F2)")
    R = _exact.as_matrix(R)
    _check_annihilates(F1 * F2, R)
    D = sample_denominator
    n = len(R)
    K1 = _annihilator(eval_poly_matrix(F1, R))
    Rm = (np.array(_exact.sub(R, _exact.identity(n)), dtype=object) % D).astype(np.int64)
    rho2 = (cert.rho * cert.rho) % D
    for pts in _grid_chunks(n, D):
        sel = pts[_in_image(K1, pts, D)]
        fixed = sel[np.all((sel @ Rm.T) % D == 0, axis=1)]
        if np.any((fixed * rho2) % D != 0):
            return False
    return True


def bezout_matrix_identity(cert: BezoutCertificate, R: Matrix) -> bool:
    """``G1(R) F1(R) + G2(R) F2(R) == rho * I`` as an exact matrix identity."""
    R = _exact.as_matrix(R)
    lhs = eval_poly_matrix(cert.g1 * cert.f1 + cert.g2 * cert.f2, R)
    return lhs == _exact.scale(cert.rho, _exact.identity(len(R)))


def restricted_unit_invertibility(M: Matrix, A1_basis: Matrix) -> bool:
    """Whether ``M - I`` restricted to the column span of ``A1_basis`` is invertible over Q."""
    M = _exact.as_matrix(M)
    B = _exact.as_matrix(A1_basis)
    if not B or not B[0]:
        return True
    B = _exact.column_space(B)
    restricted = _exact.solve(B, _exact.matmul(M, B))
    if restricted is None:
        raise ValueError("basis not M-invariant")
    m = len(restricted)
    return _exact.det(_exact.sub(restricted, _exact.identity(m))) != 0
