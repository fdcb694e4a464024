"""Points, canonical heights and affine self-maps on ``A = E^d``.

A point is a d x k matrix of rationals: row ``i`` holds the coordinates of
the i-th elliptic component in a rank-k Mordell-Weil lattice tensored with Q
(the divisible hull). The canonical height for the product polarization is
``sum_i row_i G row_i^T`` for the Gram matrix ``G`` of the height pairing.
An isogeny is a nonsingular integer matrix acting on the left, and
``phi(P) = M P + Q``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Iterator, Literal

from . import _exact
from ._exact import Matrix
from .polyalgebra import BezoutCertificate, IntPoly, UnipotentSplit, X, charpoly_exact, eval_poly_matrix

__all__ = [
    "MWModel",
    "AbelianModel",
    "PointCoords",
    "SelfMap",
    "height",
    "scale_height_check",
    "iterate",
    "orbit",
    "solve_translation",
    "split_translation",
    "restrict_map",
    "product_selfmap",
    "conjugate_selfmap",
]


def _leading_minors_positive(G: Matrix) -> bool:
    return all(_exact.det(tuple(row[:i] for row in G[:i])) > 0 for i in range(1, len(G) + 1))


@dataclass(frozen=True)
class MWModel:
    """Mordell-Weil coordinate lattice with its positive-definite height pairing."""

    gram: Matrix

    def __post_init__(self):
        G = _exact.as_matrix(self.gram, rational=True)
        G = _exact.as_matrix(G)
        if not G or not _exact.is_square(G):
            raise ValueError("G must be a nonempty square matrix")
        if G != _exact.transpose(G):
            raise ValueError("G not symmetric")
        if not _leading_minors_positive(G):
            raise ValueError("G not positive definite")
        object.__setattr__(self, "gram", G)

    @property
    def k(self) -> int:
        return len(self.gram)


@dataclass(frozen=True)
class AbelianModel:
    d: int
    mw: MWModel

    def __post_init__(self):
        if self.d < 1:
            raise ValueError("d must be positive")

    @property
    def k(self) -> int:
        return self.mw.k


@dataclass(frozen=True)
class PointCoords:
    """A point of ``E^d`` as a d x k matrix over Q."""

    coords: Matrix

    def __post_init__(self):
        object.__setattr__(self, "coords", _exact.as_matrix(_exact.as_matrix(self.coords, rational=True)))

    @classmethod
    def zero(cls, d: int, k: int) -> "PointCoords":
        return cls(_exact.zeros(d, k))

    @property
    def d(self) -> int:
        return len(self.coords)

    @property
    def k(self) -> int:
        return len(self.coords[0]) if self.coords else 0

    def __add__(self, other: "PointCoords") -> "PointCoords":
        return PointCoords(_exact.add(self.coords, other.coords))

    def __sub__(self, other: "PointCoords") -> "PointCoords":
        return PointCoords(_exact.sub(self.coords, other.coords))

    def __neg__(self) -> "PointCoords":
        return PointCoords(_exact.scale(-1, self.coords))

    def __rmul__(self, m) -> "PointCoords":
        return PointCoords(_exact.scale(m, self.coords))

    def apply(self, M: Matrix) -> "PointCoords":
        """The image under the linear map ``M`` (acting on the left)."""
        return PointCoords(_exact.matmul(M, self.coords))

    def is_zero(self) -> bool:
        return _exact.is_zero(self.coords)


@dataclass(frozen=True)
class SelfMap:
    """``phi(P) = M P + Q``: an isogeny followed by a translation."""

    M: Matrix
    Q: PointCoords

    def __post_init__(self):
        M = _exact.as_matrix(self.M)
        if not _exact.is_square(M) or any(not isinstance(x, int) for row in M for x in row):
            raise ValueError("M must be a square integer matrix")
        if _exact.det(M) == 0:
            raise ValueError("M singular")
        Q = self.Q if isinstance(self.Q, PointCoords) else PointCoords(self.Q)
        if Q.d != len(M):
            raise ValueError("Q has the wrong number of rows")
        object.__setattr__(self, "M", M)
        object.__setattr__(self, "Q", Q)

    @property
    def d(self) -> int:
        return len(self.M)

    def __call__(self, P: PointCoords) -> PointCoords:
        return P.apply(self.M) + self.Q


def height(A: AbelianModel, P: PointCoords) -> Fraction:
    """Canonical height ``sum_i P_i G P_i^T``; an exact nonnegative rational."""
    if P.d != A.d or P.k != A.k:
        raise ValueError(f"point of shape {P.d}x{P.k} on a model of shape {A.d}x{A.k}")
    G = A.mw.gram
    total = Fraction(0)
    for row in P.coords:
        for i, x in enumerate(row):
            if x:
                total += x * sum(g * y for g, y in zip(G[i], row))
    return total


def scale_height_check(A: AbelianModel, P: PointCoords, m: int) -> bool:
    return height(A, m * P) == m * m * height(A, P)


def orbit(phi: SelfMap, P: PointCoords, n_max: int) -> Iterator[PointCoords]:
    """Yields ``phi^n(P)`` for n = 0 .. n_max."""
    if P.d != phi.d or P.k != phi.Q.k:
        raise ValueError("point shape does not match the map")
    cur = P
    yield cur
    for _ in range(n_max):
        cur = phi(cur)
        yield cur


def iterate(phi: SelfMap, P: PointCoords, n: int) -> PointCoords:
    """``phi^n(P) = M^n P + (M^(n-1) + ... + M + 1) Q`` by the exact recurrence."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    for cur in orbit(phi, P, n):
        pass
    return cur


def solve_translation(
    M: Matrix, Q: PointCoords, mode: Literal["hull", "integral"] = "hull"
) -> tuple[int, PointCoords] | None:
    """Find ``m != 0`` and ``Q'`` with ``m Q = (M - I) Q'``, or None if none exists.

    In ``hull`` mode ``Q'`` may have rational coordinates and ``m = 1``. In
    ``integral`` mode ``Q'`` has integer coordinates and ``m`` is the least
    positive integer for which that is possible.
    """
    M = _exact.as_matrix(M)
    d = len(M)
    N = _exact.sub(M, _exact.identity(d))
    Qc = Q.coords
    if mode == "hull":
        sol = _exact.solve(N, Qc)
        return None if sol is None else (1, PointCoords(sol))
    if mode != "integral":
        raise ValueError(f"unknown mode {mode!r}")
    if _exact.solve(N, Qc) is None:
        return None
    # N U = H column HNF; N X = m Q  <=>  H Y = m Q with X = U Y, Y integral iff X is
    H, U = _exact.hnf_column(N)
    r = _exact.hnf_rank(H)
    Y = _exact.solve(_exact.columns(H, range(r)), Qc)
    m = _exact.denominators_lcm(Y) if Y else 1
    Yfull = tuple(tuple(m * y for y in row) for row in Y) + _exact.zeros(d - r, Q.k)
    Qp = PointCoords(_exact.matmul(U, Yfull))
    return m, Qp


def _check_split(M: Matrix, split: UnipotentSplit, cert: BezoutCertificate):
    if cert.f1 != split.f1 or cert.f2 != split.f2:
        raise ValueError("certificate mismatch")
    if not cert.check():
        raise ValueError("certificate mismatch: Bezout identity fails")
    if not _exact.is_zero(eval_poly_matrix(split.product(), M)):
        raise ValueError("certificate mismatch: (X-1)^r * F2 does not annihilate M")


def split_translation(
    M: Matrix, Q: PointCoords, split: UnipotentSplit, cert: BezoutCertificate
) -> tuple[PointCoords, PointCoords]:
    """Write ``Q = Q1 + Q2`` with ``Qi = Fi(M) Gi(M) Q / rho`` in the image of ``Fi(M)``.

    When ``split.r == 0`` this degenerates to ``Q1 = Q``, ``Q2 = 0``.
    """
    M = _exact.as_matrix(M)
    _check_split(M, split, cert)
    inv = Fraction(1, cert.rho)
    P1 = eval_poly_matrix(cert.f1 * cert.g1, M)
    P2 = eval_poly_matrix(cert.f2 * cert.g2, M)
    Q1 = inv * Q.apply(P1)
    Q2 = inv * Q.apply(P2)
    assert Q1 + Q2 == Q
    return Q1, Q2


def restrict_map(M: Matrix, f_i: IntPoly) -> tuple[Matrix, Matrix]:
    """Saturated integer basis of the image of ``f_i(M)`` and the matrix of ``M`` on it.

    Returns ``(B, M_i)`` with ``M B == B M_i``. Because ``B`` spans the full
    lattice ``image & Z^d``, ``M_i`` is an integer matrix.
    """
    M = _exact.as_matrix(M)
    d = len(M)
    F = eval_poly_matrix(f_i, M)
    if _exact.is_zero(F):
        return _exact.zeros(d, 0), ()
    # annihilator rows of the image, then the lattice they cut out
    ann = [_exact.primitive(v) for v in _exact.nullspace(_exact.transpose(F))]
    B = _exact.integer_kernel(tuple(ann)) if ann else _exact.identity(d)
    B, _ = _exact.hnf_column(B)
    B = _exact.columns(B, range(_exact.hnf_rank(B)))
    Mi = _exact.solve(B, _exact.matmul(M, B))
    if Mi is None or _exact.matmul(B, Mi) != _exact.matmul(M, B):
        raise ValueError("subspace not M-invariant")
    return B, _exact.as_matrix(Mi)


def product_selfmap(phiY: SelfMap, phiZ: SelfMap, AY: AbelianModel | None = None, AZ: AbelianModel | None = None) -> SelfMap:
    """``phiY x phiZ`` on ``Y x Z``: block-diagonal isogeny, stacked translation."""
    if AY is not None and AZ is not None and AY.mw != AZ.mw:
        raise ValueError("Gram mismatch")
    if phiY.Q.k != phiZ.Q.k:
        raise ValueError("Gram mismatch")
    return SelfMap(_exact.block_diag(phiY.M, phiZ.M), PointCoords(_exact.vstack(phiY.Q.coords, phiZ.Q.coords)))


def conjugate_selfmap(phiX: SelfMap, L: Matrix, M_Y: Matrix) -> SelfMap:
    """Push ``phiX`` forward along the finite map ``L`` with ``L M_X == M_Y L``."""
    L = _exact.as_matrix(L)
    M_Y = _exact.as_matrix(M_Y)
    if not _exact.is_square(L) or _exact.det(L) == 0:
        raise ValueError("L must be square with nonzero determinant")
    if _exact.matmul(L, phiX.M) != _exact.matmul(M_Y, L):
        raise ValueError("intertwining violated: L M_X != M_Y L")
    return SelfMap(M_Y, phiX.Q.apply(L))


def integral_scale(P: PointCoords) -> int:
    """Least positive integer clearing every denominator of ``P``."""
    return lcm(1, *(Fraction(x).denominator for row in P.coords for x in row))
