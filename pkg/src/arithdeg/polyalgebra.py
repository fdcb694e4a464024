"""Exact univariate polynomial algebra over Z and Q.

Supplies the algebraic certificates behind the decomposition of an isogeny:
rational gcds, Sylvester resultants, Bezout cofactors scaled to the
resultant, the split off of the ``(X - 1)``-power, the binomial transport
polynomials reducing ``X**n`` modulo ``(X - 1)**r``, and characteristic
polynomials of integer matrices.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial, gcd
from typing import Iterable, Sequence

from . import _exact
from ._exact import Matrix

__all__ = [
    "IntPoly",
    "RatPoly",
    "BezoutCertificate",
    "UnipotentSplit",
    "X",
    "gcd_rational",
    "resultant",
    "bezout_certificate",
    "unipotent_split",
    "binomial_coeffs",
    "eval_poly_matrix",
    "charpoly_exact",
]


# --- dense coefficient lists, index i = coefficient of X**i ---------------


def _strip(c: list) -> list:
    while c and c[-1] == 0:
        c.pop()
    return c


def _padd(a: Sequence, b: Sequence) -> list:
    n = max(len(a), len(b))
    return _strip([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)])


def _pneg(a: Sequence) -> list:
    return [-x for x in a]


def _pmul(a: Sequence, b: Sequence) -> list:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _strip(out)


def _pdivmod(a: Sequence, b: Sequence) -> tuple[list, list]:
    """Division over Q; ``b`` must be nonzero."""
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    r = [Fraction(x) for x in a]
    lc = Fraction(b[-1])
    db = len(b) - 1
    q = [Fraction(0)] * max(len(r) - db, 0)
    while len(_strip(r)) - 1 >= db and r:
        shift = len(r) - 1 - db
        f = r[-1] / lc
        q[shift] = f
        for i, y in enumerate(b):
            r[i + shift] -= f * y
        r.pop()
    return _strip(q), _strip(r)


def _coerce(c):
    if isinstance(c, Fraction):
        return int(c.numerator) if c.denominator == 1 else c
    return c


class _DensePoly:
    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        object.__setattr__(self, "coeffs", tuple(_strip([self._check(c) for c in coeffs])))

    def __setattr__(self, name, value):
        raise AttributeError("polynomials are immutable")

    def __reduce__(self):
        return (type(self), (self.coeffs,))

    @staticmethod
    def _check(c):
        return c

    @classmethod
    def constant(cls, c):
        return cls([c])

    @property
    def degree(self) -> int:
        """Degree, with -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def lc(self):
        return self.coeffs[-1] if self.coeffs else 0

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __eq__(self, other):
        if isinstance(other, _DensePoly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == tuple(_strip([other]))
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __iter__(self):
        return iter(self.coeffs)

    def __len__(self):
        return len(self.coeffs)

    def __repr__(self):
        return f"{type(self).__name__}({list(self.coeffs)!r})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            mag = abs(c)
            mono = "" if i == 0 else ("X" if i == 1 else f"X^{i}")
            body = f"{mag}" if (mag != 1 or not mono) else ""
            if body and mono:
                body = f"{body}*{mono}" if isinstance(mag, Fraction) else f"{body}{mono}"
            else:
                body = body or mono
            terms.append(("-" if c < 0 else "+", body))
        sign, first = terms[0]
        out = ("-" if sign == "-" else "") + first
        for sign, body in terms[1:]:
            out += f" {sign} {body}"
        return out


class IntPoly(_DensePoly):
    """Polynomial with arbitrary-precision integer coefficients.

    ``coeffs[i]`` is the coefficient of ``X**i``; the zero polynomial has no
    coefficients.
    """

    __slots__ = ()

    @staticmethod
    def _check(c):
        c = _coerce(c)
        if not isinstance(c, int):
            raise TypeError(f"non-integer coefficient {c!r}")
        return int(c)

    def _wrap(self, other):
        if isinstance(other, IntPoly):
            return other
        if isinstance(other, int):
            return IntPoly([other])
        return NotImplemented

    def __add__(self, other):
        other = self._wrap(other)
        if other is NotImplemented:
            return NotImplemented
        return IntPoly(_padd(self.coeffs, other.coeffs))

    __radd__ = __add__

    def __neg__(self):
        return IntPoly(_pneg(self.coeffs))

    def __sub__(self, other):
        other = self._wrap(other)
        if other is NotImplemented:
            return NotImplemented
        return IntPoly(_padd(self.coeffs, _pneg(other.coeffs)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._wrap(other)
        if other is NotImplemented:
            return NotImplemented
        return IntPoly(_pmul(self.coeffs, other.coeffs))

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative exponent")
        out = IntPoly([1])
        base = self
        while n:
            if n & 1:
                out = out * base
            n >>= 1
            if n:
                base = base * base
        return out

    def exact_div(self, other: "IntPoly") -> "IntPoly":
        """Quotient when ``other`` divides ``self`` exactly in Z[X]."""
        q, r = _pdivmod(self.coeffs, other.coeffs)
        if r or any(Fraction(c).denominator != 1 for c in q):
            raise ValueError(f"{other} does not divide {self} in Z[X]")
        return IntPoly(q)

    def divmod_monic(self, other: "IntPoly") -> tuple["IntPoly", "IntPoly"]:
        if other.lc not in (1, -1):
            raise ValueError("divisor is not monic")
        q, r = _pdivmod(self.coeffs, other.coeffs)
        return IntPoly(q), IntPoly(r)

    def derivative(self) -> "IntPoly":
        return IntPoly([i * c for i, c in enumerate(self.coeffs)][1:])

    @property
    def content(self) -> int:
        return gcd(*self.coeffs) if self.coeffs else 0

    def primitive(self) -> "IntPoly":
        """Divide out the content and make the leading coefficient positive."""
        if not self.coeffs:
            return self
        g = self.content
        if self.lc < 0:
            g = -g
        return IntPoly([c // g for c in self.coeffs])

    def is_monic(self) -> bool:
        return self.lc == 1

    @classmethod
    def from_rational(cls, coeffs: Sequence) -> "IntPoly":
        """Primitive integer multiple of a rational coefficient list."""
        fr = [Fraction(c) for c in coeffs]
        den = 1
        for c in fr:
            den = den * c.denominator // gcd(den, c.denominator)
        return cls([int(c * den) for c in fr]).primitive()


class RatPoly(_DensePoly):
    """Polynomial with exact rational coefficients."""

    __slots__ = ()

    @staticmethod
    def _check(c):
        if isinstance(c, float):
            raise TypeError("float coefficient")
        return _coerce(Fraction(c))

    def _wrap(self, other):
        if isinstance(other, _DensePoly):
            return other
        if isinstance(other, (int, Fraction)):
            return RatPoly([other])
        return NotImplemented

    def __add__(self, other):
        other = self._wrap(other)
        if other is NotImplemented:
            return NotImplemented
        return RatPoly(_padd(self.coeffs, other.coeffs))

    __radd__ = __add__

    def __neg__(self):
        return RatPoly(_pneg(self.coeffs))

    def __sub__(self, other):
        other = self._wrap(other)
        if other is NotImplemented:
            return NotImplemented
        return RatPoly(_padd(self.coeffs, _pneg(other.coeffs)))

    def __mul__(self, other):
        other = self._wrap(other)
        if other is NotImplemented:
            return NotImplemented
        return RatPoly(_pmul(self.coeffs, other.coeffs))

    __rmul__ = __mul__

    def __call__(self, x):
        return _coerce(Fraction(super().__call__(x))) if isinstance(x, (int, Fraction)) else super().__call__(x)


X = IntPoly([0, 1])


@dataclass(frozen=True)
class BezoutCertificate:
    """Integer cofactors with ``g1*f1 + g2*f2 == rho`` and ``rho == Res(f1, f2)``."""

    f1: IntPoly
    f2: IntPoly
    g1: IntPoly
    g2: IntPoly
    rho: int

    def check(self) -> bool:
        return self.rho != 0 and self.g1 * self.f1 + self.g2 * self.f2 == IntPoly([self.rho])


@dataclass(frozen=True)
class UnipotentSplit:
    """``f == (X - 1)**r * f2`` with ``f2(1) != 0``."""

    r: int
    f2: IntPoly

    @property
    def f1(self) -> IntPoly:
        return (X - 1) ** self.r

    def product(self) -> IntPoly:
        return self.f1 * self.f2


def _as_poly(p) -> IntPoly:
    return p if isinstance(p, IntPoly) else IntPoly(p)


def gcd_rational(a, b) -> IntPoly:
    """Gcd over Q, scaled to a primitive integer polynomial with positive leading coefficient."""
    a, b = _as_poly(a), _as_poly(b)
    if a.is_zero() and b.is_zero():
        raise ValueError("undefined gcd")
    u, v = list(a.coeffs), list(b.coeffs)
    while v:
        _, rem = _pdivmod(u, v)
        u, v = v, rem
    return IntPoly.from_rational(u)


def resultant(a, b) -> int:
    """Sylvester resultant, the determinant of the Sylvester matrix of ``a`` and ``b``."""
    a, b = _as_poly(a), _as_poly(b)
    if a.is_zero() or b.is_zero():
        raise ValueError("resultant of a zero polynomial")
    m, n = a.degree, b.degree
    size = m + n
    if size == 0:
        return 1
    rows = []
    ra = list(reversed(a.coeffs))
    rb = list(reversed(b.coeffs))
    for i in range(n):
        rows.append([0] * i + ra + [0] * (size - m - 1 - i))
    for i in range(m):
        rows.append([0] * i + rb + [0] * (size - n - 1 - i))
    return int(_exact.det(_exact.as_matrix(rows)))


def bezout_certificate(f1, f2) -> BezoutCertificate:
    """Integer cofactors for ``g1*f1 + g2*f2 == Res(f1, f2)``.

    Runs the extended Euclidean algorithm over Q, normalizes the cofactors so
    that ``deg g1 < deg f2`` and ``deg g2 < deg f1``, then scales by the
    resultant, which clears every denominator.
    """
    f1, f2 = _as_poly(f1), _as_poly(f2)
    rho = resultant(f1, f2)
    if rho == 0:
        raise ValueError("not coprime")
    if f1.degree == 0 and f2.degree == 0:
        # Res = 1 by convention; needs s*c1 + t*c2 = 1 in Z
        g, s, t = _exact._xgcd(f1.lc, f2.lc)
        if g != 1:
            raise ValueError("constant pair has no unit Bezout relation")
        cert = BezoutCertificate(f1, f2, IntPoly([s]), IntPoly([t]), 1)
    elif f1.degree == 0:
        cert = BezoutCertificate(f1, f2, IntPoly([f1.lc ** (f2.degree - 1)]), IntPoly([]), rho)
    elif f2.degree == 0:
        cert = BezoutCertificate(f1, f2, IntPoly([]), IntPoly([f2.lc ** (f1.degree - 1)]), rho)
    else:
        # invariant: s*f1 + t*f2 == r
        r0, r1 = [Fraction(c) for c in f1.coeffs], [Fraction(c) for c in f2.coeffs]
        s0, s1 = [Fraction(1)], []
        t0, t1 = [], [Fraction(1)]
        while r1:
            q, rem = _pdivmod(r0, r1)
            r0, r1 = r1, rem
            s0, s1 = s1, _padd(s0, _pneg(_pmul(q, s1)))
            t0, t1 = t1, _padd(t0, _pneg(_pmul(q, t1)))
        # r0 is a nonzero constant since the inputs are coprime
        c = r0[0]
        g1 = [x * rho / c for x in s0]
        g2 = [x * rho / c for x in t0]
        if any(Fraction(x).denominator != 1 for x in g1 + g2):
            raise ArithmeticError("resultant failed to clear Bezout denominators")
        cert = BezoutCertificate(f1, f2, IntPoly(g1), IntPoly(g2), rho)
    if not cert.check():
        raise ArithmeticError("Bezout identity failed")
    return cert


def unipotent_split(f) -> UnipotentSplit:
    """Largest ``r`` with ``(X - 1)**r`` dividing the monic polynomial ``f``."""
    f = _as_poly(f)
    if f.is_zero():
        raise ValueError("zero polynomial")
    if not f.is_monic():
        raise ValueError("unipotent_split needs a monic polynomial")
    r = 0
    coeffs = list(f.coeffs)
    while len(coeffs) > 1 and sum(coeffs) == 0:
        # synthetic division by (X - 1)
        out = [0] * (len(coeffs) - 1)
        acc = 0
        for i in range(len(coeffs) - 1, 0, -1):
            acc += coeffs[i]
            out[i - 1] = acc
        coeffs = out
        r += 1
    return UnipotentSplit(r, IntPoly(coeffs))


def _binomial_poly(k: int) -> RatPoly:
    """binomial(T, k) = T (T - 1) ... (T - k + 1) / k!"""
    p = RatPoly([1])
    for i in range(k):
        p = p * RatPoly([-i, 1])
    return p * Fraction(1, factorial(k))


def binomial_coeffs(r: int) -> list[RatPoly]:
    """Polynomials ``c[j]`` with ``X**n == sum_j c[j](n) X**j  mod (X - 1)**r`` for n >= 0.

    ``c[j](T) = sum_{k=j}^{r-1} (-1)**(k-j) * C(k, j) * binomial(T, k)``; the
    coefficients are rational but every value at an integer is an integer.
    """
    if r < 1:
        raise ValueError("r must be positive")
    binoms = [_binomial_poly(k) for k in range(r)]
    out = []
    for j in range(r):
        c = RatPoly([])
        for k in range(j, r):
            c = c + binoms[k] * ((-1) ** (k - j) * comb(k, j))
        out.append(c)
    return out


def eval_poly_matrix(f, M: Matrix) -> Matrix:
    """Horner evaluation of ``f`` at the square matrix ``M``."""
    f = f if isinstance(f, _DensePoly) else IntPoly(f)
    M = _exact.as_matrix(M)
    if not _exact.is_square(M):
        raise ValueError("matrix is not square")
    n = len(M)
    acc = _exact.zeros(n, n)
    eye = _exact.identity(n)
    for c in reversed(f.coeffs):
        acc = _exact.add(_exact.matmul(acc, M), _exact.scale(c, eye))
    return acc


def charpoly_exact(M: Matrix) -> IntPoly:
    """``det(X I - M)`` by the division-free Berkowitz algorithm."""
    A = _exact.as_matrix(M)
    if not _exact.is_square(A):
        raise ValueError("matrix is not square")
    n = len(A)
    poly = [1]  # high -> low
    for k in range(n):
        # A_k = [[B, C], [R, a]] with B the leading k x k block
        a = A[k][k]
        R = A[k][:k]
        C = [A[i][k] for i in range(k)]
        toeplitz = [1, -a]
        v = C
        for _ in range(k):
            toeplitz.append(-sum(x * y for x, y in zip(R, v)))
            v = [sum(A[i][j] * v[j] for j in range(k)) for i in range(k)]
        new = []
        for i in range(k + 2):
            new.append(sum(toeplitz[i - j] * poly[j] for j in range(len(poly)) if 0 <= i - j < len(toeplitz)))
        poly = new
    return IntPoly(list(reversed(poly)))
