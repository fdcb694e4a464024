"""Exact dense linear algebra over the integers and the rationals.

Matrices are tuples of row tuples holding ``int`` or ``Fraction`` entries.
Everything here is pure and returns new tuples; nothing is mutated in place.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Sequence

Matrix = tuple[tuple, ...]


def _norm(x):
    if isinstance(x, Fraction) and x.denominator == 1:
        return int(x.numerator)
    return x


def as_matrix(rows: Iterable[Iterable], *, rational: bool = False) -> Matrix:
    conv = Fraction if rational else _norm
    out = tuple(tuple(conv(x) for x in row) for row in rows)
    if out and len({len(r) for r in out}) != 1:
        raise ValueError("ragged matrix")
    return out


def shape(A: Matrix) -> tuple[int, int]:
    return (len(A), len(A[0]) if A else 0)


def identity(n: int) -> Matrix:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def zeros(r: int, c: int) -> Matrix:
    return tuple((0,) * c for _ in range(r))


def is_square(A: Matrix) -> bool:
    return all(len(row) == len(A) for row in A)


def is_zero(A: Matrix) -> bool:
    return all(x == 0 for row in A for x in row)


def transpose(A: Matrix, ncols: int | None = None) -> Matrix:
    if not A:
        return tuple(() for _ in range(ncols or 0))
    return tuple(zip(*A))


def matmul(A: Matrix, B: Matrix) -> Matrix:
    if not A:
        return ()
    inner = len(A[0])
    if inner != len(B):
        raise ValueError(f"dimension mismatch: {shape(A)} @ {shape(B)}")
    ncols = len(B[0]) if B else 0
    Bt = transpose(B, ncols)
    return tuple(tuple(_norm(sum(a * b for a, b in zip(row, col))) for col in Bt) for row in A)


def matvec(A: Matrix, v: Sequence) -> tuple:
    return tuple(_norm(sum(a * b for a, b in zip(row, v))) for row in A)


def add(A: Matrix, B: Matrix) -> Matrix:
    if shape(A) != shape(B):
        raise ValueError("dimension mismatch")
    return tuple(tuple(_norm(a + b) for a, b in zip(r, s)) for r, s in zip(A, B))


def sub(A: Matrix, B: Matrix) -> Matrix:
    if shape(A) != shape(B):
        raise ValueError("dimension mismatch")
    return tuple(tuple(_norm(a - b) for a, b in zip(r, s)) for r, s in zip(A, B))


def scale(c, A: Matrix) -> Matrix:
    return tuple(tuple(_norm(c * a) for a in row) for row in A)


def matpow(A: Matrix, n: int) -> Matrix:
    if n < 0:
        raise ValueError("negative power")
    result = identity(len(A))
    base = A
    while n:
        if n & 1:
            result = matmul(result, base)
        n >>= 1
        if n:
            base = matmul(base, base)
    return result


def kron(A: Matrix, B: Matrix) -> Matrix:
    (ra, ca), (rb, cb) = shape(A), shape(B)
    return tuple(
        tuple(A[i // rb][j // cb] * B[i % rb][j % cb] for j in range(ca * cb))
        for i in range(ra * rb)
    )


def block_diag(A: Matrix, B: Matrix) -> Matrix:
    (ra, ca), (rb, cb) = shape(A), shape(B)
    top = tuple(tuple(row) + (0,) * cb for row in A)
    bottom = tuple((0,) * ca + tuple(row) for row in B)
    return top + bottom


def hstack(A: Matrix, B: Matrix) -> Matrix:
    if len(A) != len(B):
        raise ValueError("row count mismatch")
    return tuple(tuple(r) + tuple(s) for r, s in zip(A, B))


def vstack(A: Matrix, B: Matrix) -> Matrix:
    return tuple(A) + tuple(B)


def columns(A: Matrix, idx: Sequence[int]) -> Matrix:
    return tuple(tuple(row[j] for j in idx) for row in A)


def det(A: Matrix):
    """Determinant by Bareiss fraction-free elimination (exact for int and Fraction)."""
    n = len(A)
    if not is_square(A):
        raise ValueError("determinant of a non-square matrix")
    if n == 0:
        return 1
    a = [list(row) for row in A]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = a[i][j] * a[k][k] - a[i][k] * a[k][j]
                a[i][j] = num // prev if isinstance(num, int) and isinstance(prev, int) else num / prev
        prev = a[k][k]
    return _norm(sign * a[n - 1][n - 1])


def rref(A: Matrix) -> tuple[Matrix, tuple[int, ...]]:
    """Reduced row echelon form over the rationals and the pivot columns."""
    a = [[Fraction(x) for x in row] for row in A]
    nrows, ncols = shape(A)
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, nrows) if a[i][c] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        piv = a[r][c]
        a[r] = [x / piv for x in a[r]]
        for i in range(nrows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return as_matrix(a), tuple(pivots)


def rank(A: Matrix) -> int:
    return len(rref(A)[1])


def column_space(A: Matrix) -> Matrix:
    """Columns of ``A`` at the pivot positions: a basis of its column space."""
    return columns(A, rref(A)[1])


def nullspace(A: Matrix) -> list[tuple]:
    """Basis of the right kernel over the rationals."""
    R, pivots = rref(A)
    ncols = shape(A)[1]
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, p in zip(R, pivots):
            v[p] = -Fraction(row[f])
        basis.append(tuple(_norm(x) for x in v))
    return basis


def solve(A: Matrix, B: Matrix) -> Matrix | None:
    """One rational solution X of ``A X = B`` (free variables set to zero), or None."""
    nrows, ncols = shape(A)
    k = shape(B)[1]
    R, pivots = rref(hstack(A, B))
    if any(p >= ncols for p in pivots):
        return None
    X = [[Fraction(0)] * k for _ in range(ncols)]
    for row, p in zip(R, pivots):
        for j in range(k):
            X[p][j] = Fraction(row[ncols + j])
    return as_matrix(X)


def inverse(A: Matrix) -> Matrix:
    n = len(A)
    X = solve(A, identity(n))
    if X is None or rank(A) < n:
        raise ZeroDivisionError("singular matrix")
    return X


def primitive(v: Sequence) -> tuple[int, ...]:
    """Scale a rational vector to a primitive integer vector (first nonzero entry kept in sign)."""
    den = lcm(*(Fraction(x).denominator for x in v)) if v else 1
    ints = [int(Fraction(x) * den) for x in v]
    g = gcd(*ints) if ints else 0
    if g == 0:
        return tuple(ints)
    return tuple(x // g for x in ints)


def hnf_column(A: Matrix) -> tuple[Matrix, Matrix]:
    """Column-style Hermite normal form.

    Returns ``(H, U)`` with ``U`` unimodular and ``A U = H``. ``H`` is lower
    triangular in echelon form: nonzero columns come first, each pivot is
    positive, and entries left of a pivot in its row lie in ``[0, pivot)``.
    """
    nrows, ncols = shape(A)
    if any(not isinstance(x, int) for row in A for x in row):
        raise TypeError("hnf_column needs an integer matrix")
    # work on columns
    cols = [list(c) for c in transpose(A, ncols)]
    ucols = [list(c) for c in identity(ncols)]

    def combine(i, j, a, b, c, d):
        # (col_i, col_j) <- (a col_i + b col_j, c col_i + d col_j)
        for vecs in (cols, ucols):
            x, y = vecs[i], vecs[j]
            vecs[i] = [a * p + b * q for p, q in zip(x, y)]
            vecs[j] = [c * p + d * q for p, q in zip(x, y)]

    c = 0
    for row in range(nrows):
        if c == ncols:
            break
        for j in range(c + 1, ncols):
            x, y = cols[c][row], cols[j][row]
            if y == 0:
                continue
            g, s, t = _xgcd(x, y)
            combine(c, j, s, t, -y // g, x // g)
        piv = cols[c][row]
        if piv == 0:
            continue
        if piv < 0:
            cols[c] = [-v for v in cols[c]]
            ucols[c] = [-v for v in ucols[c]]
            piv = -piv
        for j in range(c):
            q = cols[j][row] // piv
            if q:
                cols[j] = [p - q * s for p, s in zip(cols[j], cols[c])]
                ucols[j] = [p - q * s for p, s in zip(ucols[j], ucols[c])]
        c += 1
    H = transpose(tuple(tuple(col) for col in cols), nrows) if cols else zeros(nrows, 0)
    U = transpose(tuple(tuple(col) for col in ucols), ncols) if ucols else ()
    return as_matrix(H), as_matrix(U)


def hnf_rank(H: Matrix) -> int:
    ncols = shape(H)[1]
    return sum(1 for j in range(ncols) if any(row[j] != 0 for row in H))


def integer_kernel(A: Matrix) -> Matrix:
    """Saturated basis (as columns) of ``{z in Z^n : A z = 0}``."""
    n = shape(A)[1] if A else 0
    if not A:
        return identity(n)
    H, U = hnf_column(A)
    r = hnf_rank(H)
    return columns(U, range(r, n))


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, s, t) with s*a + t*b = g = gcd(a, b) >= 0."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if a < 0:
        a, s0, t0 = -a, -s0, -t0
    return a, s0, t0


def denominators_lcm(A: Matrix) -> int:
    return lcm(1, *(Fraction(x).denominator for row in A for x in row))


def is_integral(A: Matrix) -> bool:
    return all(Fraction(x).denominator == 1 for row in A for x in row)
