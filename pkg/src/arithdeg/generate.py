"""Random scenario families for the property suites.

Density is never decided; it is arranged. A scenario is labelled
``dense_by_construction`` only when 1 is the only eigenvalue of ``M`` on the
unit circle (if any), ``M`` is cyclic on the columns of the relevant point (the
Krylov space they generate under ``M`` is all of ``Q^d``) and the orbit is
not stuck at a fixed point. Those are the inputs for which the equality
is asserted.
"""

from __future__ import annotations

import random
from fractions import Fraction

from . import _exact
from .degrees.spectral import has_unit_modulus_root, root_modulus_enclosure
from .heightmodel import PointCoords, SelfMap, solve_translation
from .polyalgebra import charpoly_exact, unipotent_split
from .scenario import Scenario

__all__ = [
    "random_gram",
    "random_point",
    "random_expanding_matrix",
    "random_unipotent_matrix",
    "random_unimodular",
    "random_mixed_matrix",
    "krylov_full",
    "theorem_suite",
    "inequality_suite",
    "composite_pairs",
    "unipotent_suite",
]


def random_gram(rng: random.Random, k: int) -> tuple:
    """``B B^T + I`` for a small integer ``B``: symmetric positive definite."""
    B = [[rng.randint(-2, 2) for _ in range(k)] for _ in range(k)]
    G = _exact.add(_exact.matmul(B, _exact.transpose(B)), _exact.identity(k))
    return G


def random_point(rng: random.Random, d: int, k: int, span: int = 5, den: int = 3) -> PointCoords:
    return PointCoords(
        [[Fraction(rng.randint(-span, span), rng.randint(1, den)) for _ in range(k)] for _ in range(d)]
    )


def krylov_full(M, vectors) -> bool:
    """Whether ``{M^i v}`` spans ``Q^d``."""
    d = len(M)
    cols = []
    for v in vectors:
        w = tuple(v)
        for _ in range(d):
            cols.append(w)
            w = _exact.matvec(M, w)
    if not cols:
        return False
    return _exact.rank(_exact.transpose(tuple(cols))) == d


def _columns(P: PointCoords):
    return list(zip(*P.coords)) if P.coords else []


def random_expanding_matrix(rng: random.Random, d: int, entry: int = 3):
    """Nonsingular integer matrix with ``rho > 1`` and no eigenvalue of modulus 1."""
    while True:
        M = tuple(tuple(rng.randint(-entry, entry) for _ in range(d)) for _ in range(d))
        if _exact.det(M) == 0:
            continue
        F = charpoly_exact(M)
        if has_unit_modulus_root(F):
            continue
        if root_modulus_enclosure(F)[0] <= 1:
            continue
        return M


def random_unimodular(rng: random.Random, d: int, steps: int = 6):
    L = [list(r) for r in _exact.identity(d)]
    for _ in range(steps):
        if d == 1:
            break
        i, j = rng.sample(range(d), 2)
        c = rng.choice([-2, -1, 1, 2])
        L[i] = [a + c * b for a, b in zip(L[i], L[j])]
    return _exact.as_matrix(L)


def random_unipotent_matrix(rng: random.Random, d: int, r: int):
    """Integer ``M`` with ``(M - I)^r == 0`` but ``(M - I)^(r-1) != 0``."""
    if not 1 <= r <= d:
        raise ValueError("need 1 <= r <= d")
    # Jordan-type nilpotent with one block of size r, conjugated by a unimodular matrix
    N = [[0] * d for _ in range(d)]
    for i in range(r - 1):
        N[i][i + 1] = rng.choice([1, 2])
    U = random_unimodular(rng, d, 4)
    Ui = _exact.inverse(U)
    M = _exact.add(_exact.identity(d), _exact.matmul(_exact.matmul(U, _exact.as_matrix(N)), Ui))
    return _exact.as_matrix(M)


def random_mixed_matrix(rng: random.Random, d1: int, d2: int):
    """Expanding block plus a unipotent block, mixed by a unimodular change of basis."""
    E = random_expanding_matrix(rng, d1)
    N = random_unipotent_matrix(rng, d2, rng.randint(1, d2))
    U = random_unimodular(rng, d1 + d2, 5)
    return _exact.as_matrix(_exact.matmul(_exact.matmul(U, _exact.block_diag(E, N)), _exact.inverse(U)))


def _dense_ok(M, P: PointCoords, Q: PointCoords) -> bool:
    f2 = unipotent_split(charpoly_exact(M)).f2
    if f2.degree >= 1 and has_unit_modulus_root(f2):
        return False
    solved = solve_translation(M, Q)
    base = (P + solved[1]) if solved else P
    vecs = _columns(base) + ([] if solved else _columns(Q))
    return krylov_full(M, vecs)


def theorem_suite(
    n: int = 24, seed: int = 2024, max_d: int = 4, max_k: int = 3, mixed: bool = False
) -> list[Scenario]:
    """Expanding isogenies with generic translations and points, all dense by construction.

    By default no eigenvalue has modulus 1. With ``mixed=True`` every third
    scenario has a unipotent block, so 1 is a root of the charpoly.
    """
    rng = random.Random(seed)
    out = []
    while len(out) < n:
        d, k = rng.randint(1, max_d), rng.randint(1, max_k)
        if mixed and len(out) % 3 == 2 and d >= 2:
            # charpoly with a root at 1 and a translation off the image of M - I
            d1 = rng.randint(1, d - 1)
            M = random_mixed_matrix(rng, d1, d - d1)
        else:
            M = random_expanding_matrix(rng, d)
        P, Q = random_point(rng, d, k), random_point(rng, d, k)
        if not _dense_ok(M, P, Q):
            continue
        out.append(Scenario(f"thm_{len(out):03d}", M, random_gram(rng, k), Q, P, "dense_by_construction"))
    return out


def inequality_suite(n: int = 200, seed: int = 7, max_d: int = 4, max_k: int = 3) -> list[Scenario]:
    """A mix of generic, degenerate and non-dense scenarios."""
    rng = random.Random(seed)
    out = []
    kinds = ["generic", "fixed_point", "zero", "unipotent", "any_matrix", "invariant_subspace"]
    while len(out) < n:
        kind = kinds[len(out) % len(kinds)]
        d, k = rng.randint(1, max_d), rng.randint(1, max_k)
        G = random_gram(rng, k)
        if kind == "unipotent":
            M = random_unipotent_matrix(rng, d, rng.randint(1, d))
        elif kind == "any_matrix":
            M = tuple(tuple(rng.randint(-2, 2) for _ in range(d)) for _ in range(d))
            if _exact.det(M) == 0:
                continue
        else:
            M = random_expanding_matrix(rng, d)
        P, Q = random_point(rng, d, k), random_point(rng, d, k)
        density = "unknown"
        if kind == "zero":
            P, Q = PointCoords.zero(d, k), PointCoords.zero(d, k)
            density = "non_dense"
        elif kind == "fixed_point":
            sol = solve_translation(M, Q)
            if sol is None:
                continue
            P = -sol[1]  # phi(P) = P
            density = "non_dense"
        elif kind == "invariant_subspace":
            # P and the translation inside a proper M-invariant subspace
            v = tuple(rng.randint(-3, 3) for _ in range(d))
            if d < 2 or not any(v):
                continue
            Mv = _exact.matvec(M, v)
            P = PointCoords(tuple(tuple(Fraction(c) * (i + 1) for i in range(k)) for c in v))
            Q = PointCoords(tuple(tuple(Fraction(c) for _ in range(k)) for c in Mv))
            density = "non_dense" if not krylov_full(M, [v]) else "unknown"
        out.append(Scenario(f"ks_{len(out):03d}_{kind}", M, G, Q, P, density))
    return out


def composite_pairs(n: int = 50, seed: int = 11, max_d: int = 3, max_k: int = 2):
    """Pairs ``(Y, Z, L)``: two factor scenarios on a common lattice and an intertwiner for ``Y``."""
    rng = random.Random(seed)
    out = []
    while len(out) < n:
        k = rng.randint(1, max_k)
        G = random_gram(rng, k)
        facs = []
        for _ in range(2):
            d = rng.randint(1, max_d)
            if rng.random() < 0.3:
                M = random_unipotent_matrix(rng, d, rng.randint(1, d))
            else:
                M = random_expanding_matrix(rng, d)
            P, Q = random_point(rng, d, k), random_point(rng, d, k)
            facs.append(Scenario(f"f{len(out):03d}_{len(facs)}", M, G, Q, P, "unknown"))
        Y = facs[0]
        dY = len(Y.M)
        if rng.random() < 0.5:
            L = random_unimodular(rng, dY)
        else:
            L = _exact.scale(rng.choice([2, 3, -2]), random_unimodular(rng, dY))
        out.append((facs[0], facs[1], L))
    return out


def unipotent_suite(seed: int = 5, per_r: int = 4) -> list[Scenario]:
    rng = random.Random(seed)
    out = []
    for r in (1, 2, 3):
        for i in range(per_r):
            d = rng.randint(max(r, 1), 4)
            k = rng.randint(1, 3)
            M = random_unipotent_matrix(rng, d, r)
            P, Q = random_point(rng, d, k), random_point(rng, d, k)
            out.append(Scenario(f"unip_r{r}_{i}", M, random_gram(rng, k), Q, P, "unknown"))
    return out
