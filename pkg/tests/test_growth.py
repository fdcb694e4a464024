import math
from fractions import Fraction

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from arithdeg import _exact
from arithdeg.degrees import (
    arithmetic_degree_estimate,
    estimate_from_heights,
    growth_profile,
    height_sequence,
    minimal_recurrence,
)
from arithdeg.degrees.growth import AlphaEstimate, polynomial_fit
from arithdeg.generate import random_unipotent_matrix
from arithdeg.heightmodel import AbelianModel, MWModel, PointCoords, SelfMap
from arithdeg.polyalgebra import IntPoly, X

from strategies import int_matrices, rational_matrices

A1 = AbelianModel(1, MWModel([[1]]))


def test_alpha_examples():
    a = arithmetic_degree_estimate(A1, SelfMap([[2]], PointCoords([[0]])), PointCoords([[1]]))
    assert a.mode == "exponential" and abs(a.value - 4) < 1e-12
    a = arithmetic_degree_estimate(A1, SelfMap([[1]], PointCoords([[1]])), PointCoords([[0]]))
    assert (a.mode, a.poly_degree_fit, a.value) == ("polynomial", 2, 1.0)
    a = arithmetic_degree_estimate(A1, SelfMap([[2]], PointCoords([[0]])), PointCoords([[0]]))
    assert a.value == 1.0


def test_alpha_estimate_invariants():
    with pytest.raises(ValueError):
        AlphaEstimate(0.5, 10, "exponential", None, 0.0)
    with pytest.raises(ValueError):
        AlphaEstimate(2.0, 10, "polynomial", 1, 0.0)


def test_minimal_recurrence_fibonacci():
    fib = [0, 1]
    while len(fib) < 30:
        fib.append(fib[-1] + fib[-2])
    assert minimal_recurrence(fib) == X**2 - X - 1
    # too short to be determined
    assert minimal_recurrence(fib[:5]) is None
    assert minimal_recurrence([0] * 10).degree <= 0


def test_regression_agrees_on_clean_exponential():
    hs = [Fraction(3**n) for n in range(81)]
    rec = estimate_from_heights(hs)
    reg = estimate_from_heights(hs, method="regression")
    assert rec.value == pytest.approx(3, rel=1e-12)
    assert reg.value == pytest.approx(3, rel=1e-9)
    with pytest.raises(ValueError):
        estimate_from_heights(hs, method="nope")


def test_regression_polynomial_regime():
    hs = [Fraction(n * n + 1) for n in range(81)]
    est = estimate_from_heights(hs, method="regression")
    assert est.mode == "polynomial" and est.value == 1


def _ratio_oracle(A, phi, P, n=200):
    """lim h_n^(1/n) via the exact ratio h_(n+1)/h_n far out; valid when a single modulus dominates."""
    hs = height_sequence(A, phi, P, n + 1)
    return float(hs[-1] / hs[-2]) if hs[-2] else 0.0


@given(st.integers(2, 9), st.integers(-6, 6), st.integers(1, 6))
def test_alpha_one_dimensional_closed_form(m, p, q):
    assume(p != 0)
    phi = SelfMap([[m]], PointCoords([[0]]))
    a = arithmetic_degree_estimate(A1, phi, PointCoords([[Fraction(p, q)]]))
    assert a.value == pytest.approx(m * m, rel=1e-12)


@given(int_matrices(d=2, lo=-3, hi=3), st.data())
def test_alpha_matches_ratio_oracle(M, data):
    A = AbelianModel(2, MWModel([[2, 1], [1, 2]]))
    eig = sorted(abs(complex(z)) for z in __import__("numpy").linalg.eigvals(__import__("numpy").array(M, float)))
    # a real dominant eigenvalue strictly bigger than the other modulus keeps the ratio oracle valid
    assume(eig[-1] > 1.2 and eig[-1] > 1.05 * eig[0])
    P = PointCoords(data.draw(rational_matrices(2, 2)))
    Q = PointCoords(data.draw(rational_matrices(2, 2)))
    phi = SelfMap(M, Q)
    a = arithmetic_degree_estimate(A, phi, P)
    ref = _ratio_oracle(A, phi, P)
    assume(ref > 1.01)
    assert a.value == pytest.approx(ref, rel=1e-3)


def test_polynomial_fit():
    p = polynomial_fit([Fraction(3 * n * n - n + 2) for n in range(10)])
    assert p(20) == 3 * 400 - 20 + 2
    assert polynomial_fit([2**n for n in range(10)]) is None


def test_growth_profile_examples():
    phi = SelfMap([[1]], PointCoords([[1]]))
    prof = growth_profile(A1, phi, PointCoords([[0]]))
    assert prof.fitted_degree == 2 and prof.bound_holds and prof.r == 1
    assert prof.loglog_slope == pytest.approx(2, abs=1e-9)
    prof = growth_profile(A1, SelfMap([[1]], PointCoords([[0]])), PointCoords([[0]]))
    assert prof.fitted_degree == 0
    with pytest.raises(ValueError):
        growth_profile(A1, SelfMap([[2]], PointCoords([[0]])), PointCoords([[1]]))
    with pytest.raises(ValueError):
        growth_profile(
            AbelianModel(2, MWModel([[1]])),
            SelfMap([[1, 1], [0, 1]], PointCoords.zero(2, 1)),
            PointCoords([[0], [1]]),
            r=1,
        )


@given(st.integers(1, 3), st.integers(0, 10**6), st.data())
def test_unipotent_growth_is_polynomial_of_degree_at_most_2r(r, seed, data):
    import random

    d = data.draw(st.integers(r, 4))
    M = random_unipotent_matrix(random.Random(seed), d, r)
    A = AbelianModel(d, MWModel([[3, 1], [1, 2]]))
    P = PointCoords(data.draw(rational_matrices(d, 2)))
    Q = PointCoords(data.draw(rational_matrices(d, 2)))
    prof = growth_profile(A, SelfMap(M, Q), P, 40, r)
    assert prof.fitted_degree <= 2 * r
    assert prof.bound_holds
    a = arithmetic_degree_estimate(A, SelfMap(M, Q), P)
    assert a.value == 1 and a.mode == "polynomial"
