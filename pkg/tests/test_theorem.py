import math
import random

import pytest

from arithdeg import _exact
from arithdeg.degrees import TheoremOptions, special_case_check, verify_composite, verify_theorem
from arithdeg.generate import composite_pairs, random_mixed_matrix, random_point, theorem_suite
from arithdeg.heightmodel import AbelianModel, MWModel, PointCoords, SelfMap

A1 = AbelianModel(1, MWModel([[1]]))
GOLDEN4 = ((3 + math.sqrt(5)) / 2) ** 2


def pc(*rows):
    return PointCoords(tuple(tuple(r) for r in rows))


def test_special_case_examples():
    phi = SelfMap([[2]], pc([5]))
    assert special_case_check(A1, phi, pc([1]), 1, pc([5]), 50)
    phi0 = SelfMap([[3]], pc([0]))
    assert special_case_check(A1, phi0, pc(["2/3"]), 1, pc([0]), 50)
    with pytest.raises(ValueError, match="precondition violated"):
        special_case_check(A1, phi, pc([1]), 1, pc([4]), 10)


def test_fibonacci_dense():
    A = AbelianModel(2, MWModel([[2, 1], [1, 3]]))
    phi = SelfMap([[2, 1], [1, 1]], pc(["1/2", 0], [1, "-1/3"]))
    rep = verify_theorem(A, phi, pc([1, 2], ["3/2", -1]))
    assert rep.verdict == "equality" and rep.gap <= 1e-3
    assert rep.delta.value == pytest.approx(GOLDEN4, rel=1e-12)
    assert rep.route == "translation_solved"


def test_identity_translation():
    rep = verify_theorem(A1, SelfMap([[1]], pc([1])), pc([0]))
    assert rep.route == "pure_unipotent"
    assert rep.alpha.value == 1 and rep.delta.encloses(1) and rep.verdict == "equality"


def test_fixed_point_is_inequality_only():
    rep = verify_theorem(A1, SelfMap([[2]], pc([0])), pc([0]), "non_dense")
    assert rep.alpha.value == 1 and rep.delta.lower == 4
    assert rep.verdict == "inequality-only"


def test_fixed_point_flagged_dense_fails():
    # equality is false here, so the harness must say so
    rep = verify_theorem(A1, SelfMap([[2]], pc([0])), pc([0]), "dense_by_construction")
    assert rep.verdict == "fail" and not rep.passed


def test_singular_rejected():
    with pytest.raises(ValueError):
        verify_theorem(AbelianModel(2, MWModel([[1]])), SelfMap([[1, 1], [1, 1]], PointCoords.zero(2, 1)), pc([1], [0]))


def test_decomposition_route():
    A = AbelianModel(3, MWModel([[1]]))
    M = ((2, 1, 0), (1, 1, 0), (0, 0, 1))
    rep = verify_theorem(A, SelfMap(M, pc([1], [0], [1])), pc([0], [1], [1]))
    assert rep.route == "decomposition"
    assert rep.passed and not rep.failures
    for key in ("bezout_identity", "sum_full", "intersection_torsion", "diagram_commutes",
                "factor2_growth_bound", "factor2_alpha_one", "alpha_conjugation"):
        assert rep.checks[key]


def test_random_mixed_decompositions():
    rng = random.Random(3)
    for _ in range(6):
        M = random_mixed_matrix(rng, 2, 1)
        P, Q = random_point(rng, 3, 2), random_point(rng, 3, 2)
        rep = verify_theorem(AbelianModel(3, MWModel([[2, 1], [1, 2]])), SelfMap(M, Q), P, "unknown")
        assert rep.passed, rep.failures


def test_regression_method_option():
    A = AbelianModel(2, MWModel([[2, 1], [1, 3]]))
    phi = SelfMap([[2, 1], [1, 1]], pc(["1/2", 0], [1, "-1/3"]))
    rep = verify_theorem(A, phi, pc([1, 2], ["3/2", -1]), opts=TheoremOptions(method="regression"))
    assert rep.alpha.method == "regression"


def test_theorem_suite_small():
    for s in theorem_suite(6, seed=99) + theorem_suite(9, seed=5, mixed=True):
        rep = verify_theorem(s.model(), s.selfmap(), s.point(), s.density)
        assert rep.verdict == "equality", (s.name, rep.failures, rep.gap)


def test_composite_laws_small():
    for Y, Z, L in composite_pairs(5, seed=1):
        checks = verify_composite(Y.model(), Y.selfmap(), Y.point(), Z.model(), Z.selfmap(), Z.point(), L)
        assert all(checks.values()), checks


def test_composite_rejects_non_intertwining():
    Y = SelfMap([[2, 1], [0, 3]], PointCoords.zero(2, 1))
    A = AbelianModel(2, MWModel([[1]]))
    with pytest.raises(ValueError):
        verify_composite(A, Y, pc([1], [1]), A, Y, pc([1], [1]), ((2, 0), (0, 1)))
