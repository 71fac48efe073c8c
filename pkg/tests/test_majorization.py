import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.optimize import linprog

from lame_choquet.lame import LameInstance, enumerate_solutions, random_stieltjes_instance, solve_bethe, solve_multistart
from lame_choquet.majorization import (
    HingeGrid,
    WeightedPointConfig,
    _transfer_system,
    check_eq_strong,
    check_majorization,
    check_res_k,
    compose,
    hinge_gap,
    transfer_violation,
    weights_k,
    weights_k2,
)
from lame_choquet.lame import SpectralPair
from lame_choquet.policy import NumericalStall
from lame_choquet.simplex import phase_one

SQ3 = 1 / np.sqrt(3)


def test_phase_one_feasible_and_infeasible():
    res = phase_one(np.array([[1.0, 1.0]]), np.array([1.0]))
    assert res.objective == 0 and abs(res.x.sum() - 1) < 1e-15
    res = phase_one(np.array([[1.0, 1.0], [1.0, 1.0]]), np.array([1.0, 2.0]))
    assert res.objective > 0.5


def test_phase_one_budget():
    A = np.array([[1.0, 2.0, 3.0], [3.0, 1.0, 2.0]])
    with pytest.raises(NumericalStall):
        phase_one(A, np.array([1.0, 1.0]), budget=0)


def test_config_validation():
    with pytest.raises(ValueError):
        WeightedPointConfig([0, 1], [0.7, 0.7])
    with pytest.raises(ValueError):
        WeightedPointConfig([0, 1], [1.5, -0.5])
    assert np.allclose(WeightedPointConfig([0, 1, 2]).weights, 1 / 3)


def test_weights_k2_examples():
    w = weights_k2(LameInstance([-1, 0, 1], [1, 1, 1], 2, 2))
    assert (w.alpha, w.denom) == (4, 9)
    assert np.isclose(w.a_vv, 4 / 9) and np.isclose(w.b_hs, 5 / 18)
    assert np.allclose(w.c_sing, 1 / 3)
    w = weights_k2(LameInstance([-1, 1], [1, 1], 2, 2))
    assert (w.alpha, w.denom, w.r) == (3, 4, 0)
    assert np.isclose(w.b_hs, 0.5) and np.allclose(w.c_sing, 0.5)


def test_weights_k_example():
    w = weights_k(LameInstance([-3, -1, 1, 3], [1, 1, 1, 1], 3, 3))
    assert (w.alpha, w.denom) == (5, 16)
    assert np.isclose(w.a_vv, 5 / 16) and np.isclose(w.b_hs, 11 / 48)
    assert np.allclose(w.c_sing, 1 / 4)


@given(
    st.integers(2, 7),
    st.integers(1, 9),
    st.data(),
)
def test_weight_simplex_sums(p, n, data):
    k = data.draw(st.integers(2, p))
    a = data.draw(st.lists(st.floats(0.01, 5), min_size=p, max_size=p))
    inst = LameInstance(np.arange(p), a, k, n)
    w = weights_k(inst)
    assert abs((p - k) * w.a_vv + n * w.b_hs - 1) <= 1e-12
    assert abs(w.c_sing.sum() - 1) <= 1e-12
    assert w.a_vv > 0 and w.b_hs > 0 and np.all(w.c_sing > 0)
    if n >= k:
        assert w.alpha > 1
    if k == 2:
        w2 = weights_k2(inst)
        assert abs(w.a_vv - w2.a_vv) <= 1e-15 and abs(w.b_hs - w2.b_hs) <= 1e-15
        assert np.max(np.abs(w.c_sing - w2.c_sing)) <= 1e-15


def test_majorization_examples():
    cfg = WeightedPointConfig([0.3 + 1j, -2, 0.5j], [0.2, 0.5, 0.3])
    cert = check_majorization(cfg, cfg)
    assert cert.feasible
    assert transfer_violation(cfg, cfg, np.eye(3)) == 0
    cert = check_majorization(WeightedPointConfig([0]), WeightedPointConfig([-1, 1]))
    assert cert.feasible and np.allclose(cert.matrix, [[0.5, 0.5]])
    cert = check_majorization(WeightedPointConfig([2]), WeightedPointConfig([-1, 1]))
    assert not cert.feasible and cert.max_violation > 0.5
    cert = check_majorization(WeightedPointConfig([-SQ3, SQ3]), WeightedPointConfig([-1, 0, 1]))
    assert cert.feasible
    assert np.allclose(cert.row_sums, 1, atol=1e-9)


def test_identity_certificate_is_identity():
    cfg = WeightedPointConfig([1, 2j, -1 - 1j])
    cert = check_majorization(cfg, cfg)
    assert np.allclose(cert.matrix, np.eye(3), atol=1e-12)


def test_hinge_examples():
    cfg = WeightedPointConfig([0.3 + 1j, -2, 0.5j], [0.2, 0.5, 0.3])
    assert abs(hinge_gap(cfg, cfg)) <= 1e-15
    assert hinge_gap(WeightedPointConfig([0]), WeightedPointConfig([-1, 1])) >= 0
    assert hinge_gap(WeightedPointConfig([2]), WeightedPointConfig([-1, 1])) < 0


def _random_pair(rng, m, n, feasible=True):
    Y = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    a = rng.dirichlet(np.ones(m))
    R = rng.dirichlet(np.ones(n) * 0.5, size=m)
    X = R @ Y
    if not feasible:
        X[0] = 3 * np.max(np.abs(Y)) + 1
    return WeightedPointConfig(X, a), WeightedPointConfig(Y, a @ R), R


@settings(max_examples=60)
@given(st.integers(0, 2**32 - 1), st.integers(1, 6), st.integers(1, 6), st.booleans())
def test_lp_agrees_with_linprog(seed, m, n, feasible):
    rng = np.random.default_rng(seed)
    lhs, rhs, _ = _random_pair(rng, m, n, feasible)
    cert = check_majorization(lhs, rhs)
    A, b = _transfer_system(lhs, rhs)
    ref = linprog(np.zeros(A.shape[1]), A_eq=A, b_eq=b, bounds=(0, None), method="highs")
    assert cert.feasible == (ref.status == 0)
    assert cert.feasible == feasible
    if cert.feasible:
        assert transfer_violation(lhs, rhs, cert.matrix) <= 1e-9
        assert hinge_gap(lhs, rhs) >= -1e-8 * (1 + np.max(np.abs(rhs.points)))


@settings(max_examples=40)
@given(st.integers(0, 2**32 - 1))
def test_transitivity_by_composition(seed):
    rng = np.random.default_rng(seed)
    B, C, _ = _random_pair(rng, 4, 5)
    R1 = rng.dirichlet(np.ones(4), size=3)
    A = WeightedPointConfig(R1 @ B.points, rng.dirichlet(np.ones(3)))
    B = WeightedPointConfig(B.points, A.weights @ R1)
    C = WeightedPointConfig(C.points, B.weights @ _transfer_ok(B, C))
    ab, bc = check_majorization(A, B), check_majorization(B, C)
    assert ab.feasible and bc.feasible
    R = compose(ab, bc)
    assert transfer_violation(A, C, R) <= 1e-8


def _transfer_ok(B, C):
    cert = check_majorization(B, WeightedPointConfig(C.points))
    if cert.feasible:
        return cert.matrix
    # B's points lie in co(C); redo with a feasible column mass through linprog
    A, b = _transfer_system(B, WeightedPointConfig(C.points))
    m, n = len(B), len(C)
    keep = np.r_[0:m, m + n : A.shape[0]]
    ref = linprog(np.zeros(A.shape[1]), A_eq=A[keep], b_eq=b[keep], bounds=(0, None), method="highs")
    return ref.x.reshape(m, n)


def test_res_k_legendre(legendre2):
    pair = solve_bethe(legendre2, (2,))
    rep = check_res_k(legendre2, pair)
    assert rep.passed and rep.sound
    assert np.allclose(rep.quadratic, (1 / 3, 1))


def test_res_k_p3_n1():
    inst = LameInstance([-1, 0, 1], [1, 1, 1], 2, 1)
    pair = solve_bethe(inst, (0, 1))
    rep = check_res_k(inst, pair)
    assert rep.passed
    assert np.allclose(rep.lhs.weights, 0.5)
    assert np.allclose(rep.quadratic, (1 / 3, 2 / 3))


def test_res_k_rejects_non_solution(legendre2):
    pair = solve_bethe(legendre2, (2,))
    bad = SpectralPair(pair.V, pair.S + pair.S * 0.1 + type(pair.S)([0.1]), 1.0)
    with pytest.raises(ValueError):
        check_res_k(legendre2, bad)


def test_eq_strong_legendre(legendre2):
    pair = solve_bethe(legendre2, (2,))
    rep = check_eq_strong(legendre2, pair)
    assert rep.passed and rep.extra["implies_two_set"]
    # unnormalized 2/3 <= (2/3) f(0) + (2/3)(f(-1) + f(1)) = 4/3, both masses n + r = 2
    assert np.allclose(rep.quadratic, (1 / 3, 2 / 3))
    assert np.allclose(rep.rhs.points, [0, -1, 1])
    assert np.allclose(rep.rhs.weights, 1 / 3)


def test_eq_strong_n1_has_no_derivative_zeros():
    inst = LameInstance([-1, 0, 1], [1, 1, 1], 2, 1)
    pair = solve_bethe(inst, (1, 0))
    rep = check_eq_strong(inst, pair)
    assert rep.passed
    assert len(rep.rhs) == 3


def test_eq_strong_all_branches(p3_instance):
    for pair in enumerate_solutions(p3_instance):
        rep = check_eq_strong(p3_instance, pair)
        assert rep.certificate.feasible and rep.extra["implies_two_set"]
        assert rep.extra["identity_defect"] <= 1e-10


def test_k3_reports_carry_note():
    inst = LameInstance([-1, 0, 1, 2], [1, 1, 1, 1], 3, 3)
    pair = solve_multistart(inst, wanted=1)[0]
    rep = check_res_k(inst, pair)
    assert rep.passed and rep.notes


@settings(max_examples=20)
@given(st.integers(0, 2**32 - 1))
def test_barycenter_and_soundness_on_solutions(seed):
    inst = random_stieltjes_instance(np.random.default_rng(seed), max_p=4, max_n=4)
    for pair in enumerate_solutions(inst):
        rep = check_res_k(inst, pair)
        assert rep.barycenter_defect <= 1e-9 * rep.scale
        assert rep.sound
        assert rep.quadratic[1] - rep.quadratic[0] >= -1e-12
