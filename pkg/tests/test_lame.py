import math

import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings, strategies as st

from lame_choquet.geometry import hull_distance
from lame_choquet.lame import (
    LameInstance,
    balanced_occupancy,
    bethe_initial,
    coefficient_start,
    enumerate_solutions,
    falling_factorial,
    hausdorff,
    occupancies,
    random_stieltjes_instance,
    recover_van_vleck,
    sigma_count,
    solve_bethe,
    solve_multistart,
    solve_newton_coeffs,
)
from lame_choquet.policy import BadOccupancy, EnumerationOverflow
from lame_choquet.poly import ComplexPolynomial, from_roots

SQ3 = 1 / np.sqrt(3)


def check_pair_invariants(inst, pair, tol=1e-10):
    assert pair.residual <= tol
    lead = pair.V.coeffs[-1]
    expected = -falling_factorial(inst.degree_n, inst.order_k - 1) * inst.alpha_k
    assert abs(lead - expected) <= 1e-10 * abs(expected)
    assert pair.V.degree == inst.r
    pts = np.concatenate([pair.zeros_V, pair.zeros_S])
    scale = 1 + np.max(np.abs(inst.zeta))
    assert np.max(hull_distance(pts, inst.zeta), initial=0.0) <= 1e-8 * scale


def test_instance_validation():
    with pytest.raises(ValueError):
        LameInstance([0], [1])
    with pytest.raises(ValueError):
        LameInstance([0, 1], [1, -1])
    with pytest.raises(ValueError):
        LameInstance([0, 1], [1, 1], order_k=3)
    with pytest.raises(ValueError):
        LameInstance([0, 1], [1, 1], degree_n=0)


def test_instance_polynomials():
    inst = LameInstance([-1, 0, 1], [1, 2, 3])
    assert inst.Q2.allclose(from_roots([-1, 0, 1]))
    assert inst.Q1.degree == 2
    assert abs(inst.Q1.leading - 6) < 1e-14
    z = 0.37 + 0.2j
    assert abs(inst.Q1(z) / inst.Q2(z) - sum(a / (z - x) for a, x in zip([1, 2, 3], [-1, 0, 1]))) < 1e-12


@pytest.mark.parametrize("n, p, expected", [(2, 3, 3), (5, 2, 1), (0, 2, 1), (3, 4, 10), (6, 5, 84)])
def test_sigma_count(n, p, expected):
    assert sigma_count(n, p) == expected
    assert sigma_count(n, p) == math.comb(n + p - 2, n)


def test_sigma_count_overflow():
    with pytest.raises(EnumerationOverflow):
        sigma_count(40, 40, cap=10_000)
    with pytest.raises(EnumerationOverflow):
        sigma_count(200, 200)


def test_occupancies_lexicographic():
    occ = occupancies(2, 3)
    assert occ == [(0, 2), (1, 1), (2, 0)]
    assert len(occupancies(3, 5)) == sigma_count(3, 5)


def test_balanced_occupancy():
    assert balanced_occupancy(5, 3) == (3, 2)
    assert balanced_occupancy(4, 3) == (2, 2)
    assert balanced_occupancy(2, 4) == (1, 1, 0)


def test_bethe_initial_examples():
    assert np.allclose(bethe_initial(LameInstance([-1, 0, 1], [1, 1, 1], 2, 1), (1, 0)), [-0.5])
    assert np.allclose(bethe_initial(LameInstance([-1, 1], [1, 1], 2, 2), (2,)), [-np.sqrt(0.5), np.sqrt(0.5)])
    with pytest.raises(BadOccupancy):
        bethe_initial(LameInstance([-1, 0, 1], [1, 1, 1], 2, 2), (1, 0))


def test_solve_bethe_legendre(legendre2):
    pair = solve_bethe(legendre2, (2,))
    assert np.allclose(pair.S.coeffs, [-1 / 3, 0, 1], atol=1e-12)
    assert np.allclose(pair.V.coeffs, [-6], atol=1e-12)
    pair = solve_bethe(legendre2.with_degree(1), (1,))
    assert np.allclose(pair.S.coeffs, [0, 1], atol=1e-12)
    assert np.allclose(pair.V.coeffs, [-2], atol=1e-12)


def test_solve_bethe_p3_n1():
    inst = LameInstance([-1, 0, 1], [1, 1, 1], 2, 1)
    pair = solve_bethe(inst, (0, 1))
    assert np.allclose(pair.S.coeffs, [-SQ3, 1], atol=1e-12)
    assert np.allclose(pair.V.coeffs, [-np.sqrt(3), -3], atol=1e-12)
    assert pair.occupancy == (0, 1)
    assert np.allclose(pair.V_monic.coeffs, [SQ3, 1])


def test_recover_van_vleck(legendre2):
    V, res = recover_van_vleck(legendre2, ComplexPolynomial([-1 / 3, 0, 1]))
    assert V.allclose(ComplexPolynomial([-6])) and res < 1e-15
    inst = LameInstance([-1, 0, 1], [1, 1, 1], 2, 1)
    V, res = recover_van_vleck(inst, ComplexPolynomial([-SQ3, 1]))
    assert V.allclose(ComplexPolynomial([-np.sqrt(3), -3])) and res < 1e-15
    _, res = recover_van_vleck(legendre2, ComplexPolynomial([0, 0, 1]))
    assert res > 1e-10


def test_newton_coeffs_legendre(legendre2):
    pair = solve_newton_coeffs(legendre2, [-1 / 3 + 0.05, 0.03])
    assert np.allclose(pair.S.coeffs, [-1 / 3, 0, 1], atol=1e-12)
    assert np.allclose(pair.V.coeffs, [-6], atol=1e-12)


def test_newton_coeffs_k3():
    inst = LameInstance([-1, 0, 1], [1, 1, 1], 3, 3)
    rng = np.random.default_rng(5)
    start = coefficient_start(inst, np.array([-0.5, 0.0, 0.5]) + 0.05 * rng.standard_normal(3))
    pair = solve_newton_coeffs(inst, start)
    check_pair_invariants(inst, pair)
    assert abs(pair.V.leading + 24) < 1e-12 * 24


def test_newton_coeffs_wrong_length(legendre2):
    with pytest.raises(ValueError):
        solve_newton_coeffs(legendre2, [0.0, 0.0, 0.0])


@pytest.mark.parametrize(
    "zeta, n, count",
    [([-1, 0, 1], 2, 3), ([-3, -1, 1, 3], 2, 6), ([-1, 1], 5, 1), ([-2, -0.5, 0.7, 1.5, 3], 3, 20)],
)
def test_enumerate_counts(zeta, n, count):
    inst = LameInstance(zeta, np.ones(len(zeta)), 2, n)
    pairs = enumerate_solutions(inst)
    assert len(pairs) == count == sigma_count(n, len(zeta))
    for pair in pairs:
        check_pair_invariants(inst, pair)
    for i in range(len(pairs)):
        for j in range(i):
            assert hausdorff(pairs[i].zeros_S, pairs[j].zeros_S) > 1e-6


def test_enumerate_parallel_matches_serial(p3_instance):
    inst = p3_instance.with_degree(4)
    a = enumerate_solutions(inst)
    b = enumerate_solutions(inst, jobs=4)
    assert [p.occupancy for p in a] == [p.occupancy for p in b]
    for x, y in zip(a, b):
        assert np.array_equal(x.S.coeffs, y.S.coeffs)


def _occupancy_of(zeros, zeta):
    x = np.sort(zeros.real)
    return tuple(int(np.sum((x > zeta[i]) & (x < zeta[i + 1]))) for i in range(len(zeta) - 1))


@settings(max_examples=25)
@given(st.integers(0, 2**32 - 1))
def test_stieltjes_enumeration_property(seed):
    inst = random_stieltjes_instance(np.random.default_rng(seed))
    pairs = enumerate_solutions(inst)
    assert len(pairs) == sigma_count(inst.degree_n, inst.p)
    for pair in pairs:
        check_pair_invariants(inst, pair)
        assert _occupancy_of(pair.zeros_S, inst.zeta.real) == pair.occupancy


def _elimination_oracle(zeta, a, n):
    """All (S, V) for k = 2, p = 3 by exact polynomial elimination."""
    z = sp.Symbol("z")
    s = sp.symbols(f"s0:{n}")
    v0 = sp.Symbol("v0")
    alpha = n - 1 + sum(a)
    S = z**n + sum(s[i] * z**i for i in range(n))
    Q2 = sp.prod([z - x for x in zeta])
    Q1 = sp.expand(sum(ai * sp.cancel(Q2 / (z - x)) for ai, x in zip(a, zeta)))
    V = -n * alpha * z + v0
    expr = sp.Poly(sp.expand(Q2 * sp.diff(S, z, 2) + Q1 * sp.diff(S, z) + V * S), z)
    eqs = [expr.coeff_monomial(z**j) for j in range(n + 1)]
    sols = sp.solve(eqs, list(s) + [v0], dict=True)
    out = []
    for sol in sols:
        sc = [complex(sp.N(sol[si], 30)) for si in s] + [1.0]
        out.append((np.array(sc), complex(sp.N(sol[v0], 30))))
    return out


@pytest.mark.parametrize(
    "zeta, a",
    [
        ((-1, 0, 1), (1, 1, 1)),
        ((sp.Rational(-1), sp.Rational(3, 10), sp.Rational(2)), (sp.Rational(1, 2), 1, 2)),
    ],
)
@pytest.mark.parametrize("n", [1, 2])
def test_enumeration_matches_elimination(zeta, a, n):
    oracle = _elimination_oracle(zeta, a, n)
    inst = LameInstance([float(x) for x in zeta], [float(x) for x in a], 2, n)
    pairs = enumerate_solutions(inst)
    assert len(oracle) == len(pairs) == sigma_count(n, 3)
    for pair in pairs:
        dist = [
            max(np.max(np.abs(pair.S.coeffs - sc)), abs(pair.V.coeffs[0] - v0)) for sc, v0 in oracle
        ]
        assert min(dist) <= 1e-8


def test_multistart_complex_zeta():
    inst = LameInstance([1j, 1, -1 - 1j], [1, 1, 1], 2, 2)
    pairs = solve_multistart(inst, seed=3)
    assert len(pairs) == math.comb(inst.degree_n + inst.r, inst.degree_n)
    for pair in pairs:
        check_pair_invariants(inst, pair)


def test_multistart_seed_determinism():
    inst = LameInstance([1j, 1, -1 - 1j, 2j], [1, 2, 1, 0.5], 3, 3)
    a = solve_multistart(inst, seed=11)
    b = solve_multistart(inst, seed=11)
    assert len(a) == len(b) >= 1
    for x, y in zip(a, b):
        assert np.array_equal(x.S.coeffs, y.S.coeffs)


@pytest.mark.parametrize("p, n, count, lead", [(3, 3, 1, -24), (3, 4, 1, -60), (4, 3, 4, -30), (4, 4, 5, -72)])
def test_multistart_k3(p, n, count, lead):
    inst = LameInstance(np.linspace(-1, 1, p), np.ones(p), 3, n)
    pairs = solve_multistart(inst, seed=0)
    assert len(pairs) == count
    for pair in pairs:
        check_pair_invariants(inst, pair)
        assert abs(pair.V.leading - lead) <= 1e-10 * abs(lead)
