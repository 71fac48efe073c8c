"""Sz.-Nagy generalized derivatives, derivative chains and Jacobi polynomials."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
from scipy.linalg import LinAlgError, eigh_tridiagonal

from .majorization import (
    HingeGrid,
    TransferCertificate,
    WeightedPointConfig,
    check_majorization,
    hinge_values,
)
from .policy import DEFAULT_POLICY, CombinatorialCap, EigenFailure, NumericPolicy
from .poly import ComplexPolynomial, RootSet, derivative, find_roots, from_roots


@dataclass(frozen=True, eq=False)
class SzNagyConfig:
    """Poles ``z_i`` with positive charges ``tau_i`` summing to 1."""

    poles: np.ndarray
    tau: np.ndarray

    def __init__(self, poles, tau=None):
        z = np.atleast_1d(np.asarray(poles, dtype=complex)).ravel()
        t = np.full(z.size, 1.0 / z.size) if tau is None else np.asarray(tau, dtype=float).ravel()
        if z.size < 2 or t.size != z.size:
            raise ValueError("need m >= 2 poles with one charge each")
        if np.any(t <= 0) or abs(t.sum() - 1.0) > 1e-12:
            raise ValueError("charges must be positive and sum to 1")
        object.__setattr__(self, "poles", z)
        object.__setattr__(self, "tau", t)

    @property
    def m(self) -> int:
        return self.poles.size

    def numerator(self) -> ComplexPolynomial:
        """``sum tau_i prod_{j != i} (z - z_j)``; repeated poles stay as repeated factors."""
        total = ComplexPolynomial()
        for i, t in enumerate(self.tau):
            total = total + t * from_roots(np.delete(self.poles, i))
        return total


def sz_nagy_zeros(config: SzNagyConfig, policy: NumericPolicy = DEFAULT_POLICY) -> RootSet:
    """The ``m - 1`` zeros of ``sum tau_i / (z - z_i)``, a pole of multiplicity ``m_i``
    counting as a zero of multiplicity ``m_i - 1``."""
    return find_roots(config.numerator(), policy)


@dataclass(frozen=True, eq=False)
class SlackReport:
    min_slack: float
    scale: float
    certificate: TransferCertificate | None = None
    slacks: np.ndarray = field(default=None, repr=False)
    extra: dict = field(default_factory=dict)

    def passed(self, tol: float = 1e-9) -> bool:
        ok = self.min_slack >= -tol * self.scale
        if self.certificate is not None:
            ok = ok and self.certificate.feasible
        return bool(ok)


def _weighted_slacks(lhs_pts, lhs_w, rhs_pts, rhs_w, grid: HingeGrid) -> np.ndarray:
    """``sum rhs_w f(rhs) - sum lhs_w f(lhs)`` over the hinge grid plus ``|z|^2``."""
    th, cs = grid.functions(rhs_pts)
    hinge = hinge_values(rhs_pts, th, cs) @ rhs_w - hinge_values(lhs_pts, th, cs) @ lhs_w
    quad = rhs_w @ np.abs(rhs_pts) ** 2 - lhs_w @ np.abs(lhs_pts) ** 2
    return np.append(hinge, quad)


def _scale(*pts) -> float:
    return 1.0 + max(float(np.max(np.abs(p), initial=0.0)) for p in pts)


def _normalized_certificate(lhs_pts, lhs_w, rhs_pts, rhs_w, policy):
    lhs = WeightedPointConfig(lhs_pts, lhs_w / lhs_w.sum())
    rhs = WeightedPointConfig(rhs_pts, rhs_w / rhs_w.sum())
    return check_majorization(lhs, rhs, policy)


def lemma1_check(
    config: SzNagyConfig,
    hinges: HingeGrid | None = None,
    policy: NumericPolicy = DEFAULT_POLICY,
    certify: bool = True,
) -> SlackReport:
    """``sum f(w_j) <= sum (1 - tau_i) f(z_i)`` on the hinge grid, plus its LP certificate."""
    hinges = hinges or HingeGrid.from_policy(policy)
    w = sz_nagy_zeros(config, policy).values
    rhs_w = 1.0 - config.tau
    lhs_w = np.ones(w.size)
    slacks = _weighted_slacks(w, lhs_w, config.poles, rhs_w, hinges)
    cert = _normalized_certificate(w, lhs_w, config.poles, rhs_w, policy) if certify else None
    return SlackReport(float(slacks.min()), _scale(w, config.poles), cert, slacks)


def elementary_symmetric(values, e: int) -> complex:
    """``e``-th elementary symmetric function of ``values``."""
    coeffs = np.ones(1, dtype=complex)
    for v in values:
        coeffs = np.append(coeffs, 0) + v * np.append(0, coeffs)
    return complex(coeffs[e])


def lemma2_check(
    config: SzNagyConfig,
    d: int,
    e: int,
    hinges: HingeGrid | None = None,
    policy: NumericPolicy = DEFAULT_POLICY,
    certify: bool = True,
) -> SlackReport:
    """Symmetric-function version over ``d``-subsets of zeros and poles.

    For convex ``f``::

        sum_{|J|=d} f(e_e(w_J)) <= sum_{|I|=d} (1 - sum_{i in I} tau_i) f(e_e(z_I))
    """
    m = config.m
    if m > policy.subset_guard:
        raise CombinatorialCap(f"m = {m} exceeds the subset guard {policy.subset_guard}")
    if not 1 <= d <= m - 1 or not 0 <= e <= d:
        raise ValueError("need 1 <= d <= m - 1 and 0 <= e <= d")
    hinges = hinges or HingeGrid.from_policy(policy)
    w = sz_nagy_zeros(config, policy).values
    lhs_pts = np.array([elementary_symmetric(w[list(J)], e) for J in itertools.combinations(range(m - 1), d)])
    subsets = list(itertools.combinations(range(m), d))
    rhs_pts = np.array([elementary_symmetric(config.poles[list(I)], e) for I in subsets])
    rhs_w = np.array([1.0 - config.tau[list(I)].sum() for I in subsets])
    lhs_w = np.ones(lhs_pts.size)
    slacks = _weighted_slacks(lhs_pts, lhs_w, rhs_pts, rhs_w, hinges)
    cert = _normalized_certificate(lhs_pts, lhs_w, rhs_pts, rhs_w, policy) if certify else None
    mass_gap = float(rhs_w.sum() - math.comb(m - 1, d))
    return SlackReport(float(slacks.min()), _scale(lhs_pts, rhs_pts), cert, slacks, {"mass_gap": mass_gap})


def derivative_chain_check(
    P: ComplexPolynomial,
    i: int,
    hinges: HingeGrid | None = None,
    policy: NumericPolicy = DEFAULT_POLICY,
    certify: bool = True,
) -> SlackReport:
    """``(d-i+1) sum_{Z(P^(i))} f <= (d-i) sum_{Z(P^(i-1))} f`` for ``1 <= i <= d-1``."""
    d = P.degree
    if d is None or d < 2 or not 1 <= i <= d - 1:
        raise ValueError("need deg P = d >= 2 and 1 <= i <= d - 1")
    hinges = hinges or HingeGrid.from_policy(policy)
    w = find_roots(derivative(P, i), policy).values
    z = find_roots(derivative(P, i - 1), policy).values
    lhs_w = np.full(w.size, float(d - i + 1))
    rhs_w = np.full(z.size, float(d - i))
    slacks = _weighted_slacks(w, lhs_w, z, rhs_w, hinges)
    cert = _normalized_certificate(w, lhs_w, z, rhs_w, policy) if certify else None
    return SlackReport(float(slacks.min()), _scale(w, z), cert, slacks)


@dataclass(frozen=True)
class JacobiParams:
    n: int
    alpha: float = 0.0
    beta: float = 0.0

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("Jacobi degree must be >= 1")
        if self.alpha <= -1 or self.beta <= -1:
            raise ValueError("need alpha > -1 and beta > -1")


def jacobi_poly(params: JacobiParams) -> ComplexPolynomial:
    """``P_n^(alpha, beta)`` in the standard normalization, by the three-term recurrence."""
    n, a, b = params.n, params.alpha, params.beta
    z = ComplexPolynomial([0.0, 1.0])
    prev = ComplexPolynomial([1.0])
    cur = ComplexPolynomial([(a - b) / 2, (a + b + 2) / 2])
    for k in range(2, n + 1):
        s = 2 * k + a + b
        c1 = 2 * k * (k + a + b) * (s - 2)
        c2 = (s - 1) * (s * (s - 2))
        c3 = (s - 1) * (a * a - b * b)
        c4 = 2 * (k + a - 1) * (k + b - 1) * s
        prev, cur = cur, (c2 * (z * cur) + c3 * cur - c4 * prev) * (1.0 / c1)
    return cur


def jacobi_value_at_one(params: JacobiParams) -> float:
    """``binom(n + alpha, n)`` via ``Gamma(x + 1) = x Gamma(x)``."""
    out = 1.0
    for j in range(1, params.n + 1):
        out *= (params.alpha + j) / j
    return out


def jacobi_matrix(params: JacobiParams) -> tuple[np.ndarray, np.ndarray]:
    """Diagonal and off-diagonal of the symmetric Jacobi matrix of the monic recurrence."""
    n, a, b = params.n, params.alpha, params.beta
    j = np.arange(n, dtype=float)
    s = 2 * j + a + b
    with np.errstate(divide="ignore", invalid="ignore"):
        diag = (b * b - a * a) / (s * (s + 2))
    diag[0] = (b - a) / (a + b + 2)
    k = np.arange(1, n, dtype=float)
    s = 2 * k + a + b
    with np.errstate(divide="ignore", invalid="ignore"):
        off2 = 4 * k * (k + a) * (k + b) * (k + a + b) / (s**2 * (s + 1) * (s - 1))
    if n > 1:
        off2[0] = 4 * (1 + a) * (1 + b) / ((2 + a + b) ** 2 * (3 + a + b))
    return diag, np.sqrt(off2)


def jacobi_zeros(params: JacobiParams) -> np.ndarray:
    """Ascending zeros of ``P_n^(alpha, beta)`` as eigenvalues of the Jacobi matrix."""
    diag, off = jacobi_matrix(params)
    if params.n == 1:
        return diag.copy()
    try:
        return np.sort(eigh_tridiagonal(diag, off, eigvals_only=True))
    except LinAlgError as exc:
        raise EigenFailure(str(exc)) from exc


def jacobi_derivative_zeros(params: JacobiParams) -> np.ndarray:
    """Zeros of ``d/dz P_n^(alpha, beta)``, proportional to ``P_{n-1}^(alpha+1, beta+1)``."""
    if params.n < 2:
        return np.zeros(0)
    return jacobi_zeros(JacobiParams(params.n - 1, params.alpha + 1, params.beta + 1))


def _interval_functions(count: int):
    """``|z - c|`` for ``c`` on a uniform grid of ``[-1, 1]``, then ``z^2``."""
    cs = np.linspace(-1.0, 1.0, count)

    def values(x):
        x = np.asarray(x, dtype=float)
        return np.vstack([np.abs(x[None, :] - cs[:, None]), x[None, :] ** 2])

    return values


def theorem_tj_check(
    params: JacobiParams,
    hinges: int | None = None,
    policy: NumericPolicy = DEFAULT_POLICY,
    certify: bool = True,
) -> SlackReport:
    """Mean of convex ``f`` over the zeros against the two-point endpoint measure."""
    n, a, b = params.n, params.alpha, params.beta
    f = _interval_functions(hinges or policy.jacobi_hinges)
    x = jacobi_zeros(params)
    w1, wm1 = (n + b) / (2 * n + a + b), (n + a) / (2 * n + a + b)
    ends = f([1.0, -1.0])
    slacks = w1 * ends[:, 0] + wm1 * ends[:, 1] - f(x).mean(axis=1)
    cert = None
    if certify:
        cert = check_majorization(WeightedPointConfig(x), WeightedPointConfig([1.0, -1.0], [w1, wm1]), policy)
    return SlackReport(float(slacks.min()), 2.0, cert, slacks)


def eq_j_strong_check(
    params: JacobiParams,
    hinges: int | None = None,
    policy: NumericPolicy = DEFAULT_POLICY,
) -> SlackReport:
    """Zeros of ``P_n`` against zeros of ``P_n'`` and the endpoints.

    For convex ``f`` on ``[-1, 1]``::

        (n+a+b+1) sum f(zeta) <= (n+a+b) sum f(zeta') + (n+b) f(1) + (n+a) f(-1)

    ``extra`` records that composing with the derivative chain gives back
    the endpoint inequality.
    """
    n, a, b = params.n, params.alpha, params.beta
    if n < 2:
        raise ValueError("need n >= 2")
    f = _interval_functions(hinges or policy.jacobi_hinges)
    x = jacobi_zeros(params)
    xp = jacobi_derivative_zeros(params)
    N = n + a + b + 1
    fx, fxp, ends = f(x).sum(axis=1), f(xp).sum(axis=1), f([1.0, -1.0])
    endpoint = (n + b) * ends[:, 0] + (n + a) * ends[:, 1]
    strong = (N - 1) * fxp + endpoint - N * fx
    chain = (n - 1) * fx - n * fxp
    tj_scaled = endpoint - (2 * n + a + b) / n * fx
    defect = float(np.max(np.abs(tj_scaled - strong - (N - 1) / n * chain)))
    extra = {
        "chain_min": float(chain.min()),
        "identity_defect": defect,
        "tj_min": float((tj_scaled / (2 * n + a + b)).min()),
        "composition_ok": bool(defect <= 1e-9 * (1 + np.max(np.abs(endpoint))) and chain.min() >= -1e-9),
    }
    return SlackReport(float(strong.min()), 2.0, None, strong, extra)


class ArcsineCheck(NamedTuple):
    lhs: float
    bound: float

    @property
    def ok(self) -> bool:
        return self.lhs <= self.bound + DEFAULT_POLICY.arcsine_tol


def arcsine_bound_check(c: float, nodes: int | None = None) -> ArcsineCheck:
    """Arcsine mean of ``|z - c|`` by Gauss-Chebyshev quadrature, against ``max(1, |c|)``."""
    N = nodes or DEFAULT_POLICY.chebyshev_nodes
    x = np.cos((2 * np.arange(1, N + 1) - 1) * np.pi / (2 * N))
    return ArcsineCheck(float(np.mean(np.abs(x - c))), max(1.0, abs(float(c))))


def random_sz_nagy_config(rng: np.random.Generator, m: int) -> SzNagyConfig:
    """Gaussian complex poles with Dirichlet charges."""
    z = rng.standard_normal(m) + 1j * rng.standard_normal(m)
    return SzNagyConfig(z, rng.dirichlet(np.ones(m)))


def random_polynomial(rng: np.random.Generator, degree: int) -> ComplexPolynomial:
    """Gaussian complex coefficients with a unit-modulus leading term."""
    c = rng.standard_normal(degree + 1) + 1j * rng.standard_normal(degree + 1)
    c[-1] /= abs(c[-1])
    return ComplexPolynomial(c)
