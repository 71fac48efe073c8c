"""Weighted majorization of complex point configurations.

``(X, a) < (Y, b)`` holds iff some row-stochastic ``R`` has ``X = R Y`` and
``b = a R``; equivalently ``sum a_i f(x_i) <= sum b_j f(y_j)`` for every
convex ``f``.  The first form is certified by a phase-1 linear program,
the second is probed with a grid of planar hinge functions.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .lame import LameInstance, SpectralPair
from .policy import DEFAULT_POLICY, NumericalStall, NumericPolicy
from .poly import derivative, zeros
from .simplex import phase_one


@dataclass(frozen=True, eq=False)
class WeightedPointConfig:
    points: np.ndarray
    weights: np.ndarray

    def __init__(self, points, weights=None):
        x = np.atleast_1d(np.asarray(points, dtype=complex)).ravel()
        if weights is None:
            w = np.full(x.size, 1.0 / x.size)
        else:
            w = np.atleast_1d(np.asarray(weights, dtype=float)).ravel()
        if w.size != x.size or x.size == 0:
            raise ValueError("need one weight per point and at least one point")
        if np.any(w < 0) or np.any(w > 1 + 1e-12) or abs(w.sum() - 1.0) > 1e-12:
            raise ValueError(f"weights must lie in [0, 1] and sum to 1 (sum = {w.sum()!r})")
        object.__setattr__(self, "points", x)
        object.__setattr__(self, "weights", w)

    def __len__(self) -> int:
        return self.points.size

    @property
    def barycenter(self) -> complex:
        return complex(self.weights @ self.points)

    def concat(self, other: "WeightedPointConfig", share: float) -> "WeightedPointConfig":
        """``share * self`` followed by ``(1 - share) * other`` as one configuration."""
        return WeightedPointConfig(
            np.concatenate([self.points, other.points]),
            np.concatenate([share * self.weights, (1 - share) * other.weights]),
        )


@dataclass(frozen=True, eq=False)
class TransferCertificate:
    matrix: np.ndarray
    row_sums: np.ndarray
    feasible: bool
    max_violation: float
    pivots: int = 0
    perturbed: bool = False


def transfer_violation(lhs: WeightedPointConfig, rhs: WeightedPointConfig, R) -> float:
    """Largest defect of ``R`` as a certificate for ``lhs < rhs``."""
    R = np.asarray(R, dtype=float)
    return float(
        max(
            np.max(np.abs(R.sum(axis=1) - 1.0)),
            np.max(np.abs(lhs.weights @ R - rhs.weights)),
            np.max(np.abs(R @ rhs.points - lhs.points)),
            max(0.0, -float(R.min())),
        )
    )


def _transfer_system(lhs, rhs):
    m, n = len(lhs), len(rhs)
    rows, rhs_vec = [], []
    for i in range(m):
        row = np.zeros((m, n))
        row[i] = 1.0
        rows.append(row.ravel())
        rhs_vec.append(1.0)
    for j in range(n):
        row = np.zeros((m, n))
        row[:, j] = lhs.weights
        rows.append(row.ravel())
        rhs_vec.append(rhs.weights[j])
    for part in (np.real, np.imag):
        y = part(rhs.points)
        x = part(lhs.points)
        for i in range(m):
            row = np.zeros((m, n))
            row[i] = y
            rows.append(row.ravel())
            rhs_vec.append(x[i])
    return np.array(rows), np.array(rhs_vec)


def check_majorization(
    lhs: WeightedPointConfig,
    rhs: WeightedPointConfig,
    policy: NumericPolicy = DEFAULT_POLICY,
) -> TransferCertificate:
    """Decide ``lhs < rhs`` by phase-1 simplex on the row-stochastic transfer system.

    On a stall the right-hand side is perturbed once by ``policy.rhs_perturbation``.
    """
    m, n = len(lhs), len(rhs)
    A, b = _transfer_system(lhs, rhs)
    perturbed = False
    try:
        res = phase_one(A, b, policy.simplex_pivot_budget)
    except NumericalStall:
        rng = np.random.default_rng(0)
        b = b + policy.rhs_perturbation * rng.standard_normal(b.size)
        perturbed = True
        res = phase_one(A, b, policy.simplex_pivot_budget)
    R = res.x.reshape(m, n)
    feasible = res.objective <= policy.simplex_feas_tol
    if feasible:
        violation = transfer_violation(lhs, rhs, R)
        feasible = violation <= policy.certificate_tol
    else:
        violation = res.objective
    return TransferCertificate(R, R.sum(axis=1), bool(feasible), float(violation), res.pivots, perturbed)


def compose(first: TransferCertificate, second: TransferCertificate) -> np.ndarray:
    """Matrix certifying ``A < C`` from certificates of ``A < B`` and ``B < C``."""
    return first.matrix @ second.matrix


@dataclass(frozen=True)
class HingeGrid:
    """Ramps ``max(0, Re(exp(-i theta) z) - c)`` on a uniform (theta, c) grid."""

    angles: int = 32
    offsets: int = 32

    @classmethod
    def from_policy(cls, policy: NumericPolicy = DEFAULT_POLICY) -> "HingeGrid":
        return cls(policy.hinge_angles, policy.hinge_offsets)

    def thetas(self) -> np.ndarray:
        return 2 * np.pi * np.arange(self.angles) / self.angles

    def functions(self, support) -> tuple[np.ndarray, np.ndarray]:
        """``(theta, c)`` pairs with ``c`` spanning the projected support per angle."""
        y = np.asarray(support, dtype=complex)
        th, cs = [], []
        for t in self.thetas():
            proj = (np.exp(-1j * t) * y).real
            th.append(np.full(self.offsets, t))
            cs.append(np.linspace(proj.min(), proj.max(), self.offsets))
        return np.concatenate(th), np.concatenate(cs)


def hinge_values(points, thetas, offsets) -> np.ndarray:
    """Matrix of hinge values, one row per function, one column per point."""
    z = np.asarray(points, dtype=complex)
    proj = (np.exp(-1j * np.asarray(thetas))[:, None] * z[None, :]).real
    return np.maximum(0.0, proj - np.asarray(offsets)[:, None])


def hinge_slacks(lhs: WeightedPointConfig, rhs: WeightedPointConfig, grid: HingeGrid) -> np.ndarray:
    th, cs = grid.functions(rhs.points)
    return hinge_values(rhs.points, th, cs) @ rhs.weights - hinge_values(lhs.points, th, cs) @ lhs.weights


def hinge_gap(lhs: WeightedPointConfig, rhs: WeightedPointConfig, grid: HingeGrid = HingeGrid()) -> float:
    """Minimum of ``sum b f(y) - sum a f(x)`` over the hinge grid.

    A value below ``-tol * scale`` disproves ``lhs < rhs``; a nonnegative
    value is only necessary-condition evidence.
    """
    return float(hinge_slacks(lhs, rhs, grid).min())


def config_scale(*configs: WeightedPointConfig) -> float:
    return 1.0 + max(float(np.max(np.abs(c.points))) for c in configs)


@dataclass(frozen=True)
class WeightTriple:
    a_vv: float
    b_hs: float
    c_sing: np.ndarray
    alpha: float
    denom: float
    n: int
    r: int

    def lhs_weights(self) -> np.ndarray:
        return np.concatenate([np.full(self.r, self.a_vv), np.full(self.n, self.b_hs)])


def weights_k(instance: LameInstance) -> WeightTriple:
    """Weights on Van Vleck zeros, Heine-Stieltjes zeros and singular points for order ``k``."""
    n, p, k = instance.degree_n, instance.p, instance.order_k
    alpha = n - k + 1 + float(instance.residues.sum())
    D = (p - 1) * alpha + n - k + 1
    return WeightTriple(
        a_vv=alpha / D,
        b_hs=((k - 1) * alpha + n - k + 1) / (n * D),
        c_sing=(alpha - instance.residues) / D,
        alpha=alpha,
        denom=D,
        n=n,
        r=p - k,
    )


def weights_k2(instance: LameInstance) -> WeightTriple:
    """The ``k = 2`` weights, evaluated from their own closed form."""
    if instance.order_k != 2:
        raise ValueError("weights_k2 needs k = 2")
    n, p = instance.degree_n, instance.p
    alpha = n - 1 + float(instance.residues.sum())
    D = (p - 1) * alpha + n - 1
    return WeightTriple(
        a_vv=alpha / D,
        b_hs=(alpha + n - 1) / (n * D),
        c_sing=(alpha - instance.residues) / D,
        alpha=alpha,
        denom=D,
        n=n,
        r=p - 2,
    )


@dataclass(frozen=True, eq=False)
class InequalityReport:
    lhs: WeightedPointConfig
    rhs: WeightedPointConfig
    certificate: TransferCertificate
    hinge_min: float
    scale: float
    barycenter_defect: float
    quadratic: tuple[float, float]  # (lhs, rhs) for f(z) = |z|^2
    notes: tuple[str, ...] = ()
    extra: dict = field(default_factory=dict)

    @property
    def sound(self) -> bool:
        """Feasible LP implies no hinge counterexample."""
        return (not self.certificate.feasible) or self.hinge_min >= -1e-8 * self.scale

    @property
    def passed(self) -> bool:
        return (
            self.certificate.feasible
            and self.hinge_min >= -1e-8 * self.scale
            and self.barycenter_defect <= 1e-9 * self.scale
        )


COR_3_7_NOTE = (
    "higher-order mixture weights use the (p-1)alpha_k + n - k + 1 normalization; "
    "the alternative n - 1 normalization differs for k > 2"
)


def _report(lhs, rhs, policy, notes=(), extra=None) -> InequalityReport:
    cert = check_majorization(lhs, rhs, policy)
    scale = config_scale(lhs, rhs)
    gap = hinge_gap(lhs, rhs, HingeGrid.from_policy(policy))
    quad = (
        float(lhs.weights @ np.abs(lhs.points) ** 2),
        float(rhs.weights @ np.abs(rhs.points) ** 2),
    )
    return InequalityReport(
        lhs, rhs, cert, gap, scale, abs(lhs.barycenter - rhs.barycenter), quad, tuple(notes), extra or {}
    )


def _require_solution(instance: LameInstance, pair: SpectralPair, policy: NumericPolicy):
    if pair.residual > policy.solver_tol:
        raise ValueError(f"pair residual {pair.residual:.3e} exceeds solver tolerance")
    if pair.S.degree != instance.degree_n:
        raise ValueError("pair degree does not match the instance")


def res_k_configs(instance: LameInstance, pair: SpectralPair):
    w = weights_k(instance)
    lhs = WeightedPointConfig(np.concatenate([pair.zeros_V, pair.zeros_S]), _renorm(w.lhs_weights()))
    rhs = WeightedPointConfig(instance.zeta, _renorm(w.c_sing))
    return lhs, rhs


def _renorm(w):
    w = np.asarray(w, dtype=float)
    return w / w.sum()


def check_res_k(
    instance: LameInstance, pair: SpectralPair, policy: NumericPolicy = DEFAULT_POLICY
) -> InequalityReport:
    """Zeros of ``V`` and ``S`` against the singular points, with order-``k`` weights."""
    _require_solution(instance, pair, policy)
    lhs, rhs = res_k_configs(instance, pair)
    notes = (COR_3_7_NOTE,) if instance.order_k > 2 else ()
    return _report(lhs, rhs, policy, notes)


def _sums(points, weights, th, cs):
    return hinge_values(points, th, cs) @ weights


def check_eq_strong(
    instance: LameInstance, pair: SpectralPair, policy: NumericPolicy = DEFAULT_POLICY
) -> InequalityReport:
    """Four-set inequality: ``Z(V) v Z(S)`` against ``Z(S^(k-1)) v Z(Q2)``.

    Unnormalized, for convex ``f``::

        sum f(v) + sum f(s) <= (1 - 1/alpha_k) sum f(s^(k-1)) + sum (1 - a_l/alpha_k) f(zeta_l)

    Both sides carry total mass ``n + r``.  The report's ``extra`` holds the
    check that composing with the derivative chain reproduces the
    two-set inequality.
    """
    _require_solution(instance, pair, policy)
    n, r, k = instance.degree_n, instance.r, instance.order_k
    if n < k - 1:
        raise ValueError("need n >= k - 1")
    alpha = instance.alpha_k
    a = instance.residues
    zV, zS = pair.zeros_V, pair.zeros_S
    zD = zeros(derivative(pair.S, k - 1), policy)
    total = n + r
    lhs = WeightedPointConfig(np.concatenate([zV, zS]), np.full(n + r, 1.0 / total))
    rhs_w = np.concatenate([np.full(zD.size, (1 - 1 / alpha) / total), (1 - a / alpha) / total])
    rhs = WeightedPointConfig(np.concatenate([zD, instance.zeta]), _renorm(rhs_w))

    grid = HingeGrid.from_policy(policy)
    th, cs = grid.functions(instance.zeta)
    fV = hinge_values(zV, th, cs).sum(axis=1)
    fS = hinge_values(zS, th, cs).sum(axis=1)
    fD = hinge_values(zD, th, cs).sum(axis=1)
    fZ = hinge_values(instance.zeta, th, cs) @ (1 - a / alpha)
    coef_s = 1 - (1 - (k - 1) / n) * (1 - 1 / alpha)
    slack_two_set = fZ - fV - coef_s * fS
    slack_four_set = (1 - 1 / alpha) * fD + fZ - fV - fS
    chain = (n - k + 1) * fS - n * fD
    identity_defect = float(np.max(np.abs(slack_two_set - slack_four_set - (1 - 1 / alpha) * chain / n)))
    scale = config_scale(lhs, rhs)
    extra = {
        "chain_min": float(chain.min()),
        "identity_defect": identity_defect,
        "implication_margin": float(np.min(slack_two_set - slack_four_set)),
        "implies_two_set": bool(
            identity_defect <= 1e-8 * scale and np.all(slack_two_set >= slack_four_set - 1e-8 * scale)
        ),
    }
    notes = (COR_3_7_NOTE,) if k > 2 else ()
    return _report(lhs, rhs, policy, notes, extra)
