"""Atomic probability measures, Choquet comparison and finite-size asymptotic tables."""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .geometry import hull_distance
from .lame import (
    LameInstance,
    SpectralPair,
    balanced_occupancy,
    solve_bethe,
    solve_multistart,
)
from .majorization import (
    HingeGrid,
    TransferCertificate,
    WeightedPointConfig,
    check_majorization,
    hinge_gap,
    hinge_values,
    weights_k,
)
from .policy import DEFAULT_POLICY, LameChoquetError, NumericPolicy
from .poly import ComplexPolynomial, find_roots

NEG_INF = float("-inf")


@dataclass(frozen=True, eq=False)
class AtomicMeasure:
    atoms: np.ndarray
    masses: np.ndarray

    def __init__(self, atoms, masses=None, merge_radius: float = DEFAULT_POLICY.atom_merge_radius):
        z = np.atleast_1d(np.asarray(atoms, dtype=complex)).ravel()
        w = (
            np.full(z.size, 1.0 / z.size)
            if masses is None
            else np.atleast_1d(np.asarray(masses, dtype=float)).ravel()
        )
        if z.size == 0 or w.size != z.size:
            raise ValueError("need one mass per atom and at least one atom")
        if np.any(w < 0) or abs(w.sum() - 1.0) > 1e-12:
            raise ValueError("masses must be nonnegative and sum to 1")
        merged_z: list[complex] = []
        merged_w: list[float] = []
        for zi, wi in zip(z, w):
            for j, zj in enumerate(merged_z):
                if abs(zi - zj) <= merge_radius:
                    merged_w[j] += wi
                    break
            else:
                merged_z.append(zi)
                merged_w.append(wi)
        object.__setattr__(self, "atoms", np.array(merged_z, dtype=complex))
        object.__setattr__(self, "masses", np.array(merged_w, dtype=float))

    @classmethod
    def from_config(cls, config: WeightedPointConfig) -> "AtomicMeasure":
        return cls(config.points, config.weights)

    def as_config(self) -> WeightedPointConfig:
        return WeightedPointConfig(self.atoms, self.masses / self.masses.sum())

    @property
    def barycenter(self) -> complex:
        return complex(self.masses @ self.atoms)

    def integrate(self, f) -> float:
        return float(self.masses @ f(self.atoms))


def dirac(z: complex) -> AtomicMeasure:
    return AtomicMeasure([z], [1.0])


def root_counting_measure(P: ComplexPolynomial, policy: NumericPolicy = DEFAULT_POLICY) -> AtomicMeasure:
    """Uniform mass ``1/deg P`` on each zero, counted with multiplicity."""
    rs = find_roots(P, policy)
    return AtomicMeasure(rs.roots, rs.multiplicities / rs.degree)


def moment(mu: AtomicMeasure, m: int) -> float:
    """``int |w|^m dmu(w)``."""
    if m < 0:
        raise ValueError("moment order must be nonnegative")
    return float(mu.masses @ np.abs(mu.atoms) ** m)


def log_potential(mu: AtomicMeasure, z: complex) -> float:
    """``int log|z - w| dmu(w)``; ``-inf`` when ``z`` sits on a charged atom."""
    d = np.abs(complex(z) - mu.atoms)
    hit = (d < 1e-14) & (mu.masses > 0)
    if np.any(hit):
        return NEG_INF
    return float(mu.masses @ np.log(np.where(mu.masses > 0, d, 1.0)))


def tilde_q2_measure(instance: LameInstance) -> AtomicMeasure:
    """Measure on the singular points with masses ``(alpha_k - a_l) / D_k``."""
    w = weights_k(instance)
    return AtomicMeasure(instance.zeta, w.c_sing / w.c_sing.sum())


def mixture_measure(instance: LameInstance, pair: SpectralPair) -> AtomicMeasure:
    """``coef_V * mu_V + coef_S * mu_S`` assembled as one atomic measure."""
    w = weights_k(instance)
    pts = np.concatenate([pair.zeros_V, pair.zeros_S])
    masses = w.lhs_weights()
    return AtomicMeasure(pts, masses / masses.sum())


def mixture_coefficients(instance: LameInstance) -> tuple[float, float]:
    """Total mass on the Van Vleck block and on the Heine-Stieltjes block."""
    w = weights_k(instance)
    return w.r * w.a_vv, w.n * w.b_hs


def choquet_compare(
    mu: AtomicMeasure, nu: AtomicMeasure, policy: NumericPolicy = DEFAULT_POLICY
) -> TransferCertificate:
    """LP certificate for ``mu < nu`` in the Choquet order."""
    cert = check_majorization(mu.as_config(), nu.as_config(), policy)
    if cert.feasible:
        scale = 1.0 + float(np.max(np.abs(nu.atoms)))
        excess = float(np.max(hull_distance(mu.atoms, nu.atoms)))
        if excess > 1e-8 * scale:
            raise LameChoquetError(f"feasible certificate but supp(mu) leaves co(supp(nu)) by {excess:.3e}")
    return cert


def potential_premise(z: complex, hull_points) -> bool:
    """Whether ``w -> -log|z - w|`` is convex on ``co(hull_points)``.

    Only possible for a collinear hull: with the segment rotated onto the
    real axis and ``z`` mapped to ``x + iy``, the restriction is convex iff
    ``dist(x, segment) >= |y|``.  On a hull with interior the function is
    harmonic and never convex.
    """
    h = np.unique(np.asarray(hull_points, dtype=complex))
    if h.size == 1:
        return True
    c = h.mean()
    u = h - c
    direction = u[np.argmax(np.abs(u))] / np.max(np.abs(u))
    t = (u * np.conj(direction)).real
    if np.max(np.abs((u * np.conj(direction)).imag)) > 1e-12 * (1 + np.max(np.abs(u))):
        return False
    w = (complex(z) - c) * np.conj(direction)
    lo, hi = t.min(), t.max()
    dist = max(lo - w.real, w.real - hi, 0.0)
    return dist >= abs(w.imag)


def circle_points(hull_points, count: int = 64, factor: float = 2.0) -> np.ndarray:
    """``count`` points on the circle of radius ``factor`` times the hull radius about the centroid."""
    h = np.asarray(hull_points, dtype=complex)
    c = h.mean()
    radius = float(np.max(np.abs(h - c)))
    return c + factor * radius * np.exp(2j * np.pi * np.arange(count) / count)


@dataclass(frozen=True)
class DominanceAnalytics:
    moment_gaps: np.ndarray  # rhs - lhs, m = 0..max_moment
    potential_points: np.ndarray
    potential_margins: np.ndarray  # U^lhs(z) - U^rhs(z)
    premise: np.ndarray  # convexity of -log|z - .| on the hull

    def moments_ok(self, tol: float = 1e-9) -> bool:
        return bool(np.all(self.moment_gaps >= -tol))

    def potentials_ok(self, tol: float = 1e-9) -> bool:
        return bool(np.all(self.potential_margins >= -tol))

    def potentials_ok_under_premise(self, tol: float = 1e-9) -> bool:
        return bool(np.all(self.potential_margins[self.premise] >= -tol))


def dominance_analytics(
    lhs: AtomicMeasure, rhs: AtomicMeasure, policy: NumericPolicy = DEFAULT_POLICY
) -> DominanceAnalytics:
    """Moment gaps and log-potential margins at circle points for ``lhs < rhs``."""
    gaps = np.array([moment(rhs, m) - moment(lhs, m) for m in range(policy.max_moment + 1)])
    pts = circle_points(rhs.atoms, policy.potential_points)
    margins = np.array([log_potential(lhs, z) - log_potential(rhs, z) for z in pts])
    premise = np.array([potential_premise(z, rhs.atoms) for z in pts])
    return DominanceAnalytics(gaps, pts, margins, premise)


@dataclass
class ConvergenceTable:
    columns: list[str]
    rows: list[dict] = field(default_factory=list)
    summary: dict = field(default_factory=dict)

    def column(self, name: str) -> list:
        return [row.get(name) for row in self.rows]


def _moment_columns(prefix: str, mu: AtomicMeasure, count: int) -> dict:
    return {f"{prefix}_m{m}": moment(mu, m) for m in range(count + 1)}


def _solve_branch(instance: LameInstance, branch_rule, policy, seed: int) -> SpectralPair:
    if instance.is_stieltjes:
        return solve_bethe(instance, branch_rule(instance.degree_n, instance.p), policy)
    pairs = solve_multistart(instance, wanted=1, seed=seed, policy=policy)
    if not pairs:
        raise LameChoquetError("no converged start")
    return pairs[0]


def _map(fn, items, jobs):
    if jobs > 1:
        with ThreadPoolExecutor(jobs) as pool:
            return list(pool.map(fn, items))
    return [fn(x) for x in items]


SEMICLASSICAL_COLUMNS = [
    "n", "occupancy", "coef_V", "coef_S", "limit_V", "limit_S", "dev_V", "dev_S",
    "feasible", "max_violation", "hinge_min", "residual", "moments_ok", "error",
]


def semiclassical_run(
    family: LameInstance,
    n_list: Sequence[int],
    branch_rule: Callable[[int, int], tuple] = balanced_occupancy,
    policy: NumericPolicy = DEFAULT_POLICY,
    seed: int = 0,
    jobs: int = 1,
) -> ConvergenceTable:
    """One solved branch per ``n``: mixture coefficients, Choquet certificate, moments."""
    p, k = family.p, family.order_k
    limit_V, limit_S = (p - k) / p, k / p
    grid = HingeGrid.from_policy(policy)

    def row(n):
        inst = family.with_degree(n)
        out = {"n": n, "limit_V": limit_V, "limit_S": limit_S}
        cV, cS = mixture_coefficients(inst)
        out.update(coef_V=cV, coef_S=cS, dev_V=abs(cV - limit_V), dev_S=abs(cS - limit_S))
        try:
            pair = _solve_branch(inst, branch_rule, policy, seed)
        except LameChoquetError as exc:
            out["error"] = str(exc)
            return out
        lhs, rhs = mixture_measure(inst, pair), tilde_q2_measure(inst)
        cert = choquet_compare(lhs, rhs, policy)
        ana = dominance_analytics(lhs, rhs, policy)
        out.update(
            occupancy=list(pair.occupancy) if pair.occupancy else None,
            feasible=cert.feasible,
            max_violation=cert.max_violation,
            hinge_min=hinge_gap(lhs.as_config(), rhs.as_config(), grid),
            residual=pair.residual,
            moments_ok=ana.moments_ok(policy.inequality_tol),
            error="",
        )
        out.update(_moment_columns("lhs", lhs, policy.max_moment))
        out.update(_moment_columns("rhs", rhs, policy.max_moment))
        return out

    rows = _map(row, list(n_list), jobs)
    extra_cols = [f"{s}_m{m}" for s in ("lhs", "rhs") for m in range(policy.max_moment + 1)]
    table = ConvergenceTable(SEMICLASSICAL_COLUMNS + extra_cols, rows)
    devs = [(r["n"], max(r["dev_V"], r["dev_S"])) for r in rows]
    table.summary["fitted_C"] = max((n * d for n, d in devs), default=0.0)
    return table


def equispaced_family(p: int) -> tuple[np.ndarray, np.ndarray]:
    return np.linspace(-1.0, 1.0, p), np.ones(p)


THERMODYNAMIC_COLUMNS = [
    "p", "n", "deviation_ratio", "bound", "bound_ok", "moments_V_le_Q2", "moment_proxy_ok",
    "potential_outside_min", "residual", "error",
]


def deviation_ratios(instance: LameInstance, grid: HingeGrid) -> np.ndarray:
    """``|mu~(f) - mu_Q2(f)| / max_K |f|`` for each hinge ``f`` with ``K = co(zeta)``."""
    tilde = tilde_q2_measure(instance)
    zeta = instance.zeta
    th, cs = grid.functions(zeta)
    vals = hinge_values(zeta, th, cs)
    # masses of tilde sit on zeta in order; merged atoms do not occur for distinct zeta
    dev = np.abs(vals @ tilde.masses - vals.mean(axis=1))
    top = np.max(np.abs(vals), axis=1)
    return np.where(top > 0, dev / np.where(top > 0, top, 1.0), 0.0)


def thermodynamic_run(
    p_list: Sequence[int],
    n_of_p: Callable[[int], int] = lambda p: 1,
    family_rule: Callable[[int], tuple] = equispaced_family,
    order_k: int = 2,
    branch_rule: Callable[[int, int], tuple] = balanced_occupancy,
    policy: NumericPolicy = DEFAULT_POLICY,
    seed: int = 0,
    jobs: int = 1,
) -> ConvergenceTable:
    """One solved branch per ``p``: the ``2/(p-1)`` deviation bound, moments, potentials."""
    grid = HingeGrid.from_policy(policy)

    def row(p):
        zeta, a = family_rule(p)
        n = n_of_p(p)
        inst = LameInstance(zeta, a, order_k, n)
        bound = 2.0 / (p - 1)
        ratios = deviation_ratios(inst, grid)
        out = {
            "p": p,
            "n": n,
            "deviation_ratio": float(ratios.max()),
            "bound": bound,
            "bound_ok": bool(np.all(ratios <= bound + 1e-12)),
        }
        try:
            pair = _solve_branch(inst, branch_rule, policy, seed)
        except LameChoquetError as exc:
            out["error"] = str(exc)
            return out
        muQ = AtomicMeasure(inst.zeta)
        tilde = tilde_q2_measure(inst)
        K = inst.zeta
        max_moment = [float(np.max(np.abs(K)) ** m) for m in range(policy.max_moment + 1)]
        if pair.zeros_V.size:
            muV = AtomicMeasure(pair.zeros_V)
            mV = [moment(muV, m) for m in range(policy.max_moment + 1)]
            mQ = [moment(muQ, m) for m in range(policy.max_moment + 1)]
            mT = [moment(tilde, m) for m in range(policy.max_moment + 1)]
            out["moments_V_le_Q2"] = bool(all(v <= q + 1e-9 for v, q in zip(mV, mQ)))
            out["moment_proxy_ok"] = bool(
                all(v <= t + bound * M + 1e-9 for v, t, M in zip(mV, mT, max_moment))
            )
            pts = circle_points(K, 8, 1.5)
            outside = [z for z in pts if potential_premise(z, K)]
            out["potential_outside_min"] = min(
                (log_potential(muV, z) - log_potential(muQ, z) for z in outside), default=0.0
            )
            for m in range(policy.max_moment + 1):
                out[f"V_m{m}"] = mV[m]
                out[f"Q2_m{m}"] = mQ[m]
        out["residual"] = pair.residual
        out["error"] = ""
        return out

    rows = _map(row, list(p_list), jobs)
    extra = [f"{s}_m{m}" for s in ("V", "Q2") for m in range(policy.max_moment + 1)]
    return ConvergenceTable(THERMODYNAMIC_COLUMNS + extra, rows)
