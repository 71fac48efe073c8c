"""Command-line driver: JSON config in, JSON or CSV report out.

Exit codes: 0 every verdict passed, 2 bad config, 3 solver failure,
4 a verdict failed (an inequality that should hold did not).
"""
from __future__ import annotations

import argparse
import csv
import dataclasses
import io
import json
import logging
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .classical import (
    JacobiParams,
    arcsine_bound_check,
    derivative_chain_check,
    eq_j_strong_check,
    jacobi_zeros,
    lemma1_check,
    lemma2_check,
    random_polynomial,
    random_sz_nagy_config,
    theorem_tj_check,
)
from .lame import (
    BranchError,
    LameInstance,
    SpectralPair,
    enumerate_solutions,
    recover_van_vleck,
    sigma_count,
    solve_multistart,
)
from .majorization import check_eq_strong, check_res_k
from .measures import (
    choquet_compare,
    dominance_analytics,
    equispaced_family,
    mixture_measure,
    semiclassical_run,
    thermodynamic_run,
    tilde_q2_measure,
)
from .policy import DEFAULT_POLICY, LameChoquetError, NumericPolicy
from .poly import from_roots

log = logging.getLogger("lame_choquet")

EXIT_OK, EXIT_CONFIG, EXIT_SOLVER, EXIT_FALSIFIED = 0, 2, 3, 4
SEED_ENV = "LAME_CHOQUET_SEED"
COMMANDS = ("solve", "verify", "asymptotics", "jacobi", "classical")

TOP_KEYS = {"instance", "numeric_policy", "seed", "perturb_s", "asymptotics", "jacobi", "classical"}
INSTANCE_KEYS = {"zeta", "a", "k", "n"}
ASYMPTOTICS_DEFAULT = {"regime": "semiclassical", "n_list": [2, 4, 8, 16, 32], "p_list": [4, 8, 16, 32], "n": 1}
JACOBI_DEFAULT = {
    "n_max": 50,
    "n_list": None,
    "alphas": [0.0, 0.5, -0.5, 1.0, 2.0],
    "betas": [0.0, 0.5, -0.5, 1.0, 2.0],
    "arcsine_c": [0.0, 0.5, -0.5, 1.0, -1.0, 5.0, -5.0],
    "tolerance": 1e-9,
}
CLASSICAL_DEFAULT = {
    "configs": 200,
    "max_poles": 6,
    "lemma2_configs": 5,
    "lemma2_max_poles": 5,
    "polynomials": 100,
    "max_degree": 8,
    "tolerance": 1e-9,
}


class ConfigError(ValueError):
    pass


@dataclasses.dataclass
class RunConfig:
    command: str
    instance: dict | None = None
    policy: NumericPolicy = DEFAULT_POLICY
    overrides: dict = dataclasses.field(default_factory=dict)
    seed: int = 0
    out: str | None = None
    fmt: str = "json"
    jobs: int = 1
    perturb_s: float = 0.0
    asymptotics: dict = dataclasses.field(default_factory=lambda: dict(ASYMPTOTICS_DEFAULT))
    jacobi: dict = dataclasses.field(default_factory=lambda: dict(JACOBI_DEFAULT))
    classical: dict = dataclasses.field(default_factory=lambda: dict(CLASSICAL_DEFAULT))

    def provenance(self) -> dict:
        out = {
            "command": self.command,
            "seed": self.seed,
            "format": self.fmt,
            "jobs": self.jobs,
            "numeric_policy": dataclasses.asdict(self.policy),
            "policy_overrides": dict(self.overrides),
        }
        if self.instance is not None:
            out["instance"] = self.instance
        if self.perturb_s:
            out["perturb_s"] = self.perturb_s
        out[self.command] = getattr(self, self.command, None) if self.command in ("asymptotics", "jacobi", "classical") else None
        return {k: v for k, v in out.items() if v is not None}


class Report:
    def __init__(self, command: str):
        self.command = command
        self.verdicts: list[dict] = []
        self.certificates: list[dict] = []
        self.tables: list[dict] = []
        self.notes: list[str] = []

    def verdict(self, name, value, passed, tolerance, gating=True, **extra):
        self.verdicts.append(
            {"name": name, "value": value, "passed": bool(passed), "tolerance": tolerance, "gating": gating, **extra}
        )

    def table(self, name, columns, rows):
        self.tables.append({"name": name, "columns": list(columns), "rows": rows})

    @property
    def all_passed(self) -> bool:
        return all(v["passed"] for v in self.verdicts if v["gating"])

    def payload(self, config: RunConfig, exit_code: int) -> dict:
        return {
            "command": self.command,
            "exit_code": exit_code,
            "verdicts": self.verdicts,
            "certificates": self.certificates,
            "tables": self.tables,
            "notes": sorted(set(self.notes)),
            "provenance": config.provenance(),
        }


def _resolve_seed(flag, from_config) -> int:
    raw = flag if flag is not None else from_config
    if raw is None:
        raw = os.environ.get(SEED_ENV, 0)
    try:
        seed = int(raw)
    except (TypeError, ValueError):
        raise ConfigError(f"seed must be an unsigned 64-bit integer, got {raw!r}") from None
    if not 0 <= seed < 2**64:
        raise ConfigError(f"seed {seed} outside the unsigned 64-bit range")
    return seed


def _complex(v) -> complex:
    if isinstance(v, (int, float)):
        return complex(v)
    if isinstance(v, list) and len(v) == 2 and all(isinstance(x, (int, float)) for x in v):
        return complex(v[0], v[1])
    raise ConfigError(f"singular point must be a number or [re, im], got {v!r}")


def _check_keys(block, allowed, where):
    if not isinstance(block, dict):
        raise ConfigError(f"{where} must be an object")
    unknown = sorted(set(block) - set(allowed))
    if unknown:
        raise ConfigError(f"unknown key(s) in {where}: {', '.join(unknown)}")


def _merge(defaults: dict, block, where) -> dict:
    if block is None:
        return dict(defaults)
    _check_keys(block, defaults, where)
    return {**defaults, **block}


def parse_instance(block: dict) -> LameInstance:
    _check_keys(block, INSTANCE_KEYS, "instance")
    if "zeta" not in block or "a" not in block:
        raise ConfigError("instance needs 'zeta' and 'a'")
    try:
        zeta = [_complex(v) for v in block["zeta"]]
        return LameInstance(zeta, block["a"], int(block.get("k", 2)), int(block.get("n", 1)))
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"invalid instance: {exc}") from exc


def build_config(args) -> RunConfig:
    raw: dict = {}
    if args.config:
        try:
            with open(args.config, encoding="utf-8") as fh:
                raw = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config: {exc}") from exc
        _check_keys(raw, TOP_KEYS, "config")
    overrides = raw.get("numeric_policy") or {}
    try:
        policy = DEFAULT_POLICY.override(overrides)
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"bad numeric_policy: {exc}") from exc
    if args.jobs < 1:
        raise ConfigError("--jobs must be >= 1")
    cfg = RunConfig(
        command=args.command,
        instance=raw.get("instance"),
        policy=policy,
        overrides=overrides,
        seed=_resolve_seed(args.seed, raw.get("seed")),
        out=args.out,
        fmt=args.format,
        jobs=args.jobs,
        perturb_s=float(raw.get("perturb_s", 0.0)),
        asymptotics=_merge(ASYMPTOTICS_DEFAULT, raw.get("asymptotics"), "asymptotics"),
        jacobi=_merge(JACOBI_DEFAULT, raw.get("jacobi"), "jacobi"),
        classical=_merge(CLASSICAL_DEFAULT, raw.get("classical"), "classical"),
    )
    if cfg.instance is not None:
        parse_instance(cfg.instance)
    elif cfg.command in ("solve", "verify"):
        raise ConfigError(f"'{cfg.command}' needs an instance block")
    if cfg.asymptotics["regime"] not in ("semiclassical", "thermodynamic"):
        raise ConfigError("asymptotics.regime must be 'semiclassical' or 'thermodynamic'")
    return cfg


# -- solving ---------------------------------------------------------------


def _solve(instance: LameInstance, cfg: RunConfig) -> tuple[list[SpectralPair], int | None]:
    """Solution pairs and the expected count (``None`` outside the Stieltjes regime)."""
    if instance.is_stieltjes:
        return enumerate_solutions(instance, cfg.policy, cfg.jobs), sigma_count(instance.degree_n, instance.p)
    return solve_multistart(instance, seed=cfg.seed, policy=cfg.policy), None


def _cplx(values) -> list:
    return [[float(np.real(v)), float(np.imag(v))] for v in np.atleast_1d(values)]


def _pair_record(i: int, pair: SpectralPair) -> dict:
    return {
        "index": i,
        "occupancy": list(pair.occupancy) if pair.occupancy is not None else None,
        "residual": pair.residual,
        "lead_error": pair.lead_error,
        "hull_excess": pair.hull_excess,
        "V_coeffs": _cplx(pair.V.coeffs),
        "S_coeffs": _cplx(pair.S.coeffs),
        "V_zeros": _cplx(pair.zeros_V),
        "S_zeros": _cplx(pair.zeros_S),
    }


PAIR_COLUMNS = ["index", "occupancy", "residual", "lead_error", "hull_excess", "V_coeffs", "S_coeffs", "V_zeros", "S_zeros"]


def cmd_solve(cfg: RunConfig) -> tuple[Report, int]:
    report = Report("solve")
    instance = parse_instance(cfg.instance)
    pairs, expected = _solve(instance, cfg)
    if expected is None:
        passed = len(pairs) >= 1
        report.verdict("solution_count", len(pairs), passed, None, expected="at least 1")
    else:
        passed = len(pairs) == expected
        report.verdict("solution_count", len(pairs), passed, None, expected=expected)
    worst = max((p.residual for p in pairs), default=0.0)
    report.verdict("max_residual", worst, worst <= cfg.policy.solver_tol, cfg.policy.solver_tol)
    report.table("solutions", PAIR_COLUMNS, [_pair_record(i, p) for i, p in enumerate(pairs)])
    if not passed:
        return report, EXIT_SOLVER
    return report, EXIT_OK if report.all_passed else EXIT_FALSIFIED


def _perturbed(instance: LameInstance, pair: SpectralPair, shift: float) -> SpectralPair:
    """Negative control: nudge every zero of ``S`` by ``shift`` and refit ``V``."""
    S = from_roots(pair.zeros_S + shift) * pair.S.leading
    V, residual = recover_van_vleck(instance, S)
    return SpectralPair(V, S, residual, pair.occupancy)


def _certificate_payload(label: str, cert) -> dict:
    return {
        "label": label,
        "feasible": cert.feasible,
        "max_violation": cert.max_violation,
        "pivots": cert.pivots,
        "perturbed": cert.perturbed,
        "row_sums": cert.row_sums.tolist(),
        "matrix": cert.matrix.tolist(),
    }


def _verify_pair(instance: LameInstance, i: int, pair: SpectralPair, cfg: RunConfig, report: Report) -> None:
    pol = cfg.policy
    tag = f"pair[{i}]"
    report.verdict(f"{tag}.residual", pair.residual, pair.residual <= pol.solver_tol, pol.solver_tol)
    if pair.residual > pol.solver_tol:
        return
    res = check_res_k(instance, pair, pol)
    report.notes.extend(res.notes)
    hinge_tol = 1e-8 * res.scale
    report.verdict(f"{tag}.res_k.lp_feasible", res.certificate.max_violation, res.certificate.feasible, pol.simplex_feas_tol)
    report.verdict(f"{tag}.res_k.hinge_min", res.hinge_min, res.hinge_min >= -hinge_tol, hinge_tol)
    report.verdict(
        f"{tag}.res_k.barycenter_defect", res.barycenter_defect, res.barycenter_defect <= 1e-9 * res.scale, 1e-9 * res.scale
    )
    report.certificates.append(_certificate_payload(f"{tag}.res_k", res.certificate))
    if instance.degree_n >= instance.order_k - 1:
        strong = check_eq_strong(instance, pair, pol)
        tol = 1e-8 * strong.scale
        report.verdict(
            f"{tag}.eq_strong.lp_feasible", strong.certificate.max_violation, strong.certificate.feasible, pol.simplex_feas_tol
        )
        report.verdict(f"{tag}.eq_strong.hinge_min", strong.hinge_min, strong.hinge_min >= -tol, tol)
        report.verdict(
            f"{tag}.eq_strong.implies_two_set",
            strong.extra["implication_margin"],
            strong.extra["implies_two_set"],
            tol,
        )
        report.certificates.append(_certificate_payload(f"{tag}.eq_strong", strong.certificate))
    lhs, rhs = mixture_measure(instance, pair), tilde_q2_measure(instance)
    cert = choquet_compare(lhs, rhs, pol)
    report.verdict(f"{tag}.choquet.lp_feasible", cert.max_violation, cert.feasible, pol.simplex_feas_tol)
    ana = dominance_analytics(lhs, rhs, pol)
    tol = pol.inequality_tol
    report.verdict(f"{tag}.moments.min_gap", float(ana.moment_gaps.min()), ana.moments_ok(tol), tol)
    premise_margins = ana.potential_margins[ana.premise]
    report.verdict(
        f"{tag}.potential.premise_min",
        float(premise_margins.min()) if premise_margins.size else 0.0,
        ana.potentials_ok_under_premise(tol),
        tol,
        points=int(ana.premise.sum()),
    )
    # -log|z - .| is not convex on the hull at every circle point, so this one is recorded only
    report.verdict(
        f"{tag}.potential.circle_min",
        float(ana.potential_margins.min()),
        ana.potentials_ok(tol),
        tol,
        gating=False,
        points=int(ana.potential_margins.size),
    )


def cmd_verify(cfg: RunConfig) -> tuple[Report, int]:
    report = Report("verify")
    instance = parse_instance(cfg.instance)
    pairs, _ = _solve(instance, cfg)
    if not pairs:
        report.verdict("solution_count", 0, False, None)
        return report, EXIT_SOLVER
    if cfg.perturb_s:
        pairs = [_perturbed(instance, p, cfg.perturb_s) for p in pairs]
    for i, pair in enumerate(pairs):
        _verify_pair(instance, i, pair, cfg, report)
    report.table("solutions", PAIR_COLUMNS, [_pair_record(i, p) for i, p in enumerate(pairs)])
    return report, EXIT_OK if report.all_passed else EXIT_FALSIFIED


def cmd_asymptotics(cfg: RunConfig) -> tuple[Report, int]:
    report = Report("asymptotics")
    block = cfg.asymptotics
    pol = cfg.policy
    if block["regime"] == "semiclassical":
        if cfg.instance is not None:
            family = parse_instance(cfg.instance)
        else:
            family = LameInstance(*equispaced_family(3))
        table = semiclassical_run(family, list(block["n_list"]), policy=pol, seed=cfg.seed, jobs=cfg.jobs)
        for row in table.rows:
            if row.get("error"):
                continue
            n = row["n"]
            report.verdict(f"n={n}.coef_dev", max(row["dev_V"], row["dev_S"]), max(row["dev_V"], row["dev_S"]) <= 1.5 / n, 1.5 / n)
            report.verdict(f"n={n}.lp_feasible", row["max_violation"], row["feasible"], pol.simplex_feas_tol)
    else:
        n = int(block["n"])
        table = thermodynamic_run(list(block["p_list"]), lambda p: n, policy=pol, seed=cfg.seed, jobs=cfg.jobs)
        for row in table.rows:
            report.verdict(f"p={row['p']}.deviation", row["deviation_ratio"], row["bound_ok"], row["bound"])
    report.table(block["regime"], table.columns, table.rows)
    if table.summary:
        report.notes.extend(f"{k}={v!r}" for k, v in sorted(table.summary.items()))
    if any(row.get("error") for row in table.rows):
        return report, EXIT_SOLVER
    return report, EXIT_OK if report.all_passed else EXIT_FALSIFIED


JACOBI_COLUMNS = ["n", "alpha", "beta", "zeros", "tj_min_slack", "tj_lp_feasible", "strong_min_slack", "composition_ok", "passed"]


def _pmap(fn, items, jobs):
    if jobs > 1:
        with ThreadPoolExecutor(jobs) as pool:
            return list(pool.map(fn, items))
    return [fn(x) for x in items]


def cmd_jacobi(cfg: RunConfig) -> tuple[Report, int]:
    report = Report("jacobi")
    block = cfg.jacobi
    tol = float(block["tolerance"])
    ns = block["n_list"] or list(range(1, int(block["n_max"]) + 1))
    grid = [JacobiParams(int(n), float(a), float(b)) for n in ns for a in block["alphas"] for b in block["betas"]]

    def row(p):
        tj = theorem_tj_check(p, policy=cfg.policy)
        out = {
            "n": p.n,
            "alpha": p.alpha,
            "beta": p.beta,
            "zeros": jacobi_zeros(p).tolist(),
            "tj_min_slack": tj.min_slack,
            "tj_lp_feasible": tj.certificate.feasible,
        }
        if p.n >= 2:
            st = eq_j_strong_check(p, policy=cfg.policy)
            out.update(strong_min_slack=st.min_slack, composition_ok=st.extra["composition_ok"])
        ok = out["tj_min_slack"] >= -tol and out["tj_lp_feasible"]
        ok = ok and out.get("strong_min_slack", 0.0) >= -tol and out.get("composition_ok", True)
        out["passed"] = bool(ok)
        return out

    rows = _pmap(row, grid, cfg.jobs)
    report.table("jacobi", JACOBI_COLUMNS, rows)
    report.verdict("tj.min_slack", min((r["tj_min_slack"] for r in rows), default=0.0), all(r["tj_min_slack"] >= -tol for r in rows), tol)
    report.verdict("tj.lp_feasible", sum(not r["tj_lp_feasible"] for r in rows), all(r["tj_lp_feasible"] for r in rows), cfg.policy.simplex_feas_tol)
    strong = [r for r in rows if "strong_min_slack" in r]
    report.verdict("strong.min_slack", min((r["strong_min_slack"] for r in strong), default=0.0), all(r["strong_min_slack"] >= -tol for r in strong), tol)
    report.verdict("strong.composition", sum(not r["composition_ok"] for r in strong), all(r["composition_ok"] for r in strong), 1e-9)
    arc_rows = []
    for c in block["arcsine_c"]:
        chk = arcsine_bound_check(float(c), cfg.policy.chebyshev_nodes)
        arc_rows.append({"c": float(c), "lhs": chk.lhs, "bound": chk.bound, "ok": chk.ok})
        report.verdict(f"arcsine[c={float(c)!r}]", chk.lhs, chk.ok, cfg.policy.arcsine_tol, bound=chk.bound)
    report.table("arcsine", ["c", "lhs", "bound", "ok"], arc_rows)
    return report, EXIT_OK if report.all_passed else EXIT_FALSIFIED


CLASSICAL_COLUMNS = ["check", "index", "size", "d", "e", "i", "min_slack", "scale", "lp_feasible", "passed"]


def classical_cases(block: dict, seed: int) -> list[tuple]:
    """Seeded inputs for the classical suite, in a fixed order."""
    rng = np.random.default_rng(seed)
    cases = []
    for j in range(int(block["configs"])):
        m = int(rng.integers(2, int(block["max_poles"]) + 1))
        cases.append(("lemma1", j, random_sz_nagy_config(rng, m)))
    for m in range(2, int(block["lemma2_max_poles"]) + 1):
        for j in range(int(block["lemma2_configs"])):
            cases.append(("lemma2", j, random_sz_nagy_config(rng, m)))
    for j in range(int(block["polynomials"])):
        d = int(rng.integers(2, int(block["max_degree"]) + 1))
        cases.append(("chain", j, random_polynomial(rng, d)))
    return cases


def _classical_rows(case, policy, tol) -> list[dict]:
    kind, j, obj = case
    rows = []

    def add(rep, size, d=None, e=None, i=None):
        rows.append(
            {
                "check": kind, "index": j, "size": size, "d": d, "e": e, "i": i,
                "min_slack": rep.min_slack, "scale": rep.scale,
                "lp_feasible": rep.certificate.feasible, "passed": rep.passed(tol),
            }
        )

    if kind == "lemma1":
        add(lemma1_check(obj, policy=policy), obj.m)
    elif kind == "lemma2":
        for d in range(1, obj.m):
            for e in range(0, d + 1):
                add(lemma2_check(obj, d, e, policy=policy), obj.m, d, e)
    else:
        for i in range(1, obj.degree):
            add(derivative_chain_check(obj, i, policy=policy), obj.degree, i=i)
    return rows


def cmd_classical(cfg: RunConfig) -> tuple[Report, int]:
    report = Report("classical")
    tol = float(cfg.classical["tolerance"])
    cases = classical_cases(cfg.classical, cfg.seed)
    rows = [r for chunk in _pmap(lambda c: _classical_rows(c, cfg.policy, tol), cases, cfg.jobs) for r in chunk]
    report.table("classical", CLASSICAL_COLUMNS, rows)
    for kind in ("lemma1", "lemma2", "chain"):
        sub = [r for r in rows if r["check"] == kind]
        report.verdict(f"{kind}.min_slack", min((r["min_slack"] for r in sub), default=0.0), all(r["passed"] for r in sub), tol, checks=len(sub))
    return report, EXIT_OK if report.all_passed else EXIT_FALSIFIED


HANDLERS = {
    "solve": cmd_solve,
    "verify": cmd_verify,
    "asymptotics": cmd_asymptotics,
    "jacobi": cmd_jacobi,
    "classical": cmd_classical,
}


# -- output ----------------------------------------------------------------


def _clean(obj):
    """JSON-safe copy: numpy scalars unwrapped, complex as ``[re, im]``, ``-inf`` as a string."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _clean(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return [_clean(float(obj.real)), _clean(float(obj.imag))]
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if math.isnan(x):
            return None
        if math.isinf(x):
            return "-inf" if x < 0 else "inf"
        return x
    return obj


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        return format(v, ".17g")
    if isinstance(v, list):
        return "[" + ",".join(_cell(x) or "null" for x in v) + "]"
    return str(v)


def render(payload: dict, fmt: str) -> str:
    payload = _clean(payload)
    if fmt == "json":
        return json.dumps(payload, sort_keys=True, indent=2, allow_nan=False) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\r\n")
    if payload["tables"]:
        table = payload["tables"][0]
        cols = table["columns"]
        extra = sorted({k for row in table["rows"] for k in row} - set(cols))
        cols = cols + extra
        writer.writerow(cols)
        for row in table["rows"]:
            writer.writerow([_cell(row.get(c)) for c in cols])
    else:
        cols = ["name", "value", "passed", "tolerance", "gating"]
        writer.writerow(cols)
        for v in payload["verdicts"]:
            writer.writerow([_cell(v.get(c)) for c in cols])
    return buf.getvalue()


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lame-choquet",
        description="Heine-Stieltjes solver and majorization certificates for Lame operators.",
    )
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--config", help="JSON config file")
    parser.add_argument("--out", help="output path (default: stdout)")
    parser.add_argument("--format", choices=("json", "csv"), default="json")
    parser.add_argument("--seed", help=f"unsigned 64-bit seed (fallback: ${SEED_ENV})")
    parser.add_argument("--jobs", type=int, default=1, help="worker threads")
    parser.add_argument("-v", "--verbose", action="store_true")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        cfg = build_config(args)
    except ConfigError as exc:
        log.error("config: %s", exc)
        return EXIT_CONFIG
    try:
        report, code = HANDLERS[cfg.command](cfg)
    except ConfigError as exc:
        log.error("config: %s", exc)
        return EXIT_CONFIG
    except (LameChoquetError, BranchError, np.linalg.LinAlgError) as exc:
        log.error("solver: %s", exc)
        return EXIT_SOLVER
    text = render(report.payload(cfg, code), cfg.fmt)
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    for v in report.verdicts:
        if v["gating"] and not v["passed"]:
            log.warning("failed: %s = %r (tol %r)", v["name"], v["value"], v["tolerance"])
    return code


if __name__ == "__main__":
    sys.exit(main())
