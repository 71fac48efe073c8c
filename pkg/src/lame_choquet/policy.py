"""Central numeric policy: every tolerance used by the package lives here."""
from __future__ import annotations

from dataclasses import dataclass, fields, replace


class LameChoquetError(Exception):
    """Base class for package errors."""


class ZeroDivisor(LameChoquetError, ZeroDivisionError):
    pass


class NoConvergence(LameChoquetError):
    pass


class SingularJacobian(LameChoquetError):
    pass


class IntervalEscape(LameChoquetError):
    pass


class BadOccupancy(LameChoquetError, ValueError):
    pass


class NumericalStall(LameChoquetError):
    pass


class EigenFailure(LameChoquetError):
    pass


class CombinatorialCap(LameChoquetError, ValueError):
    pass


class EnumerationOverflow(LameChoquetError, OverflowError):
    pass


@dataclass(frozen=True)
class NumericPolicy:
    # poly
    root_tol: float = 1e-10
    root_max_sweeps: int = 500
    cluster_radius: float = 1e-7
    # lame
    solver_tol: float = 1e-10
    newton_max_iter: int = 200
    damping_floor: float = 2.0 ** -20
    hull_slack: float = 1e-8
    distinct_tol: float = 1e-6
    singular_cond: float = 1e14
    enumeration_cap: int = 10_000
    multistart: int = 64
    # majorization
    simplex_feas_tol: float = 1e-9
    certificate_tol: float = 1e-9
    simplex_pivot_budget: int = 20_000
    rhs_perturbation: float = 1e-11
    hinge_angles: int = 32
    hinge_offsets: int = 32
    hinge_tol: float = 1e-8
    # measures
    atom_merge_radius: float = 1e-10
    max_moment: int = 6
    potential_offset: float = 0.1
    potential_points: int = 64
    inequality_tol: float = 1e-9
    # classical
    jacobi_hinges: int = 64
    chebyshev_nodes: int = 65536
    arcsine_tol: float = 1e-10
    subset_guard: int = 8

    def override(self, mapping):
        """Return a copy with entries of ``mapping`` replaced; unknown names raise KeyError."""
        known = {f.name: f.type for f in fields(self)}
        unknown = sorted(set(mapping) - set(known))
        if unknown:
            raise KeyError(f"unknown numeric-policy keys: {', '.join(unknown)}")
        cast = {}
        for key, value in mapping.items():
            current = getattr(self, key)
            cast[key] = int(value) if isinstance(current, int) else float(value)
        return replace(self, **cast)


DEFAULT_POLICY = NumericPolicy()
