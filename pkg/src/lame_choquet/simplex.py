"""Dense-tableau phase-1 simplex for ``A x = b, x >= 0`` feasibility."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .policy import NumericalStall

COST_TOL = 1e-12
PIVOT_TOL = 1e-9  # relative to the largest constraint entry


@dataclass(frozen=True)
class PhaseOneResult:
    x: np.ndarray
    objective: float  # optimal sum of artificials; 0 iff feasible
    pivots: int


def phase_one(A: np.ndarray, b: np.ndarray, budget: int = 20_000) -> PhaseOneResult:
    """Minimize the sum of artificial variables with Bland's rule.

    Rows are sign-normalized so that ``b >= 0``, and the artificial basis
    starts as the identity.  Redundant rows are tolerated: their
    artificials simply stay basic at level zero.  The final basic solution
    is recomputed from the original columns, and any negativity it shows
    is added to the reported objective.

    Raises
    ------
    NumericalStall
        When ``budget`` pivots do not reach optimality.
    """
    A = np.array(A, dtype=float)
    b = np.array(b, dtype=float)
    m, n = A.shape
    neg = b < 0
    A[neg] *= -1
    b[neg] *= -1
    T = np.zeros((m + 1, n + m + 1))
    T[:m, :n] = A
    T[:m, n : n + m] = np.eye(m)
    T[:m, -1] = b
    T[m, :n] = -A.sum(axis=0)
    T[m, -1] = -b.sum()
    basis = np.arange(n, n + m)
    pivot_tol = PIVOT_TOL * max(1.0, float(np.max(np.abs(A), initial=0.0)))
    pivots = 0
    while True:
        cost = T[m, : n + m]
        candidates = np.flatnonzero(cost < -COST_TOL)
        if candidates.size == 0:
            break
        if pivots >= budget:
            raise NumericalStall(f"phase-1 simplex exceeded {budget} pivots")
        j = candidates[0]
        col = T[:m, j]
        rows = np.flatnonzero(col > pivot_tol)
        if rows.size == 0:
            # phase-1 objective is bounded below by 0, so this is round-off
            T[m, j] = 0.0
            continue
        ratios = T[rows, -1] / col[rows]
        best = ratios.min()
        tied = rows[ratios <= best + COST_TOL * (1 + abs(best))]
        r = tied[np.argmin(basis[tied])]
        T[r] /= T[r, j]
        other = T[:, j].copy()
        other[r] = 0.0
        T -= np.outer(other, T[r])
        basis[r] = j
        pivots += 1
    full = np.hstack([A, np.eye(m)])
    x = np.zeros(n + m)
    x[basis] = np.linalg.lstsq(full[:, basis], b, rcond=None)[0]
    negativity = float(np.maximum(-x, 0.0).sum())
    x = np.maximum(x, 0.0)
    objective = float(x[n:].sum()) + negativity
    return PhaseOneResult(x[:n], objective, pivots)
