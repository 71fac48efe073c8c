"""Generalized and higher Lame operators and their Van Vleck / Heine-Stieltjes pairs.

An instance fixes singular points ``zeta``, positive residues ``a``, the
operator order ``k`` and the eigen-polynomial degree ``n``.  It determines

    Q2(z) = prod(z - zeta_l),    Q1(z) / Q2(z) = sum(a_l / (z - zeta_l)),

and the spectral problem asks for ``V`` of degree ``r = p - k`` and monic ``S``
of degree ``n`` with ``Q2 S^(k) + Q1 S^(k-1) + V S = 0``.
"""
from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np

from .geometry import hull_distance
from .policy import (
    DEFAULT_POLICY,
    BadOccupancy,
    EnumerationOverflow,
    IntervalEscape,
    NoConvergence,
    NumericPolicy,
    SingularJacobian,
)
from .poly import (
    ComplexPolynomial,
    derivative,
    divide_with_remainder,
    from_roots,
    multiply,
    zeros,
)


@dataclass(frozen=True, eq=False)
class LameInstance:
    zeta: np.ndarray
    residues: np.ndarray
    order_k: int = 2
    degree_n: int = 1

    def __init__(self, zeta, residues, order_k: int = 2, degree_n: int = 1):
        z = np.asarray(zeta, dtype=complex).ravel()
        a = np.asarray(residues, dtype=float).ravel()
        if z.size < 2:
            raise ValueError("need at least two singular points")
        if a.size != z.size:
            raise ValueError("one residue per singular point")
        if np.any(a <= 0):
            raise ValueError("residues must be positive")
        if order_k < 2:
            raise ValueError("operator order must be >= 2")
        if z.size - order_k < 0:
            raise ValueError("Fuchs index p - k must be nonnegative")
        if degree_n < 1:
            raise ValueError("degree n must be >= 1")
        z.setflags(write=False)
        a.setflags(write=False)
        object.__setattr__(self, "zeta", z)
        object.__setattr__(self, "residues", a)
        object.__setattr__(self, "order_k", int(order_k))
        object.__setattr__(self, "degree_n", int(degree_n))

    @property
    def p(self) -> int:
        return self.zeta.size

    @property
    def r(self) -> int:
        return self.p - self.order_k

    @property
    def alpha_k(self) -> float:
        return self.degree_n - self.order_k + 1 + float(self.residues.sum())

    @property
    def is_stieltjes(self) -> bool:
        """Real, strictly increasing singular points and ``k = 2``."""
        z = self.zeta
        return (
            self.order_k == 2
            and bool(np.all(z.imag == 0))
            and bool(np.all(np.diff(z.real) > 0))
        )

    @cached_property
    def Q2(self) -> ComplexPolynomial:
        return from_roots(self.zeta)

    @cached_property
    def Q1(self) -> ComplexPolynomial:
        total = ComplexPolynomial()
        for l, a in enumerate(self.residues):
            total = total + a * from_roots(np.delete(self.zeta, l))
        return total

    @property
    def van_vleck_leading(self) -> float:
        """Leading coefficient ``-(n)_{k-1} alpha_k`` forced on every Van Vleck polynomial."""
        n, k = self.degree_n, self.order_k
        return -falling_factorial(n, k - 1) * self.alpha_k

    def with_degree(self, n: int) -> "LameInstance":
        return LameInstance(self.zeta, self.residues, self.order_k, n)

    def apply(self, S: ComplexPolynomial) -> ComplexPolynomial:
        """``Q2 S^(k) + Q1 S^(k-1)``."""
        k = self.order_k
        return multiply(self.Q2, derivative(S, k)) + multiply(self.Q1, derivative(S, k - 1))


def falling_factorial(n: int, m: int) -> int:
    out = 1
    for j in range(m):
        out *= n - j
    return out


@dataclass(frozen=True, eq=False)
class SpectralPair:
    V: ComplexPolynomial
    S: ComplexPolynomial
    residual: float
    occupancy: tuple[int, ...] | None = None
    s_zeros: np.ndarray | None = field(default=None, repr=False)
    lead_error: float = 0.0
    hull_excess: float = 0.0

    @cached_property
    def zeros_S(self) -> np.ndarray:
        if self.s_zeros is not None:
            return np.sort_complex(np.asarray(self.s_zeros, dtype=complex))
        return np.sort_complex(zeros(self.S))

    @cached_property
    def zeros_V(self) -> np.ndarray:
        return np.sort_complex(zeros(self.V))

    @property
    def V_monic(self) -> ComplexPolynomial:
        return self.V.monic()


def pair_residual(instance: LameInstance, V: ComplexPolynomial, S: ComplexPolynomial) -> float:
    """Relative coefficient norm of ``Q2 S^(k) + Q1 S^(k-1) + V S``."""
    N = instance.apply(S)
    L = N + multiply(V, S)
    return L.norm() / (N.norm() + 1.0)


def sigma_count(n: int, p: int, cap: int | None = None) -> int:
    """Heine's bound ``binom(n + p - 2, n)`` on the number of Van Vleck polynomials."""
    if n < 0 or p < 2:
        raise ValueError("need n >= 0 and p >= 2")
    value = math.comb(n + p - 2, n)
    if cap is not None and value > cap:
        raise EnumerationOverflow(f"sigma({n}) = {value} exceeds the enumeration cap {cap}")
    if value > np.iinfo(np.int64).max:
        raise EnumerationOverflow(f"sigma({n}) = {value} overflows a 64-bit integer")
    return value


def occupancies(n: int, p: int) -> list[tuple[int, ...]]:
    """All ways to put ``n`` zeros in ``p - 1`` intervals, lexicographic order."""
    out = []
    for bars in itertools.combinations(range(n + p - 2), p - 2):
        prev, occ = -1, []
        for b in bars:
            occ.append(b - prev - 1)
            prev = b
        occ.append(n + p - 2 - prev - 1)
        out.append(tuple(occ))
    return sorted(out)


def balanced_occupancy(n: int, p: int) -> tuple[int, ...]:
    """Lexicographically maximal occupancy among the most balanced ones."""
    q, rem = divmod(n, p - 1)
    return tuple(q + 1 if i < rem else q for i in range(p - 1))


def _check_occupancy(instance: LameInstance, occupancy) -> tuple[int, ...]:
    occ = tuple(int(x) for x in occupancy)
    if len(occ) != instance.p - 1 or any(x < 0 for x in occ) or sum(occ) != instance.degree_n:
        raise BadOccupancy(
            f"occupancy {occ} must have {instance.p - 1} nonnegative entries summing to "
            f"{instance.degree_n}"
        )
    return occ


def bethe_initial(instance: LameInstance, occupancy: Sequence[int]) -> np.ndarray:
    """Chebyshev-spaced starting zeros, ``occupancy[i]`` of them inside ``(zeta_i, zeta_{i+1})``."""
    if not instance.is_stieltjes:
        raise ValueError("Bethe starts need k = 2 and real, strictly increasing zeta")
    occ = _check_occupancy(instance, occupancy)
    x = instance.zeta.real
    pts = []
    for i, m in enumerate(occ):
        if m == 0:
            continue
        mid, half = 0.5 * (x[i] + x[i + 1]), 0.5 * (x[i + 1] - x[i])
        nodes = np.cos((2 * np.arange(1, m + 1) - 1) * np.pi / (2 * m))
        pts.append(np.sort(mid + half * nodes))
    return np.concatenate(pts) if pts else np.zeros(0)


def _bethe_system(s, x, a):
    d = s[:, None] - s[None, :]
    np.fill_diagonal(d, np.inf)
    e = s[:, None] - x[None, :]
    F = (2.0 / d).sum(axis=1) + (a / e).sum(axis=1)
    J = 2.0 / d**2
    np.fill_diagonal(J, 0.0)
    J[np.diag_indices_from(J)] = -J.sum(axis=1) - (a / e**2).sum(axis=1)
    return F, J


def _relative_force(s, x, a) -> float:
    d = np.abs(s[:, None] - s[None, :])
    np.fill_diagonal(d, np.inf)
    scale = (2.0 / d).sum(axis=1) + (a / np.abs(s[:, None] - x[None, :])).sum(axis=1)
    F, _ = _bethe_system(s, x, a)
    return float(np.max(np.abs(F) / scale, initial=0.0))


def _in_cells(s, x, occ) -> bool:
    start = 0
    for i, m in enumerate(occ):
        block = s[start : start + m]
        start += m
        if m == 0:
            continue
        if block[0] <= x[i] or block[-1] >= x[i + 1]:
            return False
        if m > 1 and np.any(np.diff(block) <= 0):
            return False
    return True


def recover_van_vleck(instance: LameInstance, S: ComplexPolynomial):
    """Recover ``V`` as the quotient ``-(Q2 S^(k) + Q1 S^(k-1)) / S``.

    Returns ``(V, residual)``; a residual above tolerance means ``S`` is not
    a Heine-Stieltjes polynomial.
    """
    q, _, residual = divide_with_remainder(-instance.apply(S), S)
    return q, residual


def _finalize(instance, S, policy, occupancy=None, s_zeros=None) -> SpectralPair:
    V, residual = recover_van_vleck(instance, S)
    lead = instance.van_vleck_leading
    lead_error = abs(V.leading - lead) / abs(lead) if V.degree == instance.r else np.inf
    pair = SpectralPair(V, S, residual, occupancy, s_zeros, lead_error)
    pts = np.concatenate([pair.zeros_V, pair.zeros_S])
    excess = float(np.max(hull_distance(pts, instance.zeta), initial=0.0))
    object.__setattr__(pair, "hull_excess", excess)
    return pair


def solve_bethe(
    instance: LameInstance, occupancy: Sequence[int], policy: NumericPolicy = DEFAULT_POLICY
) -> SpectralPair:
    """Newton iteration on the Stieltjes equilibrium equations for one occupancy.

    At each zero ``s_i`` of ``S``::

        sum_{j != i} 2 / (s_i - s_j) + sum_l a_l / (s_i - zeta_l) = 0

    Raises
    ------
    NoConvergence
        Iteration cap or damping floor reached.
    IntervalEscape
        Even the most damped step leaves the assigned intervals.
    """
    occ = _check_occupancy(instance, occupancy)
    s = bethe_initial(instance, occ)
    x = instance.zeta.real
    a = instance.residues
    F, J = _bethe_system(s, x, a)
    fnorm = np.linalg.norm(F)
    for _ in range(policy.newton_max_iter):
        step = np.linalg.solve(J, -F)
        t, accepted, escaped = 1.0, False, False
        while t >= policy.damping_floor:
            cand = s + t * step
            if _in_cells(cand, x, occ):
                Fc, Jc = _bethe_system(cand, x, a)
                nc = np.linalg.norm(Fc)
                if nc < fnorm:
                    accepted = True
                    break
                escaped = False
            else:
                escaped = True
            t *= 0.5
        small = np.max(np.abs(step), initial=0.0) <= 8 * np.finfo(float).eps * (
            1 + np.max(np.abs(s), initial=0.0)
        )
        if not accepted:
            if small or fnorm == 0 or _relative_force(s, x, a) <= 1e-12:
                break
            if escaped:
                raise IntervalEscape(f"occupancy {occ}: iterate left its interval")
            raise NoConvergence(f"occupancy {occ}: damping floor reached (|F| = {fnorm:.3e})")
        s, F, J, fnorm = cand, Fc, Jc, nc
        if small or fnorm == 0:
            break
    else:
        raise NoConvergence(f"occupancy {occ}: no convergence in {policy.newton_max_iter} steps")
    pair = _finalize(instance, from_roots(s), policy, occ, s.astype(complex))
    if pair.residual > policy.solver_tol:
        raise NoConvergence(f"occupancy {occ}: residual {pair.residual:.3e} above tolerance")
    return pair


def _coeff_operator(instance: LameInstance) -> np.ndarray:
    """Matrix taking the ascending coefficients of ``S`` to those of ``Q2 S^(k) + Q1 S^(k-1)``."""
    n = instance.degree_n
    cols = [instance.apply(ComplexPolynomial.monomial(j)).coeffs for j in range(n + 1)]
    A = np.zeros((n + instance.r + 1, n + 1), dtype=complex)
    for j, c in enumerate(cols):
        A[: c.size, j] = c
    return A


def coefficient_start(instance: LameInstance, s_roots) -> np.ndarray:
    """Start vector ``(s_0..s_{n-1}, v_0..v_{r-1})`` from guessed zeros of ``S``."""
    S = from_roots(s_roots)
    V, _ = recover_van_vleck(instance, S)
    v = np.zeros(instance.r + 1, dtype=complex)
    v[: V.coeffs.size] = V.coeffs[: instance.r + 1]
    return np.concatenate([S.coeffs[:-1], v[:-1]])


def solve_newton_coeffs(
    instance: LameInstance, start, policy: NumericPolicy = DEFAULT_POLICY
) -> SpectralPair:
    """Newton on the bilinear coefficient system with the Van Vleck leading term pinned.

    Unknowns are the ``n`` lower coefficients of monic ``S`` and the ``r``
    lower coefficients of ``V``; the equations are the coefficients of
    ``z^0 .. z^(n+r-1)`` in ``Q2 S^(k) + Q1 S^(k-1) + V S``.
    """
    n, r, k = instance.degree_n, instance.r, instance.order_k
    start = np.asarray(start, dtype=complex).ravel()
    if start.size != n + r:
        raise ValueError(f"start must have n + r = {n + r} entries, got {start.size}")
    if n < k - 1:
        raise ValueError("need n >= k - 1 for a nondegenerate problem")
    A = _coeff_operator(instance)
    lead = instance.van_vleck_leading
    m = n + r

    def unpack(x):
        s = np.append(x[:n], 1.0)
        v = np.append(x[n:], lead)
        return s, v

    def system(x):
        s, v = unpack(x)
        L = A @ s + np.convolve(v, s)
        J = np.zeros((m, m), dtype=complex)
        for j in range(n):
            col = A[:, j].copy()
            col[j : j + r + 1] += v
            J[:, j] = col[:m]
        for i in range(r):
            J[i : i + n + 1, n + i] += s
        scale = np.max(np.abs(A @ s)) + 1.0
        return L[:m], J, scale

    x = start.copy()
    L, J, scale = system(x)
    lnorm = np.linalg.norm(L)
    for _ in range(policy.newton_max_iter):
        if lnorm == 0:
            break
        cond = np.linalg.cond(J)
        if not np.isfinite(cond) or cond > policy.singular_cond:
            raise SingularJacobian(f"Jacobian condition estimate {cond:.3e}")
        step = np.linalg.solve(J, -L)
        t, accepted = 1.0, False
        while t >= policy.damping_floor:
            cand = x + t * step
            Lc, Jc, sc = system(cand)
            nc = np.linalg.norm(Lc)
            if nc < lnorm:
                accepted = True
                break
            t *= 0.5
        small = np.max(np.abs(step)) <= 8 * np.finfo(float).eps * (1 + np.max(np.abs(x)))
        if not accepted:
            if small or lnorm / scale <= policy.solver_tol * 1e-3:
                break
            raise NoConvergence(f"damping floor reached (|L| = {lnorm:.3e})")
        x, L, J, scale, lnorm = cand, Lc, Jc, sc, nc
        if small:
            break
    else:
        if lnorm / scale > policy.solver_tol:
            raise NoConvergence(f"no convergence in {policy.newton_max_iter} steps")
    s, _ = unpack(x)
    if instance.is_stieltjes or np.all(instance.zeta.imag == 0):
        # real data: drop round-off imaginary parts
        if np.max(np.abs(s.imag)) <= 1e-12 * (1 + np.max(np.abs(s))):
            s = s.real.astype(complex)
    pair = _finalize(instance, ComplexPolynomial(s), policy)
    if pair.residual > policy.solver_tol:
        raise NoConvergence(f"residual {pair.residual:.3e} above tolerance")
    return pair


def hausdorff(a, b) -> float:
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.size == 0 and b.size == 0:
        return 0.0
    if a.size == 0 or b.size == 0:
        return np.inf
    d = np.abs(a[:, None] - b[None, :])
    return float(max(d.min(axis=1).max(), d.min(axis=0).max()))


def _distinct(pairs, tol) -> bool:
    for i, j in itertools.combinations(range(len(pairs)), 2):
        if hausdorff(pairs[i].zeros_S, pairs[j].zeros_S) <= tol:
            return False
    return True


class BranchError(Exception):
    """A solver failure tagged with the occupancy it happened on."""

    def __init__(self, occupancy, cause):
        super().__init__(f"occupancy {occupancy}: {cause}")
        self.occupancy = occupancy
        self.cause = cause


def enumerate_solutions(
    instance: LameInstance, policy: NumericPolicy = DEFAULT_POLICY, jobs: int = 1
) -> list[SpectralPair]:
    """All ``sigma(n)`` Stieltjes solutions, one per occupancy vector, lexicographic order."""
    if not instance.is_stieltjes:
        raise ValueError("enumeration needs k = 2 and real, strictly increasing zeta")
    n, p = instance.degree_n, instance.p
    sigma_count(n, p, cap=policy.enumeration_cap)
    occs = occupancies(n, p)

    def run(occ):
        try:
            return solve_bethe(instance, occ, policy)
        except (NoConvergence, IntervalEscape) as exc:
            raise BranchError(occ, exc) from exc

    if jobs > 1:
        with ThreadPoolExecutor(jobs) as pool:
            pairs = list(pool.map(run, occs))
    else:
        pairs = [run(o) for o in occs]
    if not _distinct(pairs, policy.distinct_tol):
        raise NoConvergence("enumerated solutions are not pairwise distinct")
    return pairs


def solve_multistart(
    instance: LameInstance,
    wanted: int | None = None,
    seed: int = 0,
    policy: NumericPolicy = DEFAULT_POLICY,
) -> list[SpectralPair]:
    """Best-effort search for distinct pairs by seeded random coefficient-Newton starts.

    ``wanted`` defaults to Heine's count ``binom(n + r, n)``; at most
    ``policy.multistart * wanted`` starts are tried.  Fewer solutions than
    wanted is not an error; callers compare against the count themselves.
    """
    n, r = instance.degree_n, instance.r
    if wanted is None:
        wanted = math.comb(n + r, n)
    rng = np.random.default_rng(seed)
    found: list[SpectralPair] = []
    for _ in range(policy.multistart * wanted):
        w = rng.dirichlet(np.ones(instance.p), size=n)
        guess = w @ instance.zeta
        try:
            pair = solve_newton_coeffs(instance, coefficient_start(instance, guess), policy)
        except (NoConvergence, SingularJacobian, np.linalg.LinAlgError):
            continue
        if all(hausdorff(pair.zeros_S, q.zeros_S) > policy.distinct_tol for q in found):
            found.append(pair)
            if len(found) >= wanted:
                break
    return sorted(found, key=lambda q: tuple(np.round(q.zeros_S.real, 9)))


def random_stieltjes_instance(
    rng: np.random.Generator, max_p: int = 5, max_n: int = 6, max_residue: float = 3.0
) -> LameInstance:
    """Sorted real poles in ``[-2, 2]`` kept ``0.1`` apart, residues in ``(0, max_residue]``."""
    p = int(rng.integers(2, max_p + 1))
    while True:
        zeta = np.sort(rng.uniform(-2.0, 2.0, p))
        if np.min(np.diff(zeta)) > 0.1:
            break
    a = max_residue * (1.0 - rng.random(p))
    return LameInstance(zeta, a, 2, int(rng.integers(1, max_n + 1)))
