"""Complex polynomials in ascending-coefficient form and simultaneous root finding."""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .policy import DEFAULT_POLICY, NoConvergence, NumericPolicy, ZeroDivisor


@dataclass(frozen=True, eq=False)
class ComplexPolynomial:
    """Polynomial ``sum(coeffs[i] * z**i)``.

    Trailing coefficients that are exactly zero are dropped, so the zero
    polynomial has an empty coefficient array and ``degree`` ``None``.
    """

    coeffs: np.ndarray

    def __init__(self, coeffs: Sequence[complex] | np.ndarray = ()):
        c = np.array(coeffs, dtype=complex).ravel()
        nz = np.flatnonzero(c != 0)
        c = c[: nz[-1] + 1] if nz.size else c[:0]
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def monomial(cls, k: int, coef: complex = 1.0) -> "ComplexPolynomial":
        c = np.zeros(k + 1, dtype=complex)
        c[k] = coef
        return cls(c)

    @property
    def degree(self) -> int | None:
        return None if self.coeffs.size == 0 else self.coeffs.size - 1

    @property
    def is_zero(self) -> bool:
        return self.coeffs.size == 0

    @property
    def leading(self) -> complex:
        return complex(self.coeffs[-1]) if self.coeffs.size else 0j

    def norm(self) -> float:
        """Max coefficient modulus."""
        return float(np.max(np.abs(self.coeffs))) if self.coeffs.size else 0.0

    def monic(self) -> "ComplexPolynomial":
        if self.is_zero:
            raise ZeroDivisor("zero polynomial has no monic form")
        return ComplexPolynomial(self.coeffs / self.coeffs[-1])

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        out = np.zeros_like(z)
        for c in self.coeffs[::-1]:
            out = out * z + c
        return out

    def scale_at(self, z):
        """``sum |c_i| |z|^i``; the natural denominator for backward errors."""
        r = np.abs(np.asarray(z, dtype=complex))
        out = np.zeros_like(r)
        for c in np.abs(self.coeffs[::-1]):
            out = out * r + c
        return out

    def __add__(self, other: "ComplexPolynomial") -> "ComplexPolynomial":
        a, b = self.coeffs, other.coeffs
        n = max(a.size, b.size)
        out = np.zeros(n, dtype=complex)
        out[: a.size] += a
        out[: b.size] += b
        return ComplexPolynomial(out)

    def __neg__(self) -> "ComplexPolynomial":
        return ComplexPolynomial(-self.coeffs)

    def __sub__(self, other: "ComplexPolynomial") -> "ComplexPolynomial":
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, ComplexPolynomial):
            return multiply(self, other)
        return ComplexPolynomial(self.coeffs * complex(other))

    __rmul__ = __mul__

    def allclose(self, other: "ComplexPolynomial", atol: float = 1e-12) -> bool:
        d = (self - other).coeffs
        return bool(d.size == 0 or np.max(np.abs(d)) <= atol)

    def __repr__(self) -> str:
        return f"ComplexPolynomial({np.array2string(self.coeffs, precision=6)})"


ZERO = ComplexPolynomial()


def from_roots(roots) -> ComplexPolynomial:
    """Monic polynomial with the given root multiset."""
    roots = np.atleast_1d(np.asarray(roots, dtype=complex))
    c = np.ones(1, dtype=complex)
    for r in roots:
        nxt = np.zeros(c.size + 1, dtype=complex)
        nxt[1:] += c
        nxt[:-1] -= r * c
        c = nxt
    return ComplexPolynomial(c)


def derivative(P: ComplexPolynomial, order: int = 1) -> ComplexPolynomial:
    if order < 0:
        raise ValueError("derivative order must be nonnegative")
    c = P.coeffs
    for _ in range(order):
        if c.size <= 1:
            return ZERO
        c = c[1:] * np.arange(1, c.size)
    return ComplexPolynomial(c)


def multiply(P: ComplexPolynomial, Q: ComplexPolynomial) -> ComplexPolynomial:
    if P.is_zero or Q.is_zero:
        return ZERO
    return ComplexPolynomial(np.convolve(P.coeffs, Q.coeffs))


class Division(NamedTuple):
    quotient: ComplexPolynomial
    remainder: ComplexPolynomial
    relative_residual: float


def divide_with_remainder(N: ComplexPolynomial, D: ComplexPolynomial) -> Division:
    """Long division ``N = q*D + r`` with ``deg r < deg D``.

    ``relative_residual`` is ``|r| / (|N| + 1)`` in the max-coefficient norm.
    """
    if D.is_zero:
        raise ZeroDivisor("division by the zero polynomial")
    num = N.coeffs.copy()
    d = D.coeffs
    m = d.size - 1
    if num.size - 1 < m:
        return Division(ZERO, N, N.norm() / (N.norm() + 1.0))
    q = np.zeros(num.size - m, dtype=complex)
    for i in range(num.size - 1, m - 1, -1):
        t = num[i] / d[-1]
        q[i - m] = t
        num[i - m : i + 1] -= t * d
        num[i] = 0
    rem = ComplexPolynomial(num[:m])
    return Division(ComplexPolynomial(q), rem, rem.norm() / (N.norm() + 1.0))


@dataclass(frozen=True, eq=False)
class RootSet:
    """Distinct roots with multiplicities and per-root backward errors."""

    roots: np.ndarray
    multiplicities: np.ndarray
    backward_error: np.ndarray

    @property
    def values(self) -> np.ndarray:
        """The roots as a multiset (repeated by multiplicity)."""
        return np.repeat(self.roots, self.multiplicities)

    @property
    def degree(self) -> int:
        return int(np.sum(self.multiplicities))

    def __len__(self) -> int:
        return self.degree


def _aberth(c: np.ndarray, policy: NumericPolicy) -> np.ndarray:
    """Aberth-Ehrlich iteration for the monic ascending coefficients ``c``."""
    n = c.size - 1
    P = ComplexPolynomial(c)
    dP = derivative(P)
    radius = 1.0 + float(np.max(np.abs(c[:-1])))
    # initial guesses on the Cauchy circle, rotated off the axes
    z = radius * np.exp(1j * (2 * np.pi * np.arange(n) / n + 0.4))
    eye = np.eye(n, dtype=bool)
    polish = 0
    for _ in range(policy.root_max_sweeps):
        p = P(z)
        dp = dP(z)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.where(dp != 0, p / dp, 0)
            diff = z[:, None] - z[None, :]
            diff[eye] = 1
            inv = 1.0 / diff
            inv[eye] = 0
            denom = 1 - ratio * inv.sum(axis=1)
            step = np.where(denom != 0, ratio / denom, ratio)
        step = np.where(np.isfinite(step), step, 0)
        z = z - step
        berr = np.abs(P(z)) / np.maximum(P.scale_at(z), np.finfo(float).tiny)
        small = np.abs(step) <= 4 * np.finfo(float).eps * (1 + np.abs(z))
        if np.all(small) or np.all(berr <= 8 * np.finfo(float).eps):
            polish += 1
            if polish >= 3:
                return z
    berr = np.abs(P(z)) / np.maximum(P.scale_at(z), np.finfo(float).tiny)
    if np.all(berr <= policy.root_tol):
        return z
    raise NoConvergence(
        f"Aberth iteration did not converge in {policy.root_max_sweeps} sweeps "
        f"(max backward error {np.max(berr):.3e})"
    )


def _cluster(z: np.ndarray, radius: float):
    n = z.size
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if abs(z[i] - z[j]) <= radius * (1 + max(abs(z[i]), abs(z[j]))):
                parent[find(i)] = find(j)
    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    reps = np.array([z[g].mean() for g in groups.values()], dtype=complex)
    mult = np.array([len(g) for g in groups.values()], dtype=int)
    return reps, mult


def find_roots(P: ComplexPolynomial, policy: NumericPolicy = DEFAULT_POLICY) -> RootSet:
    """All roots of ``P`` by Aberth-Ehrlich iteration, clustered into multiplicities.

    Raises
    ------
    NoConvergence
        If the sweep budget is exhausted before every root meets the
        backward-error tolerance.
    """
    if P.degree is None or P.degree < 1:
        raise ValueError("find_roots needs a polynomial of degree >= 1")
    c = P.coeffs / P.coeffs[-1]
    # exact zero roots first
    nzero = int(np.flatnonzero(c != 0)[0])
    c = c[nzero:]
    found = [np.zeros(nzero, dtype=complex)]
    n = c.size - 1
    if n == 1:
        found.append(np.array([-c[0]]))
    elif n > 1:
        found.append(_aberth(c, policy))
    z = np.concatenate(found)
    reps, mult = _cluster(z, policy.cluster_radius)
    order = np.lexsort((np.round(reps.imag, 12), np.round(reps.real, 12)))
    reps, mult = reps[order], mult[order]
    berr = np.abs(P(reps)) / np.maximum(P.scale_at(reps), np.finfo(float).tiny)
    return RootSet(reps, mult, berr)


def zeros(P: ComplexPolynomial, policy: NumericPolicy = DEFAULT_POLICY) -> np.ndarray:
    """Root multiset of ``P`` (empty for constants)."""
    if P.degree is None or P.degree < 1:
        return np.zeros(0, dtype=complex)
    return find_roots(P, policy).values
