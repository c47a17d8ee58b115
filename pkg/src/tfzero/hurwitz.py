"""Exact Hurwitz stability tests for integer polynomials.

Polynomials are coefficient lists, highest degree first: ``[a0, a1, ..., an]``
stands for ``a0 z^n + a1 z^(n-1) + ... + an``.  Everything that decides a
verdict runs on Python integers; floating point appears only in the
independent root-location check :func:`max_real_root_part`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

__all__ = [
    "GAMMA_SUFFICIENT",
    "IntPolynomial",
    "StabilityReport",
    "RootFindingError",
    "build_An",
    "hurwitz_matrix",
    "leading_principal_minors",
    "routh_hurwitz",
    "max_real_root_part",
    "polynomial_roots",
]

# Optimal constant of the coefficient-ratio sufficient condition, as the
# exact rational 21479/10000 (quoted to four decimals).
GAMMA_SUFFICIENT = Fraction(21479, 10000)

AN_MAX_DEGREE = 64


class RootFindingError(RuntimeError):
    """Simultaneous iteration did not reach the residual target.

    ``best`` holds the last iterate so callers can still inspect it.
    """

    def __init__(self, msg, best):
        super().__init__(msg)
        self.best = best


@dataclass(frozen=True)
class IntPolynomial:
    coeffs: tuple

    def __post_init__(self):
        cs = tuple(int(c) for c in self.coeffs)
        if not cs:
            raise ValueError("empty coefficient list")
        if any(int(c) != c for c in self.coeffs):
            raise ValueError("coefficients must be integers")
        object.__setattr__(self, "coeffs", cs)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def coeff(self, j: int) -> int:
        """a_j with the convention a_j = 0 outside 0..n."""
        return self.coeffs[j] if 0 <= j <= self.degree else 0

    def __call__(self, z):
        acc = 0
        for c in self.coeffs:
            acc = acc * z + c
        return acc

    def to_float(self) -> np.ndarray:
        return np.array([float(c) for c in self.coeffs])

    def __repr__(self):
        return f"IntPolynomial({list(self.coeffs)})"


@dataclass(frozen=True)
class StabilityReport:
    is_hurwitz: bool
    minors: tuple
    necessary_ok: bool
    sufficient_ok: bool
    failing_index: Optional[int] = None
    coeffs: tuple = field(default=(), compare=False)

    def to_dict(self) -> dict:
        return {
            "coeffs": list(self.coeffs),
            "is_hurwitz": self.is_hurwitz,
            "minors": list(self.minors),
            "necessary_ok": self.necessary_ok,
            "sufficient_ok": self.sufficient_ok,
            "failing_index": self.failing_index,
        }


def _as_poly(p) -> IntPolynomial:
    return p if isinstance(p, IntPolynomial) else IntPolynomial(tuple(p))


def build_An(n: int) -> IntPolynomial:
    """A_n(z) = sum_k C(n,k) (n+k)! z^(n-k), exact."""
    if not 0 <= n <= AN_MAX_DEGREE:
        raise ValueError(f"n must lie in 0..{AN_MAX_DEGREE}, got {n}")
    return IntPolynomial(tuple(math.comb(n, k) * math.factorial(n + k) for k in range(n + 1)))


def hurwitz_matrix(p) -> list:
    """n x n Hurwitz matrix with entries H[i][j] = a_{2j-i} (1-indexed)."""
    p = _as_poly(p)
    n = p.degree
    if n < 1:
        raise ValueError("Hurwitz matrix needs degree >= 1")
    if p.coeffs[0] <= 0:
        raise ValueError("leading coefficient must be positive")
    return [[p.coeff(2 * j - i) for j in range(1, n + 1)] for i in range(1, n + 1)]


def _bareiss_det(m: list) -> int:
    """Determinant by fraction-free elimination with row pivoting."""
    a = [row[:] for row in m]
    n = len(a)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((r for r in range(k + 1, n) if a[r][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1] if n else 1


def leading_principal_minors(m: list) -> list:
    """All leading principal minors of an integer matrix.

    Bareiss elimination without pivoting yields them as the successive
    pivots.  When a pivot vanishes the remaining minors are computed one by
    one with the pivoting variant.
    """
    n = len(m)
    a = [list(row) for row in m]
    minors = []
    prev = 1
    for k in range(n):
        piv = a[k][k]
        minors.append(piv)
        if piv == 0:
            minors.extend(_bareiss_det([row[: r + 1] for row in m[: r + 1]]) for r in range(k + 1, n))
            return minors
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                # exact division is the Bareiss (Sylvester) identity
                a[i][j] = (a[i][j] * piv - a[i][k] * a[k][j]) // prev
        prev = piv
    return minors


def _ratio_conditions(p: IntPolynomial):
    # j ranges over indices where a_{j-1}, a_j, a_{j+1}, a_{j+2} all exist
    n = p.degree
    nec = True
    suf = True
    for j in range(1, n - 1):
        lhs = p.coeffs[j] * p.coeffs[j + 1]
        rhs = p.coeffs[j - 1] * p.coeffs[j + 2]
        nec &= lhs - rhs > 0
        suf &= lhs > GAMMA_SUFFICIENT * rhs
    return nec, suf


def routh_hurwitz(p) -> StabilityReport:
    """Principal-minor Hurwitz test plus the two coefficient-ratio conditions."""
    p = _as_poly(p)
    if p.coeffs[0] <= 0:
        raise ValueError("leading coefficient must be positive")
    if p.degree == 0:
        minors = []
    else:
        minors = leading_principal_minors(hurwitz_matrix(p))
    failing = next((i + 1 for i, d in enumerate(minors) if d <= 0), None)
    nec, suf = _ratio_conditions(p)
    return StabilityReport(
        is_hurwitz=failing is None,
        minors=tuple(minors),
        necessary_ok=nec,
        sufficient_ok=suf,
        failing_index=failing,
        coeffs=p.coeffs,
    )


def _relative_residual(c: np.ndarray, z: np.ndarray) -> np.ndarray:
    val = np.zeros_like(z)
    mag = np.zeros(z.shape)
    az = np.abs(z)
    for a in c:
        val = val * z + a
        mag = mag * az + abs(a)
    return np.abs(val) / np.where(mag > 0, mag, 1.0)


def polynomial_roots(coeffs: Sequence, tol: float = 1e-10, maxiter: int = 500) -> np.ndarray:
    """All complex roots by Aberth-Ehrlich simultaneous iteration.

    Stops once every root has relative residual ``|p(z)| / sum|a_k||z|^k``
    below ``tol``.  Raises :class:`RootFindingError` (with ``best``) otherwise.
    """
    c = np.array([complex(x) for x in coeffs])
    nz = 0
    while len(c) > 1 and c[-1] == 0:
        c = c[:-1]
        nz += 1
    n = len(c) - 1
    if n < 1:
        return np.zeros(nz, dtype=complex)
    c = c / c[0]
    dc = c[:-1] * np.arange(n, 0, -1)
    # initial guesses on a circle of Cauchy-bound-like radius, rotated off axes
    radius = max(np.abs(c[-1]) ** (1.0 / n), 1e-3)
    z = radius * np.exp(1j * (2 * np.pi * np.arange(n) / n + 0.4))
    for _ in range(maxiter):
        pz = np.polyval(c, z)
        dpz = np.polyval(dc, z)
        ratio = np.where(dpz != 0, pz / np.where(dpz != 0, dpz, 1), 0)
        diff = z[:, None] - z[None, :]
        np.fill_diagonal(diff, 1.0)
        inv = 1.0 / diff
        np.fill_diagonal(inv, 0.0)
        denom = 1.0 - ratio * inv.sum(axis=1)
        step = np.where(denom != 0, ratio / np.where(denom != 0, denom, 1), ratio)
        z = z - step
        if np.all(_relative_residual(c, z) < tol):
            return np.concatenate([z, np.zeros(nz, dtype=complex)])
    raise RootFindingError(f"Aberth iteration did not converge in {maxiter} steps", z)


def max_real_root_part(p) -> float:
    """Largest real part among the roots of ``p`` (float image, Aberth)."""
    p = _as_poly(p)
    if p.degree < 1:
        raise ValueError("degree must be >= 1")
    roots = polynomial_roots(p.to_float())
    return float(np.max(roots.real))
