"""Hermite windows, the Bargmann transform and polyanalytic polynomials.

Notation: ``z = x + i xi``.  For the Hermite function h_n the Bargmann
transform is ``B h_n(z) = (pi^n / n!)^{1/2} z^n``.  A Hermite combination
``g = sum sqrt(pi^n n!) c_n h_n`` is carried by ``P(z) = sum c_n z^n``; a
function f with polynomial Bargmann transform by ``Q = Bf``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .core import HermiteCombo
from .oracle import GridSpec, oracle_stft
from .zeros import ZeroReport, scan

__all__ = [
    "ComplexPolynomial",
    "PolyanalyticPolynomial",
    "hermite_window_stft",
    "polyanalytic_bargmann",
    "balk_degree_check",
    "degree1_roots",
    "polyanalytic_zero_search",
    "window_from_polynomial",
    "function_from_bargmann",
    "bargmann_consistency_check",
]


@dataclass(frozen=True)
class ComplexPolynomial:
    """Coefficients in ascending degree.  Trailing zeros are dropped."""

    coeffs: tuple = (0j,)

    def __post_init__(self):
        cs = [complex(c) for c in self.coeffs]
        while len(cs) > 1 and cs[-1] == 0:
            cs.pop()
        if not cs:
            cs = [0j]
        object.__setattr__(self, "coeffs", tuple(cs))

    @classmethod
    def parse(cls, text: str) -> "ComplexPolynomial":
        """Comma-separated Python complex literals, ascending: ``"1,0,2+1j"``."""
        return cls(tuple(complex(t.strip().replace(" ", "")) for t in text.split(",") if t.strip()))

    @property
    def degree(self) -> int:
        return -1 if self.is_zero else len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return len(self.coeffs) == 1 and self.coeffs[0] == 0

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        acc = np.zeros_like(z)
        for c in reversed(self.coeffs):
            acc = acc * z + c
        return complex(acc) if acc.ndim == 0 else acc

    def derivative(self, k: int = 1) -> "ComplexPolynomial":
        cs = list(self.coeffs)
        for _ in range(k):
            cs = [j * c for j, c in enumerate(cs)][1:] or [0j]
        return ComplexPolynomial(tuple(cs))

    def to_list(self) -> list:
        return [[c.real, c.imag] for c in self.coeffs]


@dataclass(frozen=True)
class PolyanalyticPolynomial:
    """sum_{j,k} c[j][k] z^j conj(z)^k."""

    matrix: tuple = ((0j,),)

    def __post_init__(self):
        m = np.atleast_2d(np.asarray(self.matrix, dtype=complex))
        nz = np.argwhere(m != 0)
        if nz.size:
            m = m[: nz[:, 0].max() + 1, : nz[:, 1].max() + 1]
        else:
            m = np.zeros((1, 1), dtype=complex)
        object.__setattr__(self, "matrix", tuple(tuple(complex(v) for v in row) for row in m))

    @property
    def array(self) -> np.ndarray:
        return np.array(self.matrix, dtype=complex)

    def _support(self):
        return np.argwhere(self.array != 0)

    @property
    def is_zero(self) -> bool:
        return self._support().size == 0

    @property
    def deg_z(self) -> int:
        s = self._support()
        return int(s[:, 0].max()) if s.size else -1

    @property
    def deg_conj(self) -> int:
        s = self._support()
        return int(s[:, 1].max()) if s.size else -1

    @property
    def total_degree(self) -> int:
        s = self._support()
        return int(s.sum(axis=1).max()) if s.size else -1

    def leading_modulus(self) -> float:
        """Largest |c[j][k]| among the terms of top total degree."""
        s = self._support()
        if not s.size:
            return 0.0
        top = s[s.sum(axis=1) == s.sum(axis=1).max()]
        return float(max(abs(self.matrix[j][k]) for j, k in top))

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        zc = np.conj(z)
        m = self.array
        acc = np.zeros_like(z)
        for j in range(m.shape[0] - 1, -1, -1):
            row = np.zeros_like(z)
            for k in range(m.shape[1] - 1, -1, -1):
                row = row * zc + m[j, k]
            acc = acc * z + row
        return complex(acc) if acc.ndim == 0 else acc

    def to_dict(self) -> dict:
        return {
            "matrix": [[[v.real, v.imag] for v in row] for row in self.matrix],
            "deg_z": self.deg_z,
            "deg_conj": self.deg_conj,
            "total_degree": self.total_degree,
        }


def _as_poly(p) -> ComplexPolynomial:
    return p if isinstance(p, ComplexPolynomial) else ComplexPolynomial(tuple(p))


def hermite_window_stft(n: int, Bf, z: complex) -> complex:
    """V_{h_n} f(x, -xi) for z = x + i xi, given the Bargmann polynomial of f.

    ``(pi^n n!)^{-1/2} e^{pi i x xi} e^{-pi |z|^2 / 2}
    sum_k C(n, k) (-pi conj z)^{n-k} (Bf)^{(k)}(z)``.
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    Bf = _as_poly(Bf)
    z = complex(z)
    x, xi = z.real, z.imag
    total = 0j
    for k in range(n + 1):
        total += math.comb(n, k) * (-math.pi * z.conjugate()) ** (n - k) * Bf.derivative(k)(z)
    pref = (math.pi ** n * math.factorial(n)) ** -0.5
    return pref * np.exp(1j * math.pi * x * xi - math.pi * abs(z) ** 2 / 2) * total


def polyanalytic_bargmann(P, Q) -> PolyanalyticPolynomial:
    """Expand sum_k (1/k!) Q^{(k)}(z) conj(P^{(k)}(-pi z)) in (z, conj z).

    Conjugation acts on the coefficients of P^{(k)} and on the power of z,
    so the factor contributes ``conj(p_j) (-pi)^j conj(z)^j``.
    """
    P, Q = _as_poly(P), _as_poly(Q)
    if P.is_zero or Q.is_zero:
        raise ValueError("P and Q must be nonzero")
    dq, dp = Q.degree, P.degree
    m = np.zeros((dq + 1, dp + 1), dtype=complex)
    for k in range(min(dp, dq) + 1):
        qk = np.array(Q.derivative(k).coeffs)
        pk = np.array(P.derivative(k).coeffs)
        pbar = np.conj(pk) * (-math.pi) ** np.arange(len(pk))
        if np.all(qk == 0) or np.all(pbar == 0):
            continue
        m[: len(qk), : len(pbar)] += np.outer(qk, pbar) / math.factorial(k)
    return PolyanalyticPolynomial(m)


def balk_degree_check(Qp: PolyanalyticPolynomial) -> bool:
    """True when total degree > 2 min(deg_z, deg_conj), which forces a zero."""
    if Qp.is_zero:
        raise ValueError("zero polynomial")
    return Qp.total_degree > 2 * min(Qp.deg_z, Qp.deg_conj)


def degree1_roots(a: complex, b: complex):
    """Two roots of pi (z + a)(conj z + conj b) - 1.

    With zeta = sqrt(pi)(z + a) the equation reads |zeta|^2 + c zeta = 1,
    c = sqrt(pi)(conj b - conj a) = rho e^{i theta}; zeta = s e^{-i theta}
    with s = (-rho +- sqrt(rho^2 + 4))/2 solves it.
    """
    a, b = complex(a), complex(b)
    c = math.sqrt(math.pi) * (b.conjugate() - a.conjugate())
    rho, theta = abs(c), (math.atan2(c.imag, c.real) if c != 0 else 0.0)
    root = math.sqrt(rho * rho + 4)
    out = []
    for s in ((-rho + root) / 2, (-rho - root) / 2):
        zeta = s * complex(math.cos(theta), -math.sin(theta))
        out.append(zeta / math.sqrt(math.pi) - a)
    return tuple(out)


def polyanalytic_zero_search(Qp: PolyanalyticPolynomial, box: Optional[GridSpec] = None,
                             zero_tol: float = 1e-8, n: int = 161, max_doublings: int = 4) -> ZeroReport:
    """Scan z -> Qp(z, conj z) for zeros.

    Without an explicit box the search starts on [-R, R]^2 with
    R = 1 + sum|c| / |leading| and doubles R up to ``max_doublings`` times
    until a zero turns up.
    """
    if Qp.is_zero:
        raise ValueError("zero polynomial")

    def fn(x, xi):
        return Qp(np.asarray(x) + 1j * np.asarray(xi))

    if box is not None:
        return scan(fn, box, zero_tol)
    lead = Qp.leading_modulus()
    R = 1.0 + float(np.abs(Qp.array).sum()) / lead
    report = None
    for _ in range(max_doublings + 1):
        report = scan(fn, GridSpec.square(-R, R, n), zero_tol)
        if report.zeros:
            break
        R *= 2
    return report


def window_from_polynomial(P) -> HermiteCombo:
    """Window g = sum sqrt(pi^n n!) c_n h_n for P = sum c_n z^n."""
    return HermiteCombo(_as_poly(P).coeffs)


def function_from_bargmann(Q) -> HermiteCombo:
    """The Hermite combination f with Bf = Q."""
    Q = _as_poly(Q)
    return HermiteCombo(tuple(q / math.pi ** n for n, q in enumerate(Q.coeffs)))


def bargmann_consistency_check(P, Q, points, tol: float = 1e-11) -> float:
    """Max over ``points`` of ``|e^{-pi i x xi} e^{pi |z|^2/2} V_g f(conj z) - B_g f(z)|``.

    g is the window carried by P, f the function with Bargmann polynomial Q;
    the STFT comes from the quadrature oracle, the right side from
    :func:`polyanalytic_bargmann`.
    """
    g = window_from_polynomial(P).sampled()
    f = function_from_bargmann(Q).sampled()
    Qp = polyanalytic_bargmann(P, Q)
    worst = 0.0
    for z in points:
        z = complex(z)
        x, xi = z.real, z.imag
        v = oracle_stft(f, g, (x, -xi), tol)
        lhs = np.exp(-1j * math.pi * x * xi + math.pi * abs(z) ** 2 / 2) * v
        worst = max(worst, abs(lhs - Qp(z)))
    return worst
