"""Step functions against the box window chi = 1_(0,1).

Pieces: the Fourier integral of a step on (0, 1) in the form
``I(xi) = 2 pi i xi fhat(-xi)``, the convexity criterion deciding whether it
vanishes, the almost-periodicity solver that produces zeros for
non-monotone three-piece steps, and the STFT of step functions with jumps
on Z + alpha Z.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence

import numpy as np
import sympy

from .core import PhaseSpacePoint, StepFunction
from .oracle import GridSpec
from .zeros import ZeroReport, scan

__all__ = [
    "AlphaStepSpec",
    "IrrationalityError",
    "StepDecision",
    "StepOnUnit",
    "box_fourier_I",
    "box_fourier_hat",
    "convexity_weights",
    "counterexample_verify",
    "is_rational_number",
    "lemma_step_decision",
    "nonmono_zero_solve",
    "parse_alpha",
    "stft_box_closed_form",
]

DENOM_LIMIT = 10 ** 6


class IrrationalityError(ValueError):
    """alpha is (or cannot be distinguished from) a rational number."""


def is_rational_number(v) -> bool:
    """Exact for Fraction/int/sympy input; for floats, True when a
    continued-fraction convergent with denominator <= 10^6 reproduces it."""
    if isinstance(v, (int, Fraction)):
        return True
    if isinstance(v, sympy.Basic):
        r = v.is_rational
        if r is not None:
            return bool(r)
        v = float(v)
    x = float(v)
    return float(Fraction(x).limit_denominator(DENOM_LIMIT)) == x


def parse_alpha(alpha):
    """Return ``(float value, exact form or None)`` for alpha in (0, 1).

    Strings are parsed symbolically ("sqrt2/2", "1/sqrt(2)", "(sqrt(5)-1)/2").
    Rational values are rejected.
    """
    exact = None
    if isinstance(alpha, str):
        text = alpha.strip().replace("√", "sqrt").replace("^", "**")
        text = re.sub(r"sqrt(\d+)", r"sqrt(\1)", text)
        try:
            exact = sympy.nsimplify(sympy.sympify(text, rational=True))
        except (sympy.SympifyError, TypeError) as exc:
            raise ValueError(f"cannot parse alpha {alpha!r}") from exc
        value = float(exact)
    elif isinstance(alpha, sympy.Basic):
        exact, value = alpha, float(alpha)
    else:
        value = float(alpha)
    if not 0 < value < 1:
        raise ValueError("alpha must lie in (0, 1)")
    if is_rational_number(exact if exact is not None else value):
        raise IrrationalityError(f"alpha = {alpha!r} is rational (or indistinguishable from one)")
    return value, exact


def _num(v):
    if isinstance(v, (Fraction, int)):
        return v
    if isinstance(v, sympy.Basic):
        return Fraction(str(v)) if v.is_Rational else v
    return float(v)


@dataclass(frozen=True)
class StepOnUnit:
    """f = sum_k c_k 1_(a_k, a_{k+1}) on (0, 1) with a_1 = 0 < ... < a_{n+1} = 1.

    ``breakpoints`` lists a_1..a_n (starting with 0).  Entries may be floats,
    Fractions or sympy numbers; exact rationals keep phases exact.
    """

    breakpoints: tuple
    values: tuple

    def __post_init__(self):
        bps = tuple(_num(b) for b in self.breakpoints)
        vals = tuple(float(c) for c in self.values)
        if len(bps) != len(vals) or not bps:
            raise ValueError("need one breakpoint per value")
        if bps[0] != 0:
            raise ValueError("first breakpoint must be 0")
        edges = [float(b) for b in bps] + [1.0]
        if any(b <= a for a, b in zip(edges, edges[1:])):
            raise ValueError("breakpoints must increase strictly inside [0, 1)")
        if any(c <= 0 for c in vals):
            raise ValueError("values must be positive")
        object.__setattr__(self, "breakpoints", bps)
        object.__setattr__(self, "values", vals)

    @property
    def edges(self) -> tuple:
        return self.breakpoints + (1,)

    def monotone(self) -> int:
        """+1 strictly increasing, -1 strictly decreasing, 0 otherwise (one piece: -1)."""
        c = np.asarray(self.values)
        if len(c) == 1 or np.all(np.diff(c) < 0):
            return -1
        if np.all(np.diff(c) > 0):
            return 1
        return 0

    def to_step_function(self) -> StepFunction:
        return StepFunction(tuple(float(e) for e in self.edges), self.values)


def _phase(a, xi):
    """exp(2 pi i a xi), reduced mod 1 exactly when both are rational."""
    if isinstance(a, (Fraction, int)) and isinstance(xi, (Fraction, int)):
        r = (Fraction(a) * Fraction(xi)) % 1
        return complex(np.exp(2j * np.pi * float(r)))
    return np.exp(2j * np.pi * np.mod(float(a) * np.asarray(xi, dtype=float), 1.0))


def box_fourier_I(s: StepOnUnit, xi):
    """I(xi) = sum_k c_k (e^{2 pi i a_{k+1} xi} - e^{2 pi i a_k xi}) = 2 pi i xi fhat(-xi)."""
    edges = s.edges
    exact = isinstance(xi, (int, Fraction))
    x = xi if exact else np.asarray(xi, dtype=float)
    total = 0
    for c, a0, a1 in zip(s.values, edges[:-1], edges[1:]):
        total = total + c * (_phase(a1, x) - _phase(a0, x))
    return complex(total) if np.ndim(total) == 0 else total


def box_fourier_hat(s: StepOnUnit, xi):
    """fhat(xi) = int_0^1 f(t) e^{-2 pi i t xi} dt, without cancellation near 0."""
    xi = np.asarray(xi, dtype=float)
    total = np.zeros(xi.shape, dtype=complex)
    edges = [float(e) for e in s.edges]
    for c, a0, a1 in zip(s.values, edges[:-1], edges[1:]):
        ln = a1 - a0
        total = total + c * ln * np.sinc(xi * ln) * np.exp(-1j * np.pi * xi * (a0 + a1))
    return complex(total) if total.ndim == 0 else total


def convexity_weights(s: StepOnUnit):
    """Scale, weights and frequencies of the convex-combination form of I.

    ``I(xi) = scale * u(xi) * (sum_k w_k e^{2 pi i f_k xi} - 1)`` with
    ``|u| = 1``, ``w_k >= 0`` and ``sum w_k = 1``.  Hence
    ``|I(xi)| >= scale * sum_k 2 w_k sin^2(pi f_k xi)``.
    """
    mono = s.monotone()
    if mono == 0:
        raise ValueError("values are not strictly monotone")
    c = s.values
    a = [float(b) for b in s.breakpoints]
    n = len(c)
    if mono < 0:
        scale = c[0]
        w = [(c[k - 1] - c[k]) / c[0] for k in range(1, n)] + [c[-1] / c[0]]
        freqs = a[1:] + [1.0]
    else:
        scale = c[-1]
        w = [c[0] / c[-1]] + [(c[k] - c[k - 1]) / c[-1] for k in range(1, n)]
        freqs = [-1.0] + [ak - 1.0 for ak in a[1:]]
    return scale, np.array(w), np.array(freqs)


def convexity_floor(s: StepOnUnit, xi):
    scale, w, fr = convexity_weights(s)
    xi = np.asarray(xi, dtype=float)
    return scale * np.sum(2 * w[:, None] * np.sin(np.pi * fr[:, None] * xi.ravel()[None, :]) ** 2,
                          axis=0).reshape(xi.shape)


@dataclass(frozen=True)
class StepDecision:
    zero_exists: bool
    witness_xi: Optional[int] = None
    residual: Optional[float] = None


def lemma_step_decision(s: StepOnUnit) -> StepDecision:
    """Does fhat vanish somewhere?  Yes iff every interior breakpoint is rational.

    For rational breakpoints p_k/q_k the witness is xi = prod q_k and
    ``|fhat(-xi)|`` is checked to be below 1e-12.
    """
    if s.monotone() == 0:
        raise ValueError("values must be strictly monotone")
    interior = s.breakpoints[1:]
    if not all(is_rational_number(a) for a in interior):
        return StepDecision(False)
    xi = 1
    for a in interior:
        fa = a if isinstance(a, Fraction) else Fraction(float(a)).limit_denominator(DENOM_LIMIT)
        xi *= fa.denominator
    exact = StepOnUnit((Fraction(0),) + tuple(
        a if isinstance(a, Fraction) else Fraction(float(a)).limit_denominator(DENOM_LIMIT)
        for a in interior), s.values)
    res = abs(box_fourier_I(exact, xi)) / (2 * math.pi * xi)
    if res >= 1e-12:
        raise ArithmeticError(f"witness xi = {xi} leaves residual {res:.3g}")
    return StepDecision(True, xi, res)


def _psi(alpha, b, c, xi):
    return (1 - b - c + b * c) * np.cos(2 * np.pi * alpha * xi) - b * c * np.cos(2 * np.pi * xi)


def _bisect(fn, lo, hi):
    flo = fn(lo)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        fm = fn(mid)
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def nonmono_zero_solve(alpha, b: float, c: float, tol: float = 1e-12, max_doublings: int = 10):
    """Find (a, xi) with fhat_a(xi) = 0 for f_a = b 1_(0,a) + 1_(a,a+alpha) + c 1_(a+alpha,1).

    A zero at frequency -xi0 (xi0 > 0) needs psi(xi0) = 1 - b - c, where
    ``psi = (1-b-c+bc) cos(2 pi alpha xi) - bc cos(2 pi xi)``, and then
    ``e^{2 pi i a xi0} = (b - c e^{2 pi i xi0}) / ((1-c) e^{2 pi i alpha xi0} - (1-b))``.
    Crossings are scanned from xi0 = 1/(1 - alpha) on, so that
    ``a = theta / (2 pi xi0)`` lands in (0, 1 - alpha).  Returns ``(a, -xi0)``.
    """
    alpha_v, _ = parse_alpha(alpha)
    if not (0 < b < 1 and 0 < c < 1):
        raise ValueError("need 0 < b, c < 1 (middle value normalised to 1)")
    level = 1 - b - c
    start = 1.0 / (1.0 - alpha_v)
    horizon = 1e3 / (1.0 - alpha_v)

    def g(x):
        return _psi(alpha_v, b, c, x) - level

    for _ in range(max_doublings + 1):
        step = 0.01 / max(1.0, alpha_v)
        xs = np.arange(start, horizon, step)
        gv = g(xs)
        idx = np.flatnonzero(np.sign(gv[:-1]) * np.sign(gv[1:]) < 0)
        for i in idx:
            xi0 = _bisect(g, xs[i], xs[i + 1])
            den = (1 - c) * np.exp(2j * np.pi * alpha_v * xi0) - (1 - b)
            num = b - c * np.exp(2j * np.pi * xi0)
            if abs(den) < 1e-9:
                continue
            theta = np.angle(num / den) % (2 * np.pi)
            a = theta / (2 * np.pi * xi0)
            if not 0 < a < 1 - alpha_v:
                continue
            s = StepOnUnit((0.0, a, a + alpha_v), (b, 1.0, c))
            res = abs(box_fourier_hat(s, -xi0))
            if res < 10 * tol:
                return float(a), float(-xi0)
        start, horizon = horizon, 2 * horizon
    raise RuntimeError("no admissible crossing found within the scan horizon")


class AlphaStepSpec:
    """f = sum_k c_k 1_(a_k, a_{k+1}), a_{2k} = k, a_{2k+1} = k + alpha.

    ``coeffs`` is a callable on integer arrays, or a mapping k -> c_k for a
    finite window.  ``tail`` names the rule outside an explicit window:
    "monotone" or "lp" (informational for callables).
    """

    def __init__(self, alpha, coeffs, tail: str = "custom"):
        self.alpha, self.alpha_exact = parse_alpha(alpha)
        self.alpha_text = alpha if isinstance(alpha, str) else repr(self.alpha)
        self.tail = tail
        if callable(coeffs):
            self._fn = coeffs
            self._table = None
        else:
            self._table = {int(k): float(v) for k, v in dict(coeffs).items()}
            if any(v <= 0 for v in self._table.values()):
                raise ValueError("coefficients must be positive")
            self._fn = None

    @classmethod
    def monotone(cls, alpha) -> "AlphaStepSpec":
        return cls(alpha, lambda k: 2.0 - np.tanh(np.asarray(k, dtype=float)), "monotone")

    @classmethod
    def lp(cls, alpha) -> "AlphaStepSpec":
        return cls(alpha, lambda k: 2.0 ** (-np.abs(np.asarray(k, dtype=float))), "lp")

    def coeff(self, k):
        k = np.asarray(k)
        if self._fn is not None:
            return np.asarray(self._fn(k), dtype=float)
        try:
            out = np.vectorize(lambda i: self._table[int(i)], otypes=[float])(k)
        except KeyError as exc:
            raise ValueError(f"coefficient c_{exc.args[0]} is outside the available window") from exc
        return out

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        j = np.floor(t)
        k = np.where(t - j < self.alpha, 2 * j, 2 * j + 1).astype(int)
        return self.coeff(k)

    def to_step_function(self, lo: int, hi: int) -> StepFunction:
        """Restriction to [lo, hi) as a StepFunction (for oracle checks)."""
        edges, vals = [], []
        for j in range(lo, hi):
            edges += [j, j + self.alpha]
            vals += [float(self.coeff(2 * j)), float(self.coeff(2 * j + 1))]
        return StepFunction(tuple(edges) + (float(hi),), tuple(vals))

    def to_dict(self) -> dict:
        return {"alpha": self.alpha_text, "tail": self.tail}


def _three_piece(spec: AlphaStepSpec, x):
    """Breakpoints (on (0,1)) and coefficients of f(t + x) on the window."""
    x = np.asarray(x, dtype=float)
    al = spec.alpha
    j = np.floor(x)
    u = x - j
    case1 = u < al
    ji = j.astype(int)
    k0 = np.where(case1, 2 * ji, 2 * ji + 1)
    c = [spec.coeff(k0), spec.coeff(k0 + 1), spec.coeff(k0 + 2)]
    b1 = np.where(case1, al - u, 1 - u)
    b2 = np.where(case1, 1 - u, 1 - u + al)
    return j, u, case1, c, b1, b2


def stft_box_closed_form(spec: AlphaStepSpec, x, xi):
    """V_chi f(x, xi) by the three-piece reduction (no quadrature).

    With x = j + u: for u in [0, alpha) the window sees c_{2j}, c_{2j+1},
    c_{2j+2} on (0, alpha-u), (alpha-u, 1-u), (1-u, 1); for u in [alpha, 1)
    it sees c_{2j+1}, c_{2j+2}, c_{2j+3} on (0, 1-u), (1-u, 1-u+alpha),
    (1-u+alpha, 1).  Each piece integrates in closed form.
    """
    x, xi = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(xi, dtype=float))
    j, u, case1, c, b1, b2 = _three_piece(spec, x)
    edges = [np.zeros_like(x), b1, b2, np.ones_like(x)]
    total = np.zeros(x.shape, dtype=complex)
    for ck, a0, a1 in zip(c, edges[:-1], edges[1:]):
        ln = a1 - a0
        total = total + ck * ln * np.sinc(xi * ln) * np.exp(-1j * np.pi * xi * (a0 + a1))
    out = np.exp(-2j * np.pi * x * xi) * total
    return complex(out) if out.ndim == 0 else out


def _case_value(spec, j, u, xi, case1):
    """Evaluate one branch explicitly (used to test continuity at u = alpha)."""
    al = spec.alpha
    if case1:
        c = [spec.coeff(2 * j), spec.coeff(2 * j + 1), spec.coeff(2 * j + 2)]
        edges = [0.0, al - u, 1 - u, 1.0]
    else:
        c = [spec.coeff(2 * j + 1), spec.coeff(2 * j + 2), spec.coeff(2 * j + 3)]
        edges = [0.0, 1 - u, 1 - u + al, 1.0]
    total = 0j
    for ck, a0, a1 in zip(c, edges[:-1], edges[1:]):
        ln = a1 - a0
        total += float(ck) * ln * np.sinc(xi * ln) * np.exp(-1j * np.pi * xi * (a0 + a1))
    return complex(np.exp(-2j * np.pi * (j + u) * xi) * total)


def _certify_x(spec: AlphaStepSpec, x: float):
    """Lemma-based certificate that V_chi f(x, .) has no zero.

    The induced step on (0,1) must be strictly monotone after merging equal
    neighbours and dropping empty pieces; its breakpoints differ by alpha or
    1 - alpha, so at least one of them is irrational.
    """
    _, _, _, c, b1, b2 = _three_piece(spec, np.array([x]))
    edges = [0.0, float(b1[0]), float(b2[0]), 1.0]
    vals = [float(ci[0]) for ci in c]
    pieces = [(e0, v) for e0, e1, v in zip(edges[:-1], edges[1:], vals) if e1 - e0 > 1e-15]
    merged = []
    for e0, v in pieces:
        if merged and merged[-1][1] == v:
            continue
        merged.append((e0, v))
    s = StepOnUnit(tuple(e for e, _ in merged), tuple(v for _, v in merged))
    if s.monotone() == 0:
        return False
    scale, w, _ = convexity_weights(s)
    if np.any(w < 0) or abs(w.sum() - 1) > 1e-12:
        return False
    if len(merged) == 1:
        return False
    return True


def counterexample_verify(mode: str, alpha, grid: GridSpec, zero_tol: float = 1e-8,
                          window: int = 20) -> ZeroReport:
    """Both branches of the dichotomy for steps with jumps on Z + alpha Z.

    ``monotone``: c_k = 2 - tanh(k); scan the closed form and attach the
    per-x convexity certificate.  ``lp``: c_k = 2^{-|k|}; find a
    non-monotone triple and solve for an explicit zero.
    """
    if mode == "monotone":
        spec = AlphaStepSpec.monotone(alpha)
        rep = scan(lambda x, k: stft_box_closed_form(spec, x, k), grid, zero_tol)
        xs = grid.axes()[0]
        if not rep.zeros and all(_certify_x(spec, float(x)) for x in xs):
            rep.certificates = tuple(rep.certificates) + ("analytic per-x",)
        return rep
    if mode != "lp":
        raise ValueError("mode must be 'monotone' or 'lp'")
    spec = AlphaStepSpec.lp(alpha)
    al = spec.alpha
    for j0 in range(-window, window + 1):
        c = [float(spec.coeff(k)) for k in range(2 * j0, 2 * j0 + 4)]
        if c[0] < c[1] and c[2] < c[1]:
            # Case 1: middle piece (alpha-u, 1-u) of length 1 - alpha, a = alpha - u
            d = c[1]
            a, xz = nonmono_zero_solve(1 - al if spec.alpha_exact is None else 1 - spec.alpha_exact,
                                       c[0] / d, c[2] / d)
            u = al - a
            break
        if c[1] < c[2] and c[3] < c[2]:
            # Case 2: middle piece (1-u, 1-u+alpha) of length alpha, a = 1 - u
            d = c[2]
            a, xz = nonmono_zero_solve(spec.alpha_exact if spec.alpha_exact is not None else al,
                                       c[1] / d, c[3] / d)
            u = 1 - a
            break
    else:
        raise RuntimeError("no non-monotone triple in the coefficient window")
    x = j0 + u
    res = abs(stft_box_closed_form(spec, x, xz))
    pt = PhaseSpacePoint(float(x), float(xz))
    zeros = [(pt, float(res))] if res < zero_tol else []
    return ZeroReport(zeros, float(res), pt, grid, True, [], ("solver",), zero_tol, 1)
