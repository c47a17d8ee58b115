"""Closed-form ambiguity functions.

All kernels broadcast over array arguments ``x`` and ``xi`` and return a
Python complex for scalar input.  Every formula is checked against the
quadrature oracle in the test-suite; the conformance notes in
:data:`CONFORMANCE` record where a displayed textbook form needed a
correction to agree with direct integration.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .core import (
    ConvExpExp,
    FunctionSpec,
    Gaussian,
    GumbelExp,
    MonomialExp,
    OneSidedExp,
    PhaseSpacePoint,
    spec_from_json,
    transform,
)
from .oracle import GridSpec, SampledFunction, _Factor, integrate_product
from .hurwitz import build_An, polynomial_roots
from .special import bessel_k_half, loggamma_complex

__all__ = [
    "CONFORMANCE",
    "FormulaId",
    "KernelPair",
    "amb_gauss",
    "amb_onesided",
    "amb_conv_exp",
    "amb_sym_exp",
    "amb_sym_exp_zero_equation",
    "sym_exp_zero_locus",
    "solve_sym_exp_zero",
    "amb_teta_cross",
    "amb_gumbel",
    "amb_monomial",
    "amb_monomial_bessel",
    "convolution_identity_check",
]

# Unimodular / constant-factor notes established against the oracle.
CONFORMANCE = {
    "Gauss": "cross phase is i*pi*(a-b)/(a+b)*x*xi; for complex b the conjugate of b enters",
    "OneSided": "as displayed",
    "ConvSameSign": "as displayed (intermediate difference form)",
    "ConvMixedSign": "v replaced by conj(v); xi = 0, a = b handled by the Taylor limit",
    "TEtaCross": "exponent is -(a + i pi xi)|x|",
    "Gumbel": "exponent of B is -(a+c) + 2 pi i xi, Gamma argument a + c - 2 pi i xi",
    "MonomialSelf": "as displayed; Bessel route carries |x| / (2(1 + pi i xi))",
}


def _out(v):
    v = np.asarray(v)
    return complex(v) if v.ndim == 0 else v


def _xy(z, xi=None):
    if xi is not None:
        return np.asarray(z, dtype=float), np.asarray(xi, dtype=float)
    if isinstance(z, PhaseSpacePoint):
        return np.asarray(z.x, dtype=float), np.asarray(z.xi, dtype=float)
    return np.asarray(z[0], dtype=float), np.asarray(z[1], dtype=float)


def _pos(name, v):
    if not (math.isfinite(v) and v > 0):
        raise ValueError(f"{name} must be positive, got {v!r}")


def amb_gauss(a: complex, b: complex, z, xi=None):
    """A(gamma_a, gamma_b) for gamma_a(t) = exp(-a pi t^2).

    ``(a + b*)^{-1/2} exp(-pi (a b* x^2 + xi^2)/(a + b*) + i pi (a - b*)/(a + b*) x xi)``
    with b* the conjugate of b and the principal square root.
    """
    a, b = complex(a), complex(b)
    if a.real <= 0 or b.real <= 0:
        raise ValueError("Gaussian kernel needs Re a > 0 and Re b > 0")
    x, k = _xy(z, xi)
    bc = b.conjugate()
    s = a + bc
    expo = -np.pi * (a * bc * x * x + k * k) / s + 1j * np.pi * (a - bc) / s * x * k
    return _out(s ** -0.5 * np.exp(expo))


def amb_onesided(a: float, b: float, z, xi=None):
    """A(eta_a, eta_b) = eta_{a,b}(x) e^{-i pi xi |x|} / (a + b + 2 pi i xi)."""
    _pos("a", a)
    _pos("b", b)
    x, k = _xy(z, xi)
    ax = np.abs(x)
    env = np.where(x >= 0, np.exp(-a * ax), np.exp(-b * ax))
    return _out(env * np.exp(-1j * np.pi * k * ax) / (a + b + 2j * np.pi * k))


def amb_conv_exp(a: float, b: float, sign: int, z, xi=None):
    """Self-ambiguity of eta_a * eta_b (sign +1) or eta_a * I eta_b (sign -1).

    ``(e^{-u|x|}/u - e^{-v|x|}/v) / (2 (v^2 - u^2))`` with u = a + pi i xi,
    v = b + pi i xi, and v replaced by its conjugate for sign -1.  Where
    ``|v^2 - u^2| < 1e-10`` a second-order Taylor expansion in v - u is used,
    which also covers the removable point xi = 0 of e^{-a|t|} (sign -1, a = b).
    """
    _pos("a", a)
    _pos("b", b)
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    if sign == 1 and a == b:
        raise ValueError("degenerate pair: eta_a * eta_a has v^2 = u^2 everywhere; use amb_monomial")
    x, k = _xy(z, xi)
    s = np.abs(x)
    u = a + 1j * np.pi * k
    v = b + sign * 1j * np.pi * k
    h = v - u
    den = v * v - u * u
    near = np.abs(den) < 1e-10
    safe = np.where(near, 1.0, den)
    raw = (np.exp(-u * s) / u - np.exp(-v * s) / v) / (2 * safe)
    eu = np.exp(-u * s)
    d1 = -eu * (s / u + 1 / u ** 2)
    d2 = eu * (s * s / u + 2 * s / u ** 2 + 2 / u ** 3)
    taylor = -(d1 + 0.5 * d2 * h) / (2 * (v + u))
    return _out(np.where(near, taylor, raw))


def amb_sym_exp(a: float, z, xi=None):
    """A(e^{-a|.|}, e^{-a|.|}); e^{-a|t|} = 2a (eta_a * I eta_a)."""
    return _out(4 * a * a * np.asarray(amb_conv_exp(a, a, -1, z, xi)))


def amb_sym_exp_zero_equation(a: float, x: float, xi: float) -> complex:
    """Residual e^{-2 pi i xi |x|} - (a + pi i xi)/(a - pi i xi).

    Its roots are the zeros of the self-ambiguity of e^{-a|t|} with xi != 0.
    """
    _pos("a", a)
    if xi == 0:
        raise ValueError("the zero equation needs xi != 0")
    return cmath.exp(-2j * math.pi * xi * abs(x)) - (a + 1j * math.pi * xi) / (a - 1j * math.pi * xi)


def sym_exp_zero_locus(a: float, xi, k: int = 1):
    """|x| of the k-th zero branch at frequency xi (xi != 0, k >= 1).

    From 2 pi |xi| |x| = 2 pi k - 2 atan(pi |xi| / a).
    """
    q = np.abs(np.asarray(xi, dtype=float))
    return (np.pi * k - np.arctan(np.pi * q / a)) / (np.pi * q)


def solve_sym_exp_zero(a: float, x0: float, xi: float, tol: float = 1e-13, maxiter: int = 60):
    """Newton iteration in |x| at fixed xi for the phase of the zero equation.

    Returns ``(x, residuals)`` where ``residuals`` is the modulus of
    :func:`amb_sym_exp_zero_equation` along the iterates.
    """
    if xi == 0:
        raise ValueError("the zero equation needs xi != 0")
    target = cmath.phase((a + 1j * math.pi * xi) / (a - 1j * math.pi * xi))
    sgn = 1.0 if x0 >= 0 else -1.0
    r = abs(x0)
    res = [abs(amb_sym_exp_zero_equation(a, r, xi))]
    for _ in range(maxiter):
        # phase(-2 pi xi r) - target, wrapped to (-pi, pi]
        g = math.remainder(-2 * math.pi * xi * r - target, 2 * math.pi)
        r = r + g / (2 * math.pi * xi)
        res.append(abs(amb_sym_exp_zero_equation(a, r, xi)))
        if res[-1] < tol:
            break
    return sgn * r, res


def amb_teta_cross(a: float, z, xi=None):
    """A(t eta_a, eta_a) = x_+ e^{-w x}/(2w) + e^{-w|x|}/(4 w^2), w = a + i pi xi."""
    _pos("a", a)
    x, k = _xy(z, xi)
    w = a + 1j * np.pi * k
    xp = np.where(x > 0, x, 0.0)
    e = np.exp(-w * np.abs(x))
    return _out(xp * e / (2 * w) + e / (4 * w * w))


def amb_gumbel(a: float, b: float, c: float, d: float, z, xi=None):
    """A(exp(a t - b e^t), exp(c t - d e^t)).

    ``e^{(a-c)x/2} B^{-(a+c) + 2 pi i xi} Gamma(a + c - 2 pi i xi)`` with
    ``B = b e^{x/2} + d e^{-x/2}``, evaluated in logarithmic form.
    """
    for name, val in (("a", a), ("b", b), ("c", c), ("d", d)):
        _pos(name, val)
    x, k = _xy(z, xi)
    x, k = np.broadcast_arrays(x, k)
    s = (a + c) - 2j * np.pi * k
    logB = np.logaddexp(math.log(b) + x / 2, math.log(d) - x / 2)
    return _out(np.exp((a - c) * x / 2 - s * logB + loggamma_complex(s)))


def _an_float(n):
    return np.array([float(c) for c in build_An(n).coeffs])


def amb_monomial(n: int, z, xi=None):
    """Self-ambiguity of f_n(t) = t^n e^{-t} on t > 0.

    ``e^{-|x|(1 + i pi xi)} (2 + 2 pi i xi)^{-(2n+1)} A_n(|x| (2 + 2 pi i xi))``.
    """
    if int(n) != n or n < 0:
        raise ValueError("n must be a nonnegative integer")
    x, k = _xy(z, xi)
    w = 2 + 2j * np.pi * k
    s = np.abs(x)
    return _out(np.exp(-s * w / 2) * w ** -(2 * n + 1) * np.polyval(_an_float(int(n)), s * w))


def amb_monomial_bessel(n: int, z, xi=None):
    """Bessel form: (n!/sqrt(pi)) (|x|/(2(1 + pi i xi)))^{n+1/2} K_{n+1/2}(|x|(1 + pi i xi))."""
    if int(n) != n or n < 0:
        raise ValueError("n must be a nonnegative integer")
    x, k = _xy(z, xi)
    if np.any(x == 0):
        raise ValueError("Bessel route is singular at x = 0; use amb_monomial")
    w = np.abs(x) * (1 + 1j * np.pi * k)
    pref = math.factorial(int(n)) / math.sqrt(math.pi)
    return _out(pref * (w / (2 * (1 + 1j * np.pi * k) ** 2)) ** (n + 0.5) * bessel_k_half(int(n), w))


# ---------------------------------------------------------------------------
# pairs

class FormulaId(enum.Enum):
    GAUSS = "Gauss"
    ONE_SIDED = "OneSided"
    CONV_SAME_SIGN = "ConvSameSign"
    CONV_MIXED_SIGN = "ConvMixedSign"
    TETA_CROSS = "TEtaCross"
    GUMBEL = "Gumbel"
    MONOMIAL_SELF = "MonomialSelf"
    SYM_EXP = "SymExp"


ZERO_FREE = tuple(f for f in FormulaId if f is not FormulaId.SYM_EXP)


@dataclass(frozen=True)
class _Recipe:
    specs: Callable
    kernel: Callable
    lower: Callable
    exact_modulus: bool = False


def _gauss_lower(p, x, k):
    a, b = complex(p["a"]), complex(p["b"]).conjugate()
    s = a + b
    expo = (-np.pi * (a * b * x * x + k * k) / s + 1j * np.pi * (a - b) / s * x * k).real
    return abs(s) ** -0.5 * np.exp(expo)


def _onesided_lower(p, x, k):
    a, b = p["a"], p["b"]
    env = np.where(x >= 0, np.exp(-a * np.abs(x)), np.exp(-b * np.abs(x)))
    return env / np.hypot(a + b, 2 * np.pi * k)


def _conv_lower(p, x, k, sign):
    # reverse triangle inequality; strictly positive since a != b
    a, b = p["a"], p["b"]
    s = np.abs(x)
    mu, mv = np.hypot(a, np.pi * k), np.hypot(b, np.pi * k)
    u = a + 1j * np.pi * k
    v = b + sign * 1j * np.pi * k
    return np.abs(np.exp(-a * s) / mu - np.exp(-b * s) / mv) / (2 * np.abs(v * v - u * u))


def _teta_lower(p, x, k):
    # |2 x_+ w + 1| >= Re = 2 a x_+ + 1
    a = p["a"]
    xp = np.where(x > 0, x, 0.0)
    return np.exp(-a * np.abs(x)) * (2 * a * xp + 1) / (4 * (a * a + (np.pi * k) ** 2))


def _gumbel_lower(p, x, k):
    a, b, c, d = p["a"], p["b"], p["c"], p["d"]
    s = (a + c) - 2j * np.pi * k
    logB = np.logaddexp(math.log(b) + x / 2, math.log(d) - x / 2)
    return np.exp((a - c) * x / 2 - (a + c) * logB + np.real(loggamma_complex(s)))


def _monomial_lower(p, x, k):
    # |A_n(w)| = a_0 prod |w - r_j| >= a_0 prod max(Re w - Re r_j, |Im w - Im r_j|)
    n = int(p["n"])
    w = 2 + 2j * np.pi * k
    s = np.abs(x)
    arg = s * w
    a0 = float(build_An(n).coeffs[0])
    if n == 0:
        pa = np.full(np.shape(arg), a0)
    else:
        roots = polynomial_roots(_an_float(n))
        pa = np.full(np.shape(arg), a0)
        for r in roots:
            pa = pa * np.maximum(arg.real - r.real, np.abs(arg.imag - r.imag))
    return np.exp(-s) * np.abs(w) ** -(2 * n + 1) * pa


_RECIPES = {
    FormulaId.GAUSS: _Recipe(lambda p: (Gaussian(p["a"]), Gaussian(p["b"])),
                             lambda p, x, k: amb_gauss(p["a"], p["b"], x, k), _gauss_lower, True),
    FormulaId.ONE_SIDED: _Recipe(lambda p: (OneSidedExp(p["a"]), OneSidedExp(p["b"])),
                                 lambda p, x, k: amb_onesided(p["a"], p["b"], x, k), _onesided_lower, True),
    FormulaId.CONV_SAME_SIGN: _Recipe(
        lambda p: (ConvExpExp(p["a"], p["b"], 1),) * 2,
        lambda p, x, k: amb_conv_exp(p["a"], p["b"], 1, x, k),
        lambda p, x, k: _conv_lower(p, x, k, 1)),
    FormulaId.CONV_MIXED_SIGN: _Recipe(
        lambda p: (ConvExpExp(p["a"], p["b"], -1),) * 2,
        lambda p, x, k: amb_conv_exp(p["a"], p["b"], -1, x, k),
        lambda p, x, k: _conv_lower(p, x, k, -1)),
    FormulaId.TETA_CROSS: _Recipe(lambda p: (MonomialExp(1, p["a"]), OneSidedExp(p["a"])),
                                  lambda p, x, k: amb_teta_cross(p["a"], x, k), _teta_lower),
    FormulaId.GUMBEL: _Recipe(lambda p: (GumbelExp(p["a"], p["b"]), GumbelExp(p["c"], p["d"])),
                              lambda p, x, k: amb_gumbel(p["a"], p["b"], p["c"], p["d"], x, k),
                              _gumbel_lower, True),
    FormulaId.MONOMIAL_SELF: _Recipe(lambda p: (MonomialExp(p["n"], 1.0),) * 2,
                                     lambda p, x, k: amb_monomial(p["n"], x, k), _monomial_lower),
    FormulaId.SYM_EXP: _Recipe(lambda p: (ConvExpExp(p["a"], p["a"], -1),) * 2,
                               lambda p, x, k: amb_conv_exp(p["a"], p["a"], -1, x, k), None),
}

DEFAULT_PARAMS = {
    FormulaId.GAUSS: {"a": 1.0, "b": 1.0},
    FormulaId.ONE_SIDED: {"a": 1.0, "b": 2.0},
    FormulaId.CONV_SAME_SIGN: {"a": 1.0, "b": 2.0},
    FormulaId.CONV_MIXED_SIGN: {"a": 1.0, "b": 2.0},
    FormulaId.TETA_CROSS: {"a": 1.0},
    FormulaId.GUMBEL: {"a": 1.0, "b": 1.0, "c": 2.0, "d": 1.0},
    FormulaId.MONOMIAL_SELF: {"n": 2},
    FormulaId.SYM_EXP: {"a": 1.0},
}


def _norm_params(fid, params):
    p = dict(DEFAULT_PARAMS[fid])
    unknown = set(params or {}) - set(p)
    if unknown:
        raise ValueError(f"unknown parameters for {fid.value}: {sorted(unknown)}")
    p.update(params or {})
    for key, val in p.items():
        if key == "n":
            p[key] = int(val)
        elif fid is FormulaId.GAUSS:
            p[key] = complex(*val) if isinstance(val, (list, tuple)) else complex(val)
        else:
            p[key] = float(val)
    return p


@dataclass(frozen=True)
class KernelPair:
    """A closed-form pair (f, g) with its formula.

    ``params`` carries the formula's parameters; ``f`` and ``g`` are the
    corresponding :class:`FunctionSpec` objects, used by the oracle.
    """

    formula_id: FormulaId
    params: dict = field(default_factory=dict, compare=False)
    f: Optional[FunctionSpec] = None
    g: Optional[FunctionSpec] = None

    def __post_init__(self):
        fid = FormulaId(self.formula_id)
        p = _norm_params(fid, self.params)
        if fid is FormulaId.CONV_SAME_SIGN and p["a"] == p["b"]:
            raise ValueError("ConvSameSign requires a != b")
        f, g = _RECIPES[fid].specs(p)
        object.__setattr__(self, "formula_id", fid)
        object.__setattr__(self, "params", p)
        object.__setattr__(self, "f", f)
        object.__setattr__(self, "g", g)

    @classmethod
    def create(cls, formula_id, **params) -> "KernelPair":
        return cls(FormulaId(formula_id), params)

    @property
    def zero_free(self) -> bool:
        return self.formula_id is not FormulaId.SYM_EXP

    @property
    def exact_modulus(self) -> bool:
        return _RECIPES[self.formula_id].exact_modulus

    def __call__(self, z, xi=None):
        x, k = _xy(z, xi)
        return _RECIPES[self.formula_id].kernel(self.params, x, k)

    def modulus_lower_bound(self, x, xi):
        """Analytic lower bound for |A(f,g)|, or None if the pair has zeros."""
        low = _RECIPES[self.formula_id].lower
        if low is None:
            return None
        x, k = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(xi, dtype=float))
        return low(self.params, x, k)

    def oracle(self, z, tol: float = 1e-10) -> complex:
        return transform("Ambiguity", self.f, self.g, z, tol)

    def to_json(self) -> dict:
        params = {}
        for key, val in self.params.items():
            params[key] = [val.real, val.imag] if isinstance(val, complex) else val
        return {"formula_id": self.formula_id.value, "params": params,
                "f": self.f.to_json(), "g": self.g.to_json()}

    @classmethod
    def from_json(cls, d: dict) -> "KernelPair":
        pair = cls(FormulaId(d["formula_id"]), d.get("params", {}))
        if "f" in d and spec_from_json(d["f"]) != pair.f:
            raise ValueError("f does not match the formula parameters")
        if "g" in d and spec_from_json(d["g"]) != pair.g:
            raise ValueError("g does not match the formula parameters")
        return pair


def _eta_conv(a: float, b: float) -> FunctionSpec:
    return MonomialExp(1, a) if a == b else ConvExpExp(a, b, 1)


def convolution_identity_check(a1: float, a2: float, b1: float, b2: float, grid: GridSpec,
                               tol: float = 1e-9) -> float:
    """Max deviation of the convolution identity for one-sided exponentials.

    With f_i = eta_{a_i}, g_i = eta_{b_i} compares the oracle value of
    ``A(f1 * f2, g1 * g2)(x, xi)`` with
    ``int A(f1, g1)(t, xi) A(f2, g2)(x - t, xi) dt``, the inner ambiguities
    taken in closed form and the outer integral by quadrature.
    """
    f, g = _eta_conv(a1, a2), _eta_conv(b1, b2)
    rate = min(a1, b1, a2, b2)
    bound = 1.0 / ((a1 + b1) * (a2 + b2))
    X, K = grid.mesh()
    worst = 0.0
    for x, xi in zip(X.ravel(), K.ravel()):
        x, xi = float(x), float(xi)
        lhs = transform("Ambiguity", f, g, (x, xi), tol)

        def integrand(t, x=x, xi=xi):
            return amb_onesided(a1, b1, t, xi) * amb_onesided(a2, b2, x - t, xi)

        lo, hi = sorted((0.0, x))
        fn = SampledFunction(integrand, (lo, hi), rate, bound, bound, (0.0, x))
        rhs = integrate_product([_Factor(fn, 1.0, 0.0)], 0.0, tol).value
        worst = max(worst, abs(lhs - rhs))
    return worst
