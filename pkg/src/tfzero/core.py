"""Phase-space points, the function-family catalogue and the exact relations
between the Wigner distribution, the ambiguity function and the STFT.

Conventions (all integrals over the real line)::

    W(f,g)(x,xi) = int f(x + t/2) conj(g(x - t/2)) e^{-2 pi i xi t} dt
    A(f,g)(x,xi) = int f(t + x/2) conj(g(t - x/2)) e^{-2 pi i xi t} dt
    V_g f(x,xi)  = int f(t) conj(g(t - x)) e^{-2 pi i xi t} dt

and ``I g(t) = g(-t)``.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .oracle import (
    GridSpec,
    SampledFunction,
    oracle_ambiguity,
    oracle_fourier,
    oracle_stft,
    oracle_wigner,
)
from .special import gamma_complex

__all__ = [
    "PhaseSpacePoint",
    "TransformKind",
    "FunctionSpec",
    "Gaussian",
    "OneSidedExp",
    "ConvExpExp",
    "MonomialExp",
    "GumbelExp",
    "HermiteCombo",
    "StepFunction",
    "Indicator",
    "Sampled",
    "hermite_function",
    "reflect",
    "spec_from_json",
    "transform",
    "convert_value",
    "shift_covariance_check",
    "fourier_covariance_check",
    "polarization_check",
]


@dataclass(frozen=True)
class PhaseSpacePoint:
    x: float
    xi: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.xi)):
            raise ValueError("phase-space coordinates must be finite")

    def __iter__(self):
        yield self.x
        yield self.xi

    def scaled(self, s: float) -> "PhaseSpacePoint":
        return PhaseSpacePoint(self.x * s, self.xi * s)

    @property
    def complex(self) -> complex:
        return complex(self.x, self.xi)


def _point(z) -> PhaseSpacePoint:
    return z if isinstance(z, PhaseSpacePoint) else PhaseSpacePoint(float(z[0]), float(z[1]))


class TransformKind(enum.Enum):
    WIGNER = "Wigner"
    AMBIGUITY = "Ambiguity"
    STFT = "STFT"


# ---------------------------------------------------------------------------
# JSON helpers

def _cjson(c) -> list:
    c = complex(c)
    return [c.real, c.imag]


def _cparse(v) -> complex:
    if isinstance(v, (list, tuple)):
        return complex(float(v[0]), float(v[1]))
    return complex(v)


def _positive(name, v):
    if not (isinstance(v, (int, float, np.floating, np.integer)) and math.isfinite(v) and v > 0):
        raise ValueError(f"{name} must be a positive real, got {v!r}")
    return float(v)


class FunctionSpec:
    """Base class for the function families.

    Subclasses are frozen dataclasses.  Each one evaluates pointwise, exposes
    the tail data the quadrature oracle needs through :meth:`sampled`, knows
    its reflection and, where it has one, its analytic Fourier transform.
    """

    family: str = ""

    def __call__(self, t):
        raise NotImplementedError

    def sampled(self) -> SampledFunction:
        raise NotImplementedError

    def reflect(self) -> "FunctionSpec":
        return Sampled(source=self, reflected=True)

    def fourier(self) -> Optional[SampledFunction]:
        """Analytic Fourier transform as a sampled function, if known."""
        return None

    def to_json(self) -> dict:
        raise NotImplementedError


_REGISTRY = {}


def _register(cls):
    _REGISTRY[cls.family] = cls
    return cls


def _power_bound(m) -> float:
    # |m + 2 pi i w| >= min(m, 2 pi) (1 + |w|) / 2 for m > 0
    return 2.0 / min(m, 2 * math.pi)


@_register
@dataclass(frozen=True)
class Gaussian(FunctionSpec):
    """gamma_a(t) = exp(-a pi t^2), Re a > 0."""

    a: complex = 1.0
    family = "Gaussian"

    def __post_init__(self):
        a = complex(self.a)
        if not (cmath.isfinite(a) and a.real > 0):
            raise ValueError("Gaussian needs Re a > 0")
        object.__setattr__(self, "a", a)

    def __call__(self, t):
        return np.exp(-self.a * np.pi * np.asarray(t, dtype=float) ** 2)

    def sampled(self):
        r = self.a.real
        R = 1.0 / math.sqrt(r)
        return SampledFunction(self, (-R, R), 2 * math.pi * r * R, math.exp(-math.pi), 1.0)

    def reflect(self):
        return self

    def fourier(self):
        a = self.a
        inv = 1.0 / a
        r = inv.real
        R = 1.0 / math.sqrt(r)
        amp = abs(a ** -0.5)
        return SampledFunction(lambda w: a ** -0.5 * np.exp(-np.pi * w * w / a), (-R, R),
                               2 * math.pi * r * R, amp * math.exp(-math.pi), amp)

    def to_json(self):
        return {"family": self.family, "a": _cjson(self.a)}

    @classmethod
    def from_json(cls, d):
        return cls(_cparse(d["a"]))


@_register
@dataclass(frozen=True)
class OneSidedExp(FunctionSpec):
    """eta_a(t) = e^{-at} on t > 0, or its reflection."""

    a: float = 1.0
    reflected: bool = False
    family = "OneSidedExp"

    def __post_init__(self):
        object.__setattr__(self, "a", _positive("a", self.a))

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        s = -t if self.reflected else t
        return np.where(s > 0, np.exp(-self.a * np.where(s > 0, s, 0.0)), 0.0)

    def sampled(self):
        return SampledFunction(self, (0.0, 0.0), self.a, 1.0, 1.0, (0.0,))

    def reflect(self):
        return OneSidedExp(self.a, not self.reflected)

    def fourier(self):
        a, sg = self.a, (-1.0 if self.reflected else 1.0)
        return SampledFunction(lambda w: 1.0 / (a + sg * 2j * np.pi * w), (0.0, 0.0), 1.0,
                               _power_bound(a), 1.0 / a, tail="power")

    def to_json(self):
        return {"family": self.family, "a": self.a, "reflected": self.reflected}

    @classmethod
    def from_json(cls, d):
        return cls(float(d["a"]), bool(d.get("reflected", False)))


@_register
@dataclass(frozen=True)
class ConvExpExp(FunctionSpec):
    """eta_a * eta_b (sign +1) or eta_a * I eta_b (sign -1)."""

    a: float = 1.0
    b: float = 2.0
    sign: int = 1
    family = "ConvExpExp"

    def __post_init__(self):
        object.__setattr__(self, "a", _positive("a", self.a))
        object.__setattr__(self, "b", _positive("b", self.b))
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        a, b = self.a, self.b
        pos = t > 0
        tp = np.where(pos, t, 0.0)
        if self.sign == -1:
            tn = np.where(pos, 0.0, t)
            return np.where(pos, np.exp(-a * tp), np.exp(b * tn)) / (a + b)
        if a == b:
            return np.where(pos, tp * np.exp(-a * tp), 0.0)
        # (e^{-at} - e^{-bt}) / (b - a) written without cancellation
        m = min(a, b)
        val = np.exp(-m * tp) * -np.expm1(-abs(b - a) * tp) / abs(b - a)
        return np.where(pos, val, 0.0)

    def sampled(self):
        a, b = self.a, self.b
        if self.sign == -1:
            return SampledFunction(self, (0.0, 0.0), min(a, b), 1.0 / (a + b), 1.0 / (a + b), (0.0,))
        m = min(a, b)
        return SampledFunction(self, (0.0, 0.0), m / 2, 2.0 / (math.e * m), 1.0 / max(a, b), (0.0,))

    def reflect(self):
        if self.sign == -1:
            return ConvExpExp(self.b, self.a, -1)
        return Sampled(source=self, reflected=True)

    def fourier(self):
        a, b, s = self.a, self.b, self.sign
        return SampledFunction(lambda w: 1.0 / ((a + 2j * np.pi * w) * (b + s * 2j * np.pi * w)),
                               (0.0, 0.0), 2.0, _power_bound(a) * _power_bound(b), 1.0 / (a * b),
                               tail="power")

    def to_json(self):
        return {"family": self.family, "a": self.a, "b": self.b, "sign": self.sign}

    @classmethod
    def from_json(cls, d):
        return cls(float(d["a"]), float(d["b"]), int(d["sign"]))


@_register
@dataclass(frozen=True)
class MonomialExp(FunctionSpec):
    """t^n e^{-at} on t > 0."""

    n: int = 1
    a: float = 1.0
    family = "MonomialExp"

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 0:
            raise ValueError("n must be a nonnegative integer")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "a", _positive("a", self.a))

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        tp = np.where(t > 0, t, 0.0)
        return np.where(t > 0, tp ** self.n * np.exp(-self.a * tp), 0.0)

    def sampled(self):
        n, a = self.n, self.a
        sup = (n / a) ** n * math.exp(-n) if n else 1.0
        c = (2 * n / a) ** n * math.exp(-n) if n else 1.0
        return SampledFunction(self, (0.0, 0.0), a / 2, c, sup, (0.0,))

    def fourier(self):
        n, a = self.n, self.a
        fact = math.factorial(n)
        return SampledFunction(lambda w: fact / (a + 2j * np.pi * w) ** (n + 1), (0.0, 0.0),
                               n + 1.0, fact * _power_bound(a) ** (n + 1), fact / a ** (n + 1),
                               tail="power")

    def to_json(self):
        return {"family": self.family, "n": self.n, "a": self.a}

    @classmethod
    def from_json(cls, d):
        return cls(int(d["n"]), float(d["a"]))


@_register
@dataclass(frozen=True)
class GumbelExp(FunctionSpec):
    """exp(a t - b e^t)."""

    a: float = 1.0
    b: float = 1.0
    family = "GumbelExp"

    def __post_init__(self):
        object.__setattr__(self, "a", _positive("a", self.a))
        object.__setattr__(self, "b", _positive("b", self.b))

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        return np.exp(self.a * t - self.b * np.exp(np.minimum(t, 700.0)))

    def _log(self, t):
        return self.a * t - self.b * math.exp(t)

    def sampled(self):
        a, b = self.a, self.b
        peak = math.log(a / b)
        # right of t_r the log-derivative a - b e^t is <= -1; left of t_l it is <= a
        t_r = math.log((a + 1.0) / b)
        t_l = peak - 5.0
        c = math.exp(max(self._log(t_l), self._log(t_r)))
        return SampledFunction(self, (t_l, t_r), min(a, 1.0), c, math.exp(self._log(peak)))

    def fourier(self):
        a, b = self.a, self.b

        def fh(w):
            s = a - 2j * np.pi * np.asarray(w, dtype=float)
            return b ** (-s) * gamma_complex(s)

        # |Gamma(a + iy)| <= Gamma(a) and decays like e^{-pi |y| / 2}; rate 3 < pi^2
        ws = np.linspace(0.0, 40.0, 4001)
        c = 1.1 * float(np.max(np.abs(fh(ws)) * np.exp(3.0 * ws)))
        return SampledFunction(fh, (0.0, 0.0), 3.0, c, c)

    def to_json(self):
        return {"family": self.family, "a": self.a, "b": self.b}

    @classmethod
    def from_json(cls, d):
        return cls(float(d["a"]), float(d["b"]))


def hermite_function(n: int, t):
    """h_n(t) = 2^{1/4} H_n(sqrt(2 pi) t) e^{-pi t^2} / sqrt(2^n n!), L2-normalised.

    Computed with the three-term recurrence for normalised Hermite functions,
    which stays finite where H_n and the Gaussian separately would not.
    """
    t = np.asarray(t, dtype=float)
    y = math.sqrt(2 * math.pi) * t
    h_prev = np.zeros_like(y)
    h = (2 * math.pi) ** 0.25 * math.pi ** -0.25 * np.exp(-0.5 * y * y)
    for k in range(n):
        h_prev, h = h, math.sqrt(2.0 / (k + 1)) * y * h - math.sqrt(k / (k + 1)) * h_prev
    return h


@_register
@dataclass(frozen=True)
class HermiteCombo(FunctionSpec):
    """g = sum_n sqrt(pi^n n!) c_n h_n, stored through P(z) = sum c_n z^n.

    With this weighting the Bargmann transform of g is P(pi z).
    """

    coeffs: tuple = (1.0,)
    family = "HermiteCombo"

    def __post_init__(self):
        cs = tuple(complex(c) for c in self.coeffs)
        if not cs or cs[-1] == 0:
            raise ValueError("HermiteCombo needs a nonempty list with nonzero leading coefficient")
        object.__setattr__(self, "coeffs", cs)

    @classmethod
    def from_hermite(cls, weights) -> "HermiteCombo":
        """From plain coefficients w_n of g = sum w_n h_n."""
        return cls(tuple(complex(w) / math.sqrt(math.pi ** n * math.factorial(n))
                         for n, w in enumerate(weights)))

    def hermite_weights(self) -> tuple:
        return tuple(c * math.sqrt(math.pi ** n * math.factorial(n)) for n, c in enumerate(self.coeffs))

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        out = np.zeros(t.shape, dtype=complex)
        for n, w in enumerate(self.hermite_weights()):
            if w != 0:
                out = out + w * hermite_function(n, t)
        return out

    def sampled(self):
        n = len(self.coeffs) - 1
        wsum = sum(abs(w) for w in self.hermite_weights())
        # normalised Hermite functions are bounded by pi^{-1/4} (2 pi)^{1/4} < 1.2
        R = math.sqrt(2 * n + 1) / math.sqrt(math.pi) + 1.0
        # beyond the turning point |h_n| decays at least like the Gaussian tail at R
        c = 1.2 * wsum
        return SampledFunction(self, (-R, R), math.pi * R, c, c)

    def reflect(self):
        return HermiteCombo(tuple(c * (-1) ** n for n, c in enumerate(self.coeffs)))

    def fourier(self):
        # h_n^ = (-i)^n h_n
        return HermiteCombo(tuple(c * (-1j) ** n for n, c in enumerate(self.coeffs))).sampled()

    def to_json(self):
        return {"family": self.family, "coeffs": [_cjson(c) for c in self.coeffs]}

    @classmethod
    def from_json(cls, d):
        return cls(tuple(_cparse(c) for c in d["coeffs"]))


def _step_fourier(edges, values):
    edges = np.asarray(edges, dtype=float)
    vals = np.asarray(values, dtype=complex)

    def fh(w):
        w = np.asarray(w, dtype=float)
        flat = w.ravel()
        out = np.empty(flat.shape, dtype=complex)
        small = np.abs(flat) < 1e-12
        lens = np.diff(edges)
        out[small] = np.sum(vals * lens)
        ws = flat[~small][:, None]
        e = np.exp(-2j * np.pi * ws * edges[None, :])
        out[~small] = ((e[:, :-1] - e[:, 1:]) @ vals) / (2j * np.pi * ws[:, 0])
        return out.reshape(w.shape)

    l1 = float(np.sum(np.abs(vals) * np.diff(edges)))
    c = 2.0 * max(l1, float(np.sum(np.abs(vals))) / math.pi)
    return SampledFunction(fh, (0.0, 0.0), 1.0, c, l1, tail="power")


@_register
@dataclass(frozen=True)
class StepFunction(FunctionSpec):
    """Piecewise constant: ``values[k]`` on ``(edges[k], edges[k+1])``, zero outside."""

    edges: tuple = (0.0, 1.0)
    values: tuple = (1.0,)
    family = "StepFunction"

    def __post_init__(self):
        e = tuple(float(x) for x in self.edges)
        v = tuple(complex(c) for c in self.values)
        if len(e) != len(v) + 1 or not v:
            raise ValueError("need len(edges) == len(values) + 1 >= 2")
        if any(b <= a for a, b in zip(e, e[1:])) or not all(map(math.isfinite, e)):
            raise ValueError("edges must be finite and strictly increasing")
        object.__setattr__(self, "edges", e)
        object.__setattr__(self, "values", v)

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        idx = np.searchsorted(self.edges, t, side="right") - 1
        inside = (idx >= 0) & (idx < len(self.values))
        vals = np.asarray(self.values + (0j,), dtype=complex)
        return np.where(inside, vals[np.where(inside, idx, -1)], 0.0)

    def sampled(self):
        sup = max(abs(v) for v in self.values)
        return SampledFunction(self, (self.edges[0], self.edges[-1]), math.inf, sup, sup, self.edges)

    def reflect(self):
        return StepFunction(tuple(-x for x in reversed(self.edges)), tuple(reversed(self.values)))

    def fourier(self):
        return _step_fourier(self.edges, self.values)

    def to_json(self):
        return {"family": self.family, "edges": list(self.edges),
                "values": [_cjson(v) for v in self.values]}

    @classmethod
    def from_json(cls, d):
        return cls(tuple(d["edges"]), tuple(_cparse(v) for v in d["values"]))


@_register
@dataclass(frozen=True)
class Indicator(FunctionSpec):
    """chi = 1 on (0, 1)."""

    family = "Indicator"

    def as_step(self) -> StepFunction:
        return StepFunction((0.0, 1.0), (1.0,))

    def __call__(self, t):
        return self.as_step()(t)

    def sampled(self):
        return self.as_step().sampled()

    def reflect(self):
        return Sampled(self, True)

    def fourier(self):
        return self.as_step().fourier()

    def to_json(self):
        return {"family": self.family}

    @classmethod
    def from_json(cls, d):
        return cls()


@_register
@dataclass(frozen=True)
class Sampled(FunctionSpec):
    """Either a (possibly reflected) view of another spec, or tabulated data.

    Tabulated data are interpolated linearly between ``knots`` and vanish
    outside them.
    """

    source: Optional[FunctionSpec] = None
    reflected: bool = False
    knots: tuple = ()
    values: tuple = ()
    family = "Sampled"

    def __post_init__(self):
        if self.source is None:
            k = tuple(float(x) for x in self.knots)
            v = tuple(complex(c) for c in self.values)
            if len(k) < 2 or len(k) != len(v):
                raise ValueError("tabulated Sampled needs matching knots/values, at least two")
            if any(b <= a for a, b in zip(k, k[1:])):
                raise ValueError("knots must be strictly increasing")
            object.__setattr__(self, "knots", k)
            object.__setattr__(self, "values", v)

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        if self.source is not None:
            return self.source(-t if self.reflected else t)
        k = np.asarray(self.knots)
        v = np.asarray(self.values)
        inside = (t >= k[0]) & (t <= k[-1])
        out = np.interp(t, k, v.real) + 1j * np.interp(t, k, v.imag)
        return np.where(inside, out, 0.0)

    def sampled(self):
        if self.source is None:
            sup = max(abs(v) for v in self.values)
            return SampledFunction(self, (self.knots[0], self.knots[-1]), math.inf, sup, sup, self.knots)
        s = self.source.sampled()
        if not self.reflected:
            return SampledFunction(self, s.support_hint, s.decay_rate, s.bound, s.sup,
                                   s.breakpoints, s.tail)
        lo, hi = s.support_hint
        bps = s.breakpoints
        if callable(bps):
            rb = lambda a, b, _f=bps: [-p for p in _f(-b, -a)]
        else:
            rb = tuple(-p for p in bps)
        return SampledFunction(self, (-hi, -lo), s.decay_rate, s.bound, s.sup, rb, s.tail)

    def reflect(self):
        if self.source is not None:
            if self.reflected:
                return self.source
            return Sampled(source=self.source, reflected=True)
        return Sampled(knots=tuple(-x for x in reversed(self.knots)), values=tuple(reversed(self.values)))

    def fourier(self):
        if self.source is None:
            return None
        fs = self.source.fourier()
        if fs is None or not self.reflected:
            return fs
        # (I f)^(w) = f^(-w)
        lo, hi = fs.support_hint
        return SampledFunction(lambda w: fs(-np.asarray(w, dtype=float)), (-hi, -lo),
                               fs.decay_rate, fs.bound, fs.sup, (), fs.tail)

    def to_json(self):
        if self.source is not None:
            return {"family": self.family, "source": self.source.to_json(), "reflected": self.reflected}
        return {"family": self.family, "knots": list(self.knots),
                "values": [_cjson(v) for v in self.values]}

    @classmethod
    def from_json(cls, d):
        if "source" in d:
            return cls(source=spec_from_json(d["source"]), reflected=bool(d.get("reflected", False)))
        return cls(knots=tuple(d["knots"]), values=tuple(_cparse(v) for v in d["values"]))


def spec_from_json(d: dict) -> FunctionSpec:
    """Inverse of ``FunctionSpec.to_json``."""
    try:
        cls = _REGISTRY[d["family"]]
    except KeyError as exc:
        raise ValueError(f"unknown function family {d.get('family')!r}") from exc
    return cls.from_json(d)


def reflect(f: FunctionSpec) -> FunctionSpec:
    """Spec of I f, with (I f)(t) = f(-t)."""
    return f.reflect()


def _as_sampled(f) -> SampledFunction:
    return f if isinstance(f, SampledFunction) else f.sampled()


_ORACLES = {
    TransformKind.WIGNER: oracle_wigner,
    TransformKind.AMBIGUITY: oracle_ambiguity,
    TransformKind.STFT: oracle_stft,
}


def transform(kind: TransformKind, f, g, z, tol: float = 1e-10) -> complex:
    """Oracle value of W, A or V_g f at z for specs or sampled functions."""
    return _ORACLES[TransformKind(kind)](_as_sampled(f), _as_sampled(g), tuple(_point(z)), tol)


# ---------------------------------------------------------------------------
# exact relations

def convert_value(kind_from: TransformKind, kind_to: TransformKind, value: complex, z):
    """Re-express a transform value in another transform.

    Returns ``(value', z', reflect_window)`` such that the ``kind_to``
    transform of ``(f, g')`` at ``z'`` equals ``value'``, where ``g'`` is the
    original window, reflected when the flag is set.  Uses

        A(f,g)(x,xi) = e^{i pi x xi} V_g f(x,xi)
        A(f,g)(z)    = 1/2 W(f, I g)(z/2)
        W(f,g)(x,xi) = 2 e^{4 pi i x xi} V_{Ig} f(2x, 2xi)
    """
    kf, kt = TransformKind(kind_from), TransformKind(kind_to)
    z = _point(z)
    v = complex(value)
    x, xi = z.x, z.xi
    A, W, V = TransformKind.AMBIGUITY, TransformKind.WIGNER, TransformKind.STFT
    if kf == kt:
        return v, z, False
    if (kf, kt) == (A, V):
        return cmath.exp(-1j * math.pi * x * xi) * v, z, False
    if (kf, kt) == (V, A):
        return cmath.exp(1j * math.pi * x * xi) * v, z, False
    if (kf, kt) == (A, W):
        return 2.0 * v, z.scaled(0.5), True
    if (kf, kt) == (W, A):
        return 0.5 * v, z.scaled(2.0), True
    if (kf, kt) == (V, W):
        return 2.0 * cmath.exp(1j * math.pi * x * xi) * v, z.scaled(0.5), True
    # W -> V
    return 0.5 * cmath.exp(-4j * math.pi * x * xi) * v, z.scaled(2.0), True


def _shifted(f: SampledFunction, a: float, b: float) -> SampledFunction:
    """pi(a, b) f (t) = e^{2 pi i b t} f(t - a)."""
    if a == 0 and b == 0:
        return f
    lo, hi = f.support_hint
    bps = f.breakpoints
    if callable(bps):
        sb = lambda p, q, _f=bps: [s + a for s in _f(p - a, q - a)]
    else:
        sb = tuple(s + a for s in bps)
    return SampledFunction(lambda t: np.exp(2j * np.pi * b * t) * f(t - a), (lo + a, hi + a),
                           f.decay_rate, f.bound, f.sup, sb, f.tail)


def shift_covariance_check(f, g, w, w2, grid: GridSpec, tol: float = 1e-10) -> float:
    """Max deviation of the phase-space-shift covariance of W over ``grid``.

    Compares ``W(pi(w) f, pi(w2) g)(z)`` with
    ``exp(2 pi i [(b-b2) x - (a-a2) xi] + i pi (b+b2)(a-a2)) W(f,g)(z - (w+w2)/2)``
    for w = (a, b), w2 = (a2, b2), both sides by quadrature.
    """
    a, b = _point(w)
    a2, b2 = _point(w2)
    if (a, b) == (a2, b2) == (0.0, 0.0):
        return 0.0
    fs, gs = _as_sampled(f), _as_sampled(g)
    fw, gw = _shifted(fs, a, b), _shifted(gs, a2, b2)
    ca, cb = (a + a2) / 2, (b + b2) / 2
    X, K = grid.mesh()
    worst = 0.0
    for x, xi in zip(X.ravel(), K.ravel()):
        lhs = oracle_wigner(fw, gw, (x, xi), tol)
        phase = cmath.exp(2j * math.pi * ((b - b2) * x - (a - a2) * xi) + 1j * math.pi * (b + b2) * (a - a2))
        rhs = phase * oracle_wigner(fs, gs, (x - ca, xi - cb), tol)
        worst = max(worst, abs(lhs - rhs))
    return worst


def _validated_fourier(f: FunctionSpec, tol: float) -> SampledFunction:
    fh = f.fourier()
    fs = f.sampled()
    if fh is None:
        raise ValueError(f"no analytic Fourier transform for family {f.family}")
    for w in (-1.3, -0.4, 0.0, 0.35, 1.1):
        ref = oracle_fourier(fs, w, tol)
        if abs(complex(fh(np.array(w))) - ref) > max(1e3 * tol, 1e-9):
            raise ValueError(f"Fourier transform of {f.family} disagrees with quadrature at {w}")
    return fh


def fourier_covariance_check(f: FunctionSpec, g: FunctionSpec, grid: GridSpec, tol: float = 1e-9) -> float:
    """Max over ``grid`` of ``|W(f^, g^)(x, xi) - W(f, g)(-xi, x)|``.

    The analytic Fourier transforms are first checked against quadrature at a
    few frequencies.
    """
    fh, gh = _validated_fourier(f, tol), _validated_fourier(g, tol)
    fs, gs = f.sampled(), g.sampled()
    X, K = grid.mesh()
    worst = 0.0
    for x, xi in zip(X.ravel(), K.ravel()):
        lhs = oracle_wigner(fh, gh, (x, xi), tol)
        rhs = oracle_wigner(fs, gs, (-xi, x), tol)
        worst = max(worst, abs(lhs - rhs))
    return worst


def _combine(f: SampledFunction, g: SampledFunction, c: complex) -> SampledFunction:
    """The sampled function f + c g with merged decay data."""
    if f.tail != g.tail:
        raise ValueError("cannot combine exponential and power tails")
    lo = min(f.support_hint[0], g.support_hint[0])
    hi = max(f.support_hint[1], g.support_hint[1])
    if callable(f.breakpoints) or callable(g.breakpoints):
        bps = lambda p, q: [*f.breakpoints_in(p, q), *g.breakpoints_in(p, q)]
    else:
        bps = tuple(sorted({*f.breakpoints, *g.breakpoints}))
    return SampledFunction(lambda t: f(t) + c * g(t), (lo, hi), min(f.decay_rate, g.decay_rate),
                           f.bound + abs(c) * g.bound, f.sup_bound + abs(c) * g.sup_bound, bps, f.tail)


def polarization_check(f, g, points, tol: float = 1e-10) -> float:
    """Max of ``|W(f+g, f+g) - W(f-g, f-g) - 4 Re W(f, g)|`` over ``points``."""
    fs, gs = _as_sampled(f), _as_sampled(g)
    plus, minus = _combine(fs, gs, 1.0), _combine(fs, gs, -1.0)
    worst = 0.0
    for z in points:
        z = tuple(_point(z))
        lhs = oracle_wigner(plus, plus, z, tol) - oracle_wigner(minus, minus, z, tol)
        worst = max(worst, abs(lhs - 4 * oracle_wigner(fs, gs, z, tol).real))
    return worst
