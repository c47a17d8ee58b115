"""Acceptance suite: one test per criterion, one PASS/FAIL line each.

Run with ``pytest tests/test_acceptance.py -v`` or directly as
``python3 tests/test_acceptance.py``.  Every criterion also checks its time
budget.
"""
import math
import time
from fractions import Fraction

import numpy as np
import pytest
import sympy

from tfzero.core import (
    Gaussian,
    HermiteCombo,
    Indicator,
    MonomialExp,
    OneSidedExp,
    StepFunction,
    TransformKind,
    convert_value,
    fourier_covariance_check,
    polarization_check,
    shift_covariance_check,
)
from tfzero.hurwitz import build_An, max_real_root_part, routh_hurwitz
from tfzero.kernels import (
    FormulaId,
    KernelPair,
    amb_sym_exp_zero_equation,
    convolution_identity_check,
)
from tfzero.oracle import GridSpec, oracle_wigner
from tfzero.polyanalytic import (
    balk_degree_check,
    bargmann_consistency_check,
    degree1_roots,
    polyanalytic_bargmann,
    polyanalytic_zero_search,
)
from tfzero.special import an_bessel_form
from tfzero.steps import (
    StepOnUnit,
    box_fourier_hat,
    convexity_floor,
    convexity_weights,
    counterexample_verify,
    lemma_step_decision,
)
from tfzero.zeros import scan, sign_change_scan

ZERO_FREE = [f for f in FormulaId if f is not FormulaId.SYM_EXP]


def report(capsys, number, title, ok, elapsed, budget, detail=""):
    ok = bool(ok) and elapsed < budget
    line = f"{'PASS' if ok else 'FAIL'} criterion {number}: {title} ({elapsed:.1f} s / {budget:.0f} s)"
    if detail:
        line += f" {detail}"
    if capsys is None:
        print(line)
    else:
        with capsys.disabled():
            print("\n" + line)
    return ok


# -- 1 ------------------------------------------------------------------------

def criterion_1():
    t0 = time.perf_counter()
    X, K = GridSpec.square(-3.0, 3.0, 21).mesh()
    worst = {}
    for fid in ZERO_FREE:
        pair = KernelPair(fid, {})
        closed = pair(X, K)
        orc = np.array([pair.oracle((x, k)) for x, k in zip(X.ravel(), K.ravel())]).reshape(X.shape)
        worst[fid.value] = float(np.abs(closed - orc).max())
    ok = all(v < 1e-6 for v in worst.values())
    return ok, time.perf_counter() - t0, 60, f"max deviation {max(worst.values()):.2e}"


# -- 2 ------------------------------------------------------------------------

def criterion_2():
    t0 = time.perf_counter()
    ok, worst = True, -math.inf
    for n in range(1, 31):
        p = build_An(n)
        r = routh_hurwitz(p)
        m = max_real_root_part(p)
        worst = max(worst, m)
        ok &= r.is_hurwitz and m < -1e-6 and all(d > 0 for d in r.minors)
    return ok, time.perf_counter() - t0, 10, f"largest root real part {worst:.3f}"


# -- 3 ------------------------------------------------------------------------

def criterion_3():
    t0 = time.perf_counter()
    bad = []
    for n in range(2, 31):
        r = routh_hurwitz(build_An(n))
        if not (r.necessary_ok and not r.sufficient_ok):
            bad.append(n)
    detail = f"violating n = {bad}" if bad else ""
    return not bad, time.perf_counter() - t0, 1, detail


# -- 4 ------------------------------------------------------------------------

def criterion_4():
    t0 = time.perf_counter()
    rng = np.random.default_rng(20)
    worst = 0.0
    for n in range(0, 11):
        p = build_An(n)
        z = rng.uniform(1e-3, 10.0, 100) + 1j * rng.uniform(-10.0, 10.0, 100)
        ref = np.array([complex(p(complex(v))) for v in z])
        worst = max(worst, float(np.max(np.abs(an_bessel_form(n, z) / ref - 1))))
    return worst < 1e-10, time.perf_counter() - t0, 1, f"max relative error {worst:.2e}"


# -- 5 ------------------------------------------------------------------------

def criterion_5():
    t0 = time.perf_counter()
    grid = GridSpec.square(-4.0, 4.0, 401)
    found = {}
    for fid in ZERO_FREE:
        pair = KernelPair(fid, {})
        found[fid.value] = len(scan(pair, grid, 1e-8, pair.modulus_lower_bound).zeros)
    sym = KernelPair(FormulaId.SYM_EXP, {"a": 1.0})
    rep = scan(sym, grid, 1e-8)
    good = [(p, r) for p, r in rep.zeros if p.xi != 0
            and r < 1e-8 and abs(amb_sym_exp_zero_equation(1.0, p.x, p.xi)) < 1e-8]
    ok = not any(found.values()) and bool(good)
    return ok, time.perf_counter() - t0, 120, f"zeros in zero-free kernels {sum(found.values())}, " \
                                              f"symmetric-exponential zeros {len(good)}"


# -- 6 ------------------------------------------------------------------------

def _wigner(f):
    fs = f.sampled()

    def fn(x, k):
        r = oracle_wigner(fs, fs, (x, k), 1e-9, full_output=True)
        return r.value.real, r.error + 1e-12
    return fn


def criterion_6():
    t0 = time.perf_counter()
    grid = GridSpec.square(-2.0, 2.0, 21)
    # f_1 = t eta_1 = eta_1 * eta_1
    both = {name: sign_change_scan(_wigner(f), grid).both
            for name, f in (("eta_1", OneSidedExp(1.0)), ("f_1", MonomialExp(1, 1.0)), ("chi", Indicator()))}
    h0 = sign_change_scan(_wigner(HermiteCombo.from_hermite([1.0])), grid)
    ok = all(both.values()) and h0.minus is None and h0.min_value > 0
    return ok, time.perf_counter() - t0, 60, f"both signs {both}, h0 min {h0.min_value:.3e}"


# -- 7 ------------------------------------------------------------------------

def criterion_7():
    t0 = time.perf_counter()
    rng = np.random.default_rng(21)
    dev = 0.0
    for dp in range(3):
        for dq in range(3):
            P = rng.normal(size=dp + 1) + 1j * rng.normal(size=dp + 1)
            Q = rng.normal(size=dq + 1) + 1j * rng.normal(size=dq + 1)
            pts = rng.uniform(-1.5, 1.5, 20) + 1j * rng.uniform(-1.5, 1.5, 20)
            dev = max(dev, bargmann_consistency_check(P, Q, pts))
    res = 0.0
    for _ in range(100):
        a, b = complex(*rng.normal(size=2)), complex(*rng.normal(size=2))
        for z in degree1_roots(a, b):
            res = max(res, abs(math.pi * (z + a) * (z.conjugate() + b.conjugate()) - 1))
    total = found = 0
    for _ in range(60):
        dp, dq = (int(v) for v in rng.integers(0, 4, size=2))
        if dp + dq > 6:
            continue
        Qp = polyanalytic_bargmann(rng.normal(size=dp + 1) + 1j * rng.normal(size=dp + 1),
                                   rng.normal(size=dq + 1) + 1j * rng.normal(size=dq + 1))
        if balk_degree_check(Qp):
            total += 1
            found += bool(polyanalytic_zero_search(Qp).zeros)
    ok = dev < 1e-6 and res < 1e-12 and found == total
    return ok, time.perf_counter() - t0, 60, \
        f"consistency {dev:.2e}, degree-1 residual {res:.2e}, balk zeros {found}/{total}"


# -- 8 ------------------------------------------------------------------------

def _monotone_values(rng, n):
    v = np.sort(rng.uniform(0.1, 5.0, n)) + np.arange(n) * 1e-3
    return tuple(v[::-1] if rng.random() < 0.5 else v)


def _rational_battery(rng):
    worst = 0.0
    for _ in range(200):
        qs = sorted({Fraction(int(rng.integers(1, q)), int(q)) for q in rng.integers(2, 12, size=rng.integers(0, 4))})
        s = StepOnUnit((Fraction(0),) + tuple(qs), _monotone_values(rng, len(qs) + 1))
        d = lemma_step_decision(s)
        if not d.zero_exists:
            return math.inf
        # |fhat(-xi)| at the witness
        worst = max(worst, float(abs(box_fourier_hat(s, -d.witness_xi))))
    return worst


def _irrational_battery(rng, Q=50.0):
    xi = np.linspace(-Q, Q, 100_000)  # even count: 0 is not a sample
    ok = True
    for _ in range(200):
        m = int(rng.integers(1, 4))
        irr = sympy.sqrt(2) * sympy.Rational(int(rng.integers(1, 50)), int(rng.integers(71, 100)))
        rat = {Fraction(int(rng.integers(1, 40)), 41) for _ in range(m - 1)}
        bps = tuple(sorted(rat | {irr}, key=float))
        s = StepOnUnit((0,) + bps, _monotone_values(rng, len(bps) + 1))
        d = lemma_step_decision(s)
        _, w, _ = convexity_weights(s)
        floor = convexity_floor(s, xi)
        I = np.abs(2j * np.pi * xi * box_fourier_hat(s, -xi))
        ok &= (not d.zero_exists and np.all(w >= 0) and abs(w.sum() - 1) < 1e-12
               and floor.min() > 0 and I.min() >= floor.min() and np.all(I >= floor * (1 - 1e-9)))
    return ok


def criterion_8():
    t0 = time.perf_counter()
    grid = GridSpec((0.0, 3.0), (-5.0, 5.0), 201, 201)
    mono = counterexample_verify("monotone", "sqrt2/2", grid)
    lp = counterexample_verify("lp", "sqrt2/2", grid)
    rng = np.random.default_rng(22)
    rational = _rational_battery(rng)
    irrational = _irrational_battery(rng)
    ok = (mono.zero_free and "analytic per-x" in mono.certificates
          and bool(lp.zeros) and lp.min_modulus < 1e-8 and rational < 1e-12 and irrational)
    return ok, time.perf_counter() - t0, 120, \
        f"lp zero |V| {lp.min_modulus:.1e}, rational witness {rational:.1e}, irrational floor ok {irrational}"


# -- 9 ------------------------------------------------------------------------

def criterion_9():
    t0 = time.perf_counter()
    rng = np.random.default_rng(23)
    kinds = list(TransformKind)
    rt = 0.0
    for (x, xi), v in zip(rng.uniform(-6, 6, (2000, 2)), rng.normal(size=2000) + 1j * rng.normal(size=2000)):
        for kf in kinds:
            for kt in kinds:
                w, z, _ = convert_value(kf, kt, v, (x, xi))
                back, z0, _ = convert_value(kt, kf, w, z)
                rt = max(rt, abs(back - v) / abs(v), abs(z0.x - x), abs(z0.xi - xi))
    grid = GridSpec.square(-2.0, 2.0, 5)
    shift = max(
        shift_covariance_check(Gaussian(1.0), OneSidedExp(1.0), (0.5, -0.3), (1.0, 0.2), grid),
        shift_covariance_check(MonomialExp(1, 1.0), HermiteCombo((1, 0.4)), (-0.7, 0.4), (0.2, 1.1), grid),
    )
    small = GridSpec.square(-1.0, 1.0, 3)
    four = max(
        fourier_covariance_check(Gaussian(1.0), Gaussian(1 + 0.5j), small, 1e-9),
        fourier_covariance_check(OneSidedExp(1.0), OneSidedExp(2.0), small, 1e-7),
    )
    conv = max(convolution_identity_check(1, 2, 1, 2, grid), convolution_identity_check(1, 1, 2, 3, grid))
    pts = rng.uniform(-2, 2, (20, 2))
    pol = max(polarization_check(HermiteCombo((1.0,)), OneSidedExp(1.0), pts),
              polarization_check(StepFunction((0.0, 0.5, 1.0), (1.0, -2.0)), MonomialExp(2, 1.0), pts))
    ok = rt < 1e-13 and shift < 1e-5 and four < 1e-5 and conv < 1e-5 and pol < 1e-5
    return ok, time.perf_counter() - t0, 60, \
        f"round trip {rt:.1e}, shift {shift:.1e}, fourier {four:.1e}, conv {conv:.1e}, polarization {pol:.1e}"


CRITERIA = [
    (1, "closed forms agree with the quadrature oracle", criterion_1),
    (2, "A_n is Hurwitz for n = 1..30", criterion_2),
    (3, "A_n meets the necessary but not the sufficient coefficient condition, n = 2..30", criterion_3),
    (4, "Bessel form of A_n", criterion_4),
    (5, "zero-freeness scans and the symmetric-exponential zero", criterion_5),
    (6, "Wigner sign-change witnesses", criterion_6),
    (7, "polyanalytic Bargmann conformance", criterion_7),
    (8, "step-function dichotomy and lemma batteries", criterion_8),
    (9, "transform relations", criterion_9),
]


@pytest.mark.parametrize("number,title,fn", CRITERIA, ids=[f"criterion_{n}" for n, _, _ in CRITERIA])
def test_criterion(number, title, fn, capsys):
    ok, elapsed, budget, detail = fn()
    assert report(capsys, number, title, ok, elapsed, budget, detail)


if __name__ == "__main__":
    results = [report(None, n, t, *fn()) for n, t, fn in CRITERIA]
    raise SystemExit(0 if all(results) else 1)
