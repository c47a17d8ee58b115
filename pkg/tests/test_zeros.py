import math

import numpy as np
import pytest

from tfzero.core import HermiteCombo, Indicator, OneSidedExp, transform
from tfzero.kernels import FormulaId, KernelPair, amb_onesided, amb_sym_exp
from tfzero.oracle import GridSpec
from tfzero.zeros import ZeroReport, default_workers, scan, sign_change_scan


def test_onesided_minimum_at_corner():
    grid = GridSpec.square(-3, 3, 61)
    rep = scan(lambda x, k: amb_onesided(1, 1, x, k), grid)
    expected = math.exp(-3) / (2 * math.sqrt(1 + 9 * math.pi ** 2))
    assert rep.zero_free
    assert abs(rep.min_modulus - expected) < 1e-15
    # ties between the four corners resolve to the lexicographically smallest
    assert (rep.argmin.x, rep.argmin.xi) == (-3.0, -3.0)


def test_constant_function():
    rep = scan(lambda x, k: np.ones_like(np.asarray(x), dtype=complex), GridSpec.square(-1, 1, 11))
    assert rep.zero_free and rep.min_modulus == 1.0 and not rep.refined


def test_analytic_certificate():
    pair = KernelPair(FormulaId.GAUSS, {})
    rep = scan(pair, GridSpec.square(-4, 4, 81), lower_bound=pair.modulus_lower_bound)
    assert rep.zero_free and "analytic" in rep.certificates and "grid-evidence" in rep.certificates


def test_bogus_lower_bound_is_not_certified():
    pair = KernelPair(FormulaId.GAUSS, {})
    rep = scan(pair, GridSpec.square(-1, 1, 11), lower_bound=lambda X, K: 10 * np.ones_like(X))
    assert "analytic" not in rep.certificates


def test_sym_exp_zero_found():
    rep = scan(lambda x, k: amb_sym_exp(1.0, x, k), GridSpec.square(-4, 4, 201))
    assert rep.zeros
    for p, r in rep.zeros:
        assert r < 1e-8
        assert abs(amb_sym_exp(1.0, (p.x, p.xi))) < 1e-8


def test_scalar_evaluator_finds_zero():
    # z^2 - 0.25 restricted to a grid, evaluated point by point
    def fn(x, k):
        return complex(x, k) ** 2 - 0.25
    rep = scan(fn, GridSpec.square(-1, 1, 21))
    pts = sorted((round(p.x, 9), round(p.xi, 9)) for p, _ in rep.zeros)
    assert pts == [(-0.5, 0.0), (0.5, 0.0)]


def test_zero_outside_grid_is_not_reported():
    # the only zero sits at x = 5, far outside the rectangle
    rep = scan(lambda x, k: (np.asarray(x) - 5) + 1j * np.asarray(k), GridSpec.square(-1, 1, 11))
    assert rep.zero_free


def test_oracle_based_sym_exp_zero():
    pair = KernelPair(FormulaId.SYM_EXP, {"a": 1.0})
    closed = scan(pair, GridSpec.square(-4, 4, 201))
    p, _ = closed.zeros[0]
    v = transform("Ambiguity", pair.f, pair.g, (p.x, p.xi))
    assert abs(v) < 1e-8


def test_sign_scans():
    grid = GridSpec.square(-2, 2, 11)

    def wig(f):
        fs = f
        return lambda x, k: transform("Wigner", fs, fs, (x, k)).real

    s = sign_change_scan(wig(OneSidedExp(1.0)), grid)
    assert s.both and s.min_value < 0 < s.max_value
    s = sign_change_scan(wig(Indicator()), grid)
    assert s.both
    s = sign_change_scan(wig(HermiteCombo.from_hermite([1.0])), grid)
    assert s.minus is None and s.min_value > 0


def test_sign_scan_respects_error_bars():
    grid = GridSpec.square(-1, 1, 5)
    s = sign_change_scan(lambda x, k: (x * 1e-3, 1.0), grid)
    assert s.plus is None and s.minus is None


def test_determinism_and_threads(monkeypatch):
    pair = KernelPair(FormulaId.SYM_EXP, {"a": 1.0})
    grid = GridSpec.square(-3, 3, 61)

    def pointwise(x, k):
        if np.ndim(x):
            raise TypeError("scalar evaluator")
        return complex(pair((x, k)))

    a = scan(pointwise, grid, workers=1).to_dict()
    b = scan(pointwise, grid, workers=4).to_dict()
    assert a == b
    monkeypatch.setenv("TFZERO_THREADS", "3")
    assert default_workers() == 3
    monkeypatch.setenv("TFZERO_THREADS", "0")
    with pytest.raises(ValueError):
        default_workers()
    monkeypatch.delenv("TFZERO_THREADS")
    assert default_workers() == 1


def test_report_validation():
    with pytest.raises(ValueError):
        scan(lambda x, k: x, GridSpec.square(0, 1, 3), zero_tol=0)
    rep = scan(lambda x, k: np.ones_like(x, dtype=complex), GridSpec.square(0, 1, 3))
    with pytest.raises(ValueError):
        ZeroReport([], -1.0, rep.argmin, rep.grid, False)
    d = rep.to_dict()
    assert set(d) >= {"zeros", "min_modulus", "argmin", "grid", "refined", "certificates"}
