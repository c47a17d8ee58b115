import math

import numpy as np
import pytest

from tfzero.core import Gaussian, HermiteCombo, Indicator, MonomialExp, OneSidedExp
from tfzero.kernels import amb_onesided
from tfzero.oracle import (
    GridSpec,
    SampledFunction,
    TruncationError,
    oracle_ambiguity,
    oracle_bargmann,
    oracle_fourier,
    oracle_stft,
    oracle_wigner,
)

G = Gaussian(1.0).sampled()
ETA = OneSidedExp(1.0).sampled()
BOX = Indicator().sampled()
H0 = HermiteCombo.from_hermite([1.0]).sampled()


def test_documented_values():
    assert abs(oracle_ambiguity(G, G, (0, 0)) - 2 ** -0.5) < 1e-10
    assert abs(oracle_ambiguity(ETA, ETA, (0, 0)) - 0.5) < 1e-10
    assert abs(oracle_ambiguity(BOX, BOX, (0, 1))) < 1e-12
    assert abs(oracle_wigner(H0, H0, (0, 0)) - 2) < 1e-10


def test_full_output_error_bound_is_honest():
    r = oracle_ambiguity(ETA, ETA, (0.7, 0.4), 1e-10, full_output=True)
    exact = amb_onesided(1, 1, (0.7, 0.4))
    assert abs(r.value - exact) <= max(r.error, 1e-12) * 10
    assert r.error < 1e-9 and r.panels > 0


def test_fourier_examples():
    for xi in (0.0, 0.3, -2.0):
        assert abs(oracle_fourier(G, xi) - math.exp(-math.pi * xi * xi)) < 1e-10
        assert abs(oracle_fourier(ETA, xi) - 1 / complex(1, 2 * math.pi * xi)) < 1e-9
    assert abs(oracle_fourier(BOX, 0.5) - (-2j / math.pi)) < 1e-12


def test_bargmann_of_h0_is_one():
    for z in (0, 0.5 + 0.5j, -1 + 0.3j, 1.2 - 0.8j):
        assert abs(oracle_bargmann(H0, z) - 1) < 1e-9


def test_bargmann_stft_relation():
    # |V_{h0} f(x, -xi)| = |Bf(z)| e^{-pi |z|^2 / 2}
    f = MonomialExp(1, 1.0).sampled()
    for z in (0.3 + 0.2j, -0.6 + 0.9j):
        lhs = abs(oracle_stft(f, H0, (z.real, -z.imag)))
        rhs = abs(oracle_bargmann(f, z)) * math.exp(-math.pi * abs(z) ** 2 / 2)
        assert abs(lhs - rhs) < 1e-9


def test_stft_of_gaussians():
    # V_g g(x, xi) = 2^{-1/2} e^{-pi x^2/2} e^{-pi xi^2/2} e^{-pi i x xi}
    for x, xi in [(0.4, -0.3), (1.0, 1.0)]:
        ref = 2 ** -0.5 * math.exp(-math.pi * (x * x + xi * xi) / 2) * np.exp(-1j * math.pi * x * xi)
        assert abs(oracle_stft(G, G, (x, xi)) - ref) < 1e-10


@pytest.mark.parametrize("z", [(0.5, 0.5), (-1.3, 2.0), (2.2, -0.1)])
def test_halving_panels_is_stable(z):
    f = MonomialExp(2, 1.0).sampled()
    g = OneSidedExp(2.0).sampled()
    a = oracle_ambiguity(f, g, z, 1e-10, panel_width=1.0)
    b = oracle_ambiguity(f, g, z, 1e-10, panel_width=0.5)
    assert abs(a - b) < 1e-10


def test_compact_support_is_exact():
    step = SampledFunction(lambda t: np.where((t > 0) & (t < 2), 1.0, 0.0), (0.0, 2.0), math.inf,
                           breakpoints=(0.0, 2.0))
    assert abs(oracle_fourier(step, 0.0) - 2) < 1e-13


def test_slow_tail_raises():
    slow = SampledFunction(lambda t: 1 / (1 + t * t), (-1.0, 1.0), 0.5, tail="power")
    with pytest.raises(TruncationError):
        oracle_fourier(slow, 0.0, 1e-10)


def test_sampled_function_validation():
    with pytest.raises(ValueError):
        SampledFunction(lambda t: t, (1.0, 0.0), 1.0)
    with pytest.raises(ValueError):
        SampledFunction(lambda t: t, (0.0, 1.0), 0.0)
    with pytest.raises(ValueError):
        SampledFunction(lambda t: t, (0.0, 1.0), 1.0, tail="gauss")


def test_grid_spec():
    g = GridSpec.parse("-1,1,5,0,2,3")
    assert g.x_range == (-1.0, 1.0) and g.nx == 5 and g.xi_range == (0.0, 2.0) and g.nxi == 3
    assert GridSpec.from_dict(g.to_dict()) == g
    X, K = g.mesh()
    assert X.shape in ((5, 3), (3, 5))
    for bad in ("1,-1,5,0,1,3", "0,1,1,0,1,3", "0,1", "0,1,a,0,1,3"):
        with pytest.raises(ValueError):
            GridSpec.parse(bad)
