"""Zero sets of Wigner, ambiguity and short-time Fourier distributions.

Closed-form kernels, a quadrature oracle, exact Hurwitz stability tests,
polyanalytic Bargmann calculus and grid-based zero scans.
"""

from .core import (
    ConvExpExp,
    FunctionSpec,
    Gaussian,
    GumbelExp,
    HermiteCombo,
    Indicator,
    MonomialExp,
    OneSidedExp,
    PhaseSpacePoint,
    Sampled,
    StepFunction,
    TransformKind,
    convert_value,
    fourier_covariance_check,
    hermite_function,
    polarization_check,
    reflect,
    shift_covariance_check,
    spec_from_json,
    transform,
)
from .hurwitz import (
    GAMMA_SUFFICIENT,
    IntPolynomial,
    RootFindingError,
    StabilityReport,
    build_An,
    hurwitz_matrix,
    leading_principal_minors,
    max_real_root_part,
    polynomial_roots,
    routh_hurwitz,
)
from .kernels import FormulaId, KernelPair, convolution_identity_check
from .oracle import (
    GridSpec,
    QuadratureError,
    SampledFunction,
    TruncationError,
    oracle_ambiguity,
    oracle_bargmann,
    oracle_fourier,
    oracle_stft,
    oracle_wigner,
)
from .polyanalytic import ComplexPolynomial, PolyanalyticPolynomial
from .special import HalfIntOrder, PoleError, bessel_k_half, gamma_complex, loggamma_complex
from .steps import AlphaStepSpec, IrrationalityError, StepOnUnit, counterexample_verify
from .zeros import SignScan, ZeroReport, scan, sign_change_scan

__version__ = "0.1.0"
