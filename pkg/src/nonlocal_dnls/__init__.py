"""Exact mixed single/double/triple-pole solutions of the space-time shifted
nonlocal derivative NLS equation with nonzero boundary conditions."""

__version__ = "0.1.0"

from .errors import (  # noqa: F401
    DegenerateSpectrum,
    DivisionByZeroJet,
    EvaluationAtZero,
    NonlocalDNLSError,
    NotFirstQuadrant,
    OrderOutOfRange,
    PoleOfTraceFormula,
    QuadratureNoConvergence,
    SingularG,
    StencilHitSingularity,
    UnknownPreset,
    VanishingLeadingDerivative,
    ZeroNormingConstant,
)
from .jets import Jet, derivative, jet_arith, jet_const, jet_int_pow, jet_var  # noqa: F401
from .spectral import (  # noqa: F401
    BackgroundParams,
    DiscreteSpectrum,
    EigenvalueEntry,
    build_spectrum,
    complete_norming_data,
    compute_mbar,
    default_norming,
    gauge_mbar,
    validate_spectrum,
)
from .phase import (  # noqa: F401
    PhaseContext,
    TraceContext,
    k_lambda,
    theta,
    theta0,
    trace_u11,
    trace_u22,
)
from .poles import PoleCoefficients, coeffs_at  # noqa: F401
from .reconstruct import (  # noqa: F401
    Engine,
    GaugePhase,
    LinearSystem,
    SolutionSample,
    assemble_system,
    bare_potential,
    evaluate_grid,
    evaluate_q,
    gauge_phase,
)
from .presets import PRESET_NAMES, preset  # noqa: F401
from .config import ScenarioConfig, load_config, parse_config, preset_config  # noqa: F401
