"""Exception types shared across the package."""


class NonlocalDNLSError(Exception):
    """Base class for all package-specific errors."""


class DivisionByZeroJet(NonlocalDNLSError):
    """Jet division by a series with vanishing constant term."""


class OrderOutOfRange(NonlocalDNLSError):
    """Requested derivative order outside the jet truncation degree."""


class JetBaseMismatch(NonlocalDNLSError):
    """Arithmetic between jets expanded at different base points."""


class NotFirstQuadrant(NonlocalDNLSError):
    """Eigenvalue outside the open first quadrant."""


class DegenerateSpectrum(NonlocalDNLSError):
    """Two spectral points closer than the collision tolerance."""


class ZeroNormingConstant(NonlocalDNLSError):
    """Norming constant b vanishes."""


class EvaluationAtZero(NonlocalDNLSError):
    """Uniformization-plane function evaluated at z = 0."""


class PoleOfTraceFormula(NonlocalDNLSError):
    """Trace formula evaluated at (or too close to) one of its poles."""


class VanishingLeadingDerivative(NonlocalDNLSError):
    """Leading trace-formula derivative at an eigenvalue is numerically zero."""


class SingularG(NonlocalDNLSError):
    """Reconstruction matrix numerically singular at a sample point."""


class QuadratureNoConvergence(NonlocalDNLSError):
    """Gauge-phase quadrature failed to converge (non-decaying tail or pole)."""


class StencilHitSingularity(NonlocalDNLSError):
    """A finite-difference stencil point was tagged singular."""


class NoDecayDetected(NonlocalDNLSError):
    """Far-field probe found no decay towards the boundary values."""


class UnknownPreset(NonlocalDNLSError):
    """Preset name not in the catalogue."""


class ConfigError(NonlocalDNLSError):
    """Scenario configuration failed validation."""
