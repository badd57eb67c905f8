"""Uniformization map, phase functions and trace formulae.

Everything here evaluates on plain complex numbers and on jets through
the same code path, so z-derivatives at eigenvalues come out of the jet
coefficients with no separate differentiation code.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import EvaluationAtZero, PoleOfTraceFormula
from .jets import Jet, jet_var
from .spectral import BackgroundParams, DiscreteSpectrum

_POLE_RTOL = 1e-10


def _value(z):
    return z.value if isinstance(z, Jet) else complex(z)


@dataclass(frozen=True)
class PhaseContext:
    """Background plus the cached uniformization constant a = sigma*eta*q0^2."""

    bg: BackgroundParams

    @property
    def a(self) -> complex:
        return self.bg.a


def k_lambda(ctx: PhaseContext, z):
    """The two sheets k = (z - a/z)/2, lam = (z + a/z)/2; k + lam = z."""
    if _value(z) == 0:
        raise EvaluationAtZero("k, lambda undefined at z = 0")
    az = ctx.a / z if isinstance(z, Jet) else ctx.a / complex(z)
    return (z - az) * 0.5, (z + az) * 0.5


def _klam_parts(ctx: PhaseContext, z):
    # k*lam = (z^2 - a^2/z^2)/4 and 2*lam^2 + a = (z^2 + a^2/z^2)/2 + 2a,
    # algebraically identical to the direct product but half the operations.
    if _value(z) == 0:
        raise EvaluationAtZero("phase undefined at z = 0")
    a = ctx.a
    z2 = z * z
    if isinstance(z, Jet):
        iz2 = (a * a) / z2
    else:
        iz2 = (a * a) / complex(z2)
    kl = (z2 - iz2) * 0.25
    w = (z2 + iz2) * 0.5 + 2 * a
    return kl, w


def theta(ctx: PhaseContext, z, x: float, t: float):
    """theta(z; x, t) = k*lam*[x + (2 lam^2 + a) t]."""
    kl, w = _klam_parts(ctx, z)
    return kl * (x + w * t)


def theta0(ctx: PhaseContext, z):
    """theta at the shift point (x0, t0); jets give theta0' for the symmetry relations."""
    kl, w = _klam_parts(ctx, z)
    return kl * (ctx.bg.x0 + w * ctx.bg.t0)


@dataclass(frozen=True)
class TraceContext:
    """Spectrum wrapper for the reflectionless trace formulae."""

    spectrum: DiscreteSpectrum

    def __post_init__(self):
        s = self.spectrum
        if abs(s.exp_imbar ** 2 - s.exp2imbar) > 1e-14 * max(1.0, abs(s.exp2imbar)):
            raise ValueError("exp_imbar inconsistent with exp2imbar")

    @property
    def exp_imbar(self) -> complex:
        return self.spectrum.exp_imbar


def _trace_product(tc: TraceContext, z, hat_over_xi: bool):
    s = tc.spectrum
    a = s.bg.a
    z2 = z * z
    zv2 = _value(z) ** 2
    acc = None
    for e in s.entries:
        xi2 = complex(e.xi) ** 2
        hx2 = (a / complex(e.xi)) ** 2
        pole2 = xi2 if hat_over_xi else hx2
        if abs(zv2 - pole2) < _POLE_RTOL * (abs(zv2) + abs(pole2)):
            raise PoleOfTraceFormula(f"z = {_value(z)} too close to a trace-formula pole")
        num = z2 - (hx2 if hat_over_xi else xi2)
        den = z2 - pole2
        fac = (num / den) ** e.order
        acc = fac if acc is None else acc * fac
    return acc


def trace_u11(tc: TraceContext, z):
    """u11(z): zeros of order m at +-xi_n, poles at +-hat(xi)_n, -> e^{i mbar} at infinity."""
    prod = _trace_product(tc, z, hat_over_xi=False)
    e = tc.exp_imbar
    return e if prod is None else prod * e


def trace_u22(tc: TraceContext, z):
    """Mirror of u11 with xi <-> hat(xi) and e^{-i mbar}; verification only."""
    prod = _trace_product(tc, z, hat_over_xi=True)
    e = 1.0 / tc.exp_imbar
    return e if prod is None else prod * e


def u11_derivatives(tc: TraceContext, z0: complex) -> np.ndarray:
    """u11 and its first five z-derivatives at z0, from one jet evaluation."""
    from .jets import derivative

    j = trace_u11(tc, jet_var(z0))
    if not isinstance(j, Jet):           # empty spectrum: constant
        return np.array([j, 0, 0, 0, 0, 0], dtype=complex)
    return np.array([derivative(j, k) for k in range(6)], dtype=complex)
