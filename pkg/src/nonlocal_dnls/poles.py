"""Pole-contribution coefficients A (single), B, C (double), D, E, F (triple).

Evaluated at a master-list eigenvalue and a space-time point, with
theta, theta', theta'' taken from phase jets and the trace-formula
derivatives from a jet of u11 at the eigenvalue.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass

from .errors import VanishingLeadingDerivative
from .jets import jet_var
from .phase import PhaseContext, TraceContext, theta, u11_derivatives
from .spectral import DiscreteSpectrum

LEADING_DERIV_FLOOR = 1e-12


@dataclass(frozen=True)
class PoleCoefficients:
    """Coefficients for one eigenvalue; fields beyond the pole order are None."""

    n: int
    order: int
    A: complex | None = None
    B: complex | None = None
    C: complex | None = None
    D: complex | None = None
    E: complex | None = None
    F: complex | None = None


def theta_jet_values(ctx: PhaseContext, z0: complex, x: float, t: float):
    """(theta, theta', theta'') in z at fixed (x, t)."""
    j = theta(ctx, jet_var(z0), x, t)
    return j.coeffs[0], j.coeffs[1], 2 * j.coeffs[2]


def coeffs_at(spectrum: DiscreteSpectrum, tc: TraceContext, ctx: PhaseContext,
              n: int, x: float, t: float) -> PoleCoefficients:
    """Coefficients at master index n per the printed residue formulas."""
    if not spectrum.completed:
        raise ValueError("spectrum norming data not completed")
    z = complex(spectrum.E[n])
    m = int(spectrum.orders[n])
    b = complex(spectrum.b[n])
    d = complex(spectrum.d[n])
    h = complex(spectrum.h[n])
    ud = u11_derivatives(tc, z)
    if abs(ud[m]) < LEADING_DERIV_FLOOR:
        raise VanishingLeadingDerivative(
            f"|u11^({m})| = {abs(ud[m]):.3e} at eigenvalue {z}")
    th, thp, thpp = theta_jet_values(ctx, z, x, t)
    ph = cmath.exp(-2j * th)
    if m == 1:
        return PoleCoefficients(n=n, order=1, A=b * ph / ud[1])
    if m == 2:
        B = 2 * b * ph / ud[2]
        C = d / b - 2j * thp - ud[3] / (3 * ud[2])
        return PoleCoefficients(n=n, order=2, B=B, C=C)
    D = 6 * b * ph / ud[3]
    E = d / b - 2j * thp - ud[4] / (4 * ud[3])
    F = (h / (2 * b) - d * ud[4] / (4 * b * ud[3]) + ud[4] ** 2 / (16 * ud[3] ** 2)
         - ud[5] / (20 * ud[3]) + 2 * thp ** 2 - 1j * thpp - 2j * thp * E)
    return PoleCoefficients(n=n, order=3, D=D, E=E, F=F)
