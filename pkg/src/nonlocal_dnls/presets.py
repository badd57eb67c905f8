"""Named scenario presets (seven base configurations, four shift variants each).

Eigenvalues follow the published figure parameters; norming constants
are the shift-dressed defaults.  Variant letters a-d carry the caption
shift pairs; the bare name (e.g. "fig4") aliases the unshifted b
variant.
"""

from __future__ import annotations

import cmath
from math import pi

from .errors import UnknownPreset


def _pol(r, phi):
    return r * cmath.exp(1j * phi)


_BASE = {
    "fig1": dict(
        sigma=-1, eta=1,
        eigenvalues=[(_pol(1, 5 * pi / 24), 1), (_pol(1, 9 * pi / 24), 1),
                     (_pol(1, 10 * pi / 24), 1)],
        shifts={"a": (0.0, -15.0), "b": (0.0, 0.0), "c": (15.0, 0.0), "d": (15.0, 15.0)},
        blurb="three-soliton",
    ),
    "fig2": dict(
        sigma=-1, eta=1,
        eigenvalues=[(_pol(2, pi / 8), 1), (_pol(0.5, pi / 8), 1),
                     (_pol(1, pi / 3), 1), (_pol(1, 5 * pi / 12), 1)],
        shifts={"a": (0.0, -8.0), "b": (0.0, 0.0), "c": (8.0, 0.0), "d": (8.0, 8.0)},
        blurb="breather plus bright-bright soliton",
    ),
    "fig3": dict(
        sigma=-1, eta=1,
        eigenvalues=[(_pol(2, pi / 8), 1), (_pol(0.5, pi / 8), 1), (_pol(1, pi / 8), 2)],
        shifts={"a": (0.0, -10.0), "b": (0.0, 0.0), "c": (10.0, 0.0), "d": (10.0, 10.0)},
        blurb="breather plus bright-dark soliton",
    ),
    "fig4": dict(
        sigma=-1, eta=1,
        eigenvalues=[(_pol(2, pi / 8), 2), (_pol(0.5, pi / 8), 2)],
        shifts={"a": (0.0, -7.0), "b": (0.0, 0.0), "c": (7.0, 0.0), "d": (7.0, 7.0)},
        blurb="two-breather",
    ),
    "fig5": dict(
        sigma=-1, eta=1,
        eigenvalues=[(_pol(2, pi / 6), 3), (_pol(0.5, pi / 6), 3)],
        shifts={"a": (0.0, -5.0), "b": (0.0, 0.0), "c": (5.0, 0.0), "d": (5.0, 5.0)},
        blurb="three-breather",
    ),
    "fig6": dict(
        sigma=-1, eta=-1,
        eigenvalues=[(_pol(2, pi / 3), 1), (_pol(0.5, pi / 3), 1), (_pol(1, pi / 12), 1)],
        shifts={"a": (0.0, -7.0), "b": (0.0, 0.0), "c": (7.0, 0.0), "d": (7.0, 7.0)},
        blurb="breather plus bright soliton (inconsistent boundary data, see docs)",
    ),
    "fig7": dict(
        sigma=-1, eta=-1,
        eigenvalues=[(_pol(1, pi / 4), 3)],
        shifts={"a": (0.0, -15.0), "b": (0.0, 0.0), "c": (15.0, 0.0), "d": (15.0, 15.0)},
        blurb="bright-dark-bright soliton (inconsistent boundary data, see docs)",
    ),
}

PRESET_NAMES = sorted(f"{base}{v}" for base in _BASE for v in "abcd")


def preset(name: str) -> dict:
    """Resolved scenario dict for a preset name (figNx with x in a-d)."""
    base = name
    variant = "b"
    if name and name[-1] in "abcd" and name[:-1] in _BASE:
        base, variant = name[:-1], name[-1]
    if base not in _BASE:
        raise UnknownPreset(f"unknown preset {name!r}; try one of {PRESET_NAMES}")
    spec = _BASE[base]
    x0, t0 = spec["shifts"][variant]
    cfg = {
        "name": f"{base}{variant}",
        "sigma": spec["sigma"],
        "eta": spec["eta"],
        "q_minus": {"re": 1.0, "im": 0.0},
        "x0": x0,
        "t0": t0,
        "eigenvalues": [
            {"re": z.real, "im": z.imag, "order": order}
            for z, order in spec["eigenvalues"]
        ],
        "grid": {
            "x_min": -40.0 + x0 / 2, "x_max": 40.0 + x0 / 2, "nx": 201,
            "t_min": -25.0 + t0 / 2, "t_max": 25.0 + t0 / 2, "nt": 101,
        },
        "tolerances": {"quadrature": 1e-9, "residual_h": 1e-3},
        "output": {"path": f"{base}{variant}.csv", "format": "csv"},
    }
    return cfg
