"""Scenario configuration: parsing, validation, resolution to a spectrum."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ConfigError
from .presets import preset
from .spectral import BackgroundParams, EigenvalueEntry, build_spectrum

_FORMATS = ("csv", "json")


@dataclass
class ScenarioConfig:
    sigma: int
    eta: int
    q_minus: complex
    x0: float
    t0: float
    eigenvalues: list          # list of EigenvalueEntry
    grid: dict
    tolerances: dict = field(default_factory=lambda: {"quadrature": 1e-9, "residual_h": 1e-3})
    output: dict = field(default_factory=lambda: {"path": "out.csv", "format": "csv"})
    name: str = "custom"

    def background(self) -> BackgroundParams:
        return BackgroundParams(sigma=self.sigma, eta=self.eta, q_minus=self.q_minus,
                                x0=self.x0, t0=self.t0)

    def spectrum(self):
        return build_spectrum(self.background(), self.eigenvalues)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "sigma": self.sigma,
            "eta": self.eta,
            "q_minus": {"re": self.q_minus.real, "im": self.q_minus.imag},
            "x0": self.x0,
            "t0": self.t0,
            "eigenvalues": [
                {
                    "re": e.xi.real, "im": e.xi.imag, "order": e.order,
                    **({} if e.b is None else {"b": {"re": e.b.real, "im": e.b.imag}}),
                    **({} if e.d is None else {"d": {"re": e.d.real, "im": e.d.imag}}),
                    **({} if e.h is None else {"h": {"re": e.h.real, "im": e.h.imag}}),
                }
                for e in self.eigenvalues
            ],
            "grid": dict(self.grid),
            "tolerances": dict(self.tolerances),
            "output": dict(self.output),
        }


def _complex_field(raw, where: str) -> complex:
    if isinstance(raw, (int, float)):
        return complex(raw)
    if isinstance(raw, dict):
        try:
            return complex(float(raw.get("re", 0.0)), float(raw.get("im", 0.0)))
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"{where}: bad complex value {raw!r}") from exc
    raise ConfigError(f"{where}: expected number or {{re, im}}, got {raw!r}")


def parse_config(raw: dict) -> ScenarioConfig:
    """Validate a raw dict; error messages name the offending field."""
    def need(key, typ=None):
        if key not in raw:
            raise ConfigError(f"missing field {key!r}")
        v = raw[key]
        if typ is not None and not isinstance(v, typ):
            raise ConfigError(f"field {key!r}: expected {typ}, got {type(v).__name__}")
        return v

    sigma = need("sigma", int)
    eta = need("eta", int)
    if sigma not in (-1, 1):
        raise ConfigError(f"field 'sigma': must be -1 or 1, got {sigma}")
    if eta not in (-1, 1):
        raise ConfigError(f"field 'eta': must be -1 or 1, got {eta}")
    q_minus = _complex_field(need("q_minus"), "q_minus")
    if q_minus == 0:
        raise ConfigError("field 'q_minus': must be nonzero")
    x0 = float(raw.get("x0", 0.0))
    t0 = float(raw.get("t0", 0.0))

    entries = []
    for i, ev in enumerate(need("eigenvalues", list)):
        where = f"eigenvalues[{i}]"
        if not isinstance(ev, dict):
            raise ConfigError(f"{where}: expected object")
        try:
            xi = complex(float(ev["re"]), float(ev["im"]))
            order = int(ev["order"])
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"{where}: needs re, im, order") from exc
        kw = {}
        for nm in ("b", "d", "h"):
            if nm in ev and ev[nm] is not None:
                kw[nm] = _complex_field(ev[nm], f"{where}.{nm}")
        try:
            entries.append(EigenvalueEntry(xi=xi, order=order, **kw))
        except Exception as exc:
            raise ConfigError(f"{where}: {exc}") from exc

    grid = dict(need("grid", dict))
    for k in ("x_min", "x_max", "nx", "t_min", "t_max", "nt"):
        if k not in grid:
            raise ConfigError(f"field 'grid.{k}' missing")
    grid["nx"], grid["nt"] = int(grid["nx"]), int(grid["nt"])
    if grid["nx"] < 1 or grid["nt"] < 1:
        raise ConfigError("field 'grid': nx and nt must be >= 1")
    if grid["nx"] > 1 and not grid["x_min"] < grid["x_max"]:
        raise ConfigError("field 'grid': x_min < x_max required when nx > 1")
    if grid["nt"] > 1 and not grid["t_min"] < grid["t_max"]:
        raise ConfigError("field 'grid': t_min < t_max required when nt > 1")

    tol = dict(raw.get("tolerances", {}))
    tol.setdefault("quadrature", 1e-9)
    tol.setdefault("residual_h", 1e-3)
    out = dict(raw.get("output", {}))
    out.setdefault("path", "out.csv")
    out.setdefault("format", "csv")
    if out["format"] not in _FORMATS:
        raise ConfigError(f"field 'output.format': must be one of {_FORMATS}")

    cfg = ScenarioConfig(sigma=sigma, eta=eta, q_minus=q_minus, x0=x0, t0=t0,
                         eigenvalues=entries, grid=grid, tolerances=tol, output=out,
                         name=str(raw.get("name", "custom")))
    try:
        cfg.spectrum()
    except ConfigError:
        raise
    except Exception as exc:
        raise ConfigError(f"spectrum validation failed: {exc}") from exc
    return cfg


def load_config(path) -> ScenarioConfig:
    try:
        raw = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON: {exc}") from exc
    return parse_config(raw)


def preset_config(name: str) -> ScenarioConfig:
    return parse_config(preset(name))
