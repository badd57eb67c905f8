"""Deterministic CSV/JSON emission with embedded metadata."""

from __future__ import annotations

import json
from pathlib import Path

from . import __version__


def _fmt(v: float) -> str:
    return f"{v:.17g}"


def metadata_dict(cfg, spectrum, samples) -> dict:
    n_sing = sum(1 for s in samples if s.singular)
    return {
        "tool": "nonlocal-dnls",
        "version": __version__,
        "mbar": {"re": spectrum.mbar.real, "im": spectrum.mbar.imag},
        "mbar_gauge": {"re": spectrum.mbar_gauge.real, "im": spectrum.mbar_gauge.imag},
        "exp2imbar": {"re": spectrum.exp2imbar.real, "im": spectrum.exp2imbar.imag},
        "branch_convention": "exp_imbar = principal sqrt of exp2imbar; "
                             "mbar_gauge sums principal logs factor by factor",
        "singular_samples": n_sing,
        "config": cfg.to_dict(),
    }


def write_csv(path, cfg, spectrum, samples) -> None:
    meta = metadata_dict(cfg, spectrum, samples)
    lines = [f"# {json.dumps(meta, sort_keys=True)}"]
    lines.append("x,t,re_q,im_q,abs_q,singular")
    for s in samples:
        lines.append(",".join([
            _fmt(s.x), _fmt(s.t), _fmt(s.q.real), _fmt(s.q.imag),
            _fmt(abs(s.q)), "1" if s.singular else "0",
        ]))
    Path(path).write_text("\n".join(lines) + "\n", newline="\n")


def write_json(path, cfg, spectrum, samples) -> None:
    doc = {
        "metadata": metadata_dict(cfg, spectrum, samples),
        "samples": [
            {"x": s.x, "t": s.t, "re_q": s.q.real, "im_q": s.q.imag,
             "abs_q": abs(s.q), "singular": bool(s.singular)}
            for s in samples
        ],
    }
    Path(path).write_text(json.dumps(doc, sort_keys=True, indent=1) + "\n", newline="\n")


def write_samples(path, cfg, spectrum, samples, fmt: str) -> None:
    if fmt == "csv":
        write_csv(path, cfg, spectrum, samples)
    elif fmt == "json":
        write_json(path, cfg, spectrum, samples)
    else:
        raise ValueError(f"unknown format {fmt!r}")
