"""Command-line interface: evaluate, verify, presets."""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from pathlib import Path

import numpy as np

from .config import load_config, preset_config
from .errors import NonlocalDNLSError
from .output import write_samples
from .phase import PhaseContext, TraceContext
from .presets import PRESET_NAMES, _BASE
from .reconstruct import Engine, evaluate_grid
from .verify import boundary_check, identity_suite, residual_scan, trace_zero_check


def _load(args):
    if args.config:
        return load_config(args.config)
    if args.preset:
        return preset_config(args.preset)
    raise SystemExit("one of --config or --preset is required")


def _cmd_evaluate(args) -> int:
    cfg = _load(args)
    if args.output:
        cfg.output["path"] = args.output
    if args.format:
        cfg.output["format"] = args.format
    spectrum = cfg.spectrum()
    tc, ctx = TraceContext(spectrum), PhaseContext(cfg.background())
    samples = evaluate_grid(spectrum, tc, ctx, cfg.grid,
                            tol=cfg.tolerances["quadrature"], workers=args.workers)
    write_samples(cfg.output["path"], cfg, spectrum, samples, cfg.output["format"])
    n_sing = sum(1 for s in samples if s.singular)
    print(f"wrote {len(samples)} samples to {cfg.output['path']} "
          f"({n_sing} tagged singular)")
    return 0


def _sample_points(cfg, rng, n=40):
    g = cfg.grid
    xs = rng.uniform(g["x_min"] + 0.2 * (g["x_max"] - g["x_min"]),
                     g["x_max"] - 0.2 * (g["x_max"] - g["x_min"]), n)
    ts = rng.uniform(g["t_min"] + 0.2 * (g["t_max"] - g["t_min"]),
                     g["t_max"] - 0.2 * (g["t_max"] - g["t_min"]), max(4, n // 10))
    return [(float(x), float(t)) for t in ts for x in rng.choice(xs, size=n // max(4, n // 10), replace=False)]


def _cmd_verify(args) -> int:
    cfg = _load(args)
    bg = cfg.background()
    spectrum = cfg.spectrum()
    if args.inject_fault and spectrum.L:
        # corrupt b at the first mirrored eigenvalue: breaks the reflection symmetry
        b = spectrum.b.copy()
        b[spectrum.counts[0] or spectrum.L] *= 1.01
        spectrum = dataclasses.replace(spectrum, b=b)
    tc, ctx = TraceContext(spectrum), PhaseContext(bg)
    eng = Engine(spectrum)
    rng = np.random.default_rng(args.seed)

    report = {"config": cfg.to_dict(), "checks": {}}
    ok = True

    ident = identity_suite(spectrum, tc, ctx, seed=args.seed)
    report["checks"]["identities"] = [dataclasses.asdict(c) for c in ident.checks]
    ok &= ident.passed

    tz = trace_zero_check(tc, spectrum)
    report["checks"]["trace_zeros"] = {"passed": tz.passed}
    ok &= tz.passed

    pts = _sample_points(cfg, rng, n=args.samples)
    res = residual_scan(eng, bg, pts, h=cfg.tolerances["residual_h"])
    report["checks"]["pde_residual"] = {
        "max_abs_residual": res.max_abs_residual,
        "richardson_order": res.richardson_order,
        "points_used": len(res.residuals),
        "skipped_singular": res.skipped_singular,
        "passed": res.passed,
    }
    ok &= res.passed

    try:
        bc = boundary_check(eng, bg, t=0.0)
        report["checks"]["boundary"] = dataclasses.asdict(bc) | {"passed": bc.passed()}
        ok &= bc.passed()
    except NonlocalDNLSError as exc:
        report["checks"]["boundary"] = {"error": str(exc), "passed": False}
        ok = False

    report["passed"] = bool(ok)
    text = json.dumps(report, sort_keys=True, indent=1, default=repr)
    if args.report:
        Path(args.report).write_text(text + "\n")
    print(text)
    return 0 if ok else 1


def _cmd_presets(args) -> int:
    if args.list:
        for name in PRESET_NAMES:
            base = name[:-1]
            print(f"{name:7s} {_BASE[base]['blurb']}")
        return 0
    raise SystemExit("use --list")


def main(argv=None) -> int:
    p = argparse.ArgumentParser(prog="nonlocal-dnls",
                                description="Exact mixed-pole solutions of the "
                                            "space-time shifted nonlocal derivative "
                                            "NLS equation with nonzero boundaries")
    sub = p.add_subparsers(dest="cmd", required=True)

    pe = sub.add_parser("evaluate", help="evaluate q(x,t) on a grid and write CSV/JSON")
    pe.add_argument("--config", help="scenario JSON file")
    pe.add_argument("--preset", help="preset name (see `presets --list`)")
    pe.add_argument("--output", help="override output path")
    pe.add_argument("--format", choices=("csv", "json"), help="override output format")
    pe.add_argument("--workers", type=int, default=None,
                    help="grid-row workers (default: NONLOCAL_DNLS_WORKERS or 1)")
    pe.set_defaults(func=_cmd_evaluate)

    pv = sub.add_parser("verify", help="run the verification suite; nonzero exit on failure")
    pv.add_argument("--config", help="scenario JSON file")
    pv.add_argument("--preset", help="preset name")
    pv.add_argument("--report", help="write the JSON report here")
    pv.add_argument("--samples", type=int, default=40, help="residual sample count")
    pv.add_argument("--seed", type=int, default=0)
    pv.add_argument("--inject-fault", action="store_true",
                    help="corrupt b at a mirrored eigenvalue (negative control)")
    pv.set_defaults(func=_cmd_verify)

    pp = sub.add_parser("presets", help="preset catalogue")
    pp.add_argument("--list", action="store_true")
    pp.set_defaults(func=_cmd_presets)

    args = p.parse_args(argv)
    try:
        return args.func(args)
    except NonlocalDNLSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
