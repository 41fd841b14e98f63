"""Command-line front end.

Subcommands::

    shockpolar polar    --config run.ini [--out DIR] [--n N] [--plane u|j] [--format csv|svg|report]
    shockpolar scenario NAME [--set key=value ...] [--scan] [--out DIR]
    shockpolar sweep    --config run.ini [--param NAME (--values a,b,c | --range lo:hi:count[:log])]
    shockpolar selftest

Exit status: 0 success, 1 invalid input, 2 computation failure, 3 a
scenario ran but missed its expected outcome.
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from typing import Optional, Sequence

import numpy as np

from . import analysis, output, scenarios
from .config import RunConfig, load_config, parse_number, parse_sweep
from .errors import ShockPolarError, ValidationError

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_COMPUTATION = 2
EXIT_EXPECTATION = 3

SWEEP_COLUMNS = ("parameter", "value", "status", "verdict", "n_events", "event_locations",
                 "theta_max_deg", "sonic_xi", "message")


class _Parser(argparse.ArgumentParser):
    """Argument errors are input errors: exit 1, not argparse's 2."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def _write(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def emit(curve, out_dir: Optional[str], formats: Sequence[str], plane: str, analyses: Sequence[str],
         title: str, stem: str = "polar") -> list:
    """Write the requested renderings; the report goes to stdout when no directory is given."""
    written = []
    if out_dir:
        os.makedirs(out_dir, exist_ok=True)
    if "csv" in formats and out_dir:
        path = os.path.join(out_dir, f"{stem}.csv")
        _write(path, output.csv_text(curve, plane))
        written.append(path)
    if "svg" in formats and out_dir:
        path = os.path.join(out_dir, f"{stem}_{plane}.svg")
        _write(path, output.render_svg(curve, plane, title))
        written.append(path)
    if "report" in formats:
        text = output.render_report(curve, analyses, plane, title)
        if out_dir:
            path = os.path.join(out_dir, f"{stem}_report.txt")
            _write(path, text)
            written.append(path)
        else:
            sys.stdout.write(text)
    return written


# ---------------------------------------------------------------------------
# polar

def cmd_polar(args) -> int:
    cfg = load_config(args.config)
    n = args.n or cfg.n
    plane = args.plane or cfg.plane
    formats = tuple(args.format) if args.format else cfg.outputs
    out_dir = args.out or cfg.out
    if out_dir is None and any(f in formats for f in ("csv", "svg")):
        if "report" not in formats:
            raise ValidationError("csv and svg output need --out or run.out")
    curve = _sample(cfg, n)
    for path in emit(curve, out_dir, formats, plane, cfg.analyses, f"{cfg.model} M0 = {cfg.M0:g}"):
        print(f"wrote {path}", file=sys.stderr)
    return EXIT_OK


def _sample(cfg: RunConfig, n: int):
    from .polar_euler import sample_polar as sample_euler
    from .polar_potential import sample_polar as sample_potential

    up = cfg.upstream()
    if cfg.model == "potential":
        return sample_potential(up, n)
    return sample_euler(up, n)


# ---------------------------------------------------------------------------
# scenario

def _parse_override(text: str):
    if "=" not in text:
        raise ValidationError(f"override must look like key=value, got {text!r}")
    key, val = (s.strip() for s in text.split("=", 1))
    if val.lower() in ("true", "false"):
        return key, val.lower() == "true"
    try:
        return key, parse_number(val, key)
    except ValidationError:
        return key, val


def cmd_scenario(args) -> int:
    overrides = dict(_parse_override(s) for s in args.set or ())
    sc = scenarios.get_scenario(args.name, **overrides)
    print(f"scenario {sc.name}: {sc.description}")
    if args.scan:
        return _scenario_scan(args, overrides)
    res = scenarios.run_scenario(sc, n=args.n or 512)
    for plane, rep in res.reports.items():
        print(f"  {plane}-polar: {rep.verdict.value}, {len(rep.events)} persistent event(s)"
              + "".join(f"\n    event at {res.curve.param_kind} = {e.location:.9g}" for e in rep.events))
    if args.out:
        emit(res.curve, args.out, ("csv", "svg", "report"), args.plane or "u",
             ("convexity", "critical", "sonic", "residuals"), f"scenario {sc.name}", stem=sc.name)
    if res.passed:
        print("PASS")
        return EXIT_OK
    for f in res.failures:
        print(f"  {f}")
    print("FAIL")
    return EXIT_EXPECTATION


def _scenario_scan(args, overrides) -> int:
    base = args.name.replace("-control", "")
    if base != "fig8":
        raise ValidationError("--scan is only defined for fig8 and fig8-control (Mach number scan)")
    control = args.name.endswith("-control") or bool(overrides.get("control", False))
    values = np.geomspace(1.5, 50.0, args.scan_points)
    rows = scenarios.scan_fig8(values, control=control, n=args.n or 512)
    hits = []
    for M0, rep in rows:
        print(f"  M0 = {M0:.6g}: {rep.verdict.value}")
        if rep.verdict is analysis.Verdict.NON_CONVEX:
            hits.append(M0)
    if control:
        ok = all(rep.verdict is analysis.Verdict.STRICTLY_CONVEX for _, rep in rows)
    else:
        ok = bool(hits)
        if hits:
            print(f"  non-convex u-polar located at M0 = {hits[0]:.6g} ({len(hits)} of {len(rows)} values)")
    print("PASS" if ok else "FAIL")
    return EXIT_OK if ok else EXIT_EXPECTATION


# ---------------------------------------------------------------------------
# sweep

def sweep_row(cfg: RunConfig, parameter: str, value: float, n: int, plane: str) -> dict:
    row = dict.fromkeys(SWEEP_COLUMNS, "")
    row.update(parameter=parameter, value=output.fmt(value))
    try:
        c = cfg.with_parameter(parameter, value).validate()
        curve = _sample(c, n)
        rep = analysis.convexity(curve, plane, refine=True)
        cp = analysis.critical_point(curve)
        sp = analysis.sonic_point(curve)
        row.update(status="ok", verdict=rep.verdict.value, n_events=str(len(rep.events)),
                   event_locations=" ".join(output.fmt(e.location) for e in rep.events),
                   theta_max_deg=output.fmt(cp.theta_max_deg),
                   sonic_xi=" ".join(output.fmt(p.xi) for p in sp.points) or sp.status.value)
    except ValidationError as exc:
        row.update(status="invalid", message=str(exc))
    except (ShockPolarError, ArithmeticError, ValueError) as exc:
        row.update(status="error", message=str(exc))
    return row


def _sweep_row_args(a):
    return sweep_row(*a)


def cmd_sweep(args) -> int:
    cfg = load_config(args.config)
    if args.param:
        spec = parse_sweep(args.param, args.values, args.range)
    elif cfg.sweep is not None:
        spec = cfg.sweep
    else:
        raise ValidationError("sweep needs --param with --values/--range, or a [sweep] section")
    if not spec.values:
        raise ValidationError("sweep: empty range")
    cfg.with_parameter(spec.parameter, spec.values[0])  # reject unknown parameters up front
    n = args.n or cfg.n
    plane = args.plane or cfg.plane
    work = [(cfg, spec.parameter, v, n, plane) for v in spec.values]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            rows = list(pool.map(_sweep_row_args, work))
    else:
        rows = [sweep_row(*w) for w in work]
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=SWEEP_COLUMNS, lineterminator="\n")
    w.writeheader()
    w.writerows(rows)
    out_dir = args.out or cfg.out
    if out_dir:
        os.makedirs(out_dir, exist_ok=True)
        path = os.path.join(out_dir, "sweep.csv")
        _write(path, buf.getvalue())
        print(f"wrote {path}", file=sys.stderr)
    else:
        sys.stdout.write(buf.getvalue())
    return EXIT_OK


# ---------------------------------------------------------------------------
# selftest

def _selftest_checks():
    from .eos_ideal import PiecewiseIdealEos
    from .polar_euler import EulerUpstream, polar_ideal, polar_polytropic, sample_polar

    def fig1_convex():
        curve = scenarios.baseline_fig1().sample()
        return analysis.convexity(curve).verdict is analysis.Verdict.STRICTLY_CONVEX

    def fig1_critical():
        cp = analysis.critical_point(scenarios.baseline_fig1().sample())
        return abs(cp.theta_max_deg - 6.66208) < 1e-4 and cp.subsonic

    def hugoniot_spot():
        p = polar_ideal(EulerUpstream(5.0, eos=PiecewiseIdealEos.polytropic(1.4)), 1.2)
        return abs(p.P_ratio - 1.848999) < 1e-5 and abs(p.V_ratio - 0.649000) < 1e-5

    def closed_form():
        curve = sample_polar(EulerUpstream(1.3, eos=PiecewiseIdealEos.polytropic(1.4)))
        ref = polar_polytropic(1.3, 1.4, curve.xi[1:])
        return float(np.max(np.abs(ref - curve.eta[1:]))) < 1e-10

    def residuals():
        worst = 0.0
        for name in ("fig1", "fig7", "monotone-c", "fig8"):
            r = analysis.check_curve(scenarios.get_scenario(name).sample())
            worst = max(worst, r.circle * 1e2, r.jump, 0.0 if math.isnan(r.hugoniot) else r.hugoniot)
            if not (math.isnan(r.min_entropy) or r.min_entropy > 0):
                return False
        return worst <= 1e-10

    def counterexamples():
        return all(scenarios.run_scenario(scenarios.get_scenario(name)).passed
                   for name in ("fig7", "fig7-control", "monotone-c", "monotone-c-control", "fig8", "fig8-control"))

    return [
        ("polytropic polar at M0 = 1.3 is strictly convex", fig1_convex),
        ("critical turning angle 6.66208 deg, subsonic", fig1_critical),
        ("Hugoniot spot value at T/T0 = 1.2", hugoniot_spot),
        ("ideal-gas chain reproduces the closed-form polar", closed_form),
        ("jump, circle, Hugoniot and entropy oracles on scenario polars", residuals),
        ("counterexamples non-convex, controls convex", counterexamples),
    ]


def cmd_selftest(args) -> int:
    failed = 0
    for label, check in _selftest_checks():
        try:
            ok = bool(check())
        except ShockPolarError as exc:
            ok = False
            label += f" ({exc})"
        print(f"{'PASS' if ok else 'FAIL'}  {label}")
        failed += not ok
    return EXIT_OK if failed == 0 else EXIT_COMPUTATION


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="shockpolar", description="Shock polars for Euler and potential flow.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp):
        sp.add_argument("--out", help="output directory")
        sp.add_argument("--n", type=int, help="number of samples along the halfpolar")
        sp.add_argument("--plane", choices=("u", "j"), help="plane used for convexity and plots")

    sp = sub.add_parser("polar", help="sample one polar from a config file")
    sp.add_argument("--config", required=True)
    common(sp)
    sp.add_argument("--format", action="append", choices=("csv", "svg", "report"),
                    help="output kind; repeat for several (default: run.outputs)")
    sp.set_defaults(func=cmd_polar)

    sp = sub.add_parser("scenario", help="run a named scenario and check its expected outcome")
    sp.add_argument("name", help="one of: " + ", ".join(scenarios.SCENARIOS))
    sp.add_argument("--set", action="append", metavar="KEY=VALUE", help="override a scenario parameter")
    sp.add_argument("--scan", action="store_true", help="fig8 only: scan M0 logarithmically over [1.5, 50]")
    sp.add_argument("--scan-points", type=int, default=25)
    common(sp)
    sp.set_defaults(func=cmd_scenario)

    sp = sub.add_parser("sweep", help="one summary row per parameter value")
    sp.add_argument("--config", required=True)
    sp.add_argument("--param", help="M0, T0, gamma, branch<N>.param or segment<N>.gamma")
    grp = sp.add_mutually_exclusive_group()
    grp.add_argument("--values", help="comma-separated values")
    grp.add_argument("--range", help="start:stop:count[:lin|log]")
    sp.add_argument("--jobs", type=int, default=1, help="worker processes")
    common(sp)
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("selftest", help="quick built-in consistency checks")
    sp.set_defaults(func=cmd_selftest)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (ShockPolarError, ArithmeticError) as exc:
        print(f"computation failed: {exc}", file=sys.stderr)
        return EXIT_COMPUTATION
