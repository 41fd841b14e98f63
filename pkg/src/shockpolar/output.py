"""CSV, SVG and plain-text renderings of a sampled polar.

All output is deterministic: numbers are printed with ``repr``-level
precision (17 significant digits in CSV) and nothing depends on the clock
or the environment.
"""

from __future__ import annotations

import csv
import io
import math
from typing import Iterable, Optional

import numpy as np

from . import analysis
from .curve import PolarCurve

CSV_COLUMNS = ("model", "M0", "param_kind", "param_value", "xi", "eta", "V_ratio", "P_ratio",
               "T_ratio", "theta_deg", "curvature_sign")


def fmt(x) -> str:
    """17 significant digits; empty for missing values."""
    if x is None:
        return ""
    x = float(x)
    if math.isnan(x):
        return "nan"
    return format(x, ".17g")


def curvature_signs(curve: PolarCurve, plane: str = "u") -> list:
    """Per-sample sign of the discrete curvature (``0`` below the noise floor, empty at endpoints)."""
    pc = analysis.planar(curve, plane)
    kappa, floor, _ = analysis.discrete_curvature(pc.x, pc.y)
    signs = np.where(np.abs(kappa) > floor, np.sign(kappa), 0.0).astype(int)
    return [None] + [int(s) for s in signs] + [None]


def write_csv(curve: PolarCurve, stream, plane: str = "u") -> None:
    w = csv.writer(stream, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    signs = curvature_signs(curve, plane)
    theta = np.degrees(curve.theta)
    for i in range(len(curve)):
        w.writerow([
            curve.model, fmt(curve.M0), curve.param_kind, fmt(curve.param[i]), fmt(curve.xi[i]),
            fmt(curve.eta[i]), fmt(curve.V_ratio[i]),
            "" if curve.P_ratio is None else fmt(curve.P_ratio[i]),
            "" if curve.T_ratio is None else fmt(curve.T_ratio[i]),
            fmt(theta[i]), "" if signs[i] is None else str(signs[i]),
        ])


def csv_text(curve: PolarCurve, plane: str = "u") -> str:
    buf = io.StringIO()
    write_csv(curve, buf, plane)
    return buf.getvalue()


def read_csv(stream) -> list:
    """Rows of a polar CSV as dicts with floats where numeric."""
    rows = []
    for row in csv.DictReader(stream):
        out = {}
        for k, v in row.items():
            if k in ("model", "param_kind"):
                out[k] = v
            elif v == "":
                out[k] = None
            else:
                out[k] = float(v)
        rows.append(out)
    return rows


# ---------------------------------------------------------------------------
# SVG

_W, _H, _PAD = 640, 480, 56


def _ticks(lo, hi, count=5):
    span = hi - lo
    step = 10 ** math.floor(math.log10(span / count))
    for m in (1, 2, 5, 10):
        if span / (m * step) <= count:
            step *= m
            break
    start = math.ceil(lo / step) * step
    return [start + i * step for i in range(int((hi - start) / step + 1e-9) + 1)]


def _svg_num(x) -> str:
    return f"{x:.2f}"


def render_svg(curve: PolarCurve, plane: str = "u", title: Optional[str] = None) -> str:
    """Static SVG 1.1 plot of the full polar (upper half and its mirror image).

    The u-plane plot overlays the boundary ``V = 0`` of all compressive
    states, the circle with diameter from the origin to ``(1, 0)``, and the
    constant-volume circle through the normal shock.
    """
    pc = analysis.planar(curve, plane)
    x = np.concatenate([pc.x[::-1], pc.x[1:]])
    y = np.concatenate([-pc.y[::-1], pc.y[1:]])
    circles = []
    if plane == "u":
        circles.append((0.5, 0.0, 0.5, "#999999", "4 3"))
        if curve.normal_endpoint:
            V = float(curve.V_ratio[0])
            circles.append((0.5 * (1 + V), 0.0, 0.5 * (1 - V), "#cc7a00", "2 2"))
        xs = [0.0, 1.0] + list(x)
        ys = [-0.5, 0.5] + list(y)
    else:
        xs, ys = list(x), list(y)
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(ys), max(ys)
    mx = 0.05 * (x1 - x0 or 1.0)
    my = 0.05 * (y1 - y0 or 1.0)
    x0, x1, y0, y1 = x0 - mx, x1 + mx, y0 - my, y1 + my
    s = min((_W - 2 * _PAD) / (x1 - x0), (_H - 2 * _PAD) / (y1 - y0))

    def X(v):
        return _PAD + (v - x0) * s

    def Y(v):
        return _H - _PAD - (v - y0) * s

    xl, yl = ("xi = u_x/|u0|", "eta = u_y/|u0|") if plane == "u" else ("rho u_x/(rho0 |u0|)", "rho u_y/(rho0 |u0|)")
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{_W}" height="{_H}" '
        f'viewBox="0 0 {_W} {_H}">',
        f'<rect x="0" y="0" width="{_W}" height="{_H}" fill="white"/>',
    ]
    if title:
        out.append(f'<text x="{_W / 2:.0f}" y="20" font-family="sans-serif" font-size="14" '
                   f'text-anchor="middle">{_escape(title)}</text>')
    # axes box with ticks
    out.append(f'<rect x="{_svg_num(X(x0))}" y="{_svg_num(Y(y1))}" width="{_svg_num((x1 - x0) * s)}" '
               f'height="{_svg_num((y1 - y0) * s)}" fill="none" stroke="black" stroke-width="1"/>')
    for t in _ticks(x0, x1):
        out.append(f'<line x1="{_svg_num(X(t))}" y1="{_svg_num(Y(y0))}" x2="{_svg_num(X(t))}" '
                   f'y2="{_svg_num(Y(y0) + 5)}" stroke="black"/>')
        out.append(f'<text x="{_svg_num(X(t))}" y="{_svg_num(Y(y0) + 18)}" font-family="sans-serif" '
                   f'font-size="11" text-anchor="middle">{t:g}</text>')
    for t in _ticks(y0, y1):
        out.append(f'<line x1="{_svg_num(X(x0) - 5)}" y1="{_svg_num(Y(t))}" x2="{_svg_num(X(x0))}" '
                   f'y2="{_svg_num(Y(t))}" stroke="black"/>')
        out.append(f'<text x="{_svg_num(X(x0) - 8)}" y="{_svg_num(Y(t) + 4)}" font-family="sans-serif" '
                   f'font-size="11" text-anchor="end">{t:g}</text>')
    out.append(f'<text x="{_W / 2:.0f}" y="{_H - 12}" font-family="sans-serif" font-size="12" '
               f'text-anchor="middle">{xl}</text>')
    out.append(f'<text x="14" y="{_H / 2:.0f}" font-family="sans-serif" font-size="12" '
               f'text-anchor="middle" transform="rotate(-90 14 {_H / 2:.0f})">{yl}</text>')
    for cx, cy, r, color, dash in circles:
        out.append(f'<circle cx="{_svg_num(X(cx))}" cy="{_svg_num(Y(cy))}" r="{_svg_num(r * s)}" '
                   f'fill="none" stroke="{color}" stroke-width="1" stroke-dasharray="{dash}"/>')
    pts = " ".join(f"{_svg_num(X(a))},{_svg_num(Y(b))}" for a, b in zip(x, y))
    out.append(f'<polyline points="{pts}" fill="none" stroke="#1f4e9c" stroke-width="1.5"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _escape(s: str) -> str:
    return s.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


# ---------------------------------------------------------------------------
# text report

def _g(x, digits=9):
    return f"{x:.{digits}g}"


def render_report(curve: PolarCurve, analyses: Iterable[str] = ("convexity", "critical", "sonic", "residuals"),
                  plane: str = "u", title: Optional[str] = None, refine: bool = True) -> str:
    analyses = tuple(analyses)
    lines = []
    if title:
        lines.append(title)
    lines.append(f"model: {curve.model}")
    lines.append(f"M0: {_g(curve.M0)}")
    lines.append(f"samples: {len(curve)} (parameter {curve.param_kind})")
    if curve.normal_endpoint:
        lines.append(f"normal shock: xi = {_g(curve.xi[0])}, V/V0 = {_g(curve.V_ratio[0])}, "
                     f"M = {_g(curve.mach[0], 6)}")
    else:
        lines.append(f"normal shock: not reached; polar leaves the compressive disk at xi = {_g(curve.xi[0])}")
    if curve.knots:
        lines.append("eos knots (" + curve.param_kind + "): " + ", ".join(_g(k) for k in curve.knots))
    if "convexity" in analyses:
        rep = analysis.convexity(curve, plane, refine=refine)
        lines.append(f"convexity ({plane} plane): {rep.verdict.value}")
        if rep.events:
            for e in rep.events:
                lines.append(f"  event at {curve.param_kind} = {_g(e.location)} "
                             f"(between {_g(e.bracket[0])} and {_g(e.bracket[1])}): "
                             f"curvature {_g(e.curvature_before, 4)} -> {_g(e.curvature_after, 4)}")
            for lo, hi in rep.reversed_spans:
                lines.append(f"  reversed turning on {curve.param_kind} in [{_g(lo)}, {_g(hi)}]")
        else:
            lines.append("  events: none")
        lines.append(f"  min |curvature|: {_g(rep.min_abs_curvature, 4)}")
    cp = None
    if "critical" in analyses:
        cp = analysis.critical_point(curve)
        kind = "subsonic" if cp.subsonic else "supersonic"
        lines.append(f"critical point: theta_max = {_g(cp.theta_max_deg)} deg at xi = {_g(cp.xi)}, "
                     f"eta = {_g(cp.eta)}, M = {_g(cp.mach, 6)} ({kind})")
        lines.append(f"  local maxima: {len(cp.local_maxima)}")
    if "sonic" in analyses:
        sp = analysis.sonic_point(curve)
        if sp.status is analysis.SonicStatus.FOUND:
            for p in sp.points:
                side = ""
                if cp is not None:
                    side = " (weak side of critical)" if p.xi > cp.xi else " (strong side of critical)"
                lines.append(f"sonic point: xi = {_g(p.xi)}, eta = {_g(p.eta)}, "
                             f"{curve.param_kind} = {_g(p.param)}{side}")
        else:
            lines.append(f"sonic point: none, polar {sp.status.value}")
    if "residuals" in analyses:
        r = analysis.check_curve(curve)
        lines.append(f"max circle residual: {_g(r.circle, 3)}")
        lines.append(f"max jump-condition residual: {_g(r.jump, 3)}")
        if not math.isnan(r.hugoniot):
            lines.append(f"max Hugoniot residual: {_g(r.hugoniot, 3)}")
            lines.append(f"min entropy jump (S - S0)/R: {_g(r.min_entropy, 3)}")
    return "\n".join(lines) + "\n"
