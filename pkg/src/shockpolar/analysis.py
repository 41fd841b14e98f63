"""Geometry and verification of sampled shock polars.

Convexity is judged from signed three-point (Menger) curvature of the
sampled polyline. A sign change only counts as an event when the curvature
on both sides clears a roundoff floor, and :func:`convexity` can demand that
events persist when the polar is resampled twice as densely.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import NamedTuple, Optional, Union

import numpy as np
from scipy import optimize

from .curve import MIN_SAMPLES, PlanarCurve, PolarCurve, PolarPoint
from .errors import RangeError, ValidationError
from .polar_euler import (EulerUpstream, entropy_jump_ideal, entropy_jump_polytropic, j_polar,
                          xi_bounds)
from .polar_potential import PotentialUpstream
from .roots import bisect_bracket

EPS = np.finfo(float).eps
NOISE_FACTOR = 1e3


class Verdict(str, Enum):
    STRICTLY_CONVEX = "strictly-convex"
    NON_CONVEX = "non-convex"
    INDETERMINATE = "indeterminate"


@dataclass(frozen=True)
class CurvatureEvent:
    """A sign change between two significant discrete curvatures.

    ``bracket`` holds the parameters of the two vertices; ``location`` is
    their midpoint.
    """

    location: float
    bracket: tuple
    curvature_before: float
    curvature_after: float
    index: int

    def overlaps(self, other: "CurvatureEvent") -> bool:
        a0, a1 = sorted(self.bracket)
        b0, b1 = sorted(other.bracket)
        return a0 <= b1 and b0 <= a1


@dataclass(frozen=True)
class ConvexityReport:
    verdict: Verdict
    events: tuple
    min_abs_curvature: float
    plane: str = "u"
    n: int = 0
    turns_consistent: bool = False
    refined: bool = False
    reversed_spans: tuple = ()

    @property
    def is_convex(self) -> bool:
        return self.verdict is Verdict.STRICTLY_CONVEX


def discrete_curvature(x, y):
    """Signed Menger curvature at interior vertices and its roundoff floor.

    Positive means a counterclockwise turn. The floor is
    ``1e3 * eps * (local coordinate magnitude) / (shorter chord)^2``.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    ax, ay = np.diff(x)[:-1], np.diff(y)[:-1]
    bx, by = np.diff(x)[1:], np.diff(y)[1:]
    cross = ax * by - ay * bx
    la = np.hypot(ax, ay)
    lb = np.hypot(bx, by)
    lc = np.hypot(x[2:] - x[:-2], y[2:] - y[:-2])
    with np.errstate(divide="ignore", invalid="ignore"):
        kappa = 2.0 * cross / (la * lb * lc)
    mag = np.maximum.reduce([np.abs(x[:-2]), np.abs(x[1:-1]), np.abs(x[2:]),
                             np.abs(y[:-2]), np.abs(y[1:-1]), np.abs(y[2:])])
    floor = NOISE_FACTOR * EPS * np.maximum(mag, 1e-300) / np.minimum(la, lb) ** 2
    return kappa, floor, cross


def planar(curve, plane) -> PlanarCurve:
    if isinstance(curve, PlanarCurve):
        return curve
    if plane == "u":
        return curve.u_plane()
    if plane == "j":
        return j_polar(curve)
    raise ValidationError(f"unknown polar plane {plane!r}; expected 'u' or 'j'")


def _single_grid(pc: PlanarCurve) -> ConvexityReport:
    n = len(pc)
    if n < MIN_SAMPLES:
        raise ValidationError(f"convexity needs at least {MIN_SAMPLES} points, got {n}")
    kappa, floor, cross = discrete_curvature(pc.x, pc.y)
    sig = np.abs(kappa) > floor
    mid = pc.param[1:-1]
    if not np.any(sig):
        return ConvexityReport(Verdict.INDETERMINATE, (), 0.0, pc.plane, n)
    idx = np.nonzero(sig)[0]
    s = np.sign(kappa[idx])
    events = []
    for k in np.nonzero(s[1:] != s[:-1])[0]:
        i, j = idx[k], idx[k + 1]
        events.append(CurvatureEvent(
            location=float(0.5 * (mid[i] + mid[j])), bracket=(float(mid[i]), float(mid[j])),
            curvature_before=float(kappa[i]), curvature_after=float(kappa[j]), index=int(j + 1)))
    consistent = bool(np.all(cross < 0) or np.all(cross > 0))
    spans = _reversed_spans(sig & (kappa > 0), mid)
    if events:
        verdict = Verdict.NON_CONVEX
    elif consistent:
        verdict = Verdict.STRICTLY_CONVEX
    else:
        verdict = Verdict.INDETERMINATE
    return ConvexityReport(verdict, tuple(events), float(np.min(np.abs(kappa[idx]))), pc.plane, n,
                           consistent, reversed_spans=spans)


def _reversed_spans(mask, param) -> tuple:
    """Parameter ranges of maximal runs of significant counterclockwise vertices."""
    spans = []
    i = 0
    while i < len(mask):
        if mask[i]:
            j = i
            while j + 1 < len(mask) and mask[j + 1]:
                j += 1
            spans.append(tuple(sorted((float(param[i]), float(param[j])))))
            i = j + 1
        else:
            i += 1
    return tuple(spans)


def convexity(curve: Union[PolarCurve, PlanarCurve], plane: str = "u", refine: bool = False) -> ConvexityReport:
    """Convexity verdict for a sampled halfpolar in the ``u`` or ``j`` plane.

    Strictly convex means every vertex turns the same way (for the upper
    ``u`` halfpolar: slopes strictly increase from right to left) with at
    least one curvature above the noise floor. Non-convex means at least one
    event. Anything else is indeterminate. ``reversed_spans`` lists the
    parameter ranges whose vertices turn counterclockwise beyond the floor.

    With ``refine=True`` the polar is resampled at twice the density and only
    events whose vertex brackets overlap an event on the fine grid are kept.
    """
    report = _single_grid(planar(curve, plane))
    if not refine:
        return report
    if not isinstance(curve, PolarCurve) or curve.resample is None:
        raise ValidationError("refinement needs a PolarCurve that can be resampled")
    fine = _single_grid(planar(curve.resample(2 * len(curve)), plane))
    kept = tuple(e for e in report.events if any(e.overlaps(f) for f in fine.events))
    if kept:
        verdict = Verdict.NON_CONVEX
    elif report.verdict is Verdict.STRICTLY_CONVEX or (report.events and fine.verdict is Verdict.STRICTLY_CONVEX):
        verdict = fine.verdict
    else:
        verdict = Verdict.INDETERMINATE
    return ConvexityReport(verdict, kept, report.min_abs_curvature, report.plane, report.n,
                           report.turns_consistent, refined=True, reversed_spans=fine.reversed_spans)


def chord_slopes(curve: PolarCurve) -> np.ndarray:
    """``d eta / d xi`` of successive chords of the u-polar."""
    return np.diff(curve.eta) / np.diff(curve.xi)


# ---------------------------------------------------------------------------
# analytic curvature of the polytropic Euler polar

def _log_derivative_terms(M0, gamma, xi):
    xi_n, xi_M = xi_bounds(M0, gamma)
    xi = np.asarray(xi, dtype=float)
    if np.any((xi <= xi_n) | (xi >= 1.0)):
        raise RangeError(f"xi must lie strictly inside ({xi_n}, 1)")
    return xi, xi_n, xi_M


def euler_polytropic_log_curvature(M0, gamma, xi):
    """``l^2 + l_xi`` for ``l = (ln eta)_xi``, in the factored form.

    With ``U = 1/(1 - xi)``, ``n = 1/(xi - xi_n)``, ``m = 1/(xi_M - xi)``
    (all positive inside the polar) the expression equals
    ``(n + m)(-4U - n + 3m)/4``, and ``U > m`` makes it negative.
    """
    xi, xi_n, xi_M = _log_derivative_terms(M0, gamma, xi)
    U = 1.0 / (1.0 - xi)
    n = 1.0 / (xi - xi_n)
    m = 1.0 / (xi_M - xi)
    return (n + m) * (-4.0 * U - n + 3.0 * m) / 4.0


def euler_polytropic_log_curvature_direct(M0, gamma, xi):
    """``l^2 + l_xi`` summed directly from the partial fractions of ``l``."""
    xi, xi_n, xi_M = _log_derivative_terms(M0, gamma, xi)
    roots = (1.0, xi_n, xi_M)
    powers = (1.0, 0.5, -0.5)
    l = sum(a / (xi - r) for a, r in zip(powers, roots))
    l_xi = sum(-a / (xi - r) ** 2 for a, r in zip(powers, roots))
    return l * l + l_xi


def euler_polytropic_curvature(M0, gamma, xi):
    """Analytic ``eta_xixi = eta (l^2 + l_xi)`` of the polytropic halfpolar."""
    from .polar_euler import polar_polytropic

    return polar_polytropic(M0, gamma, xi) * euler_polytropic_log_curvature(M0, gamma, xi)


def euler_polytropic_curvature_sign(M0, gamma, xi):
    return np.sign(euler_polytropic_curvature(M0, gamma, xi))


# ---------------------------------------------------------------------------
# critical and sonic points

@dataclass(frozen=True)
class CriticalPoint:
    xi: float
    eta: float
    theta_max: float
    mach: float
    param: float
    local_maxima: tuple = field(default=(), repr=False)

    @property
    def theta_max_deg(self) -> float:
        return math.degrees(self.theta_max)

    @property
    def multiple(self) -> bool:
        return len(self.local_maxima) > 1

    @property
    def subsonic(self) -> bool:
        return self.mach < 1.0


def _refine_max(curve: PolarCurve, i: int, tol: float) -> PolarPoint:
    a, b, c = curve.param[i - 1], curve.param[i], curve.param[i + 1]
    f = lambda p: -curve.evaluate(float(p)).theta  # noqa: E731
    try:
        res = optimize.minimize_scalar(f, bracket=(a, b, c), method="golden", tol=tol)
        p = float(res.x)
        if not min(a, c) <= p <= max(a, c) or -res.fun < curve.theta[i]:
            p = float(b)
    except ValueError:
        p = float(b)
    return curve.evaluate(p)


def critical_point(curve: PolarCurve, tol: float = 1e-10) -> CriticalPoint:
    """Maximum turning angle along the halfpolar.

    Every strict local maximum of ``theta`` on the sample grid is refined by
    golden-section search in the curve parameter; the largest is returned
    and all of them are kept in ``local_maxima``.
    """
    th = curve.theta
    interior = np.arange(1, len(th) - 1)
    peaks = interior[(th[interior] >= th[interior - 1]) & (th[interior] > th[interior + 1])]
    if curve.evaluate is None or len(peaks) == 0:
        i = int(np.argmax(th))
        pts = [curve.point(i)]
    else:
        pts = [_refine_max(curve, int(i), tol) for i in peaks]
    pts.sort(key=lambda p: -p.theta)
    best = pts[0]
    return CriticalPoint(best.xi, best.eta, best.theta, best.mach, best.param, tuple(pts))


class SonicStatus(str, Enum):
    FOUND = "found"
    SUPERSONIC = "entirely-supersonic"
    SUBSONIC = "entirely-subsonic"


class SonicResult(NamedTuple):
    status: SonicStatus
    points: tuple

    @property
    def point(self) -> Optional[PolarPoint]:
        return self.points[0] if self.points else None


def sonic_point(curve: PolarCurve) -> SonicResult:
    """Points where the downstream Mach number crosses 1, refined by bisection in the parameter."""
    f = curve.mach - 1.0
    flips = np.nonzero(np.sign(f[:-1]) * np.sign(f[1:]) < 0)[0]
    exact = np.nonzero(f == 0)[0]
    if len(flips) == 0 and len(exact) == 0:
        status = SonicStatus.SUPERSONIC if np.all(f > 0) else SonicStatus.SUBSONIC
        return SonicResult(status, ())
    pts = [curve.point(int(i)) for i in exact]
    for i in flips:
        lo, hi = float(curve.param[i]), float(curve.param[i + 1])
        if curve.evaluate is None:
            pts.append(curve.point(int(i)))
            continue
        g = lambda p: curve.evaluate(p).mach - 1.0  # noqa: E731
        a, b = bisect_bracket(g, lo, hi, rtol=1e-13)
        pts.append(curve.evaluate(0.5 * (a + b)))
    pts.sort(key=lambda p: p.xi)
    return SonicResult(SonicStatus.FOUND, tuple(pts))


# ---------------------------------------------------------------------------
# vanishing end

def vanishing_slope(M0) -> float:
    """``-tan(arcsin(1/M0))``, the tangent of the Mach angle with a minus sign."""
    if not M0 > 1:
        raise ValidationError(f"M0 must exceed 1, got {M0}")
    return -math.tan(math.asin(1.0 / M0))


def mach_wave_normal_slope(M0) -> float:
    """``-sqrt(M0^2 - 1) = -cot(arcsin(1/M0))``.

    A vanishing shock is a Mach wave, and the velocity jump across it is
    normal to the wave; this is the slope ``d eta / d xi`` of that normal.
    """
    if not M0 > 1:
        raise ValidationError(f"M0 must exceed 1, got {M0}")
    return -math.sqrt(M0 * M0 - 1.0)


def endpoint_chord_slope(curve: PolarCurve) -> float:
    """Slope ``d eta / d xi`` of the last chord, ending at the vanishing point."""
    return float((curve.eta[-2] - curve.eta[-1]) / (curve.xi[-2] - curve.xi[-1]))


# ---------------------------------------------------------------------------
# jump-condition residuals

class Residuals(NamedTuple):
    values: np.ndarray
    skipped: bool

    @property
    def max_abs(self) -> float:
        return float(np.max(np.abs(self.values))) if not self.skipped else 0.0


def _frame(point: PolarPoint):
    dx, dy = 1.0 - point.xi, -point.eta
    norm = math.hypot(dx, dy)
    if norm == 0.0:
        return None
    nx, ny = dx / norm, dy / norm
    return (nx, ny), (-ny, nx)


def _enthalpy_jump_euler(up: EulerUpstream, point: PolarPoint) -> float:
    """``(h - h0)/|u0|^2``."""
    if up.eos is None:
        if up.gamma == 1.0:
            return math.nan
        # h = gamma/(gamma-1) P V with P0 V0 = R T0 = 1
        dh = up.gamma / (up.gamma - 1.0) * (point.P_ratio * point.V_ratio - 1.0)
        return dh / up.u0_sq
    dT = (point.T_ratio - 1.0) * up.T0
    dh = up.eos.energy_increment(up.T0, dT) + up.eos.R * dT
    return float(dh) / up.u0_sq


def _scaled(value, *terms):
    """Residual relative to the larger of 1 (upstream scale) and the size of its terms."""
    return value / max(1.0, sum(abs(t) for t in terms))


def shock_residuals_euler(up: EulerUpstream, point: PolarPoint) -> Residuals:
    """Mass, tangential momentum, normal momentum and energy jumps.

    Units: ``rho0 = 1``, ``|u0| = 1``. The shock normal is ``(u0 - u)/|u0 - u|``;
    at the vanishing point it is undefined and the check is skipped. Each
    jump is divided by ``max(1, sum of |terms|)``, so for strong compression
    (``rho >> rho0``) it measures the backward error of the stored state.
    """
    frame = _frame(point)
    if frame is None:
        return Residuals(np.zeros(4), True)
    (nx, ny), (tx, ty) = frame
    rho = 1.0 / point.V_ratio
    u0n = nx
    mass = _scaled(rho * (point.xi * nx + point.eta * ny) - u0n,
                   rho * point.xi * nx, rho * point.eta * ny, u0n)
    tang = _scaled((point.xi * tx + point.eta * ty) - tx, point.xi * tx, point.eta * ty, tx)
    dP = (point.P_ratio - 1.0) * up.pressure_number
    dV = u0n ** 2 * (point.V_ratio - 1.0)
    momentum = _scaled(dP + dV, dP, dV)
    dh = _enthalpy_jump_euler(up, point)
    dk = 0.5 * (point.xi ** 2 + point.eta ** 2 - 1.0)
    energy = _scaled(dh + dk, dh, dk)
    return Residuals(np.array([mass, tang, momentum, energy]), False)


def shock_residuals_potential(up: PotentialUpstream, point: PolarPoint) -> Residuals:
    """Mass, tangential velocity and Bernoulli jumps for potential flow, scaled as in the Euler case."""
    frame = _frame(point)
    if frame is None:
        return Residuals(np.zeros(3), True)
    (nx, ny), (tx, ty) = frame
    rho = 1.0 / point.V_ratio
    mass = _scaled(rho * (point.xi * nx + point.eta * ny) - nx, rho * point.xi * nx, rho * point.eta * ny, nx)
    tang = _scaled((point.xi * tx + point.eta * ty) - tx, point.xi * tx, point.eta * ty, tx)
    dh = (up.eos.enthalpy(point.V_ratio) - up.eos.enthalpy(1.0)) / up.u0_sq
    dk = 0.5 * (point.xi ** 2 + point.eta ** 2 - 1.0)
    energy = _scaled(dh + dk, dh, dk)
    return Residuals(np.array([mass, tang, energy]), False)


def shock_residuals(up, point: PolarPoint) -> Residuals:
    if isinstance(up, PotentialUpstream):
        return shock_residuals_potential(up, point)
    return shock_residuals_euler(up, point)


def hugoniot_residual(up: EulerUpstream, point: PolarPoint) -> float:
    """``([e] + <P>[V]) / (P0 V0)``, which vanishes on every Euler shock."""
    if up.eos is None:
        de = (point.T_ratio - 1.0) / (up.gamma - 1.0) if up.gamma != 1.0 else 0.0
    else:
        de = up.eos.energy_increment(up.T0, (point.T_ratio - 1.0) * up.T0) / (up.eos.R * up.T0)
    return float(de + 0.5 * (point.P_ratio + 1.0) * (point.V_ratio - 1.0))


def entropy_jump(up: EulerUpstream, point: PolarPoint) -> float:
    """``(S - S0)/R`` across the shock, recomputed from the point's curve parameter."""
    if up.eos is None:
        return float(entropy_jump_polytropic(up, point.param))
    return float(entropy_jump_ideal(up, point.param))


def circle_check(point: PolarPoint) -> float:
    """Distance of ``eta^2`` from the constant-density circle through ``V/V0`` and 1."""
    V = point.V_ratio
    return abs((point.xi - 0.5 * (1.0 + V)) ** 2 + point.eta ** 2 - (0.5 * (1.0 - V)) ** 2)


class CurveResiduals(NamedTuple):
    circle: float
    jump: float
    hugoniot: float
    min_entropy: float


def check_curve(curve: PolarCurve, entropy: bool = True) -> CurveResiduals:
    """Maximum residuals of every oracle over all points of a sampled polar.

    ``hugoniot`` and ``min_entropy`` are ``nan`` for potential flow.
    """
    up = curve.upstream
    circle = jump = hug = 0.0
    smin = math.inf
    euler = isinstance(up, EulerUpstream)
    for p in curve.points():
        circle = max(circle, circle_check(p))
        jump = max(jump, shock_residuals(up, p).max_abs)
        if euler:
            hug = max(hug, abs(hugoniot_residual(up, p)))
            if entropy and p.xi < 1.0:
                smin = min(smin, entropy_jump(up, p))
    if not euler:
        hug = smin = math.nan
    return CurveResiduals(circle, jump, hug, smin)
