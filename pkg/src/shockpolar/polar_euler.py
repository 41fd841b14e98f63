"""Full Euler shock polars.

Velocities are scaled by ``|u0|`` with ``u0`` along the positive x axis,
``(xi, eta) = u/|u0|``; upstream density and volume are 1. Every polar uses
the same two jump-condition consequences:

* normal momentum:  ``(P - P0) / (rho0 |u0|^2) = 1 - xi``
* mass + tangential: ``eta^2 = (xi - V/V0)(1 - xi)``

For constant ``c_v`` these combine with Bernoulli into the classical closed
form ``eta^2 = (1 - xi)^2 (xi - xi_n)/(xi_M - xi)``. For a general ideal gas
the polar is instead traced by temperature: the Hugoniot relation gives
``P(T)`` explicitly, then ``xi`` and ``eta`` follow.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import partial
from typing import Optional

import numpy as np

from .curve import PlanarCurve, PolarCurve, PolarPoint, check_monotone, parameter_grid
from .eos_ideal import PiecewiseIdealEos
from .errors import (BeyondNormalShockError, ComputationError, EosDomainTooShortError,
                     RangeError, ValidationError)
from .roots import bisect_bracket, expand_bracket

# tolerance on eta^2 below zero that is still treated as the normal shock
ETA_SQ_TOL = 1e-12
# first temperature ratio used away from the degenerate vanishing point
VANISH_OFFSET = 1e-9


def _check_mach(M0):
    if not (np.isfinite(M0) and M0 > 1):
        raise ValidationError(f"M0 must exceed 1, got {M0}")


def _check_gamma(gamma):
    if not (np.isfinite(gamma) and gamma > -1):
        raise ValidationError(f"gamma must exceed -1, got {gamma}")


@dataclass(frozen=True)
class EulerUpstream:
    """Upstream state for a full Euler polar.

    Give either ``gamma`` (polytropic closed form, any ``gamma > -1``) or an
    ideal ``eos`` together with the absolute upstream temperature ``T0``.
    """

    M0: float
    gamma: Optional[float] = None
    eos: Optional[PiecewiseIdealEos] = None
    T0: float = 1.0

    def __post_init__(self):
        _check_mach(self.M0)
        if (self.gamma is None) == (self.eos is None):
            raise ValidationError("give exactly one of gamma or eos")
        if self.gamma is not None:
            _check_gamma(self.gamma)
        elif not self.eos.contains(self.T0):
            raise ValidationError(f"T0 = {self.T0} outside eos domain [{self.eos.T_min}, {self.eos.T_max}]")

    @property
    def model(self) -> str:
        return "euler-polytropic" if self.eos is None else "euler-ideal"

    @property
    def c0_sq(self) -> float:
        """Upstream squared sound speed (``gamma`` for the polytropic form, where ``R T0 = 1``)."""
        if self.eos is None:
            return self.gamma
        return float(self.eos.sound_speed_sq(self.T0))

    @property
    def pressure_number(self) -> float:
        """``P0 / (rho0 |u0|^2)``."""
        if self.eos is None:
            return 1.0 / (self.gamma * self.M0 ** 2)
        return self.eos.R * self.T0 / (self.M0 ** 2 * self.c0_sq)

    @property
    def u0_sq(self) -> float:
        """``|u0|^2`` in units where ``R T0 = P0 V0``."""
        if self.eos is None:
            return self.gamma * self.M0 ** 2
        return self.M0 ** 2 * self.c0_sq


# ---------------------------------------------------------------------------
# polytropic closed form

def xi_bounds(M0, gamma):
    """``(xi_n, xi_M)``: the normal-shock abscissa and the pole of the closed form."""
    _check_mach(M0)
    _check_gamma(gamma)
    m2 = 2.0 / M0 ** 2
    return (m2 + gamma - 1.0) / (gamma + 1.0), 1.0 + m2 / (gamma + 1.0)


def polar_polytropic(M0, gamma, xi):
    """Upper halfpolar height ``eta(xi)`` for constant ``c_v``; ``xi`` in ``[xi_n, 1]``."""
    xi_n, xi_M = xi_bounds(M0, gamma)
    x = np.asarray(xi, dtype=float)
    if np.any((x < xi_n) | (x > 1.0)):
        raise RangeError(f"xi must lie in [{xi_n}, 1], got {x[(x < xi_n) | (x > 1.0)].flat[0]}")
    eta = (1.0 - x) * np.sqrt((x - xi_n) / (xi_M - x))
    return float(eta) if eta.ndim == 0 else eta


def _polytropic_state(up: EulerUpstream, xi):
    xi = np.asarray(xi, dtype=float)
    eta = polar_polytropic(up.M0, up.gamma, xi)
    with np.errstate(invalid="ignore", divide="ignore"):
        V = np.where(xi < 1.0, xi - np.asarray(eta) ** 2 / (1.0 - xi), 1.0)
    P = 1.0 + (1.0 - xi) / up.pressure_number
    T = P * V
    mach = np.sqrt((xi ** 2 + np.asarray(eta) ** 2) * up.M0 ** 2 / np.where(T > 0, T, np.nan))
    return eta, V, P, T, mach


def polytropic_point(up: EulerUpstream, xi: float) -> PolarPoint:
    eta, V, P, T, mach = _polytropic_state(up, xi)
    return PolarPoint(xi=float(xi), eta=float(eta), V_ratio=float(V), mach=float(mach),
                      param=float(xi), P_ratio=float(P), T_ratio=float(T))


def compressive_start(M0, gamma) -> float:
    """Smallest ``xi`` of the compressive polar.

    Equal to ``xi_n`` unless ``xi_n <= 0``, in which case the closed form
    leaves the compressive disk first and this is the ``xi`` where ``V = 0``.
    """
    xi_n, xi_M = xi_bounds(M0, gamma)
    if xi_n > 0:
        return xi_n
    V = lambda x: x - (1.0 - x) * (x - xi_n) / (xi_M - x)  # noqa: E731
    a, b = bisect_bracket(V, xi_n, 1.0)
    return b


# ---------------------------------------------------------------------------
# ideal gas chain, parametrized by temperature

def _ideal_jumps(up: EulerUpstream, T_ratio):
    """Vectorized ``T/T0 -> (P/P0 - 1, 1 - V/V0)`` from the Hugoniot relation.

    With ``p = P/P0``, ``t = T/T0`` and ``q = [e]/(R T0) + (t - 1)/2`` the
    Hugoniot relation is the quadratic ``p^2 - 2 q p - t = 0``. Both jumps
    are formed from differences directly so they keep full relative
    accuracy for weak shocks.
    """
    eos = up.eos
    t = np.asarray(T_ratio, dtype=float)
    d = t - 1.0
    q = eos.energy_increment(up.T0, d * up.T0) / (eos.R * up.T0) + 0.5 * d
    s = np.sqrt(q * q + t)
    if np.any(q + s <= 0):
        raise ComputationError("Hugoniot root gave non-positive pressure")
    dp = q + (q * q + d) / (s + 1.0)
    dv = (dp - d) / (1.0 + dp)
    return dp, dv


def _ideal_chain(up: EulerUpstream, T_ratio):
    """Vectorized ``T/T0 -> (xi, eta^2, V/V0, P/P0)``."""
    dp, dv = _ideal_jumps(up, T_ratio)
    p = 1.0 + dp
    V = np.asarray(T_ratio, dtype=float) / p
    dxi = dp * up.pressure_number  # 1 - xi
    xi = 1.0 - dxi
    eta_sq = (dv - dxi) * dxi
    return xi, eta_sq, V, p


def entropy_jump_ideal(up: EulerUpstream, T_ratio) -> float:
    """``(S - S0)/R`` across the shock with downstream temperature ``T_ratio * T0``."""
    _, dv = _ideal_jumps(up, T_ratio)
    d = np.asarray(T_ratio, dtype=float) - 1.0
    return np.log1p(-dv) + up.eos.entropy_increment(up.T0, d * up.T0)


def entropy_jump_polytropic(up: EulerUpstream, xi):
    """``(S - S0)/R = ln(V/V0) + ln(T/T0)/(gamma - 1)`` on the closed-form polar.

    The jumps ``1 - V/V0 = (1 - xi)(xi_M - xi_n)/(xi_M - xi)`` and
    ``P/P0 - 1 = (1 - xi) gamma M0^2`` are exact in ``1 - xi``, so the weak
    shock limit (entropy third order in strength) survives rounding.
    """
    if up.gamma == 1.0:
        return math.nan
    xi_n, xi_M = xi_bounds(up.M0, up.gamma)
    xi = np.asarray(xi, dtype=float)
    dxi = 1.0 - xi
    dv = dxi * (xi_M - xi_n) / (xi_M - xi)
    dp = dxi / up.pressure_number
    g = up.gamma
    return g / (g - 1.0) * np.log1p(-dv) + np.log1p(dp) / (g - 1.0)


def _ideal_mach(up: EulerUpstream, xi, eta, T_ratio):
    c_sq = up.eos.sound_speed_sq(np.asarray(T_ratio) * up.T0)
    return np.sqrt((xi ** 2 + eta ** 2) * up.u0_sq / c_sq)


def polar_ideal(up: EulerUpstream, T_ratio: float) -> PolarPoint:
    """Polar point of an ideal-gas upstream at downstream temperature ``T_ratio * T0``."""
    if up.eos is None:
        raise ValidationError("polar_ideal needs an upstream with an ideal eos")
    if T_ratio < 1:
        raise RangeError(f"compressive polar needs T_ratio >= 1, got {T_ratio}")
    xi, eta_sq, V, p = (float(v) for v in _ideal_chain(up, T_ratio))
    if eta_sq < -ETA_SQ_TOL:
        raise BeyondNormalShockError(T_ratio, eta_sq)
    eta = math.sqrt(max(eta_sq, 0.0))
    return PolarPoint(xi=xi, eta=eta, V_ratio=V, mach=float(_ideal_mach(up, xi, eta, T_ratio)),
                      param=float(T_ratio), P_ratio=p, T_ratio=float(T_ratio))


@dataclass(frozen=True)
class NormalShock:
    T: float
    T_ratio: float
    extra_roots: tuple = ()


def normal_shock(up: EulerUpstream) -> NormalShock:
    """Locate the normal-shock temperature on an ideal-gas polar.

    ``eta^2(T)`` is positive just above ``T0``; the bracket expands
    geometrically by 1.5 until ``eta^2`` turns negative, then bisection runs
    to machine precision, keeping the end with ``eta^2 >= 0``. Further sign
    changes of ``eta^2`` inside the eos domain (up to 100 T_n) are reported
    in ``extra_roots``.
    """
    if up.eos is None:
        raise ValidationError("normal_shock needs an upstream with an ideal eos")
    t_max = up.eos.T_max / up.T0
    f = lambda t: float(_ideal_chain(up, t)[1])  # noqa: E731
    start = 1.0 + VANISH_OFFSET
    if not f(start) > 0:
        raise ComputationError("eta^2 not positive next to the vanishing point")
    bracket = expand_bracket(f, start, 1.5, t_max)
    if bracket is None:
        raise EosDomainTooShortError(
            f"no normal shock below T_max = {up.eos.T_max} for M0 = {up.M0}; eos domain too short")
    t_n, _ = bisect_bracket(f, *bracket)

    extra = []
    scan_hi = min(t_max, 100.0 * t_n)
    if scan_hi > t_n * (1 + 1e-9):
        ts = t_n + (scan_hi - t_n) * np.linspace(0, 1, 2001)[1:] ** 2
        vals = _ideal_chain(up, ts)[1]
        flips = np.nonzero(np.diff(np.sign(vals)) != 0)[0]
        extra = [float(0.5 * (ts[i] + ts[i + 1])) for i in flips]
    return NormalShock(T=t_n * up.T0, T_ratio=t_n, extra_roots=tuple(extra))


def normal_shock_T(up: EulerUpstream) -> float:
    """Absolute normal-shock temperature ``T_n``."""
    return normal_shock(up).T


# ---------------------------------------------------------------------------
# sampling

def sample_polar(up: EulerUpstream, n: int = 512, include_unphysical: bool = False) -> PolarCurve:
    """Sample the compressive upper halfpolar with ``n`` points.

    ``include_unphysical`` extends a polytropic polar down to ``xi_n`` even
    where that leaves the compressive disk; such curves are for inspection
    only.
    """
    if up.eos is None:
        return _sample_polytropic(up, n, include_unphysical)
    return _sample_ideal(up, n)


def _sample_polytropic(up, n, include_unphysical):
    xi_n, _ = xi_bounds(up.M0, up.gamma)
    start = xi_n if include_unphysical else compressive_start(up.M0, up.gamma)
    xy = lambda x: (x, polar_polytropic(up.M0, up.gamma, np.clip(x, start, 1.0)))  # noqa: E731
    xi = parameter_grid(xy, start, 1.0, n)
    eta, V, P, T, mach = _polytropic_state(up, xi)
    eta = np.asarray(eta, dtype=float)
    if start == xi_n:
        eta[0] = 0.0
    eta[-1] = 0.0
    check_monotone(xi)
    return PolarCurve(
        model="euler-polytropic", M0=up.M0, param_kind="xi", param=xi, xi=xi, eta=eta,
        V_ratio=V, mach=mach, P_ratio=P, T_ratio=T, normal_endpoint=(start == xi_n),
        upstream=up, evaluate=partial(polytropic_point, up),
        resample=partial(_sample_polytropic, up, include_unphysical=include_unphysical),
    )


def _sample_ideal(up, n):
    ns = normal_shock(up)
    t_n = ns.T_ratio

    def xy(t):
        xi, eta_sq, _, _ = _ideal_chain(up, t)
        return xi, np.sqrt(np.maximum(eta_sq, 0.0))

    knots = tuple(k / up.T0 for k in up.eos.knots)
    t = parameter_grid(xy, t_n, 1.0, n, knots=knots)
    t[-2] = max(t[-2], 1.0 + VANISH_OFFSET)
    xi, eta_sq, V, p = _ideal_chain(up, t)
    if np.any(eta_sq[1:] < -ETA_SQ_TOL):
        raise BeyondNormalShockError(float(t[1:][eta_sq[1:] < -ETA_SQ_TOL][0]), float(eta_sq.min()))
    eta = np.sqrt(np.maximum(eta_sq, 0.0))
    eta[0] = 0.0
    eta[-1] = 0.0
    check_monotone(xi)
    return PolarCurve(
        model="euler-ideal", M0=up.M0, param_kind="T_ratio", param=t, xi=xi, eta=eta,
        V_ratio=V, mach=_ideal_mach(up, xi, eta, t), P_ratio=p, T_ratio=t,
        normal_endpoint=True, knots=knots, upstream=up,
        evaluate=partial(polar_ideal, up), resample=partial(_sample_ideal, up),
    )


def j_polar(curve: PolarCurve):
    """Mass-flux polar ``(rho/rho0) (xi, eta)``, in units of ``rho0 |u0|``.

    Density follows from mass conservation, ``rho/rho0 = (1 - xi)/(xi (1 - xi) - eta^2)``,
    which equals ``1 / V_ratio`` on the polar; the latter is used because it
    stays accurate near the vanishing point.
    """
    xi, eta = curve.xi, curve.eta
    denom = xi * (1.0 - xi) - eta ** 2
    interior = xi < 1.0
    if np.any(denom[interior] <= 0) or np.any(curve.V_ratio <= 0):
        raise ComputationError("j polar needs a compressive curve (positive density everywhere)")
    rho = 1.0 / curve.V_ratio
    return PlanarCurve(rho * xi, rho * eta, curve.param, curve.param_kind, "j")
