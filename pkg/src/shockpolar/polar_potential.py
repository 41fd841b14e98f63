"""Full potential-flow shock polars, traced by downstream volume.

Mass and tangential-velocity conservation still give
``eta^2 = (xi - V/V0)(1 - xi)``; Bernoulli ``[h] + [|u|^2]/2 = 0`` then
solves for ``xi`` in closed form::

    xi(V) = 1 - 2 (h(V) - h0) / (|u0|^2 (1 + V/V0))

``xi`` is strictly increasing in ``V`` on the compressive side, so the curve
is never inverted; it is stored against ``V`` and reported against ``xi``.
Volumes are in units of ``V0`` throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import partial

import numpy as np

from .curve import PolarCurve, PolarPoint, check_monotone, parameter_grid
from .eos_barotropic import BarotropicEos
from .errors import (ComputationError, EosDomainTooShortError, InconsistentStateError,
                     RangeError, ValidationError)
from .roots import bisect_bracket

ETA_SQ_TOL = 1e-12
# smallest volume used when the polar runs into the V = 0 disk boundary
V_FLOOR = 1e-12


@dataclass(frozen=True)
class PotentialUpstream:
    M0: float
    eos: BarotropicEos

    def __post_init__(self):
        if not (np.isfinite(self.M0) and self.M0 > 1):
            raise ValidationError(f"M0 must exceed 1, got {self.M0}")
        if not (self.eos.V_min <= 1.0 <= self.eos.V_max):
            raise ValidationError("upstream volume V0 = 1 outside the eos domain")

    model = "potential"

    @property
    def c0_sq(self) -> float:
        return float(self.eos.sound_speed_sq(1.0))

    @property
    def u0_sq(self) -> float:
        return self.M0 ** 2 * self.c0_sq


def xi_of_V(up: PotentialUpstream, V):
    """Bernoulli-consistent ``xi`` for downstream volume ``V`` (vectorized)."""
    V = np.asarray(V, dtype=float)
    if np.any(V > 1.0):
        raise RangeError("compressive polar needs V <= V0")
    dh = up.eos.enthalpy(V) - up.eos.enthalpy(1.0)
    xi = 1.0 - 2.0 * dh / (up.u0_sq * (1.0 + V))
    return float(xi) if xi.ndim == 0 else xi


def eta_of(xi, V):
    """Upper halfpolar height from mass conservation, ``V/V0 <= xi <= 1``."""
    eta_sq = (xi - V) * (1.0 - xi)
    if eta_sq < -ETA_SQ_TOL:
        raise InconsistentStateError(f"xi = {xi}, V = {V} give eta^2 = {eta_sq:.3e} < 0")
    return math.sqrt(max(eta_sq, 0.0))


def _mach(up, xi, eta, V):
    return np.sqrt((xi ** 2 + eta ** 2) * up.u0_sq / up.eos.sound_speed_sq(V))


def point_at(up: PotentialUpstream, V: float) -> PolarPoint:
    xi = xi_of_V(up, V)
    eta = eta_of(xi, V)
    return PolarPoint(xi=xi, eta=eta, V_ratio=float(V), mach=float(_mach(up, xi, eta, V)), param=float(V))


@dataclass(frozen=True)
class NormalShockV:
    V: float
    reached: bool  # False when the polar hits the V = 0 disk boundary instead


def _gap(up, V):
    return xi_of_V(up, V) - V


def normal_shock_V(up: PotentialUpstream) -> float:
    """Downstream volume of the normal shock, the root of ``xi(V) = V``.

    Raises :class:`EosDomainTooShortError` when no root exists in the eos
    domain.
    """
    ns = _normal_shock(up)
    if not ns.reached:
        raise EosDomainTooShortError(
            f"normal shock not reached inside the eos domain (V >= {up.eos.V_min}) for M0 = {up.M0}; "
            "eos domain too short")
    return ns.V


def _normal_shock(up: PotentialUpstream) -> NormalShockV:
    eos = up.eos
    lo = max(eos.V_min, V_FLOOR)
    # xi(V) - V is positive just below V0 for supersonic inflow
    hi = 1.0 - 1e-9
    if not _gap(up, hi) > 0:
        raise ComputationError("xi(V) - V not positive next to the vanishing point")
    if _gap(up, lo) > 0:
        # a geometric scan guards against roots hidden between lo and hi
        grid = np.geomspace(lo, hi, 4097)
        g = np.asarray(_gap(up, grid))
        neg = np.nonzero(g <= 0)[0]
        if len(neg) == 0:
            return NormalShockV(lo, False)
        lo = grid[neg[-1]]
    a, b = bisect_bracket(lambda v: _gap(up, v), lo, hi)
    return NormalShockV(b, True)


def V_xi(up: PotentialUpstream, V):
    """``dV/dxi`` along the polar (positive on the compressive side)."""
    xi = xi_of_V(up, V)
    D = 1.0 - xi - 2.0 * up.eos.enthalpy_V(V) / up.u0_sq
    return (1.0 + V) / D


def eta_second_derivative(up: PotentialUpstream, V):
    """Analytic ``d^2 eta / d xi^2`` at the polar point with volume ``V``.

    With ``a = xi - V``, ``b = 1 - xi`` and ``eta = sqrt(a b)``::

        eta_xixi = (-2 V_xixi a b^2 - (b a_xi - a b_xi)^2) / (4 eta^3)

    where differentiating Bernoulli twice along the polar gives, with
    ``D = 1 - xi - 2 h_V / |u0|^2``::

        V_xi  = (1 + V) / D
        V_xixi = V_xi (2 + 2 h_VV V_xi / |u0|^2) / D

    so ``h_VV >= 0`` forces ``V_xixi > 0`` and a concave halfpolar.
    ``V`` must lie strictly between the endpoints, where ``eta > 0``.
    """
    V = np.asarray(V, dtype=float)
    xi = np.asarray(xi_of_V(up, V))
    a = xi - V
    b = 1.0 - xi
    if np.any((a <= 0) | (b <= 0)):
        raise RangeError("eta_xixi is degenerate at the polar endpoints")
    u2 = up.u0_sq
    D = b - 2.0 * up.eos.enthalpy_V(V) / u2
    Vx = (1.0 + V) / D
    Vxx = Vx * (2.0 + 2.0 * up.eos.enthalpy_VV(V) * Vx / u2) / D
    ax = 1.0 - Vx
    bx = -1.0
    eta3 = (a * b) ** 1.5
    out = (-2.0 * Vxx * a * b * b - (b * ax - a * bx) ** 2) / (4.0 * eta3)
    return float(out) if out.ndim == 0 else out


def sample_polar(up: PotentialUpstream, n: int = 512) -> PolarCurve:
    """Sample the compressive upper halfpolar with ``n`` points, parametrized by ``V``."""
    ns = _normal_shock(up)

    def xy(V):
        xi = np.asarray(xi_of_V(up, V))
        return xi, np.sqrt(np.maximum((xi - V) * (1.0 - xi), 0.0))

    V = parameter_grid(xy, ns.V, 1.0, n, knots=up.eos.knots)
    xi = np.asarray(xi_of_V(up, V))
    eta_sq = (xi - V) * (1.0 - xi)
    if np.any(eta_sq < -ETA_SQ_TOL):
        raise InconsistentStateError("sampled polar left the compressive disk")
    eta = np.sqrt(np.maximum(eta_sq, 0.0))
    if ns.reached:
        # the normal shock is the root of xi(V) = V; store it exactly so that
        # rho * xi = 1 holds even when V_n is tiny
        xi[0] = V[0]
        eta[0] = 0.0
    eta[-1] = 0.0
    check_monotone(xi)
    return PolarCurve(
        model="potential", M0=up.M0, param_kind="V_ratio", param=V, xi=xi, eta=eta, V_ratio=V,
        mach=_mach(up, xi, eta, V), normal_endpoint=ns.reached, knots=up.eos.knots, upstream=up,
        evaluate=partial(point_at, up), resample=partial(sample_polar, up),
    )
