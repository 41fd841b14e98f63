"""Polar points, sampled polar curves and the sampling grid they share."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterator, Optional

import numpy as np

from .errors import ComputationError, ValidationError

MIN_SAMPLES = 16


@dataclass(frozen=True)
class PolarPoint:
    """One downstream state, velocities scaled by ``|u0|`` and thermodynamics by upstream values.

    ``P_ratio`` is ``None`` for potential flow and ``T_ratio`` is ``None``
    where no temperature is defined. ``param`` is the value of the curve
    parameter that produced the point.
    """

    xi: float
    eta: float
    V_ratio: float
    mach: float
    param: float
    P_ratio: Optional[float] = None
    T_ratio: Optional[float] = None

    @property
    def theta(self) -> float:
        """Turning angle ``atan2(eta, xi)`` in radians."""
        return math.atan2(self.eta, self.xi)

    @property
    def rho_ratio(self) -> float:
        return 1.0 / self.V_ratio


@dataclass(frozen=True)
class PlanarCurve:
    """A bare planar polyline ``(x, y)`` tagged with its generating parameter."""

    x: np.ndarray
    y: np.ndarray
    param: np.ndarray
    param_kind: str = "index"
    plane: str = "u"

    def __len__(self):
        return len(self.x)


@dataclass(frozen=True, eq=False)
class PolarCurve:
    """Upper halfpolar sampled from the normal-shock end to the vanishing end.

    Arrays are aligned and ordered by strictly increasing ``xi``. The last
    point is always the exact vanishing point ``(1, 0)``. The first point is
    the normal shock when ``normal_endpoint`` is true; otherwise the polar
    leaves the compressive disk (``V -> 0``) before reaching it and the first
    point sits at the disk boundary.

    ``evaluate(param)`` recomputes a single :class:`PolarPoint` and
    ``resample(n)`` rebuilds the curve with ``n`` samples; both are used by
    the analysis routines for refinement.
    """

    model: str
    M0: float
    param_kind: str
    param: np.ndarray
    xi: np.ndarray
    eta: np.ndarray
    V_ratio: np.ndarray
    mach: np.ndarray
    P_ratio: Optional[np.ndarray] = None
    T_ratio: Optional[np.ndarray] = None
    normal_endpoint: bool = True
    knots: tuple = ()
    upstream: object = None
    evaluate: Optional[Callable[[float], PolarPoint]] = field(default=None, repr=False)
    resample: Optional[Callable[[int], "PolarCurve"]] = field(default=None, repr=False)

    def __len__(self):
        return len(self.xi)

    @property
    def theta(self) -> np.ndarray:
        return np.arctan2(self.eta, self.xi)

    def point(self, i) -> PolarPoint:
        return PolarPoint(
            xi=float(self.xi[i]), eta=float(self.eta[i]), V_ratio=float(self.V_ratio[i]),
            mach=float(self.mach[i]), param=float(self.param[i]),
            P_ratio=None if self.P_ratio is None else float(self.P_ratio[i]),
            T_ratio=None if self.T_ratio is None else float(self.T_ratio[i]),
        )

    def points(self) -> Iterator[PolarPoint]:
        for i in range(len(self)):
            yield self.point(i)

    def u_plane(self) -> PlanarCurve:
        return PlanarCurve(self.xi, self.eta, self.param, self.param_kind, "u")


def clustered_unit(n: int) -> np.ndarray:
    """``n`` points on [0, 1], cosine-clustered toward both ends."""
    return 0.5 * (1.0 - np.cos(np.linspace(0.0, math.pi, n)))


def _pilot(p_a, p_b, m):
    """Dense pilot grid on [p_a, p_b], resolving both ends geometrically."""
    span = p_b - p_a
    offs = np.geomspace(1e-12, 1.0, m) * span
    pts = np.concatenate([np.linspace(p_a, p_b, m), p_a + offs, p_b - offs])
    return np.unique(np.clip(pts, p_a, p_b))


def parameter_grid(xy: Callable[[np.ndarray], tuple], p_normal: float, p_vanish: float, n: int,
                   knots=(), knot_share: float = 0.25, pilot_size: int | None = None) -> np.ndarray:
    """Parameter values giving ``n`` samples spread along the polar's arc length.

    ``xy(params)`` must return ``(xi, eta)`` arrays. Samples follow a cosine
    clustering of arc length between the two endpoints; additionally each
    interior ``knot`` of the eos gets a geometric cluster of samples on both
    sides, since curvature is discontinuous there. The result runs from
    ``p_normal`` to ``p_vanish`` and contains both endpoints exactly.
    """
    if n < MIN_SAMPLES:
        raise ValidationError(f"need at least {MIN_SAMPLES} samples, got {n}")
    lo, hi = sorted((p_normal, p_vanish))
    inner = [k for k in knots if lo < k < hi]
    m = pilot_size or max(16 * n, 8192)
    pil = _pilot(lo, hi, m)
    x, y = xy(pil)
    s = np.concatenate([[0.0], np.cumsum(np.hypot(np.diff(x), np.diff(y)))])
    if not s[-1] > 0:
        raise ComputationError("degenerate polar: zero arc length")

    extra = []
    if inner:
        per_side = max(1, int(knot_share * n) // (2 * len(inner)))
        rel = np.geomspace(1e-6, 5e-2, per_side)
        for k in inner:
            extra.append([k])
            for side in (-1.0, 1.0):
                pts = k + side * rel * (abs(k) or hi - lo)
                extra.append(pts[(pts > lo) & (pts < hi)])
    extra = np.unique(np.concatenate(extra)) if extra else np.empty(0)

    n_base = n - len(extra)
    for _ in range(20):
        if n_base < MIN_SAMPLES // 2:
            raise ValidationError(f"{n} samples too few to resolve {len(inner)} eos knots")
        targets = s[-1] * clustered_unit(n_base)
        base = np.interp(targets, s, pil)
        base[0], base[-1] = lo, hi
        grid = np.unique(np.concatenate([base, extra]))
        if len(grid) == n:
            break
        n_base += n - len(grid)
    else:
        raise ComputationError("could not build a parameter grid of the requested size")
    return grid if p_normal <= p_vanish else grid[::-1]


def check_monotone(xi: np.ndarray):
    if not np.all(np.diff(xi) > 0):
        i = int(np.argmin(np.diff(xi)))
        raise ComputationError(f"polar samples not strictly increasing in xi near index {i}")
