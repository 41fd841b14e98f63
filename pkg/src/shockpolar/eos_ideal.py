"""Ideal-gas equations of state ``e = e(T)`` built from analytic branches.

Each branch has a closed-form energy antiderivative:

========================  =====================================  ==============================
kind                      heat capacity ``e_T``                  energy ``e`` (up to a constant)
========================  =====================================  ==============================
``polytropic``            ``c_v``                                ``c_v T``
``constant-c``            ``R / (C/(R T) - 1)``                  ``-R T - C ln(C - R T)``
``borderline-convex``     ``R ((1 - 4 C R T)^(-1/2) - 1) / 2``   ``R/2 (-(1-4CRT)^(1/2)/(2CR) - T)``
========================  =====================================  ==============================

The ``constant-c`` branch has sound speed ``c^2 = C`` exactly and sits on the
boundary of the monotone-sound-speed condition; ``borderline-convex`` sits on
the boundary of the convex-eos condition.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import NamedTuple, Sequence

import numpy as np

from .errors import DomainError, ValidationError

# relative tolerance for declaring an eos inequality an equality
BORDERLINE_RTOL = 1e-9
# relative tolerance for e and e_T continuity at knots
KNOT_RTOL = 1e-9


class BranchKind(str, Enum):
    POLYTROPIC = "polytropic"
    CONSTANT_SOUND_SPEED = "constant-c"
    BORDERLINE_CONVEX = "borderline-convex"


class EosConvexity(str, Enum):
    STRICTLY_CONVEX = "strictly-convex"
    BORDERLINE = "borderline"
    NON_CONVEX = "non-convex"


class ConvexityClass(NamedTuple):
    convexity: EosConvexity
    monotone_sound_speed: bool


def _kind(kind) -> BranchKind:
    try:
        return BranchKind(kind)
    except ValueError:
        names = ", ".join(k.value for k in BranchKind)
        raise ValidationError(f"unknown branch kind {kind!r}; expected one of {names}") from None


def match_parameter(kind, T, e_T, R=1.0):
    """Branch parameter giving heat capacity ``e_T`` at temperature ``T``.

    Used to keep ``e_T`` continuous across a knot.
    """
    kind = _kind(kind)
    if e_T <= 0:
        raise ValidationError(f"heat capacity must be positive, got {e_T}")
    if kind is BranchKind.POLYTROPIC:
        return float(e_T)
    if kind is BranchKind.CONSTANT_SOUND_SPEED:
        return float(R * T * (1.0 + R / e_T))
    s = 1.0 + 2.0 * e_T / R
    return float(-math.expm1(-2.0 * math.log(s)) / (4.0 * R * T))


@dataclass(frozen=True)
class EosBranch:
    """One analytic branch on ``[T_lo, T_hi]``.

    ``parameter`` is ``c_v`` for polytropic branches and the constant ``C``
    otherwise. ``offset`` is the additive integration constant of ``e``.
    """

    kind: BranchKind
    T_lo: float
    T_hi: float
    parameter: float
    offset: float = 0.0

    def _raw_energy(self, T, R):
        p = self.parameter
        if self.kind is BranchKind.POLYTROPIC:
            return p * T
        if self.kind is BranchKind.CONSTANT_SOUND_SPEED:
            return -R * T - p * np.log(p - R * T)
        w = 1.0 - 4.0 * p * R * T
        return 0.5 * R * (-np.sqrt(w) / (2.0 * p * R) - T)

    def energy(self, T, R):
        return self._raw_energy(T, R) + self.offset

    def heat_capacity(self, T, R):
        p = self.parameter
        if self.kind is BranchKind.POLYTROPIC:
            return np.full_like(np.asarray(T, dtype=float), p)
        if self.kind is BranchKind.CONSTANT_SOUND_SPEED:
            return R * R * T / (p - R * T)
        # expm1/log1p keeps accuracy when 4CRT is small
        return 0.5 * R * np.expm1(-0.5 * np.log1p(-4.0 * p * R * T))

    def heat_capacity_T(self, T, R):
        """Analytic ``e_TT``."""
        p = self.parameter
        if self.kind is BranchKind.POLYTROPIC:
            return np.zeros_like(np.asarray(T, dtype=float))
        if self.kind is BranchKind.CONSTANT_SOUND_SPEED:
            return R * R * p / (p - R * T) ** 2
        return R * R * p * (1.0 - 4.0 * p * R * T) ** -1.5

    def energy_increment(self, T, dT, R):
        """``e(T + dT) - e(T)`` for ``dT >= 0`` inside the branch, without cancellation."""
        p = self.parameter
        if self.kind is BranchKind.POLYTROPIC:
            return p * dT
        if self.kind is BranchKind.CONSTANT_SOUND_SPEED:
            return -R * dT - p * np.log1p(-R * dT / (p - R * T))
        a = 4.0 * p * R
        w_sum = np.sqrt(1.0 - a * T) + np.sqrt(1.0 - a * (T + dT))
        return R * dT * (1.0 / w_sum - 0.5)

    def entropy_increment(self, T, dT, R):
        """``int_T^{T+dT} e_T/(R t) dt`` in closed form."""
        p = self.parameter
        if self.kind is BranchKind.POLYTROPIC:
            return p / R * np.log1p(dT / T)
        if self.kind is BranchKind.CONSTANT_SOUND_SPEED:
            return -np.log1p(-R * dT / (p - R * T))
        # antiderivative ln(4CR)/2 - ln(1 + sqrt(1 - 4CRt))
        a = 4.0 * p * R
        w_a = np.sqrt(1.0 - a * T)
        w_b = np.sqrt(1.0 - a * (T + dT))
        return -np.log1p(-a * dT / ((w_a + w_b) * (1.0 + w_a)))

    def check_valid(self, R):
        if not (self.T_lo > 0 and self.T_hi > self.T_lo):
            raise ValidationError(f"{self.kind.value} branch needs 0 < T_lo < T_hi, got [{self.T_lo}, {self.T_hi}]")
        p = self.parameter
        if not np.isfinite(p):
            raise ValidationError(f"{self.kind.value} branch parameter must be finite, got {p}")
        if self.kind is BranchKind.POLYTROPIC:
            if p <= 0:
                raise ValidationError(f"polytropic branch needs c_v > 0, got {p}")
        elif self.kind is BranchKind.CONSTANT_SOUND_SPEED:
            if not np.isfinite(self.T_hi) or p <= R * self.T_hi:
                raise ValidationError(
                    f"constant-c branch needs C/(R T) > 1 on [{self.T_lo}, {self.T_hi}], "
                    f"got C = {p}, R T_hi = {R * self.T_hi}")
        else:
            if p <= 0 or not np.isfinite(self.T_hi) or 4.0 * p * R * self.T_hi >= 1.0:
                raise ValidationError(
                    f"borderline-convex branch needs C > 0 and 4 C R T < 1 on [{self.T_lo}, {self.T_hi}], "
                    f"got C = {p}")


@dataclass(frozen=True)
class PiecewiseIdealEos:
    """Ideal-gas eos made of contiguous branches with continuous ``e`` and ``e_T``.

    Build with :meth:`from_branches` (which solves the integration constants)
    or :meth:`polytropic`. All methods accept scalars or arrays of absolute
    temperature and raise :class:`DomainError` outside ``[T_min, T_max]``.
    """

    branches: tuple[EosBranch, ...]
    R: float = 1.0
    _T_hi: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not self.branches:
            raise ValidationError("eos needs at least one branch")
        if not self.R > 0:
            raise ValidationError(f"gas constant R must be positive, got {self.R}")
        for b in self.branches:
            b.check_valid(self.R)
        for left, right in zip(self.branches, self.branches[1:]):
            if left.T_hi != right.T_lo:
                raise ValidationError(f"branch domains not contiguous at T = {left.T_hi} / {right.T_lo}")
            T = left.T_hi
            for what, fl, fr in (("e", left.energy(T, self.R), right.energy(T, self.R)),
                                 ("e_T", left.heat_capacity(T, self.R), right.heat_capacity(T, self.R))):
                if abs(fl - fr) > KNOT_RTOL * max(abs(fl), abs(fr), 1.0):
                    raise ValidationError(f"{what} discontinuous at knot T = {T}: {float(fl)} vs {float(fr)}")
        object.__setattr__(self, "_T_hi", np.array([b.T_hi for b in self.branches]))

    @classmethod
    def from_branches(cls, specs: Sequence, R=1.0, T_ref=1.0, e_ref=None) -> PiecewiseIdealEos:
        """Build from ``(kind, T_lo, T_hi, parameter)`` tuples, ordered in T.

        A ``parameter`` of ``None`` is solved from ``e_T`` continuity with the
        branch to the left. Integration constants are fixed left to right and
        then shifted so that ``e(T_ref) = e_ref``; by default ``e_ref`` is
        ``e_T(T_ref) T_ref``, which makes a polytropic gas read ``e = c_v T``.
        """
        branches = []
        for i, (kind, T_lo, T_hi, param) in enumerate(specs):
            kind = _kind(kind)
            if param is None:
                if not branches:
                    raise ValidationError("first branch needs an explicit parameter")
                prev = branches[-1]
                param = match_parameter(kind, T_lo, float(prev.heat_capacity(T_lo, R)), R)
            b = EosBranch(kind, float(T_lo), float(T_hi), float(param))
            b.check_valid(R)
            if branches:
                prev = branches[-1]
                b = replace(b, offset=float(prev.energy(T_lo, R) - b._raw_energy(T_lo, R)))
            branches.append(b)
        eos = cls(tuple(branches), R=float(R))
        if e_ref is None:
            e_ref = float(eos.heat_capacity(T_ref) * T_ref)
        shift = e_ref - eos.energy(T_ref)
        return cls(tuple(replace(b, offset=b.offset + shift) for b in branches), R=float(R))

    @classmethod
    def polytropic(cls, gamma=1.4, R=1.0, T_lo=1e-6, T_hi=math.inf) -> PiecewiseIdealEos:
        """Single constant-``c_v`` branch with ``c_v = R/(gamma - 1)``, ``e = c_v T``."""
        if not gamma > 1:
            raise ValidationError(f"ideal polytropic gas needs gamma > 1, got {gamma}")
        return cls.from_branches([(BranchKind.POLYTROPIC, T_lo, T_hi, R / (gamma - 1.0))], R=R)

    @property
    def T_min(self) -> float:
        return self.branches[0].T_lo

    @property
    def T_max(self) -> float:
        return self.branches[-1].T_hi

    @property
    def knots(self) -> tuple[float, ...]:
        """Interior knot temperatures."""
        return tuple(b.T_hi for b in self.branches[:-1])

    def contains(self, T) -> bool:
        return self.T_min <= T <= self.T_max

    def _check(self, T):
        arr = np.asarray(T, dtype=float)
        bad = ~((arr >= self.T_min) & (arr <= self.T_max))
        if np.any(bad):
            raise DomainError("T", float(arr[bad].flat[0]), self.T_min, self.T_max)
        return arr

    def _eval(self, method, T):
        arr = self._check(T)
        idx = np.minimum(np.searchsorted(self._T_hi, arr, side="right"), len(self.branches) - 1)
        out = np.empty(arr.shape)
        for i, b in enumerate(self.branches):
            m = idx == i
            if np.any(m):
                out[m] = getattr(b, method)(arr[m], self.R)
        return float(out) if out.ndim == 0 else out

    def _increment(self, method, T_a, dT):
        T_a = float(T_a)
        dT = np.asarray(dT, dtype=float)
        T_b = T_a + dT
        self._check(T_a)
        self._check(T_b)
        lo = np.minimum(T_a, T_b)
        hi = np.maximum(T_a, T_b)
        total = np.zeros(dT.shape)
        for b in self.branches:
            x = np.clip(lo, b.T_lo, b.T_hi)
            y = np.clip(hi, b.T_lo, b.T_hi)
            # the exact |dT| is used when the whole step sits in one branch
            width = np.where((lo >= b.T_lo) & (hi <= b.T_hi), np.abs(dT), y - x)
            m = width > 0
            if np.any(m):
                total[m] += getattr(b, method)(x[m], width[m], self.R)
        out = np.where(dT >= 0, total, -total)
        return float(out) if out.ndim == 0 else out

    def energy_increment(self, T_a, dT):
        """``e(T_a + dT) - e(T_a)``, accurate to rounding even for tiny ``dT``."""
        return self._increment("energy_increment", T_a, dT)

    def entropy_increment(self, T_a, dT):
        """``int_{T_a}^{T_a + dT} e_T/(R T) dT``, evaluated branch by branch in closed form."""
        return self._increment("entropy_increment", T_a, dT)

    def energy(self, T):
        """Specific internal energy ``e(T)``."""
        return self._eval("energy", T)

    def heat_capacity(self, T):
        """``c_v = e_T(T)``."""
        return self._eval("heat_capacity", T)

    def heat_capacity_T(self, T):
        """Analytic ``e_TT(T)``; right-sided at knots."""
        return self._eval("heat_capacity_T", T)

    def enthalpy(self, T):
        return self.energy(T) + self.R * np.asarray(T, dtype=float)

    def sound_speed_sq(self, T):
        """``c^2 = R T (R / e_T + 1)``."""
        T = self._check(T)
        return self.R * T * (self.R / self.heat_capacity(T) + 1.0)

    def gamma(self, T):
        """Local ratio of heats ``1 + R/e_T``."""
        return 1.0 + self.R / self.heat_capacity(T)

    def classify_convexity(self, T) -> ConvexityClass:
        """Classify the eos at a single temperature.

        Convex eos requires ``e_TT < e_T (e_T + R)(2 e_T + R) / (R^2 T)``;
        monotone sound speed requires ``e_TT <= e_T (e_T + R) / (R T)``.
        """
        T = float(self._check(T))
        R = self.R
        eT = self.heat_capacity(T)
        eTT = self.heat_capacity_T(T)
        convex_rhs = eT * (eT + R) * (2 * eT + R) / (R * R * T)
        monotone_rhs = eT * (eT + R) / (R * T)
        if abs(eTT - convex_rhs) <= BORDERLINE_RTOL * convex_rhs:
            cls = EosConvexity.BORDERLINE
        elif eTT < convex_rhs:
            cls = EosConvexity.STRICTLY_CONVEX
        else:
            cls = EosConvexity.NON_CONVEX
        monotone = eTT <= monotone_rhs * (1.0 + BORDERLINE_RTOL)
        return ConvexityClass(cls, bool(monotone))

    def entropy_jump(self, T_a, V_a, T_b, V_b) -> float:
        """``(S_b - S_a)/R = ln(V_b/V_a) + int_{T_a}^{T_b} e_T/(R T) dT``."""
        if V_a <= 0 or V_b <= 0:
            raise ValidationError(f"specific volumes must be positive, got {V_a}, {V_b}")
        return math.log(V_b / V_a) + self.entropy_increment(T_a, float(T_b) - float(T_a))
