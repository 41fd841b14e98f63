"""Scalar equations of state for full potential flow, as gamma-law segments in V.

On a segment with exponent ``gamma`` the pressure law ``P = A rho^gamma``
(with ``rho = 1/V`` in reference units) gives::

    c^2  = gamma A V^(1 - gamma)
    h    = c^2 / (gamma - 1) + K          (gamma != 1)
    h    = -c^2 ln V + K                  (gamma == 1, c^2 constant)
    h_V  = -c^2 / V
    h_VV = gamma c^2 / V^2

Hyperbolicity (``c^2 > 0``) forces ``sign(A) = sign(gamma)``; ``gamma = 0``
is rejected.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence

import numpy as np

from .errors import DomainError, ValidationError


class BarotropicClass(str, Enum):
    """Strongest condition satisfied; each implies the ones below it."""

    MONOTONE_C = "monotone-c"
    CONVEX_H = "convex-h"
    CONVEX_EOS = "convex-eos"
    NONE = "none"


@dataclass(frozen=True)
class GammaSegment:
    gamma: float
    V_lo: float
    V_hi: float
    A: float  # pressure coefficient, P = A (V_ref/V)^gamma
    K: float  # enthalpy integration constant

    def sound_speed_sq(self, V):
        return self.gamma * self.A * V ** (1.0 - self.gamma)

    def enthalpy(self, V):
        c2 = self.sound_speed_sq(V)
        if self.gamma == 1.0:
            return -c2 * np.log(V) + self.K
        return c2 / (self.gamma - 1.0) + self.K


@dataclass(frozen=True)
class BarotropicEos:
    """Piecewise gamma-law eos with ``h`` and ``c^2`` continuous at knots.

    Volumes are measured in units of ``V_ref`` (so the reference state has
    ``V = 1``); ``c0_sq`` is the squared sound speed there.
    """

    segments: tuple[GammaSegment, ...]
    c0_sq: float = 1.0
    _V_hi: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_V_hi", np.array([s.V_hi for s in self.segments]))

    @classmethod
    def from_segments(cls, specs: Sequence, c0_sq=1.0) -> BarotropicEos:
        """Build from ``(gamma, V_lo, V_hi)`` triples ordered in V.

        The segment containing ``V = 1`` is normalized to ``c^2(1) = c0_sq``;
        coefficients of the other segments are solved outward so that ``c^2``
        and ``h`` are continuous at every knot.
        """
        if not specs:
            raise ValidationError("barotropic eos needs at least one segment")
        if not c0_sq > 0:
            raise ValidationError(f"reference sound speed squared must be positive, got {c0_sq}")
        specs = [(float(g), float(lo), float(hi)) for g, lo, hi in specs]
        for g, lo, hi in specs:
            if g == 0.0 or not math.isfinite(g):
                raise ValidationError(f"segment exponent gamma must be finite and nonzero, got {g}")
            if not (lo >= 0 and hi > lo):
                raise ValidationError(f"segment needs 0 <= V_lo < V_hi, got [{lo}, {hi}]")
        for (_, _, hi), (_, lo, _) in zip(specs, specs[1:]):
            if hi != lo:
                raise ValidationError(f"segment domains not contiguous at V = {hi} / {lo}")
        ref = next((i for i, (_, lo, hi) in enumerate(specs) if lo <= 1.0 <= hi), None)
        if ref is None:
            raise ValidationError("reference volume V = 1 is not inside the eos domain")
        if specs[ref][2] == 1.0 and ref + 1 < len(specs):
            ref += 1  # knots belong to the segment on their right

        A = [0.0] * len(specs)
        K = [0.0] * len(specs)
        g, lo, hi = specs[ref]
        A[ref] = c0_sq / g
        K[ref] = 0.0

        def seg(i):
            return GammaSegment(specs[i][0], specs[i][1], specs[i][2], A[i], K[i])

        for i in list(range(ref + 1, len(specs))) + list(range(ref - 1, -1, -1)):
            j = i - 1 if i > ref else i + 1
            Vk = specs[i][1] if i > ref else specs[i][2]
            c2 = float(seg(j).sound_speed_sq(Vk))
            gi = specs[i][0]
            A[i] = c2 / (gi * Vk ** (1.0 - gi))
            K[i] = 0.0
            K[i] = float(seg(j).enthalpy(Vk) - seg(i).enthalpy(Vk))
        h_ref = float(seg(ref).enthalpy(1.0))
        return cls(tuple(GammaSegment(s[0], s[1], s[2], A[i], K[i] - h_ref) for i, s in enumerate(specs)),
                   c0_sq=float(c0_sq))

    @classmethod
    def gamma_law(cls, gamma, c0_sq=1.0, V_lo=0.0, V_hi=math.inf) -> BarotropicEos:
        return cls.from_segments([(gamma, V_lo, V_hi)], c0_sq=c0_sq)

    @property
    def V_min(self) -> float:
        return self.segments[0].V_lo

    @property
    def V_max(self) -> float:
        return self.segments[-1].V_hi

    @property
    def knots(self) -> tuple[float, ...]:
        return tuple(s.V_hi for s in self.segments[:-1])

    def _check(self, V):
        arr = np.asarray(V, dtype=float)
        bad = ~((arr > 0) & (arr >= self.V_min) & (arr <= self.V_max))
        if np.any(bad):
            raise DomainError("V", float(arr[bad].flat[0]), self.V_min, self.V_max)
        return arr

    def segment_index(self, V):
        arr = self._check(V)
        return np.minimum(np.searchsorted(self._V_hi, arr, side="right"), len(self.segments) - 1)

    def _eval(self, fn, V):
        arr = self._check(V)
        idx = self.segment_index(arr)
        out = np.empty(arr.shape)
        for i, s in enumerate(self.segments):
            m = idx == i
            if np.any(m):
                out[m] = fn(s, arr[m])
        return float(out) if out.ndim == 0 else out

    def enthalpy(self, V):
        """``h(V)`` normalized so that ``h(1) = 0``."""
        return self._eval(GammaSegment.enthalpy, V)

    def sound_speed_sq(self, V):
        return self._eval(GammaSegment.sound_speed_sq, V)

    def enthalpy_V(self, V):
        """``h_V = -c^2 / V``."""
        return self._eval(lambda s, v: -s.sound_speed_sq(v) / v, V)

    def enthalpy_VV(self, V):
        """``h_VV = gamma c^2 / V^2``; right-sided at knots."""
        return self._eval(lambda s, v: s.gamma * s.sound_speed_sq(v) / v ** 2, V)

    def gamma_at(self, V):
        return self._eval(lambda s, v: np.full(v.shape, s.gamma), V)

    def classify(self, V) -> BarotropicClass:
        """Strongest of monotone-c, convex-h, convex-eos satisfied at ``V``.

        With ``rho (c^2)_rho = (gamma - 1) c^2`` the three tests reduce to
        ``gamma >= 1``, ``gamma >= 0`` and ``gamma > -1`` respectively; they are
        evaluated through ``c^2`` and its derivative rather than by exponent.
        """
        V = float(self._check(V))
        g = self.gamma_at(V)
        c2 = self.sound_speed_sq(V)
        rho_dc2 = (g - 1.0) * c2
        if rho_dc2 >= 0:
            return BarotropicClass.MONOTONE_C
        if rho_dc2 + c2 >= 0:
            return BarotropicClass.CONVEX_H
        if rho_dc2 + 2.0 * c2 > 0:
            return BarotropicClass.CONVEX_EOS
        return BarotropicClass.NONE
