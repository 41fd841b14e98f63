"""Named polar configurations: a convex baseline and three non-convex counterexamples.

Each counterexample has a negative control obtained by removing the
non-convex ingredient. Expected verdicts are stored as metadata and checked
by :func:`run_scenario`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable, Optional, Sequence

import numpy as np

from .analysis import ConvexityReport, Verdict, convexity
from .curve import PolarCurve
from .eos_barotropic import BarotropicEos
from .eos_ideal import BranchKind, EosBranch, PiecewiseIdealEos
from .errors import ValidationError
from .polar_euler import EulerUpstream, sample_polar as sample_euler
from .polar_potential import PotentialUpstream, sample_polar as sample_potential

# temperature range covered by the ideal-gas scenarios, in units of T0
T_FLOOR = 1e-3
T_CEILING = 1e4

FIG7_KNOT = 5.3
FIG7_T_HI = 5.6
FIG7_CV_LO = 1.5
FIG8_KNOT = 0.019
FIG8_M0 = 3.0


@dataclass(frozen=True)
class Scenario:
    """A reproducible polar setup.

    ``expected`` maps a plane (``"u"`` or ``"j"``) to the verdict the
    construction is meant to produce. ``event_window`` is the parameter
    interval where a u-plane curvature event should appear, if any.
    """

    name: str
    model: str
    M0: float
    description: str
    gamma: Optional[float] = None
    eos: object = None
    T0: float = 1.0
    expected: tuple = ()
    event_window: Optional[tuple] = None
    params: dict = field(default_factory=dict)

    def upstream(self):
        if self.model == "potential":
            return PotentialUpstream(self.M0, self.eos)
        if self.model == "euler-polytropic":
            return EulerUpstream(self.M0, gamma=self.gamma)
        return EulerUpstream(self.M0, eos=self.eos, T0=self.T0)

    def sample(self, n: int = 512) -> PolarCurve:
        up = self.upstream()
        if self.model == "potential":
            return sample_potential(up, n)
        return sample_euler(up, n)


def baseline_fig1() -> Scenario:
    """Polytropic Euler polar at ``M0 = 1.3``, ``gamma = 7/5``."""
    return Scenario(
        name="fig1", model="euler-polytropic", M0=1.3, gamma=1.4,
        description="polytropic Euler polar, M0 = 1.3, gamma = 1.4",
        expected=(("u", Verdict.STRICTLY_CONVEX), ("j", Verdict.STRICTLY_CONVEX)),
        params={"M0": 1.3, "gamma": 1.4},
    )


def fig7_eos(cv_lo: float = FIG7_CV_LO, C: Optional[float] = None, T_hi: float = FIG7_T_HI,
             middle: str = "borderline") -> PiecewiseIdealEos:
    """Three-branch ideal eos: constant ``c_v`` below 5.3, borderline convex up to ``T_hi``, constant ``c_v`` above.

    Giving ``C`` fixes the borderline constant and derives ``cv_lo`` from
    ``e_T`` continuity at 5.3. ``middle="polytropic"`` replaces the middle
    branch by a continuation of the lower plateau.
    """
    if C is not None:
        cv_lo = float(EosBranch(BranchKind.BORDERLINE_CONVEX, FIG7_KNOT, T_hi, C).heat_capacity(FIG7_KNOT, 1.0))
    if not cv_lo > 0:
        raise ValidationError(f"cv_lo must be positive, got {cv_lo}")
    if not T_hi > FIG7_KNOT:
        raise ValidationError(f"upper knot must exceed {FIG7_KNOT}, got {T_hi}")
    if middle == "borderline":
        mid = (BranchKind.BORDERLINE_CONVEX, FIG7_KNOT, T_hi, C)
    elif middle == "polytropic":
        mid = (BranchKind.POLYTROPIC, FIG7_KNOT, T_hi, None)
    else:
        raise ValidationError(f"middle branch must be 'borderline' or 'polytropic', got {middle!r}")
    return PiecewiseIdealEos.from_branches([
        (BranchKind.POLYTROPIC, T_FLOOR, FIG7_KNOT, cv_lo),
        mid,
        (BranchKind.POLYTROPIC, T_hi, T_CEILING, None),
    ])


def counterexample_fig7(cv_lo: float = FIG7_CV_LO, C: Optional[float] = None, T_hi: float = FIG7_T_HI,
                        M0: float = 5.0, middle: str = "borderline") -> Scenario:
    """Non-convex u- and j-polars from a borderline-convex ideal gas at ``M0 = 5``."""
    eos = fig7_eos(cv_lo, C, T_hi, middle)
    return Scenario(
        name="fig7", model="euler-ideal", M0=M0, eos=eos,
        description=f"ideal gas, c_v = {eos.branches[0].parameter:.6g} below T = 5.3, "
                    f"{middle} branch on [5.3, {T_hi}], matched c_v above",
        expected=(("u", Verdict.NON_CONVEX), ("j", Verdict.NON_CONVEX)),
        event_window=(FIG7_KNOT, T_hi),
        params={"cv_lo": eos.branches[0].parameter, "C": eos.branches[1].parameter,
                "T_hi": T_hi, "M0": M0, "middle": middle},
    )


def monotone_c_eos(T1: float = 10.3, width: float = 1.05) -> PiecewiseIdealEos:
    """``c_v = 3R/2`` below ``T1``, constant sound speed on ``[T1, width*T1]``, matched ``c_v`` above.

    ``width = 1`` removes the middle branch entirely.
    """
    if not width >= 1:
        raise ValidationError(f"width must be at least 1, got {width}")
    if width == 1:
        return PiecewiseIdealEos.from_branches([(BranchKind.POLYTROPIC, T_FLOOR, T_CEILING, 1.5)])
    T2 = width * T1
    return PiecewiseIdealEos.from_branches([
        (BranchKind.POLYTROPIC, T_FLOOR, T1, 1.5),
        (BranchKind.CONSTANT_SOUND_SPEED, T1, T2, None),
        (BranchKind.POLYTROPIC, T2, T_CEILING, None),
    ])


def counterexample_monotone_c(M0: float = 45.0, T1: float = 10.3, width: float = 1.05) -> Scenario:
    """Non-convex u-polar from an eos whose sound speed never decreases with density."""
    eos = monotone_c_eos(T1, width)
    return Scenario(
        name="monotone-c", model="euler-ideal", M0=M0, eos=eos,
        description=f"ideal gas, c_v = 1.5 R with a constant-c branch on [{T1}, {width * T1:.6g}]",
        expected=(("u", Verdict.NON_CONVEX),),
        event_window=(T1, width * T1),
        params={"M0": M0, "T1": T1, "width": width},
    )


def fig8_eos(gamma_hi: float = -0.75, gamma_lo: float = 5.0 / 3.0, V_knot: float = FIG8_KNOT) -> BarotropicEos:
    """Barotropic eos with ``gamma_hi`` for ``V > V_knot`` and ``gamma_lo`` below."""
    if gamma_hi == gamma_lo:
        return BarotropicEos.gamma_law(gamma_lo)
    return BarotropicEos.from_segments([(gamma_lo, 0.0, V_knot), (gamma_hi, V_knot, math.inf)])


def counterexample_fig8(M0: float = FIG8_M0, control: bool = False) -> Scenario:
    """Potential flow with ``gamma = -3/4`` above ``V = 0.019`` and ``5/3`` below.

    ``control=True`` uses ``gamma = 5/3`` throughout.
    """
    eos = fig8_eos(gamma_hi=5.0 / 3.0) if control else fig8_eos()
    return Scenario(
        name="fig8", model="potential", M0=M0, eos=eos,
        description="potential flow, gamma = 5/3" if control else
        f"potential flow, gamma = -0.75 for V > {FIG8_KNOT}, 5/3 below",
        expected=(("u", Verdict.NON_CONVEX),),
        params={"M0": M0, "control": control},
    )


def as_control(sc: Scenario) -> Scenario:
    """Relabel a convexified variant as a negative control expecting convex polars."""
    return replace(sc, name=sc.name + "-control", event_window=None,
                   expected=tuple((plane, Verdict.STRICTLY_CONVEX) for plane, _ in sc.expected))


def _controlled(factory, **fixed):
    def build(**overrides):
        return as_control(factory(**{**overrides, **fixed}))
    return build


SCENARIOS: dict[str, Callable[..., Scenario]] = {
    "fig1": baseline_fig1,
    "fig7": counterexample_fig7,
    "fig7-control": _controlled(counterexample_fig7, middle="polytropic"),
    "monotone-c": counterexample_monotone_c,
    "monotone-c-control": _controlled(counterexample_monotone_c, width=1.0),
    "fig8": counterexample_fig8,
    "fig8-control": _controlled(counterexample_fig8, control=True),
}


def get_scenario(name: str, **overrides) -> Scenario:
    try:
        factory = SCENARIOS[name]
    except KeyError:
        raise ValidationError(f"unknown scenario {name!r}; available: {', '.join(SCENARIOS)}") from None
    try:
        return factory(**overrides)
    except TypeError as exc:
        raise ValidationError(f"bad override for scenario {name!r}: {exc}") from None


@dataclass(frozen=True)
class ScenarioResult:
    scenario: Scenario
    curve: PolarCurve
    reports: dict
    passed: bool
    failures: tuple = ()


def run_scenario(sc: Scenario, n: int = 512, refine: bool = True) -> ScenarioResult:
    """Sample the polar, judge convexity in every expected plane and compare with expectations.

    Events must persist under 2x refinement. When the scenario names an
    event window, at least one u-plane event must fall inside it.
    """
    curve = sc.sample(n)
    reports: dict[str, ConvexityReport] = {}
    failures = []
    for plane, want in sc.expected:
        rep = convexity(curve, plane, refine=refine)
        reports[plane] = rep
        if rep.verdict is not want:
            failures.append(f"{plane}-polar verdict {rep.verdict.value}, expected {want.value}")
    if sc.event_window is not None and "u" in reports:
        lo, hi = sc.event_window
        if not any(lo <= e.location <= hi for e in reports["u"].events):
            failures.append(f"no u-polar curvature event inside [{lo}, {hi}]")
    return ScenarioResult(sc, curve, reports, not failures, tuple(failures))


def scan_fig8(M0_values: Sequence[float] = tuple(np.geomspace(1.5, 50.0, 25)), control: bool = False,
              n: int = 512) -> list:
    """``(M0, report)`` for the fig8 construction (or its control) at each Mach number."""
    out = []
    for M0 in M0_values:
        sc = counterexample_fig8(float(M0), control)
        curve = sc.sample(n)
        out.append((float(M0), convexity(curve, "u", refine=True)))
    return out
