"""Steady shock polars for Euler and full potential flow, with convexity analysis.

Velocities are scaled by the upstream speed ``|u0|``, so every polar runs
from its normal-shock point to the vanishing point ``(1, 0)``.
"""

from .analysis import (ConvexityReport, CriticalPoint, CurvatureEvent, SonicStatus, Verdict, check_curve,
                       circle_check, convexity, critical_point, endpoint_chord_slope, entropy_jump,
                       euler_polytropic_curvature, euler_polytropic_curvature_sign, hugoniot_residual,
                       mach_wave_normal_slope, shock_residuals, shock_residuals_euler,
                       shock_residuals_potential, sonic_point, vanishing_slope)
from .curve import PlanarCurve, PolarCurve, PolarPoint
from .eos_barotropic import BarotropicClass, BarotropicEos
from .eos_ideal import BranchKind, EosConvexity, PiecewiseIdealEos
from .errors import (BeyondNormalShockError, ComputationError, DomainError, EosDomainTooShortError,
                     InconsistentStateError, RangeError, ShockPolarError, ValidationError)
from .polar_euler import (EulerUpstream, j_polar, normal_shock, normal_shock_T, polar_ideal,
                          polar_polytropic, xi_bounds)
from .polar_euler import sample_polar as sample_euler_polar
from .polar_potential import PotentialUpstream, normal_shock_V
from .polar_potential import sample_polar as sample_potential_polar
from .scenarios import SCENARIOS, Scenario, get_scenario, run_scenario

__version__ = "0.1.0"

__all__ = [
    "BarotropicClass", "BarotropicEos", "BeyondNormalShockError", "BranchKind", "ComputationError",
    "ConvexityReport", "CriticalPoint", "CurvatureEvent", "DomainError", "EosConvexity",
    "EosDomainTooShortError", "EulerUpstream", "InconsistentStateError", "PiecewiseIdealEos",
    "PlanarCurve", "PolarCurve", "PolarPoint", "PotentialUpstream", "RangeError", "SCENARIOS",
    "Scenario", "ShockPolarError", "SonicStatus", "ValidationError", "Verdict", "check_curve",
    "circle_check", "convexity", "critical_point", "endpoint_chord_slope", "entropy_jump",
    "euler_polytropic_curvature", "euler_polytropic_curvature_sign", "get_scenario",
    "hugoniot_residual", "j_polar", "mach_wave_normal_slope", "normal_shock", "normal_shock_T",
    "normal_shock_V", "polar_ideal", "polar_polytropic", "run_scenario", "sample_euler_polar",
    "sample_potential_polar", "shock_residuals", "shock_residuals_euler",
    "shock_residuals_potential", "sonic_point", "vanishing_slope", "xi_bounds",
]
