import math
from dataclasses import replace

import numpy as np
import pytest

from shockpolar import analysis
from shockpolar.analysis import SonicStatus, Verdict
from shockpolar.curve import PlanarCurve, PolarPoint
from shockpolar.eos_barotropic import BarotropicEos
from shockpolar.eos_ideal import PiecewiseIdealEos
from shockpolar.errors import RangeError, ValidationError
from shockpolar.polar_euler import EulerUpstream, polar_ideal, polar_polytropic, sample_polar, xi_bounds
from shockpolar.polar_potential import PotentialUpstream, point_at
from shockpolar.polar_potential import sample_polar as sample_potential
from shockpolar.scenarios import get_scenario


def planar(x, y):
    return PlanarCurve(np.asarray(x, float), np.asarray(y, float), np.arange(len(x), dtype=float))


class TestConvexityDetector:
    def test_concave_arc(self):
        t = np.linspace(0, math.pi, 64)
        rep = analysis.convexity(planar(np.cos(t)[::-1], np.sin(t)[::-1]))
        assert rep.verdict is Verdict.STRICTLY_CONVEX and rep.is_convex and rep.turns_consistent

    def test_straight_line(self):
        x = np.linspace(0, 1, 32)
        rep = analysis.convexity(planar(x, 0.3 * x + 0.1))
        assert rep.verdict is Verdict.INDETERMINATE and not rep.events

    def test_three_points_rejected(self):
        with pytest.raises(ValidationError, match="at least 16"):
            analysis.convexity(planar([0, 0.5, 1], [0, 0.5, 1]))

    def test_s_curve(self):
        x = np.linspace(-1, 1, 101)
        rep = analysis.convexity(planar(x, x ** 3))
        assert rep.verdict is Verdict.NON_CONVEX
        assert len(rep.events) == 1
        assert abs(rep.events[0].location - 50) <= 1
        assert rep.reversed_spans

    def test_tiny_wiggle_below_floor_is_ignored(self):
        t = np.linspace(0.1, math.pi - 0.1, 64)
        y = np.sin(t) + 1e-17 * (-1) ** np.arange(64)
        assert analysis.convexity(planar(np.cos(t)[::-1], y[::-1])).verdict is Verdict.STRICTLY_CONVEX

    def test_unknown_plane(self):
        with pytest.raises(ValidationError, match="plane"):
            analysis.convexity(sample_polar(EulerUpstream(1.3, gamma=1.4), 32), plane="w")

    def test_refinement_needs_polar(self):
        t = np.linspace(0, math.pi, 64)
        with pytest.raises(ValidationError):
            analysis.convexity(planar(np.cos(t), np.sin(t)), refine=True)

    def test_fig1_both_planes(self):
        c = sample_polar(EulerUpstream(1.3, gamma=1.4))
        for plane in ("u", "j"):
            rep = analysis.convexity(c, plane, refine=True)
            assert rep.verdict is Verdict.STRICTLY_CONVEX and rep.refined and not rep.reversed_spans

    def test_fig7_u_polar_has_events(self):
        rep = analysis.convexity(get_scenario("fig7").sample(), "u", refine=True)
        assert rep.verdict is Verdict.NON_CONVEX and rep.events

    def test_chord_slopes_increase_right_to_left(self):
        s = analysis.chord_slopes(sample_polar(EulerUpstream(2.0, gamma=1.4), 128))
        assert np.all(np.diff(s) < 0)


class TestPolytropicCurvature:
    @pytest.mark.parametrize("M0", [1.01, 1.3, 5.0, 100.0])
    @pytest.mark.parametrize("gamma", [-0.99, -0.5, 0.5, 1.0, 1.4, 3.0])
    def test_negative(self, M0, gamma):
        xi_n, _ = xi_bounds(M0, gamma)
        xi = np.linspace(xi_n, 1, 203)[1:-1]
        assert np.all(analysis.euler_polytropic_curvature_sign(M0, gamma, xi) < 0)

    @pytest.mark.parametrize("M0, gamma", [(1.3, 1.4), (5.0, 5 / 3), (2.0, -0.5)])
    def test_matches_finite_difference_at_midpoint(self, M0, gamma):
        xi_n, _ = xi_bounds(M0, gamma)
        x = 0.5 * (xi_n + 1)
        h = 1e-3 * (1 - xi_n)
        f = lambda t: polar_polytropic(M0, gamma, t)  # noqa: E731
        fd = (-f(x + 2 * h) + 16 * f(x + h) - 30 * f(x) + 16 * f(x - h) - f(x - 2 * h)) / (12 * h * h)
        assert analysis.euler_polytropic_curvature(M0, gamma, x) == pytest.approx(fd, rel=1e-6)

    def test_factored_form_identity(self):
        for M0, gamma in ((1.3, 1.4), (7.0, 0.2), (1.05, -0.8)):
            xi_n, _ = xi_bounds(M0, gamma)
            xi = np.linspace(xi_n, 1, 53)[1:-1]
            np.testing.assert_allclose(analysis.euler_polytropic_log_curvature(M0, gamma, xi),
                                       analysis.euler_polytropic_log_curvature_direct(M0, gamma, xi), rtol=1e-12)

    def test_endpoints_rejected(self):
        xi_n, _ = xi_bounds(1.3, 1.4)
        for x in (xi_n, 1.0):
            with pytest.raises(RangeError):
                analysis.euler_polytropic_curvature_sign(1.3, 1.4, x)


class TestCriticalAndSonic:
    def test_fig1_critical_point(self):
        c = sample_polar(EulerUpstream(1.3, gamma=1.4))
        cp = analysis.critical_point(c)
        xi = np.linspace(xi_bounds(1.3, 1.4)[0], 1.0, 1_000_001)
        brute = np.max(np.arctan2(polar_polytropic(1.3, 1.4, xi), xi))
        assert cp.theta_max == pytest.approx(brute, abs=1e-6)
        assert cp.theta_max_deg == pytest.approx(6.66, abs=0.05)
        assert not cp.multiple and cp.subsonic

    def test_weak_limit(self):
        cp = analysis.critical_point(sample_polar(EulerUpstream(1.0001, gamma=1.4), 64))
        assert 0 < cp.theta_max_deg < 1e-2

    def test_ideal_chain_agrees_with_closed_form(self):
        a = analysis.critical_point(sample_polar(EulerUpstream(3.0, gamma=1.4), 128))
        b = analysis.critical_point(sample_polar(EulerUpstream(3.0, eos=PiecewiseIdealEos.polytropic(1.4)), 128))
        assert a.theta_max == pytest.approx(b.theta_max, abs=1e-10)

    def test_sonic_on_weak_side(self):
        c = sample_polar(EulerUpstream(1.3, gamma=1.4))
        sp = analysis.sonic_point(c)
        cp = analysis.critical_point(c)
        assert sp.status is SonicStatus.FOUND and len(sp.points) == 1
        assert sp.point.mach == pytest.approx(1.0, abs=1e-10)
        assert sp.point.xi > cp.xi
        assert c.mach[0] < 1 < c.mach[-1]
        assert c.mach[-1] == pytest.approx(1.3, rel=1e-8)

    def test_truncated_curves(self):
        c = sample_polar(EulerUpstream(1.3, gamma=1.4), 256)
        sp = analysis.sonic_point(c)
        k = int(np.searchsorted(c.xi, sp.point.xi))
        sup = replace(c, mach=c.mach[k:], xi=c.xi[k:], eta=c.eta[k:], param=c.param[k:], V_ratio=c.V_ratio[k:])
        sub = replace(c, mach=c.mach[:k], xi=c.xi[:k], eta=c.eta[:k], param=c.param[:k], V_ratio=c.V_ratio[:k])
        assert analysis.sonic_point(sup).status is SonicStatus.SUPERSONIC
        assert analysis.sonic_point(sub).status is SonicStatus.SUBSONIC
        assert analysis.sonic_point(sub).point is None


class TestVanishingEnd:
    def test_slope_values(self):
        assert analysis.vanishing_slope(1.3) == pytest.approx(-1.203859, abs=1e-6)
        assert analysis.vanishing_slope(math.sqrt(2)) == pytest.approx(-1.0, rel=1e-14)
        assert -1e-6 < analysis.vanishing_slope(1e7) < 0
        with pytest.raises(ValidationError):
            analysis.vanishing_slope(1.0)

    def test_chord_converges_to_mach_wave_normal(self):
        target = analysis.mach_wave_normal_slope(1.3)
        errs = [abs(analysis.endpoint_chord_slope(sample_polar(EulerUpstream(1.3, gamma=1.4), n)) - target)
                for n in (256, 1024, 4096)]
        assert errs[-1] < 1e-4
        assert errs[0] / errs[1] > 2 and errs[1] / errs[2] > 2

    def test_mach_wave_normal_is_reciprocal_of_vanishing_slope(self):
        for M0 in (1.1, 1.3, 4.0):
            assert analysis.mach_wave_normal_slope(M0) * analysis.vanishing_slope(M0) == pytest.approx(1.0)


class TestResiduals:
    def test_ideal_points(self):
        up = EulerUpstream(5.0, eos=PiecewiseIdealEos.polytropic(1.4))
        for t in (1.0 + 1e-6, 1.2, 3.0, 5.0):
            p = polar_ideal(up, t)
            assert analysis.shock_residuals(up, p).max_abs <= 1e-10
            assert abs(analysis.hugoniot_residual(up, p)) <= 1e-10
            assert analysis.entropy_jump(up, p) > 0
            assert analysis.circle_check(p) <= 1e-12

    def test_vanishing_point_skipped(self):
        up = EulerUpstream(2.0, eos=PiecewiseIdealEos.polytropic(1.4))
        r = analysis.shock_residuals(up, polar_ideal(up, 1.0))
        assert r.skipped and r.max_abs == 0.0

    def test_negative_control_euler(self):
        up = EulerUpstream(2.0, eos=PiecewiseIdealEos.polytropic(1.4))
        p = polar_ideal(up, 1.4)
        bad = replace(p, V_ratio=p.V_ratio * 1.05)
        r = analysis.shock_residuals(up, bad)
        assert abs(r.values[0]) > 1e-4
        assert analysis.circle_check(bad) > 1e-4

    def test_potential_points_and_control(self):
        up = PotentialUpstream(1.3, BarotropicEos.gamma_law(1.4))
        p = point_at(up, 0.8)
        r = analysis.shock_residuals(up, p)
        assert r.max_abs <= 1e-12
        assert abs(r.values[1]) <= 1e-15
        assert abs(analysis.shock_residuals(up, replace(p, V_ratio=0.75)).values[0]) > 1e-4

    def test_circle_endpoints(self):
        assert analysis.circle_check(PolarPoint(0.6, 0.0, 0.6, 0.8, 0.6)) <= 1e-16
        assert analysis.circle_check(PolarPoint(1.0, 0.0, 1.0, 1.3, 1.0)) == 0.0

    def test_fig8_curve_across_knot(self):
        r = analysis.check_curve(get_scenario("fig8", M0=20.0).sample())
        assert r.jump <= 1e-10 and r.circle <= 1e-12
        assert math.isnan(r.hugoniot)

    def test_polytropic_entropy_positive_and_third_order(self):
        up = EulerUpstream(1.3, gamma=1.4)
        c = sample_polar(up)
        s = np.array([analysis.entropy_jump(up, p) for p in c.points()][:-1])
        assert np.all(s > 0)
        # weak shocks: entropy rises like the cube of the pressure jump
        p1, p2 = c.point(len(c) - 3), c.point(len(c) - 2)
        ratio = analysis.entropy_jump(up, p1) / analysis.entropy_jump(up, p2)
        strength = (p1.P_ratio - 1) / (p2.P_ratio - 1)
        assert ratio == pytest.approx(strength ** 3, rel=1e-2)

    def test_isothermal_entropy_undefined(self):
        up = EulerUpstream(1.3, gamma=1.0)
        p = sample_polar(up, 32).point(5)
        assert math.isnan(analysis.entropy_jump(up, p))

    def test_check_curve_on_potential(self):
        c = sample_potential(PotentialUpstream(2.0, BarotropicEos.gamma_law(1.4)))
        r = analysis.check_curve(c)
        assert r.circle <= 1e-12 and r.jump <= 1e-10
