import math

import numpy as np
import pytest
from scipy.optimize import brentq

from shockpolar.eos_barotropic import BarotropicEos
from shockpolar.errors import EosDomainTooShortError, InconsistentStateError, RangeError, ValidationError
from shockpolar.polar_potential import (PotentialUpstream, V_xi, eta_of, eta_second_derivative, normal_shock_V,
                                        sample_polar, xi_of_V)
from shockpolar.scenarios import FIG8_KNOT, fig8_eos


def gamma_law(M0, gamma):
    return PotentialUpstream(M0, BarotropicEos.gamma_law(gamma))


def xi_closed(M0, gamma, V):
    """Bernoulli for a gamma law with c0 = 1, written out directly."""
    dh = (V ** (1 - gamma) - 1) / (gamma - 1)
    return 1 - 2 * dh / (M0 ** 2 * (1 + V))


class TestChain:
    def test_vanishing(self):
        assert xi_of_V(gamma_law(1.3, 1.4), 1.0) == 1.0
        assert eta_of(1.0, 0.7) == 0.0
        assert eta_of(0.7, 0.7) == 0.0

    def test_spot_value(self):
        up = gamma_law(1.3, 1.4)
        xi = xi_of_V(up, 0.8)
        assert xi == pytest.approx(xi_closed(1.3, 1.4, 0.8), rel=1e-14)
        assert xi == pytest.approx(0.846542, abs=5e-6)
        assert eta_of(xi, 0.8) == pytest.approx(0.084512, abs=5e-6)

    def test_monotone(self):
        up = gamma_law(1.3, 1.4)
        V = np.linspace(normal_shock_V(up), 1.0, 64)
        assert np.all(np.diff(xi_of_V(up, V)) > 0)
        assert np.all(V_xi(up, V[:-1]) > 0)

    def test_expansive_rejected(self):
        with pytest.raises(RangeError):
            xi_of_V(gamma_law(2.0, 1.4), 1.2)

    def test_inconsistent(self):
        with pytest.raises(InconsistentStateError):
            eta_of(0.5, 0.7)

    def test_bad_upstream(self):
        with pytest.raises(ValidationError):
            gamma_law(1.0, 1.4)
        with pytest.raises(ValidationError):
            PotentialUpstream(2.0, BarotropicEos.gamma_law(1.4, V_lo=0.1, V_hi=0.9))


class TestNormalShock:
    @pytest.mark.parametrize("M0, gamma", [(1.3, 1.4), (3.0, 5 / 3), (10.0, 3.0), (1.3, 0.5)])
    def test_against_brentq(self, M0, gamma):
        ref = brentq(lambda V: xi_closed(M0, gamma, V) - V, 1e-9, 1 - 1e-9, xtol=1e-15, rtol=1e-15)
        V_n = normal_shock_V(gamma_law(M0, gamma))
        assert V_n == pytest.approx(ref, rel=1e-12)
        assert abs(xi_closed(M0, gamma, V_n) - V_n) <= 1e-12

    def test_weak_limit(self):
        assert normal_shock_V(gamma_law(1 + 1e-6, 1.4)) == pytest.approx(1.0, abs=1e-5)

    def test_fig8_lands_below_the_knot_at_large_M0(self):
        assert normal_shock_V(PotentialUpstream(20.0, fig8_eos())) < FIG8_KNOT

    def test_incomplete_polar(self):
        up = gamma_law(5.0, 0.5)
        with pytest.raises(EosDomainTooShortError):
            normal_shock_V(up)
        c = sample_polar(up, 64)
        assert not c.normal_endpoint
        assert c.V_ratio[0] <= 1e-12


class TestSampling:
    def test_shape_and_residuals(self):
        up = gamma_law(1.3, 1.4)
        c = sample_polar(up, 128)
        assert c.normal_endpoint and c.eta[0] == 0.0 and (c.xi[-1], c.eta[-1]) == (1.0, 0.0)
        np.testing.assert_allclose(c.eta ** 2, (c.xi - c.V_ratio) * (1 - c.xi), atol=1e-12)
        bern = -2 * up.eos.enthalpy(c.V_ratio) / up.u0_sq - (c.xi ** 2 + c.eta ** 2 - 1)
        assert np.max(np.abs(bern)) <= 1e-12

    def test_grid_independent(self):
        up = gamma_law(2.0, 1.4)
        fine, coarse = sample_polar(up, 256), sample_polar(up, 128)
        np.testing.assert_allclose(np.interp(coarse.xi, fine.xi, fine.eta), coarse.eta, atol=1e-4)
        np.testing.assert_allclose(xi_closed(2.0, 1.4, coarse.V_ratio[1:]), coarse.xi[1:], rtol=1e-13)


class TestSecondDerivative:
    def test_sign_for_convex_enthalpy(self):
        assert eta_second_derivative(gamma_law(1.3, 1.4), 0.8) < 0

    @pytest.mark.parametrize("M0, gamma", [(1.3, 1.4), (1.3, 0.5), (2.0, 3.0)])
    def test_against_finite_differences(self, M0, gamma):
        up = gamma_law(M0, gamma)
        V_n = normal_shock_V(up)
        Vm = 0.5 * (V_n + 1.0)
        x0 = xi_of_V(up, Vm)

        def eta_at(x):
            V = brentq(lambda v: xi_of_V(up, v) - x, V_n, 1.0, xtol=1e-16, rtol=1e-15)
            return math.sqrt((x - V) * (1 - x))

        h = 1e-3 * (1 - x0)
        fd = (-eta_at(x0 + 2 * h) + 16 * eta_at(x0 + h) - 30 * eta_at(x0) + 16 * eta_at(x0 - h)
              - eta_at(x0 - 2 * h)) / (12 * h * h)
        assert eta_second_derivative(up, Vm) == pytest.approx(fd, rel=1e-4)

    def test_evaluates_on_negative_gamma_segment(self):
        up = PotentialUpstream(3.0, fig8_eos())
        V = np.linspace(0.3, 0.99, 20)
        assert np.all(np.isfinite(eta_second_derivative(up, V)))

    def test_endpoint_degenerate(self):
        up = gamma_law(1.3, 1.4)
        with pytest.raises(RangeError):
            eta_second_derivative(up, 1.0)
