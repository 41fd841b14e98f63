import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from shockpolar.eos_barotropic import BarotropicClass, BarotropicEos
from shockpolar.errors import DomainError, ValidationError
from shockpolar.scenarios import fig8_eos

ORDER = [BarotropicClass.MONOTONE_C, BarotropicClass.CONVEX_H, BarotropicClass.CONVEX_EOS, BarotropicClass.NONE]


def fd1(f, V, h):
    return (8 * (f(V + h) - f(V - h)) - (f(V + 2 * h) - f(V - 2 * h))) / (12 * h)


def fd2(f, V, h):
    return (-f(V + 2 * h) + 16 * f(V + h) - 30 * f(V) + 16 * f(V - h) - f(V - 2 * h)) / (12 * h * h)


def test_reference_normalization():
    eos = BarotropicEos.gamma_law(1.4, c0_sq=2.0)
    assert eos.enthalpy(1.0) == 0.0
    assert eos.sound_speed_sq(1.0) == pytest.approx(2.0, rel=1e-15)
    assert -1.0 * eos.enthalpy_V(1.0) == pytest.approx(2.0, rel=1e-15)


def test_enthalpy_power_law_value():
    eos = BarotropicEos.gamma_law(1.4)
    assert eos.enthalpy(0.8) == pytest.approx((0.8 ** -0.4 - 1) / 0.4, rel=1e-14)


def test_sound_speed_power_law():
    eos = BarotropicEos.gamma_law(1.4)
    V = np.geomspace(0.01, 10, 11)
    np.testing.assert_allclose(eos.sound_speed_sq(V), V ** -0.4, rtol=1e-14)


def test_isothermal_segment():
    eos = BarotropicEos.gamma_law(1.0, c0_sq=3.0)
    V = np.array([0.2, 0.5, 4.0])
    np.testing.assert_allclose(eos.sound_speed_sq(V), 3.0, rtol=1e-15)
    np.testing.assert_allclose(eos.enthalpy(V), -3.0 * np.log(V), rtol=1e-14)


def test_negative_gamma_enthalpy_still_decreasing():
    eos = BarotropicEos.gamma_law(-0.75)
    V = np.linspace(0.1, 5, 200)
    assert np.all(eos.enthalpy_V(V) < 0)
    assert np.all(np.diff(eos.enthalpy(V)) < 0)
    assert np.all(eos.segments[0].A < 0)


@pytest.mark.parametrize("gamma", [-0.75, 0.3, 1.0, 1.4, 3.0])
def test_derivatives_match_finite_differences(gamma):
    eos = BarotropicEos.gamma_law(gamma)
    for V in (0.3, 1.0, 2.7):
        h = 1e-3 * V
        assert fd1(eos.enthalpy, V, h) == pytest.approx(-eos.sound_speed_sq(V) / V, rel=1e-6)
        assert fd2(eos.enthalpy, V, h) == pytest.approx(eos.enthalpy_VV(V), rel=1e-5)


@pytest.mark.parametrize("gamma, want", [(3.0, BarotropicClass.MONOTONE_C), (1.4, BarotropicClass.MONOTONE_C),
                                         (1.0, BarotropicClass.MONOTONE_C), (0.5, BarotropicClass.CONVEX_H),
                                         (-0.75, BarotropicClass.CONVEX_EOS), (-1.5, BarotropicClass.NONE)])
def test_classification(gamma, want):
    assert BarotropicEos.gamma_law(gamma).classify(0.7) is want


def test_fig8_upper_segment_is_convex_eos_but_not_convex_h():
    eos = fig8_eos()
    assert eos.classify(0.5) is BarotropicClass.CONVEX_EOS
    assert eos.enthalpy_VV(0.5) < 0
    assert eos.classify(0.01) is BarotropicClass.MONOTONE_C


def test_knot_continuity():
    eos = BarotropicEos.from_segments([(3.0, 0.0, 0.2), (0.5, 0.2, 0.6), (-0.75, 0.6, 2.0), (1.4, 2.0, math.inf)])
    for Vk, (left, right) in zip(eos.knots, zip(eos.segments, eos.segments[1:])):
        for fn in ("enthalpy", "sound_speed_sq"):
            a, b = getattr(left, fn)(Vk), getattr(right, fn)(Vk)
            assert abs(a - b) <= 1e-12 * max(abs(a), 1.0)
    assert eos.sound_speed_sq(1.0) == pytest.approx(1.0, rel=1e-15)
    assert eos.enthalpy(1.0) == pytest.approx(0.0, abs=1e-15)


@settings(max_examples=50, deadline=None)
@given(st.floats(-0.95, 4.0).filter(lambda g: abs(g) > 1e-3), st.floats(0.01, 50.0))
def test_chain_nesting(gamma, V):
    # each class implies the weaker ones; checked through the defining inequalities
    eos = BarotropicEos.gamma_law(gamma)
    cls = eos.classify(V)
    c2 = eos.sound_speed_sq(V)
    rho_dc2 = (gamma - 1) * c2
    assert ORDER.index(cls) <= ORDER.index(BarotropicClass.CONVEX_EOS)
    if cls is BarotropicClass.MONOTONE_C:
        assert eos.enthalpy_VV(V) >= 0
    if ORDER.index(cls) <= 1:
        assert rho_dc2 + 2 * c2 > 0


class TestErrors:
    def test_zero_gamma(self):
        with pytest.raises(ValidationError, match="nonzero"):
            BarotropicEos.gamma_law(0.0)

    def test_reference_outside(self):
        with pytest.raises(ValidationError, match="V = 1"):
            BarotropicEos.gamma_law(1.4, V_lo=2.0, V_hi=3.0)

    def test_gap(self):
        with pytest.raises(ValidationError, match="contiguous"):
            BarotropicEos.from_segments([(1.4, 0.0, 0.5), (1.4, 0.6, 2.0)])

    def test_domain(self):
        eos = BarotropicEos.gamma_law(1.4, V_lo=0.1, V_hi=5.0)
        with pytest.raises(DomainError) as info:
            eos.enthalpy(6.0)
        assert info.value.interval == (0.1, 5.0)
        with pytest.raises(DomainError):
            BarotropicEos.gamma_law(1.4).sound_speed_sq(0.0)

    def test_nonpositive_c0(self):
        with pytest.raises(ValidationError):
            BarotropicEos.gamma_law(1.4, c0_sq=-1.0)
