import numpy as np
import pytest

from shockpolar.analysis import Verdict
from shockpolar.eos_barotropic import BarotropicClass
from shockpolar.eos_ideal import BranchKind, EosConvexity
from shockpolar.errors import ValidationError
from shockpolar.scenarios import (SCENARIOS, counterexample_fig7, fig7_eos, get_scenario, monotone_c_eos,
                                  run_scenario, scan_fig8)


@pytest.mark.parametrize("name", list(SCENARIOS))
def test_every_scenario_meets_its_expectation(name):
    res = run_scenario(get_scenario(name))
    assert res.passed, res.failures


def test_controls_expect_convex():
    for name in SCENARIOS:
        if name.endswith("-control"):
            sc = get_scenario(name)
            assert all(v is Verdict.STRICTLY_CONVEX for _, v in sc.expected)
            assert sc.event_window is None


def test_fig1_metadata():
    sc = get_scenario("fig1")
    assert (sc.M0, sc.gamma, sc.model) == (1.3, 1.4, "euler-polytropic")


class TestFig7:
    def test_branch_structure(self):
        eos = fig7_eos()
        assert eos.knots == (5.3, 5.6)
        assert [b.kind for b in eos.branches] == [BranchKind.POLYTROPIC, BranchKind.BORDERLINE_CONVEX,
                                                  BranchKind.POLYTROPIC]
        assert eos.classify_convexity(5.45).convexity is EosConvexity.BORDERLINE

    def test_C_determines_lower_plateau(self):
        ref = fig7_eos()
        eos = fig7_eos(C=ref.branches[1].parameter)
        assert eos.branches[0].parameter == pytest.approx(ref.branches[0].parameter, rel=1e-12)

    def test_invalid_parameters(self):
        with pytest.raises(ValidationError):
            fig7_eos(cv_lo=-1.0)
        with pytest.raises(ValidationError):
            fig7_eos(T_hi=5.0)
        with pytest.raises(ValidationError):
            fig7_eos(middle="cubic")

    def test_middle_polytropic_fails_expectation(self):
        res = run_scenario(counterexample_fig7(middle="polytropic"))
        assert not res.passed
        assert res.reports["u"].verdict is Verdict.STRICTLY_CONVEX


class TestMonotoneC:
    def test_sound_speed_never_decreases(self):
        eos = monotone_c_eos()
        T = np.geomspace(eos.T_min, eos.T_max, 20001)
        c2 = eos.sound_speed_sq(T)
        assert np.all(np.diff(c2) >= -1e-12 * c2[1:])
        assert all(eos.classify_convexity(t).monotone_sound_speed for t in T[::50])

    def test_constant_c_on_middle_branch(self):
        eos = monotone_c_eos()
        c2 = eos.sound_speed_sq(np.linspace(10.3, 10.815, 50))
        np.testing.assert_allclose(c2, c2[0], rtol=1e-12)

    def test_event_just_above_T1(self):
        rep = run_scenario(get_scenario("monotone-c")).reports["u"]
        assert any(10.3 <= e.location <= 10.815 for e in rep.events)

    def test_zero_width_is_single_branch(self):
        assert len(monotone_c_eos(width=1.0).branches) == 1
        with pytest.raises(ValidationError):
            monotone_c_eos(width=0.9)


class TestFig8:
    def test_segments(self):
        eos = get_scenario("fig8").eos
        assert eos.knots == (0.019,)
        assert eos.classify(0.5) is BarotropicClass.CONVEX_EOS
        assert eos.classify(0.01) is BarotropicClass.MONOTONE_C

    def test_scan_finds_non_convex(self):
        hits = [M0 for M0, rep in scan_fig8(np.geomspace(1.5, 50, 6)) if rep.verdict is Verdict.NON_CONVEX]
        assert hits

    def test_control_convex(self):
        assert all(rep.verdict is Verdict.STRICTLY_CONVEX for _, rep in scan_fig8([2.0, 20.0], control=True))


def test_unknown_scenario_lists_names():
    with pytest.raises(ValidationError, match="fig1, fig7"):
        get_scenario("fig9")


def test_bad_override():
    with pytest.raises(ValidationError, match="bad override"):
        get_scenario("fig1", M0=2.0)
