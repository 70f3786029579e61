import math

import numpy as np
import pytest

from qutrit_teleport import analytics as an
from qutrit_teleport.protection import optimal_q_eam, optimal_q_wm


def test_measure_normalization():
    assert an.measure_normalization() == pytest.approx(1.0, abs=1e-12)
    assert an.measure_normalization(64, 32) == pytest.approx(1.0, abs=1e-12)


def test_mean_pair_product_is_one_quarter():
    assert an.quadrature_average(an._pair_products) == pytest.approx(0.25, abs=1e-13)


@pytest.mark.parametrize("mu,d,p,q", [(0.3, 0.4, 0.5, 0.2), (0.9, 0.8, 0.0, 0.6), (0.0, 0.5, 0.9, 0.1)])
def test_average_matches_quadrature(mu, d, p, q):
    quad = an.quadrature_average(lambda s: an.fidelity_wm(s, mu, d, p, q), n_phi=8)
    assert quad == pytest.approx(an.avg_fidelity_wm(mu, d, p, q), abs=1e-9)
    quad = an.quadrature_average(lambda s: an.fidelity_eam(s, mu, d, q), n_phi=8)
    assert quad == pytest.approx(an.avg_fidelity_eam(mu, d, q), abs=1e-9)


def test_fidelity_accepts_angles():
    angles = (0.7, 0.4, 1.0, 2.0)
    assert an.fidelity_wm(angles, 0.3, 0.4, 0.1, 0.2) == pytest.approx(
        an.fidelity_wm(an.amplitudes(*angles), 0.3, 0.4, 0.1, 0.2)
    )


def test_baseline_anchors():
    assert an.cad_baseline(0.0, 0.0) == 1.0
    assert an.cad_baseline(0.0, 1.0) == pytest.approx(0.5)
    assert an.cad_baseline(0.7, 0.0) == pytest.approx(1.0)


@pytest.mark.parametrize("form", an.FORMS)
def test_eam_restored_at_uncorrelated_and_fully_correlated(form):
    for d in np.linspace(0, 1, 11):
        assert an.avg_fidelity_eam_opt(0.0, d, form) == pytest.approx(1.0, abs=1e-12)
        assert an.avg_fidelity_eam_opt(1.0, d, form) == pytest.approx(1.0, abs=1e-12)


def test_eam_not_fully_restored_for_partial_correlation():
    assert an.avg_fidelity_eam_opt(0.5, 0.9, "derived") < 1.0 - 1e-3


def test_derived_forms_equal_element_route():
    for mu in np.linspace(0, 1, 7):
        for d in np.linspace(0, 0.95, 7):
            for p in (0.0, 0.5, 0.9):
                q = optimal_q_wm(p, d, mu)
                assert an.avg_fidelity_wm_opt(mu, d, p, "derived") == pytest.approx(
                    an.avg_fidelity_wm(mu, d, p, q), abs=1e-12
                )
                assert an.success_prob_wm_opt(mu, d, p, "derived") == pytest.approx(
                    an.success_prob_wm(mu, d, p, q), abs=1e-12
                )
            q = optimal_q_eam(d, mu)
            assert an.avg_fidelity_eam_opt(mu, d, "derived") == pytest.approx(an.avg_fidelity_eam(mu, d, q), abs=1e-12)
            assert an.success_prob_eam_opt(mu, d, "derived") == pytest.approx(an.success_prob_eam(mu, d, q), abs=1e-12)


def test_printed_eam_forms_equal_printed_table():
    for mu in np.linspace(0, 1, 6):
        for d in np.linspace(0, 0.95, 6):
            q = optimal_q_eam(d, mu)
            assert an.avg_fidelity_eam_opt(mu, d, "printed") == pytest.approx(
                an.avg_fidelity_eam(mu, d, q, "printed"), abs=1e-12
            )


def test_printed_wm_form_differs_from_element_route():
    """The printed WM bracket lacks a pb factor; the gap is real and large."""
    mu, d, p = 0.0, 0.95, 0.95
    exact = an.avg_fidelity_wm(mu, d, p, optimal_q_wm(p, d, mu))
    assert abs(an.avg_fidelity_wm_opt(mu, d, p, "printed") - exact) > 0.1
    # at p = 0 the missing factor is 1 and the two forms coincide
    assert an.avg_fidelity_wm_opt(0.3, 0.6, 0.0, "printed") == pytest.approx(
        an.avg_fidelity_wm_opt(0.3, 0.6, 0.0, "derived"), abs=1e-15
    )


@pytest.mark.parametrize("form", an.FORMS)
def test_corner_value_is_the_uncorrelated_limit(form):
    """At (mu, d) = (0, 1) the optimal strength is q = 1 and the closed forms are limits.

    The limit is direction dependent: along mu = 0 (d -> 1) it is the value
    returned; along d = 1 (mu -> 0+) the fidelity tends to 3/4 instead.
    """
    for p in (0.0, 0.5, 0.9):
        corner = an.avg_fidelity_wm_opt(0.0, 1.0, p, form)
        assert an.avg_fidelity_wm_opt(0.0, 1.0 - 1e-9, p, form) == pytest.approx(corner, abs=1e-6)
        assert an.avg_fidelity_wm_opt(1e-9, 1.0, p, form) == pytest.approx(0.75, abs=1e-6)
        assert an.success_prob_wm_opt(0.0, 1.0, p, form) == 0.0
    assert an.success_prob_eam_opt(0.0, 1.0, form) == 0.0


def test_corner_values():
    pb = 0.5
    assert an.avg_fidelity_wm_opt(0.0, 1.0, 0.5, "printed") == pytest.approx(
        0.25 + (2 * pb**2 + 9) / (4 * (2 * pb**2 + 7))
    )
    assert an.avg_fidelity_wm_opt(0.0, 1.0, 0.5, "derived") == pytest.approx(
        0.25 + (2 * pb**2 + 9) / (4 * (2 * pb**2 + 4 * pb + 3))
    )


def test_values_in_unit_interval():
    for mu in np.linspace(0, 1, 21):
        for d in np.linspace(0, 1, 21):
            for p in np.linspace(0, 0.95, 11):
                for form in an.FORMS:
                    for v in (
                        an.avg_fidelity_wm_opt(mu, d, p, form),
                        an.success_prob_wm_opt(mu, d, p, form),
                        an.avg_fidelity_eam_opt(mu, d, form),
                        an.success_prob_eam_opt(mu, d, form),
                    ):
                        assert -1e-12 <= v <= 1 + 1e-12


def test_balanced_improvement_zero_noise():
    for p in (0.0, 0.3, 0.9):
        expected = 1.0 - an.success_prob_wm_opt(0.4, 0.0, p, "derived")
        assert an.balanced_improvement(0.4, 0.0, p, "derived") == pytest.approx(expected)
    assert an.balanced_improvement(0.4, 0.0, 0.0) == pytest.approx(0.0, abs=1e-15)


def test_golden_section_on_parabola():
    assert an.golden_section_max(lambda x: -(x - 0.3) ** 2, 0, 1) == pytest.approx(0.3, abs=1e-7)


def test_numeric_optimum_examples():
    # zero noise and no WM: fidelity is identically 1, tie broken to q = 0
    assert an.numeric_optimal_q("wm", 0.4, 0.0, 0.0) == 0.0
    # zero noise with WM: q = p undoes the weak measurement exactly
    assert an.numeric_optimal_q("wm", 0.4, 0.0, 0.3) == pytest.approx(0.3, abs=1e-6)
    assert an.numeric_optimal_q("eam", 0.0, 0.5) == pytest.approx(0.5, abs=1e-6)
    with pytest.raises(ValueError):
        an.numeric_optimal_q("none", 0.0, 0.5)


def test_objective_unimodal_on_random_tuples():
    assert an.unimodality_violations(20, 501, np.random.default_rng(3)) == (0, 0.0)


def test_optimum_can_sit_at_upper_end():
    """Without correlations and WM, strong damping pushes the optimum to q -> 1 (fidelity -> 3/4)."""
    q = an.numeric_optimal_q("wm", 0.0, 0.9, 0.0)
    assert q > 0.999
    assert an.avg_fidelity_wm(0.0, 0.9, 0.0, q) == pytest.approx(0.75, abs=1e-5)


def test_merit_point_optimal():
    mp = an.merit_point(0.3, 0.4, 0.5)
    assert mp.q_wm == pytest.approx(optimal_q_wm(0.5, 0.4, 0.3))
    assert mp.F_imp == pytest.approx(mp.F_eam * mp.P_eam - mp.F_wm * mp.P_wm)
    assert set(mp.as_dict()) >= {"F_cad", "F_wm", "F_eam", "P_wm", "P_eam", "F_imp", "eq21_discrepancy"}


def test_merit_point_explicit_q():
    mp = an.merit_point(0.3, 0.4, 0.5, 0.2)
    assert mp.q_wm == mp.q_eam == 0.2
    assert mp.F_wm == pytest.approx(an.avg_fidelity_wm(0.3, 0.4, 0.5, 0.2))


def test_merit_point_printed_variant_uses_printed_eam():
    mp = an.merit_point(0.5, 0.6, 0.3, variant="printed")
    assert mp.F_eam == pytest.approx(an.avg_fidelity_eam_opt(0.5, 0.6, "printed"))


def test_invalid_inputs():
    with pytest.raises(ValueError):
        an.avg_fidelity_wm(0.3, 0.4, 1.0, 0.2)
    with pytest.raises(ValueError):
        an.avg_fidelity_wm_opt(0.3, 0.4, 0.2, "bogus")
