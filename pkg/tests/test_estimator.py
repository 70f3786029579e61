import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from qutrit_teleport import TeleportationSimulator
from qutrit_teleport import analytics as an
from qutrit_teleport.estimator import states_from_angles
from qutrit_teleport.linalg import random_state_vector


@pytest.fixture
def states(rng):
    return np.array([random_state_vector(3, rng) for _ in range(8)])


def test_params_round_trip():
    sim = TeleportationSimulator(scheme="eam", mu=0.2, d=0.3)
    assert sim.get_params()["mu"] == 0.2
    assert clone(sim).get_params() == sim.get_params()
    sim.set_params(q=0.1)
    assert sim.q == 0.1


def test_not_fitted(states):
    with pytest.raises(NotFittedError):
        TeleportationSimulator().transform(states)


def test_transform_shape_and_validity(states):
    out = TeleportationSimulator("wm", 0.4, 0.5, 0.3).fit().transform(states)
    assert out.shape == (8, 3, 3)
    np.testing.assert_allclose(np.trace(out, axis1=1, axis2=2), 1.0, atol=1e-12)


def test_rejects_unnormalized_states():
    sim = TeleportationSimulator().fit()
    with pytest.raises(ValueError):
        sim.transform(np.ones((2, 3)))
    with pytest.raises(ValueError):
        sim.transform(np.ones((2, 4)) / 2)


def test_fit_attributes():
    sim = TeleportationSimulator("wm", 0.3, 0.4, 0.5).fit()
    assert sim.success_probability_ == pytest.approx(an.success_prob_wm_opt(0.3, 0.4, 0.5, "derived"))
    assert sim.q_ == pytest.approx(1 - 0.5 * (0.7 * 0.6 + 0.3 * np.sqrt(0.6)))


def test_average_score_matches_closed_form():
    psi, w = an.input_measure_nodes(32)
    for scheme, expected in (
        ("none", an.cad_baseline(0.3, 0.4)),
        ("wm", an.avg_fidelity_wm_opt(0.3, 0.4, 0.5, "derived")),
        ("eam", an.avg_fidelity_eam_opt(0.3, 0.4, "derived")),
    ):
        sim = TeleportationSimulator(scheme, 0.3, 0.4, 0.5 if scheme == "wm" else 0.0).fit()
        assert float(w @ sim.fidelities(psi)) == pytest.approx(expected, abs=1e-10)


def test_optimal_q_of_one_is_refused():
    with pytest.raises(ValueError):
        TeleportationSimulator("eam", mu=0.5, d=1.0).fit()


def test_invalid_scheme():
    with pytest.raises(ValueError):
        TeleportationSimulator("bogus").fit()


def test_states_from_angles():
    psi = states_from_angles([[0.4, 1.0, 0.5, 2.0], [1.2, 0.2, 3.0, 1.0]])
    np.testing.assert_allclose(np.linalg.norm(psi, axis=1), 1.0)
    with pytest.raises(ValueError):
        states_from_angles([[0.1, 0.2, 0.3]])
