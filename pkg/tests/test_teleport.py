import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qutrit_teleport.channels import ChannelSpec
from qutrit_teleport.linalg import is_density_matrix, projector, random_density_matrix, random_state_vector
from qutrit_teleport.protection import eam_shared_elements, wm_protected_resource, wm_shared_elements
from qutrit_teleport.teleport import (
    InputAngles,
    OMEGA,
    apply_superoperator,
    correction_table_discrepancies,
    derive_correction_table,
    gates,
    input_state,
    output_closed_form_eam,
    output_closed_form_wm,
    resource_state,
    shift_x,
    clock_z,
    teleport_circuit,
    teleport_superoperator,
)


def test_gates_are_unitary():
    for name, g in gates().items():
        np.testing.assert_allclose(g @ g.conj().T, np.eye(len(g)), atol=1e-14, err_msg=name)


def test_clock_shift_commutation():
    x, z = shift_x(), clock_z()
    np.testing.assert_allclose(z @ x, OMEGA * x @ z, atol=1e-15)


@pytest.mark.parametrize(
    "angles", [(0.0, 0.3, 1.0, 1.0), (1.6, 0.3, 1.0, 1.0), (0.3, 0.3, 0.0, 1.0), (0.3, 0.3, 1.0, 7.0)]
)
def test_input_angles_out_of_range(angles):
    with pytest.raises(ValueError):
        InputAngles(*angles)


def test_input_state_normalized():
    psi = input_state((0.4, 1.2, 0.5, 6.0))
    assert np.vdot(psi, psi).real == pytest.approx(1.0)
    psi = input_state(InputAngles(math.pi / 2, math.pi / 2, 2 * math.pi, 2 * math.pi))
    np.testing.assert_allclose(np.abs(psi), [0, 0, 1], atol=1e-15)


def test_printed_correction_rule_is_exact():
    table = derive_correction_table()
    assert len(table) == 9
    assert correction_table_discrepancies(table) == []


def test_noiseless_teleportation(rng):
    shared = projector(resource_state())
    for _ in range(20):
        psi = random_state_vector(3, rng)
        rep = teleport_circuit(psi, shared)
        np.testing.assert_allclose(rep.outcome_probabilities, np.full(9, 1 / 9), atol=1e-14)
        np.testing.assert_allclose(rep.output, projector(psi), atol=1e-14)


def test_mixed_input(rng):
    rho = random_density_matrix(3, rng)
    out = teleport_circuit(rho, projector(resource_state())).output
    np.testing.assert_allclose(out, rho, atol=1e-14)


def test_unnormalized_shared_state_requires_opt_in(rng):
    shared = wm_protected_resource(ChannelSpec.symmetric(0.3, 0.3), 0.4, 0.2)
    psi = random_state_vector(3, rng)
    with pytest.raises(ValueError):
        teleport_circuit(psi, shared)
    rep = teleport_circuit(psi, shared, normalize=True)
    assert rep.success_probability == pytest.approx(np.trace(shared).real)
    assert is_density_matrix(rep.output)


@settings(max_examples=40, deadline=None)
@given(
    st.floats(0, 1), st.floats(0, 1), st.floats(0, 0.99), st.floats(0, 0.99), st.integers(0, 2**32 - 1)
)
def test_closed_form_outputs_match_circuit(mu, d, p, q, seed):
    psi = random_state_vector(3, np.random.default_rng(seed))
    spec = ChannelSpec.symmetric(d, mu)
    out = teleport_circuit(psi, wm_protected_resource(spec, p, q), normalize=True).output
    np.testing.assert_allclose(out, output_closed_form_wm(psi, wm_shared_elements(mu, d, p, q)), atol=1e-10)
    eam = eam_shared_elements(mu, d, q)
    out = teleport_circuit(psi, eam, normalize=True).output
    np.testing.assert_allclose(out, output_closed_form_eam(psi, eam), atol=1e-10)


def test_closed_form_requires_symmetry(rng):
    psi = random_state_vector(3, rng)
    with pytest.raises(ValueError):
        output_closed_form_wm(psi, wm_shared_elements(0.3, (0.2, 0.6), 0.1, 0.1))


def test_superoperator_matches_circuit(rng):
    shared = wm_protected_resource(ChannelSpec.symmetric(0.5, 0.2), 0.3, 0.1)
    superop = teleport_superoperator(shared, normalize=True)
    psis = np.array([random_state_vector(3, rng) for _ in range(5)])
    batch = apply_superoperator(superop, psis)
    for psi, out in zip(psis, batch):
        np.testing.assert_allclose(out, teleport_circuit(psi, shared, normalize=True).output, atol=1e-14)
