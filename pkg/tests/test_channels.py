import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qutrit_teleport.channels import (
    ChannelSpec,
    DampingParams,
    ad_kraus,
    ad_pair_kraus,
    cad_apply,
    cad_branches,
    damping_from_rates,
    fcad_kraus,
    no_jump_operators,
    weighted_completeness_residual,
)
from qutrit_teleport.linalg import is_density_matrix, projector, random_density_matrix
from qutrit_teleport.teleport import resource_state

unit = st.floats(min_value=0.0, max_value=1.0)


@pytest.mark.parametrize("bad", [-0.1, 1.1, float("nan")])
def test_damping_params_validated(bad):
    with pytest.raises(ValueError):
        DampingParams(bad, 0.5)


def test_channel_spec_validates_mu():
    with pytest.raises(ValueError):
        ChannelSpec.symmetric(0.5, 1.5)
    with pytest.raises(TypeError):
        ChannelSpec(0.5, 0.5)


def test_ad_endpoints():
    e0, e1, e2 = ad_kraus(0.0).operators
    np.testing.assert_allclose(e0, np.eye(3))
    assert not e1.any() and not e2.any()
    e0, e1, e2 = ad_kraus(1.0).operators
    assert e0[1, 1] == 0 and e1[0, 1] == 1 and e2[0, 2] == 1


def test_fcad_sparsity_pattern():
    a00, a11, a22 = fcad_kraus((0.3, 0.6)).operators
    assert a11[0, 4] == pytest.approx(math.sqrt(0.3)) and np.count_nonzero(a11) == 1
    assert a22[0, 8] == pytest.approx(math.sqrt(0.6)) and np.count_nonzero(a22) == 1
    assert a00[4, 4] == pytest.approx(math.sqrt(0.7)) and a00[8, 8] == pytest.approx(math.sqrt(0.4))


def test_ad_pair_ordering():
    single = ad_kraus(0.4).operators
    pair = ad_pair_kraus(0.4).operators
    np.testing.assert_allclose(pair[1], np.kron(single[0], single[1]))
    np.testing.assert_allclose(pair[3], np.kron(single[1], single[0]))


@settings(max_examples=200, deadline=None)
@given(unit, unit, unit)
def test_cad_complete_and_trace_preserving(d1, d2, mu):
    spec = ChannelSpec(DampingParams(d1, d2), mu)
    assert weighted_completeness_residual(cad_branches(spec)) <= 1e-12
    rho = random_density_matrix(9, np.random.default_rng(0))
    assert is_density_matrix(cad_apply(rho, spec))


def test_cad_endpoints_match_components(rng):
    rho = random_density_matrix(9, rng)
    d = DampingParams(0.3, 0.5)
    from qutrit_teleport.linalg import apply_kraus

    np.testing.assert_allclose(cad_apply(rho, ChannelSpec(d, 0.0)), apply_kraus(rho, ad_pair_kraus(d)), atol=1e-15)
    np.testing.assert_allclose(cad_apply(rho, ChannelSpec(d, 1.0)), apply_kraus(rho, fcad_kraus(d)), atol=1e-15)


def test_full_damping_drives_to_ground_state():
    out = cad_apply(projector(resource_state()), ChannelSpec.symmetric(1.0, 0.4))
    expected = np.zeros((9, 9))
    expected[0, 0] = 1.0
    np.testing.assert_allclose(out, expected, atol=1e-15)


def test_no_jump_operators_are_the_first_kraus_operators():
    e00, a00 = no_jump_operators(0.2)
    np.testing.assert_allclose(e00, ad_pair_kraus(0.2).operators[0])
    np.testing.assert_allclose(a00, fcad_kraus(0.2).operators[0])


def test_damping_from_rates():
    d = damping_from_rates(1.0, 2.0, 0.5)
    assert d.d1 == pytest.approx(1 - math.exp(-0.5)) and d.d2 == pytest.approx(1 - math.exp(-1.0))
    assert damping_from_rates(1.0, 1.0, 0.0).d1 == 0.0
    assert damping_from_rates(1.0, 1.0, 1e6).d1 == pytest.approx(1.0)
    with pytest.raises(ValueError):
        damping_from_rates(-1.0, 1.0, 1.0)
