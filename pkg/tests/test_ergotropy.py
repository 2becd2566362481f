import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qbattery import ergotropy as erg
from qbattery.channels import NoiseParams, apply_channel_n, asymptotic_state_bf, brute_state_single, kraus_two
from qbattery.ergotropy import (
    ContractViolation,
    ad_gamma,
    analytic_coefficients,
    asymptotic_ergotropy_ad,
    asymptotic_ergotropy_bf,
    ergotropy_bf_closed,
    ergotropy_pf_asymptotic,
    ergotropy_r1_closed,
    ergotropy_r23_closed,
    ergotropy_single_closed,
    ergotropy_single_formula,
    ergotropy_single_pauli,
    ergotropy_spectral,
    ergotropy_two_closed,
    passive_decomposition,
    stored_energy_two,
)
from qbattery.models import (
    RegionError,
    SingleQubitParams,
    XYZDMParams,
    charged_density,
    charged_state_two,
    energy_gap,
    two_qubit_hamiltonian,
)

from conftest import random_density, random_hermitian

H1 = np.diag([1.0, 0.0])


def numpy_ergotropy(h, rho):
    """Independent passive-state oracle using numpy's eigensolver."""
    e = np.linalg.eigvalsh(h)
    r = np.linalg.eigvalsh(rho)[::-1]
    return np.trace(h @ rho).real - float(np.dot(e, r))


def test_spectral_matches_numpy_oracle(rng):
    for dim in (2, 4):
        for _ in range(100):
            h = random_hermitian(rng, dim, 3.0)
            rho = random_density(rng, dim)
            assert abs(ergotropy_spectral(h, rho) - numpy_ergotropy(h, rho)) < 1e-12


def test_passive_state_properties(rng):
    h = random_hermitian(rng, 4)
    rho = random_density(rng, 4)
    dec = passive_decomposition(h, rho)
    assert np.all(np.diff(dec.rho_eigs) <= 1e-15)
    assert np.all(np.diff(dec.h_eigs) >= 0)
    assert ergotropy_spectral(h, dec.passive) < 1e-12
    assert abs(np.trace(dec.passive) - 1) < 1e-13


def test_excited_and_ground_states():
    assert ergotropy_spectral(H1, np.diag([1.0, 0.0])) == pytest.approx(1.0, abs=1e-15)
    assert ergotropy_spectral(H1, np.diag([0.0, 1.0])) == 0.0
    assert ergotropy_spectral(H1, np.eye(2) / 2) == 0.0


def test_negative_beyond_clamp_raises():
    # A non-density input can produce a large negative value.
    with pytest.raises(ContractViolation):
        erg._clamp(-1e-6)
    before = erg.clamp_events
    assert erg._clamp(-1e-13) == 0.0
    assert erg.clamp_events == before + 1


@settings(max_examples=100, deadline=None)
@given(st.floats(0, 2 * math.pi))
def test_single_qubit_formulas_agree(wt):
    rho = charged_density(wt)
    ref = ergotropy_spectral(H1, rho)
    assert abs(ergotropy_single_formula(rho) - ref) < 1e-12
    assert abs(ergotropy_single_pauli(rho) - ref) < 1e-12
    # A pure charged state has all of its energy available.
    assert abs(ref - math.sin(wt) ** 2) < 1e-12


@settings(max_examples=200, deadline=None)
@given(st.sampled_from(["pf", "bf", "ad"]), st.floats(0, 1), st.floats(0, 2 * math.pi), st.integers(0, 20))
def test_single_closed_vs_spectral(kind, p, wt, n):
    s = SingleQubitParams(omega=1.0, t=wt)
    noise = NoiseParams(kind, p, n)
    assert abs(ergotropy_single_closed(s, noise) - ergotropy_spectral(H1, brute_state_single(s, noise))) < 1e-10


def test_bf_special_values():
    s = SingleQubitParams(omega=1.0, t=0.4)
    assert ergotropy_bf_closed(s, NoiseParams("bf", 0.5, 0)) == pytest.approx(math.sin(0.4) ** 2)
    for n in (1, 2, 17):
        assert ergotropy_bf_closed(s, NoiseParams("bf", 0.5, n)) == 0.0


def test_pf_asymptote_and_ad_gamma():
    assert ergotropy_pf_asymptotic(0.0) == 0.0
    assert ergotropy_pf_asymptotic(math.pi / 2) == pytest.approx(1.0)
    assert ad_gamma(0.1, 0, math.pi / 2) == pytest.approx(1.0)
    assert ad_gamma(0.1, 2000, 1.0) == pytest.approx(-1.0)


def test_two_qubit_closed_forms(ref_models):
    for p in ref_models.values():
        h = two_qubit_hamiltonian(p)
        for t in np.linspace(0, math.pi, 13):
            stored = stored_energy_two(p, t)
            assert abs(ergotropy_two_closed(p, t) - stored) < 1e-10
            assert abs(numpy_ergotropy(h, charged_state_two(p, t)) - stored) < 1e-10
    with pytest.raises(RegionError):
        ergotropy_r1_closed(ref_models[2.5], 0.1)
    with pytest.raises(RegionError):
        ergotropy_r23_closed(ref_models[0.3], 0.1)


def test_two_qubit_bounded_by_gap(ref_models):
    for p in ref_models.values():
        ts = np.linspace(0, math.pi, 101)
        assert max(ergotropy_two_closed(p, t) for t in ts) <= energy_gap(p) + 1e-12


def test_coefficients_bundle(ref_models):
    c = analytic_coefficients(ref_models[1.2], 0.3)
    assert c.a == pytest.approx(math.cos(0.6))
    assert c.phi is not None and c.eta is not None
    assert list(c.levels) == sorted(c.levels)


def test_asymptotic_ad_values(ref_models):
    assert asymptotic_ergotropy_ad(ref_models[1.2]) == pytest.approx(math.hypot(1.2, 0.1) + 0.5 - 1, abs=1e-15)
    assert asymptotic_ergotropy_ad(ref_models[2.5]) == pytest.approx(2.001999200639361, abs=1e-12)
    assert asymptotic_ergotropy_ad(ref_models[0.3]) == 0.0


def test_asymptotic_bf_values(ref_models):
    # Frozen from the spectral oracle applied to the X-state limit.
    expected = {0.3: 0.011961885322333778, 1.2: 0.08654831485334223, 2.5: 0.06758993327773792}
    for d, p in ref_models.items():
        h = two_qubit_hamiltonian(p)
        assert asymptotic_ergotropy_bf(p) == pytest.approx(expected[d], abs=1e-12)
        assert abs(asymptotic_ergotropy_bf(p) - numpy_ergotropy(h, asymptotic_state_bf(p))) < 1e-12


def test_asymptotic_bf_wrong_sign_disagrees(ref_models):
    p = ref_models[2.5]
    ref = ergotropy_spectral(two_qubit_hamiltonian(p), asymptotic_state_bf(p))
    zeta = asymptotic_state_bf(p)[0, 3].real
    flipped = asymptotic_ergotropy_bf(p, sign=math.copysign(1.0, zeta))
    assert abs(flipped - ref) > 1e-3


def test_bf_long_iteration_reaches_formula(ref_models):
    for p in ref_models.values():
        rho = apply_channel_n(kraus_two("bf", 0.1), charged_state_two(p, 0.5), 500)
        assert abs(ergotropy_spectral(two_qubit_hamiltonian(p), rho) - asymptotic_ergotropy_bf(p)) < 1e-9
