import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qbattery.linalg import eig_hermitian, is_hermitian, max_norm, tensor, SIGMA_X
from qbattery.models import (
    DegeneracyWarning,
    DegenerateParameterError,
    Region,
    SingleQubitParams,
    XYZDMParams,
    analytic_eigensystem,
    analytic_energies,
    charged_density,
    charged_state_two,
    charging_unitary_two,
    classify_region,
    critical_dmi,
    energy_gap,
    ground_state,
    ground_vector,
    single_qubit_hamiltonian,
    two_qubit_hamiltonian,
)

finite = st.floats(-3, 3, allow_nan=False)


def test_param_validation():
    with pytest.raises(ValueError):
        XYZDMParams(J=0.1, Jz=-0.1, gamma=0.2, D=0.3)
    with pytest.raises(ValueError):
        XYZDMParams(J=0.1, Jz=0.5, gamma=0.2, D=float("nan"))
    with pytest.raises(ValueError):
        SingleQubitParams(omega=0.0)
    p = XYZDMParams(J=0.1, Jz=0.5, gamma=0.2, D=0.3)
    assert p.replace(D=1.0).D == 1.0 and not p.h0_overridden


def test_single_qubit():
    h = single_qubit_hamiltonian(SingleQubitParams(omega=1.0))
    assert np.allclose(h, np.diag([1.0, 0.0]))
    rho = charged_density(math.pi / 2)
    assert np.allclose(rho, np.diag([1.0, 0.0]))
    rho = charged_density(0.7)
    assert abs(np.trace(rho) - 1) < 1e-15 and is_hermitian(rho)
    assert max_norm(rho @ rho - rho) < 1e-15


def test_hamiltonian_matrix_entries():
    p = XYZDMParams(J=0.3, Jz=0.5, gamma=0.2, D=0.7, h0=1.3)
    h = two_qubit_hamiltonian(p)
    assert np.allclose(np.diag(h).real, [2 * 1.3 + 0.25, 1.3 - 0.25, 1.3 - 0.25, 0.25])
    assert h[1, 2] == pytest.approx(complex(0.3, 0.7))
    assert h[0, 3] == pytest.approx(0.3 * 0.2)
    assert is_hermitian(h)


def test_analytic_eigensystem_reference(ref_models):
    for p in ref_models.values():
        data = analytic_eigensystem(p)
        h = two_qubit_hamiltonian(p)
        for k in range(1, 5):
            v = data.vector(k)
            assert abs(np.vdot(v, v) - 1) < 1e-14
            assert max_norm(h @ v - data.energies[k - 1] * v) < 1e-13
        assert np.allclose(sorted(data.energies), eig_hermitian(h).values, atol=1e-12)


@settings(max_examples=200, deadline=None)
@given(finite, st.floats(0, 3), finite, finite)
def test_analytic_energies_match_jacobi(J, Jz, gamma, D):
    p = XYZDMParams(J=J, Jz=Jz, gamma=gamma, D=D)
    assert np.allclose(sorted(analytic_energies(p)), eig_hermitian(two_qubit_hamiltonian(p)).values, atol=1e-10)


def test_degenerate_coefficients():
    with pytest.raises(DegenerateParameterError):
        analytic_eigensystem(XYZDMParams(J=0.0, Jz=0.5, gamma=0.2, D=0.0))
    with pytest.raises(DegenerateParameterError):
        analytic_eigensystem(XYZDMParams(J=0.1, Jz=0.5, gamma=0.0, D=0.3))


def test_critical_values_reference(ref_models):
    crit = critical_dmi(ref_models[0.3])
    # Independent evaluation with s = sqrt(1 + (J gamma)^2).
    s = math.sqrt(1 + 0.02 ** 2)
    assert crit.d_c == pytest.approx(math.sqrt((s - 0.5) ** 2 - 0.01), abs=1e-15)
    assert crit.d_c == pytest.approx(0.4901020505935482, abs=1e-15)
    assert crit.d_c_prime == pytest.approx(1.496863380540789, abs=1e-15)
    assert [classify_region(p) for p in ref_models.values()] == [Region.R1, Region.R2, Region.R3]
    assert classify_region(ref_models[0.3].replace(D=-2.5)) is Region.R3


def test_critical_clamps():
    # s - Jz below |J| makes every D lie beyond d_c.
    crit = critical_dmi(XYZDMParams(J=0.1, Jz=2.0, gamma=0.2, D=0.0))
    assert crit.d_c == 0.0 and crit.d_c_prime > 0
    # With d_c clamped to zero, D = 0 is already past the first crossing.
    p = XYZDMParams(J=0.1, Jz=2.0, gamma=0.2, D=0.0)
    assert classify_region(p) is Region.R2
    assert np.argmin(analytic_energies(p)) == 1
    crit = critical_dmi(XYZDMParams(J=0.1, Jz=0.0, gamma=0.2, D=0.0))
    assert crit.d_c == crit.d_c_prime


def test_ground_vector_is_lowest(ref_models):
    for p in list(ref_models.values()) + [XYZDMParams(J=0.0, Jz=0.5, gamma=0.2, D=0.0),
                                    XYZDMParams(J=0.1, Jz=0.5, gamma=0.0, D=0.3),
                                    XYZDMParams(J=0.1, Jz=2.0, gamma=0.2, D=0.0),
                                    XYZDMParams(J=0.0, Jz=2.0, gamma=0.2, D=0.0)]:
        v = ground_vector(p)
        e0 = eig_hermitian(two_qubit_hamiltonian(p)).values[0]
        assert abs(np.vdot(v, two_qubit_hamiltonian(p) @ v).real - e0) < 1e-12


def test_ground_state_warns_on_boundary(ref_models):
    p = ref_models[0.3]
    p = p.replace(D=critical_dmi(p).d_c)
    with pytest.warns(DegeneracyWarning):
        ground_state(p)


def test_charging_unitary():
    p = XYZDMParams(J=0.1, Jz=0.5, gamma=0.2, D=1.2, omega=1.7)
    for t in (0.0, 0.3, 2.0):
        u = charging_unitary_two(p, t)
        assert max_norm(u @ u.conj().T - np.eye(4)) < 1e-14
        single = math.cos(p.omega * t) * np.eye(2) - 1j * math.sin(p.omega * t) * SIGMA_X
        assert max_norm(u - tensor(single, single)) < 1e-14
    assert max_norm(charging_unitary_two(p, 0.0) - np.eye(4)) == 0.0
    with pytest.raises(ValueError):
        charging_unitary_two(p, -1.0)


def test_charged_state_is_pure(ref_models):
    for p in ref_models.values():
        rho = charged_state_two(p, 0.4)
        assert max_norm(rho @ rho - rho) < 1e-14
        assert abs(np.trace(rho) - 1) < 1e-14


def test_energy_gap_reference(ref_models):
    e = analytic_energies(ref_models[0.3])
    assert energy_gap(ref_models[0.3]) == pytest.approx(e[2] - e[3])
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        e = analytic_energies(ref_models[2.5])
        assert energy_gap(ref_models[2.5]) == pytest.approx(e[0] - e[1], abs=1e-14)
