"""Seeded randomized cross-checks between closed forms and brute-force oracles."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from ..channels import (
    NoiseKind,
    NoiseParams,
    apply_channel,
    asymptotic_state_ad,
    asymptotic_state_bf,
    brute_state_single,
    closed_state,
    completeness_error,
    diag_history_two,
    iterate_channel,
    kraus_ops_single,
    kraus_single,
    kraus_two,
)
from ..ergotropy import (
    asymptotic_ergotropy_ad,
    asymptotic_ergotropy_bf,
    ergotropy_single_closed,
    ergotropy_spectral,
    ergotropy_two_closed,
    passive_decomposition,
    stored_energy_two,
)
from ..linalg import eig_hermitian, max_norm, tensor
from ..models import (
    Region,
    SingleQubitParams,
    XYZDMParams,
    analytic_eigensystem,
    charged_state_two,
    charging_unitary_two,
    classify_region,
    two_qubit_hamiltonian,
)


@dataclass(frozen=True)
class SuiteResult:
    name: str
    checks: int
    failures: int
    max_error: float
    tolerance: float

    @property
    def passed(self) -> int:
        return self.checks - self.failures

    @property
    def ok(self) -> bool:
        return self.failures == 0


def random_density(rng: np.random.Generator, dim: int) -> np.ndarray:
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    # Random rank keeps low-rank (pure and nearly pure) states in the mix.
    rank = int(rng.integers(1, dim + 1))
    g = g[:, :rank]
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def random_model(rng: np.random.Generator) -> XYZDMParams:
    """Parameters with J, gamma, D in [-3, 3] and Jz in (0, 3]."""
    while True:
        J, gamma, D = rng.uniform(-3, 3, size=3)
        Jz = rng.uniform(0, 3)
        if Jz > 0 and abs(J * gamma) > 1e-6 and math.hypot(J, D) > 1e-6:
            return XYZDMParams(J=float(J), Jz=float(Jz), gamma=float(gamma), D=float(D),
                               omega=float(rng.uniform(0.5, 5.0)))


def _suite(name: str, tol: float, draws: int, check: Callable[[], float]) -> SuiteResult:
    worst = 0.0
    failures = 0
    for _ in range(draws):
        err = float(check())
        if not err <= tol:  # NaN counts as failure
            failures += 1
        if math.isfinite(err):
            worst = max(worst, err)
        else:
            worst = math.inf
    return SuiteResult(name, draws, failures, worst, tol)


def run_verification(draws: int = 500, seed: int = 0) -> list[SuiteResult]:
    rng = np.random.default_rng(seed)
    kinds = list(NoiseKind)
    results = []

    def kraus_completeness():
        kind = kinds[int(rng.integers(3))]
        p = float(rng.uniform())
        ops = kraus_ops_single(kind, p)
        two = [tensor(a, b) for a in ops for b in ops]
        return max(completeness_error(ops), completeness_error(two))

    results.append(_suite("kraus_completeness", 1e-12, draws, kraus_completeness))

    def channel_validity():
        kind = kinds[int(rng.integers(3))]
        p = float(rng.uniform())
        dim = 2 if rng.uniform() < 0.5 else 4
        rho = random_density(rng, dim)
        k = kraus_two(kind, p) if dim == 4 else kraus_single(kind, p)
        out = apply_channel(k, rho)
        trace_err = abs(np.trace(out) - 1.0)
        herm_err = max_norm(out - out.conj().T)
        neg = max(0.0, -eig_hermitian(0.5 * (out + out.conj().T)).values[0])
        # Errors relative to their own tolerances; the suite passes at 1.
        return max(trace_err / 1e-12, herm_err / 1e-12, neg / 1e-10)

    results.append(_suite("channel_validity_relative_to_tol", 1.0, draws, channel_validity))

    def unitarity():
        model = random_model(rng)
        u = charging_unitary_two(model, float(rng.uniform(0, 10)))
        return max_norm(u @ u.conj().T - np.eye(4))

    results.append(_suite("charging_unitarity", 1e-12, draws, unitarity))

    def eigen_agreement():
        model = random_model(rng)
        analytic = np.sort(analytic_eigensystem(model).energies)
        return float(np.max(np.abs(analytic - eig_hermitian(two_qubit_hamiltonian(model)).values)))

    results.append(_suite("analytic_vs_jacobi_eigenvalues", 1e-10, draws, eigen_agreement))

    def eigenvector_residual():
        model = random_model(rng)
        h = two_qubit_hamiltonian(model)
        data = analytic_eigensystem(model)
        return max(max_norm(h @ data.vector(k) - data.energies[k - 1] * data.vector(k)) for k in range(1, 5))

    results.append(_suite("analytic_eigenvector_residual", 1e-10, draws, eigenvector_residual))

    def _single_draw():
        kind = kinds[int(rng.integers(3))]
        p = float(rng.uniform(0.0, 1.0))
        s = SingleQubitParams(omega=1.0, t=float(rng.uniform(0, 2 * math.pi)))
        return s, NoiseParams(kind, p, int(rng.integers(0, 21)))

    def closed_states():
        s, noise = _single_draw()
        return max_norm(closed_state(s, noise) - brute_state_single(s, noise))

    results.append(_suite("single_closed_state_vs_kraus", 1e-12, draws, closed_states))

    h1 = np.diag([1.0, 0.0]).astype(complex)

    def closed_ergotropy():
        s, noise = _single_draw()
        return abs(ergotropy_single_closed(s, noise) - ergotropy_spectral(h1, brute_state_single(s, noise)))

    results.append(_suite("single_closed_ergotropy_vs_spectral", 1e-10, draws, closed_ergotropy))

    def two_qubit_closed():
        model = random_model(rng)
        t = float(rng.uniform(0, 2 * math.pi))
        stored = stored_energy_two(model, t)
        spectral = ergotropy_spectral(two_qubit_hamiltonian(model), charged_state_two(model, t))
        return max(abs(ergotropy_two_closed(model, t) - stored), abs(stored - spectral))

    results.append(_suite("two_qubit_closed_vs_trace", 1e-10, draws, two_qubit_closed))

    def bf_asymptote():
        model = random_model(rng)
        h = two_qubit_hamiltonian(model)
        return abs(asymptotic_ergotropy_bf(model) - ergotropy_spectral(h, asymptotic_state_bf(model)))

    results.append(_suite("bf_asymptotic_formula_vs_spectral", 1e-9, draws, bf_asymptote))

    def ad_asymptote():
        while True:
            model = random_model(rng)
            if classify_region(model) is not Region.R1:
                break
        h = two_qubit_hamiltonian(model)
        return abs(asymptotic_ergotropy_ad(model) - ergotropy_spectral(h, asymptotic_state_ad()))

    results.append(_suite("ad_asymptotic_formula_vs_spectral", 1e-10, draws, ad_asymptote))

    def diag_recursion():
        kind = NoiseKind.AMPLITUDE_DAMPING if rng.uniform() < 0.5 else NoiseKind.BIT_FLIP
        p = float(rng.uniform())
        rho = random_density(rng, 4)
        start = [float(rho[i, i].real) for i in range(4)]
        steps = 20
        history = diag_history_two(kind, p, start, steps)
        k = kraus_two(kind, p)
        worst = 0.0
        for step, state in enumerate(iterate_channel(k, rho, steps)):
            worst = max(worst, float(np.max(np.abs(np.diag(state).real - history[step]))))
        return worst

    results.append(_suite("diag_recursion_vs_channel", 1e-12, draws, diag_recursion))

    def passivity():
        dim = 2 if rng.uniform() < 0.5 else 4
        h = random_density(rng, dim) * float(rng.uniform(0.5, 5))
        rho = random_density(rng, dim)
        xi = ergotropy_spectral(h, rho)
        passive = passive_decomposition(h, rho).passive
        return max(max(0.0, -xi), ergotropy_spectral(h, passive))

    results.append(_suite("ergotropy_nonnegative_and_passive_zero", 1e-10, draws, passivity))

    return results
