"""Battery Hamiltonians, charged states and the DMI phase structure.

Basis conventions: for one qubit ``|0>`` is the excited level (energy h0) and
``|1>`` the ground level; two-qubit states use ``|00>, |01>, |10>, |11>``.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass

import numpy as np

from .linalg import (
    SIGMA_MINUS,
    SIGMA_PLUS,
    SIGMA_X,
    SIGMA_Y,
    SIGMA_Z,
    I2,
    eig_hermitian,
    projector,
    tensor,
    trace_product,
)


class DegeneracyWarning(UserWarning):
    """A requested eigenvector lies on a level crossing."""


class DegenerateParameterError(ValueError):
    """Closed-form eigenvector coefficients are singular for these parameters."""


class RegionError(ValueError):
    """A closed form was requested outside its DMI region."""


@dataclass(frozen=True)
class SingleQubitParams:
    omega: float
    t: float = 0.0
    h0: float = 1.0

    def __post_init__(self):
        if not self.h0 > 0:
            raise ValueError(f"h0 must be positive, got {self.h0}")
        if not self.omega > 0:
            raise ValueError(f"omega must be positive, got {self.omega}")
        if not self.t >= 0:
            raise ValueError(f"t must be non-negative, got {self.t}")

    @property
    def omega_t(self) -> float:
        return self.omega * self.t

    @property
    def weak_field(self) -> bool:
        """True when the drive is not well above h0 (omega < 10 h0)."""
        return self.omega < 10 * self.h0


@dataclass(frozen=True)
class XYZDMParams:
    J: float
    Jz: float
    gamma: float
    D: float
    omega: float = 1.0
    h0: float = 1.0

    def __post_init__(self):
        for name in ("J", "Jz", "gamma", "D", "omega", "h0"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        if self.Jz < 0:
            raise ValueError(f"Jz must be non-negative (ferromagnetic z coupling), got {self.Jz}")
        if not self.h0 > 0:
            raise ValueError(f"h0 must be positive, got {self.h0}")
        if not self.omega > 0:
            raise ValueError(f"omega must be positive, got {self.omega}")

    @property
    def h0_overridden(self) -> bool:
        return self.h0 != 1.0

    def replace(self, **changes) -> "XYZDMParams":
        fields = dict(J=self.J, Jz=self.Jz, gamma=self.gamma, D=self.D, omega=self.omega, h0=self.h0)
        fields.update(changes)
        return XYZDMParams(**fields)


class Region(enum.Enum):
    R1 = "R1"
    R2 = "R2"
    R3 = "R3"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class CriticalValues:
    d_c: float
    d_c_prime: float


@dataclass(frozen=True)
class AnalyticEigenData:
    """Closed-form spectrum ``e1..e4`` and eigenvector coefficients ``c1..c4``."""

    e1: float
    e2: float
    e3: float
    e4: float
    c1: complex
    c2: complex
    c3: float
    c4: float

    @property
    def energies(self) -> tuple[float, float, float, float]:
        return (self.e1, self.e2, self.e3, self.e4)

    def vector(self, k: int) -> np.ndarray:
        """Normalized ``|e_k>`` for k in 1..4."""
        if k in (1, 2):
            c = self.c1 if k == 1 else self.c2
            v = np.array([0, c, 1, 0], dtype=complex)
        elif k in (3, 4):
            c = self.c3 if k == 3 else self.c4
            v = np.array([c, 0, 0, 1], dtype=complex)
        else:
            raise ValueError(f"eigenvector index must be 1..4, got {k}")
        return v / math.sqrt(abs(c) ** 2 + 1)


# Single qubit -----------------------------------------------------------------

def single_qubit_hamiltonian(p: SingleQubitParams) -> np.ndarray:
    return p.h0 * (SIGMA_PLUS @ SIGMA_MINUS)


def charged_density(omega_t: float) -> np.ndarray:
    """Single-qubit state after strong-field charging for a phase ``omega*t``."""
    s = math.sin(omega_t)
    c = math.cos(omega_t)
    s2 = math.sin(2 * omega_t)
    return np.array([[s * s, -0.5j * s2], [0.5j * s2, c * c]], dtype=complex)


def charged_state_single(p: SingleQubitParams) -> np.ndarray:
    return charged_density(p.omega_t)


# Two qubits -------------------------------------------------------------------

def two_qubit_hamiltonian(p: XYZDMParams) -> np.ndarray:
    """XYZ exchange plus z-axis DMI, assembled from Pauli products."""
    n = SIGMA_PLUS @ SIGMA_MINUS
    xx = tensor(SIGMA_X, SIGMA_X)
    yy = tensor(SIGMA_Y, SIGMA_Y)
    zz = tensor(SIGMA_Z, SIGMA_Z)
    xy = tensor(SIGMA_X, SIGMA_Y)
    yx = tensor(SIGMA_Y, SIGMA_X)
    h = p.h0 * (tensor(n, I2) + tensor(I2, n))
    h = h + 0.5 * p.J * ((1 + p.gamma) * xx + (1 - p.gamma) * yy)
    h = h + 0.5 * p.Jz * zz
    h = h + 0.5 * p.D * (xy - yx)
    return h


def analytic_eigensystem(p: XYZDMParams) -> AnalyticEigenData:
    rho_odd = math.hypot(p.J, p.D)
    rho_even = math.sqrt(p.h0 ** 2 + (p.J * p.gamma) ** 2)
    if rho_odd == 0.0:
        raise DegenerateParameterError("J^2 + D^2 = 0: c1, c2 undefined")
    if p.J * p.gamma == 0.0:
        raise DegenerateParameterError("J*gamma = 0: c3, c4 undefined")
    c12 = complex(p.J, p.D) / rho_odd
    jg = p.J * p.gamma
    return AnalyticEigenData(
        e1=p.h0 + rho_odd - p.Jz / 2,
        e2=p.h0 - rho_odd - p.Jz / 2,
        e3=p.h0 + rho_even + p.Jz / 2,
        e4=p.h0 - rho_even + p.Jz / 2,
        c1=c12,
        c2=-c12,
        c3=(p.h0 + rho_even) / jg,
        # (h0 - rho_even) / jg rewritten to avoid cancellation when |J gamma| << h0.
        c4=-jg / (p.h0 + rho_even),
    )


def analytic_energies(p: XYZDMParams) -> tuple[float, float, float, float]:
    """``(e1, e2, e3, e4)``; defined for all parameters, unlike the eigenvectors."""
    rho_odd = math.hypot(p.J, p.D)
    rho_even = math.sqrt(p.h0 ** 2 + (p.J * p.gamma) ** 2)
    return (
        p.h0 + rho_odd - p.Jz / 2,
        p.h0 - rho_odd - p.Jz / 2,
        p.h0 + rho_even + p.Jz / 2,
        p.h0 - rho_even + p.Jz / 2,
    )


def _critical(threshold: float, J: float) -> float:
    # sqrt(D^2 + J^2) > threshold holds for every D once threshold <= |J|.
    if threshold <= abs(J):
        return 0.0
    return math.sqrt(threshold * threshold - J * J)


def _thresholds(p: XYZDMParams) -> tuple[float, float]:
    s = math.sqrt(p.h0 ** 2 + (p.J * p.gamma) ** 2)
    return s - p.Jz, s + p.Jz


def critical_dmi(p: XYZDMParams) -> CriticalValues:
    lo, hi = _thresholds(p)
    return CriticalValues(d_c=_critical(lo, p.J), d_c_prime=_critical(hi, p.J))


def _within(d: float, critical: float, threshold: float, J: float) -> bool:
    if threshold > abs(J):
        return d <= critical
    # Clamped value: even D = 0 lies beyond unless sqrt(J^2 + D^2) still fits under the threshold.
    return math.hypot(J, d) <= threshold


def classify_region(p: XYZDMParams, crit: CriticalValues | None = None) -> Region:
    """Region from |D|; a value exactly on d_c counts as R1, on d_c' as R2."""
    crit = crit or critical_dmi(p)
    lo, hi = _thresholds(p)
    d = abs(p.D)
    if _within(d, crit.d_c, lo, p.J):
        return Region.R1
    if _within(d, crit.d_c_prime, hi, p.J):
        return Region.R2
    return Region.R3


def energy_gap(p: XYZDMParams) -> float:
    e = analytic_energies(p)
    return max(e) - min(e)


def _lowest_in_block(p: XYZDMParams, block: tuple[int, int]) -> np.ndarray:
    h = two_qubit_hamiltonian(p)
    es = eig_hermitian(h[np.ix_(block, block)])
    v = np.zeros(4, dtype=complex)
    v[list(block)] = es.vectors[:, 0]
    return v


def ground_vector(p: XYZDMParams) -> np.ndarray:
    """``|e4>`` for |D| <= d_c, otherwise ``|e2>``."""
    crit = critical_dmi(p)
    d = abs(p.D)
    if d == crit.d_c and crit.d_c > 0:
        warnings.warn(f"D = d_c = {crit.d_c}: ground level is degenerate", DegeneracyWarning, stacklevel=2)
    use_e4 = classify_region(p, crit) is Region.R1
    if use_e4 and p.J * p.gamma != 0.0:
        return analytic_eigensystem(p).vector(4)
    if not use_e4 and (p.J != 0.0 or p.D != 0.0):
        c2 = -complex(p.J, p.D) / math.hypot(p.J, p.D)
        return np.array([0, c2, 1, 0], dtype=complex) / math.sqrt(2.0)
    # Singular coefficients: take the lowest eigenvector of the relevant block.
    return _lowest_in_block(p, (0, 3) if use_e4 else (1, 2))


def ground_state(p: XYZDMParams) -> np.ndarray:
    return projector(ground_vector(p))


def charging_unitary_two(p: XYZDMParams, t: float) -> np.ndarray:
    if t < 0:
        raise ValueError(f"t must be non-negative, got {t}")
    a = math.cos(2 * p.omega * t)
    b = -1j * math.sin(2 * p.omega * t)
    return 0.5 * np.array(
        [
            [a + 1, b, b, a - 1],
            [b, a + 1, a - 1, b],
            [b, a - 1, a + 1, b],
            [a - 1, b, b, a + 1],
        ],
        dtype=complex,
    )


def charged_state_two(p: XYZDMParams, t: float) -> np.ndarray:
    psi = charging_unitary_two(p, t) @ ground_vector(p)
    return projector(psi)


def energy(h: np.ndarray, rho: np.ndarray) -> float:
    return trace_product(h, rho)
