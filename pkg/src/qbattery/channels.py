"""Phase-flip, bit-flip and amplitude-damping channels and their N-step forms.

Parameter meaning differs between channels and is kept as written in the
Kraus operators: for phase flip and bit flip ``p`` is the probability that
*nothing* happens, for amplitude damping ``p`` is the decay probability.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .linalg import (
    I2,
    SIGMA_X,
    SIGMA_Z,
    ContractViolation,
    DimensionError,
    as_square,
    max_norm,
    tensor,
)
from .models import (
    Region,
    SingleQubitParams,
    XYZDMParams,
    charged_density,
    classify_region,
    ground_vector,
)

COMPLETENESS_TOL = 1e-12
FIXED_POINT_TOL = 1e-12
FIXED_POINT_CAP = 10 ** 6


class NoiseKind(enum.Enum):
    PHASE_FLIP = "pf"
    BIT_FLIP = "bf"
    AMPLITUDE_DAMPING = "ad"

    def __str__(self):
        return self.value

    @classmethod
    def parse(cls, value) -> "NoiseKind":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).strip().lower())
        except ValueError:
            raise ValueError(f"unknown noise kind {value!r}; expected one of pf, bf, ad") from None


@dataclass(frozen=True)
class NoiseParams:
    kind: NoiseKind
    p: float
    n: int = 0

    def __post_init__(self):
        object.__setattr__(self, "kind", NoiseKind.parse(self.kind))
        _check_probability(self.p)
        if int(self.n) != self.n or self.n < 0:
            raise ValueError(f"n must be a non-negative integer, got {self.n}")


class KrausSet:
    """Kraus operators of one channel; completeness is checked on construction."""

    def __init__(self, ops: Sequence[np.ndarray]):
        ops = tuple(as_square(k) for k in ops)
        if not ops:
            raise ValueError("a Kraus set needs at least one operator")
        dim = ops[0].shape[0]
        if any(k.shape[0] != dim for k in ops):
            raise DimensionError("Kraus operators have mixed dimensions")
        self.ops = ops
        self.dim = dim
        err = completeness_error(ops)
        if err > COMPLETENESS_TOL:
            raise ContractViolation(f"Kraus completeness violated by {err:.3e}")

    def __iter__(self) -> Iterator[np.ndarray]:
        return iter(self.ops)

    def __len__(self) -> int:
        return len(self.ops)

    def __repr__(self):
        return f"KrausSet(dim={self.dim}, n_ops={len(self.ops)})"


def completeness_error(ops) -> float:
    dim = ops[0].shape[0]
    total = sum(k.conj().T @ k for k in ops)
    return max_norm(total - np.eye(dim))


def _check_probability(p: float) -> None:
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"channel probability must lie in [0, 1], got {p}")


def kraus_ops_single(kind, p: float) -> tuple[np.ndarray, np.ndarray]:
    kind = NoiseKind.parse(kind)
    _check_probability(p)
    if kind is NoiseKind.PHASE_FLIP:
        return math.sqrt(1 - p) * SIGMA_Z, math.sqrt(p) * I2
    if kind is NoiseKind.BIT_FLIP:
        return math.sqrt(1 - p) * SIGMA_X, math.sqrt(p) * I2
    k1 = np.array([[math.sqrt(1 - p), 0], [0, 1]], dtype=complex)
    k2 = np.array([[0, 0], [math.sqrt(p), 0]], dtype=complex)
    return k1, k2


def kraus_single(kind, p: float) -> KrausSet:
    return KrausSet(kraus_ops_single(kind, p))


def kraus_two(kind, p: float) -> KrausSet:
    """Independent noise on both qubits: all products ``K_i ⊗ K_j``."""
    ops = kraus_ops_single(kind, p)
    return KrausSet([tensor(ki, kj) for ki in ops for kj in ops])


def apply_channel(k: KrausSet, rho) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (k.dim, k.dim):
        raise DimensionError(f"state of shape {rho.shape} does not match channel dimension {k.dim}")
    return sum(op @ rho @ op.conj().T for op in k.ops)


def iterate_channel(k: KrausSet, rho, n: int) -> Iterator[np.ndarray]:
    """Yield ``rho, Λ(rho), ..., Λ^n(rho)``."""
    if n < 0:
        raise ValueError(f"n must be non-negative, got {n}")
    current = np.asarray(rho, dtype=complex)
    yield current
    for _ in range(n):
        current = apply_channel(k, current)
        yield current


def apply_channel_n(k: KrausSet, rho, n: int) -> np.ndarray:
    out = None
    for out in iterate_channel(k, rho, n):
        pass
    return out


def fixed_point(k: KrausSet, rho, tol: float = FIXED_POINT_TOL,
                cap: int = FIXED_POINT_CAP) -> tuple[np.ndarray, int]:
    """Iterate until successive states agree to ``tol`` (max-norm)."""
    current = np.asarray(rho, dtype=complex)
    for step in range(1, cap + 1):
        nxt = apply_channel(k, current)
        if max_norm(nxt - current) < tol:
            return nxt, step
        current = nxt
    raise ContractViolation(f"no fixed point within {cap} applications")


# Closed-form single-qubit states ------------------------------------------------

def _require(np_: NoiseParams, kind: NoiseKind) -> None:
    if np_.kind is not kind:
        raise ValueError(f"expected {kind.name} noise, got {np_.kind.name}")


def closed_state_pf(s: SingleQubitParams, noise: NoiseParams) -> np.ndarray:
    _require(noise, NoiseKind.PHASE_FLIP)
    wt = s.omega_t
    coh = 0.5 * (2 * noise.p - 1) ** noise.n * math.sin(2 * wt)
    return np.array(
        [[math.sin(wt) ** 2, -1j * coh], [1j * coh, math.cos(wt) ** 2]], dtype=complex
    )


def bf_summation_limits(n: int) -> tuple[int, int]:
    s1 = n // 2
    return s1, n - s1


def binomial_parity_weights(p: float, n: int) -> tuple[float, float]:
    """Total weight of an even / odd number of flips after ``n`` bit-flip steps.

    Terms ``C(n,k) p^(n-k) (1-p)^k`` are generated by their ratio recurrence
    starting from the mode, then normalized, which never overflows.
    """
    q = 1.0 - p
    if n == 0 or q == 0.0:
        return 1.0, 0.0
    if p == 0.0:
        return (1.0, 0.0) if n % 2 == 0 else (0.0, 1.0)
    mode = min(n, int((n + 1) * q))
    terms = [0.0] * (n + 1)
    terms[mode] = 1.0
    for k in range(mode, n):
        terms[k + 1] = terms[k] * (n - k) / (k + 1) * q / p
    for k in range(mode, 0, -1):
        terms[k - 1] = terms[k] * k / (n - k + 1) * p / q
    total = math.fsum(terms)
    s1, s2 = bf_summation_limits(n)
    even = math.fsum(terms[2 * i] for i in range(s1 + 1))
    odd = math.fsum(terms[2 * i + 1] for i in range(s2) if 2 * i + 1 <= n)
    return even / total, odd / total


def closed_state_bf(s: SingleQubitParams, noise: NoiseParams) -> np.ndarray:
    _require(noise, NoiseKind.BIT_FLIP)
    even, odd = binomial_parity_weights(noise.p, noise.n)
    mu1 = math.cos(s.omega_t)
    mu2 = math.sin(s.omega_t)
    r00 = even * mu2 ** 2 + odd * mu1 ** 2
    r11 = even * mu1 ** 2 + odd * mu2 ** 2
    r01 = even * (-1j * mu1 * mu2) + odd * (1j * mu1 * mu2)
    return np.array([[r00, r01], [np.conj(r01), r11]], dtype=complex)


def closed_state_ad(s: SingleQubitParams, noise: NoiseParams) -> np.ndarray:
    """N-step amplitude damping: the excited population decays into ``|1>``."""
    _require(noise, NoiseKind.AMPLITUDE_DAMPING)
    wt = s.omega_t
    keep = (1 - noise.p) ** noise.n
    r00 = keep * math.sin(wt) ** 2
    coh = 0.5 * math.sqrt(keep) * math.sin(2 * wt)
    return np.array([[r00, -1j * coh], [1j * coh, 1 - r00]], dtype=complex)


def closed_state(s: SingleQubitParams, noise: NoiseParams) -> np.ndarray:
    return {
        NoiseKind.PHASE_FLIP: closed_state_pf,
        NoiseKind.BIT_FLIP: closed_state_bf,
        NoiseKind.AMPLITUDE_DAMPING: closed_state_ad,
    }[noise.kind](s, noise)


def brute_state_single(s: SingleQubitParams, noise: NoiseParams) -> np.ndarray:
    return apply_channel_n(kraus_single(noise.kind, noise.p), charged_density(s.omega_t), noise.n)


# Two qubits ---------------------------------------------------------------------

def diag_step_two(kind, p: float, diag: Sequence[float]) -> tuple[float, float, float, float]:
    kind = NoiseKind.parse(kind)
    d0, d1, d2, d3 = diag
    q = 1.0 - p
    if kind is NoiseKind.AMPLITUDE_DAMPING:
        return (
            q * q * d0,
            q * p * d0 + q * d1,
            q * p * d0 + q * d2,
            p * p * d0 + p * d1 + p * d2 + d3,
        )
    if kind is NoiseKind.BIT_FLIP:
        return (
            p * p * d0 + q * p * d1 + q * p * d2 + q * q * d3,
            q * p * d0 + p * p * d1 + q * q * d2 + q * p * d3,
            q * p * d0 + q * q * d1 + p * p * d2 + q * p * d3,
            q * q * d0 + q * p * d1 + q * p * d2 + p * p * d3,
        )
    raise ValueError("phase-flip noise leaves the diagonal unchanged; no recursion needed")


def diag_recursion_two(kind, p: float, diag: Sequence[float], steps: int,
                       sum_tol: float = 1e-12) -> tuple[float, float, float, float]:
    """Propagate the four populations of a two-qubit state through ``steps`` channel uses."""
    _check_probability(p)
    if len(diag) != 4:
        raise DimensionError("expected four diagonal entries")
    if abs(math.fsum(diag) - 1.0) > sum_tol:
        raise ContractViolation(f"populations sum to {math.fsum(diag)!r}, not 1")
    if steps < 0:
        raise ValueError(f"steps must be non-negative, got {steps}")
    current = tuple(float(x) for x in diag)
    for _ in range(steps):
        current = diag_step_two(kind, p, current)
    return current


def diag_history_two(kind, p: float, diag: Sequence[float], steps: int) -> list[tuple[float, ...]]:
    history = [tuple(float(x) for x in diag)]
    for _ in range(steps):
        history.append(diag_step_two(kind, p, history[-1]))
    return history


def asymptotic_zeta(p: XYZDMParams) -> float:
    """Common anti-diagonal coherence of the bit-flip fixed point.

    Uses ``Re(c)/(2(|c|^2+1))`` with ``c = c2`` beyond d_c and ``c4`` below.
    """
    if classify_region(p) is Region.R1:
        jg = p.J * p.gamma
        if jg == 0.0:
            return 0.0
        c = -jg / (p.h0 + math.sqrt(p.h0 ** 2 + jg ** 2))
        return c / (2 * (c * c + 1))
    r = math.hypot(p.J, p.D)
    if r == 0.0:
        # Degenerate ground level; read the coherence off the chosen ground vector.
        v = ground_vector(p)
        return float(np.real(np.conj(v[1]) * v[2])) / 2.0
    # c2 = -(J + iD)/r has unit modulus.
    return (-p.J / r) / 4.0


def asymptotic_state_bf(p: XYZDMParams) -> np.ndarray:
    z = asymptotic_zeta(p)
    rho = 0.25 * np.eye(4, dtype=complex)
    for i in range(4):
        rho[i, 3 - i] = z
    return rho


def asymptotic_state_ad() -> np.ndarray:
    rho = np.zeros((4, 4), dtype=complex)
    rho[3, 3] = 1.0
    return rho
