"""Dense complex linear algebra for 2- and 4-dimensional operators.

Matrices are plain ``numpy`` complex arrays. The Hermitian eigensolver is a
cyclic Jacobi iteration, which is exact enough and fast enough for the tiny
operators used by the battery models.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

HERMITIAN_TOL = 1e-10
TRACE_TOL = 1e-12
PSD_TOL = -1e-10

JACOBI_TOL = 1e-14
JACOBI_MAX_SWEEPS = 100
_TINY = float(np.finfo(float).tiny)

SUPPORTED_DIMS = (2, 4)

I2 = np.eye(2, dtype=complex)
I4 = np.eye(4, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
# |0> is the excited level, so sigma_+ raises |1> -> |0>.
SIGMA_PLUS = np.array([[0, 1], [0, 0]], dtype=complex)
SIGMA_MINUS = np.array([[0, 0], [1, 0]], dtype=complex)


class DimensionError(ValueError):
    """Operand has an unsupported or mismatched dimension."""


class ContractViolation(ValueError):
    """A numerical contract (Hermiticity, trace, positivity, ...) is broken."""


class EigenSystem(NamedTuple):
    """Ascending eigenvalues and the matching eigenvectors (as columns)."""

    values: np.ndarray
    vectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        return (self.vectors * self.values) @ self.vectors.conj().T


def as_square(a, dims=SUPPORTED_DIMS) -> np.ndarray:
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] not in dims:
        raise DimensionError(f"expected a square matrix of size {dims}, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ContractViolation("matrix has non-finite entries")
    return m


def dagger(a) -> np.ndarray:
    return np.asarray(a).conj().T


def is_hermitian(a, tol: float = HERMITIAN_TOL) -> bool:
    m = np.asarray(a)
    return bool(np.max(np.abs(m - m.conj().T)) <= tol)


def tensor(a, b) -> np.ndarray:
    """Kronecker product of two qubit operators, ``(a⊗b)[2i+k, 2j+l] = a[i,j] b[k,l]``."""
    a = as_square(a, dims=(2,))
    b = as_square(b, dims=(2,))
    return np.kron(a, b)


def commutator(a, b) -> np.ndarray:
    return a @ b - b @ a


def _jacobi_rotate(a: np.ndarray, v: np.ndarray, p: int, q: int) -> None:
    apq = a[p, q]
    r = abs(apq)
    if r < _TINY:
        # Subnormal couplings carry no information and would overflow the divisions below.
        a[p, q] = a[q, p] = 0.0
        return
    # Phase the pair so that a[p, q] is real, then apply a real Givens rotation.
    phase = np.exp(1j * np.angle(apq))
    diff = a[q, q].real - a[p, p].real
    if abs(diff) * 1e-100 > 2.0 * r:
        t = r / diff  # 1/(2 theta) without forming theta
    else:
        theta = diff / (2.0 * r)
        t = (1.0 if theta >= 0 else -1.0) / (abs(theta) + np.sqrt(theta * theta + 1.0))
    c = 1.0 / np.sqrt(t * t + 1.0)
    s = t * c
    # Columns p, q of the combined unitary diag(1, conj(phase)) @ rotation.
    sp = s * phase.conjugate()
    cp = c * phase.conjugate()
    col_p = a[:, p].copy()
    col_q = a[:, q].copy()
    a[:, p] = c * col_p - sp * col_q
    a[:, q] = s * col_p + cp * col_q
    row_p = a[p, :].copy()
    row_q = a[q, :].copy()
    a[p, :] = c * row_p - sp.conjugate() * row_q
    a[q, :] = s * row_p + cp.conjugate() * row_q
    a[p, q] = a[q, p] = 0.0
    vp = v[:, p].copy()
    vq = v[:, q].copy()
    v[:, p] = c * vp - sp * vq
    v[:, q] = s * vp + cp * vq


def _off_diagonal_norm(a: np.ndarray) -> float:
    off = a[~np.eye(a.shape[0], dtype=bool)]
    return float(np.sqrt(np.sum(off.real ** 2 + off.imag ** 2)))


def _normalize_phase(vectors: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    out = vectors.copy()
    for k in range(out.shape[1]):
        col = out[:, k]
        nz = np.flatnonzero(np.abs(col) > tol)
        if nz.size:
            lead = col[nz[0]]
            out[:, k] = col * (abs(lead) / lead)
    return out


def eig_hermitian(a) -> EigenSystem:
    """Eigendecomposition of a Hermitian matrix by cyclic Jacobi sweeps.

    Eigenvalues are returned in ascending order; ties keep the order in which
    the Jacobi iteration left them on the diagonal. Each eigenvector is scaled
    so that its first nonzero component is real and positive.
    """
    m = as_square(a)
    if not is_hermitian(m):
        raise ContractViolation("eig_hermitian requires a Hermitian matrix")
    n = m.shape[0]
    w = 0.5 * (m + m.conj().T)
    v = np.eye(n, dtype=complex)
    threshold = JACOBI_TOL * max(1.0, float(np.linalg.norm(w)))
    for _ in range(JACOBI_MAX_SWEEPS):
        if _off_diagonal_norm(w) < threshold:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                _jacobi_rotate(w, v, p, q)
    else:
        if _off_diagonal_norm(w) >= threshold:
            raise ContractViolation("Jacobi iteration did not converge")
    values = np.real(np.diag(w)).copy()
    order = np.argsort(values, kind="stable")
    return EigenSystem(values[order], _normalize_phase(v[:, order]))


def trace_product(h, rho) -> float:
    """``Re Tr(h rho)``; the imaginary part must vanish for Hermitian inputs."""
    h = as_square(h)
    rho = as_square(rho)
    if h.shape != rho.shape:
        raise DimensionError(f"dimension mismatch: {h.shape} vs {rho.shape}")
    value = np.sum(h * rho.T)
    if abs(value.imag) > TRACE_TOL:
        raise ContractViolation(f"Tr(h rho) has imaginary part {value.imag:.3e}")
    return float(value.real)


def check_density(rho, hermitian_tol: float = 1e-12, trace_tol: float = TRACE_TOL,
                  psd_tol: float = PSD_TOL) -> np.ndarray:
    """Validate a density matrix and return it as a complex array."""
    m = as_square(rho)
    if not is_hermitian(m, hermitian_tol):
        raise ContractViolation("density matrix is not Hermitian")
    tr = np.trace(m)
    if abs(tr - 1.0) > trace_tol:
        raise ContractViolation(f"density matrix trace is {tr.real:.15g}")
    lowest = eig_hermitian(m).values[0]
    if lowest < psd_tol:
        raise ContractViolation(f"density matrix has eigenvalue {lowest:.3e}")
    return m


def projector(vec) -> np.ndarray:
    v = np.asarray(vec, dtype=complex).reshape(-1)
    return np.outer(v, v.conj())


def max_norm(a) -> float:
    return float(np.max(np.abs(a)))
