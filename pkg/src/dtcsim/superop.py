"""Vectorisation of density matrices and the Lindblad superoperator.

Row-stacking convention: |rho>> has component l*dim + m equal to rho[l, m],
so vec(A rho B) = (A kron B^T) vec(rho).  The Hamiltonian superoperator is
therefore -i (H kron I - I kron H^T); for the real-symmetric Hamiltonians
built by :mod:`dtcsim.operators` the transpose is immaterial, but it matters
for any future Hamiltonian with complex matrix elements.
"""

from __future__ import annotations

import numpy as np

from .operators import z_sign_table


def vectorize(rho: np.ndarray) -> np.ndarray:
    """Row-stack a square matrix into a length dim^2 vector."""
    rho = np.asarray(rho)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ValueError("expected a square matrix")
    return rho.reshape(-1)


def devectorize(vec: np.ndarray) -> np.ndarray:
    """Exact inverse of :func:`vectorize`."""
    vec = np.asarray(vec)
    dim = int(round(np.sqrt(vec.size)))
    if dim * dim != vec.size:
        raise ValueError(f"vector length {vec.size} is not a perfect square")
    return vec.reshape(dim, dim)


def hamiltonian_superop(H: np.ndarray) -> np.ndarray:
    """Superoperator of -i [H, .] under row stacking: -i (H x I - I x H^T)."""
    H = np.asarray(H, dtype=complex)
    if H.ndim != 2 or H.shape[0] != H.shape[1]:
        raise ValueError("H must be square")
    I = np.eye(H.shape[0], dtype=complex)
    return -1j * (np.kron(H, I) - np.kron(I, H.T))


def dephasing_rates(n_sites: int, gamma: float) -> np.ndarray:
    """Diagonal of the dephasing superoperator, length 4^N.

    Component (i, j) equals gamma * sum_l (s_l^i s_l^j - 1) with s the
    sigma^z signs, i.e. -2 gamma times the number of sites where the two
    basis states differ.  Real and <= 0 everywhere; zero exactly on
    populations (i = j).
    """
    s = z_sign_table(n_sites)
    mat = s.T @ s - n_sites  # (i, j) -> sum_l s_l^i s_l^j - N
    return gamma * mat.reshape(-1)


def dephasing_superop(n_sites: int, gamma: float) -> np.ndarray:
    """Dense diagonal superoperator gamma sum_l (sigma_l^z x sigma_l^z - I)."""
    if gamma < 0:
        raise ValueError("gamma must be >= 0")
    return np.diag(dephasing_rates(n_sites, gamma)).astype(complex)


def liouvillian(H: np.ndarray, n_sites: int, gamma: float) -> np.ndarray:
    """Full Lindblad generator: Hamiltonian part plus site dephasing."""
    H = np.asarray(H, dtype=complex)
    if H.shape != (2**n_sites, 2**n_sites):
        raise ValueError(
            f"H has shape {H.shape}, expected ({2**n_sites}, {2**n_sites}) for {n_sites} sites"
        )
    L = hamiltonian_superop(H)
    L[np.diag_indices_from(L)] += dephasing_rates(n_sites, gamma)
    return L


def lindblad_rhs(rho: np.ndarray, H: np.ndarray, n_sites: int, gamma: float) -> np.ndarray:
    """Matrix-form right-hand side d(rho)/dt of the master equation.

    Used by the fixed-step ODE oracle; agrees with devectorize(L @ vec(rho))
    to machine precision.  The dephasing term is applied elementwise through
    the precomputable sign structure rather than via jump operators.
    """
    rho = np.asarray(rho, dtype=complex)
    out = -1j * (H @ rho - rho @ H)
    if gamma != 0.0:
        out += devectorize(dephasing_rates(n_sites, gamma)) * rho
    return out


def validate_density_matrix(
    rho: np.ndarray,
    trace_tol: float = 1e-10,
    herm_tol: float = 1e-10,
    positivity_tol: float = 1e-8,
) -> None:
    """Raise ValueError if rho is not a valid density matrix within tolerance."""
    rho = np.asarray(rho)
    tr_err = abs(np.trace(rho) - 1.0)
    if tr_err > trace_tol:
        raise ValueError(f"trace deviates from 1 by {tr_err:.3e}")
    herm_err = np.abs(rho - rho.conj().T).max()
    if herm_err > herm_tol:
        raise ValueError(f"Hermiticity violated by {herm_err:.3e}")
    min_eig = float(np.linalg.eigvalsh((rho + rho.conj().T) / 2.0).min())
    if min_eig < -positivity_tol:
        raise ValueError(f"minimum eigenvalue {min_eig:.3e} below -{positivity_tol:.0e}")
