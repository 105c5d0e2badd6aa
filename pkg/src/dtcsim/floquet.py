"""One- and two-period dynamical maps and their effective generators.

The drive alternates a purely unitary kick (dephasing is negligible during a
short pulse) with an interaction segment evolved under the full Lindblad
generator, so one period of the vectorised dynamics reads

    Phi_T = exp(L2 * t2) @ (U1 kron conj(U1)),

kick first, composition right to left.  The interaction-segment generator L2
commutes with excitation number on both tensor factors and is therefore block
diagonal over sector pairs; its exponential is computed per block, which is
exact and orders of magnitude cheaper than exponentiating the full 4^N
matrix.  For a perfect pi pulse the two kicks of a double period cancel and
conjugate the disorder sign, giving the fully block-diagonal form

    Phi_2T = exp((A + D) t2) @ (exp((A + D) t2) with disorder negated),

which is what :func:`floquet_2T_sector_blocks` evaluates blockwise.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .operators import (
    SpinNetworkConfig,
    excitation_sectors,
    hamiltonian_interaction,
    hamiltonian_kick,
    z_sign_table,
)


class BranchAmbiguityWarning(UserWarning):
    """A matrix logarithm was taken with an eigenphase close to +-pi."""


@dataclass(frozen=True)
class DynamicalMap:
    """Stroboscopic propagator of the vectorised density matrix."""

    matrix: np.ndarray
    period_multiple: int
    horizon: float  # duration the map propagates over (T or 2T)


@dataclass(frozen=True)
class EffectiveGenerator:
    """Time-independent generator whose exponential reproduces a map."""

    matrix: np.ndarray
    horizon: float
    branch_note: str


def matrix_exp(A: np.ndarray) -> np.ndarray:
    """Matrix exponential via scaling-and-squaring with Pade approximants."""
    A = np.asarray(A)
    if not np.all(np.isfinite(A)):
        raise ValueError("matrix contains non-finite entries")
    out = scipy.linalg.expm(A)
    if not np.all(np.isfinite(out)):
        raise OverflowError("matrix exponential overflowed")
    return out


def kick_unitary(config: SpinNetworkConfig) -> np.ndarray:
    """U1 = exp(-i H1 t1); a global pi rotation about x when epsilon = 0."""
    return matrix_exp(-1j * hamiltonian_kick(config) * config.t1)


def _is_perfect_pulse(config: SpinNetworkConfig, tol: float = 1e-12) -> bool:
    return config.epsilon == 0.0 and abs(2.0 * config.g * config.t1 - np.pi) < tol


def _sector_pair_rates(signs: np.ndarray, il: np.ndarray, ir: np.ndarray,
                       gamma: float, n_sites: int) -> np.ndarray:
    """Dephasing diagonal restricted to the (il, ir) sector pair block."""
    acc = signs[:, il].T @ signs[:, ir] - n_sites
    return gamma * acc.reshape(-1)


def _segment_blocks(H: np.ndarray, config: SpinNetworkConfig, duration: float):
    """exp(L * duration) per sector-pair block, L = -i[H, .] + dephasing.

    Valid for any Hamiltonian commuting with excitation number; the XY
    interaction Hamiltonian does for every disorder vector.
    """
    n = config.n_sites
    sectors = excitation_sectors(n)
    signs = z_sign_table(n)
    blocks = {}
    for kl in range(n + 1):
        il = sectors[kl]
        Hl = H[np.ix_(il, il)]
        for kr in range(n + 1):
            ir = sectors[kr]
            Hr = H[np.ix_(ir, ir)]
            gen = -1j * (
                np.kron(Hl, np.eye(len(ir))) - np.kron(np.eye(len(il)), Hr.T)
            )
            gen[np.diag_indices_from(gen)] += _sector_pair_rates(signs, il, ir, config.gamma, n)
            blocks[(kl, kr)] = matrix_exp(gen * duration)
    return blocks, sectors


def _assemble_blocks(blocks, sectors, dim: int) -> np.ndarray:
    """Scatter sector-pair blocks into the dense 4^N superoperator."""
    out = np.zeros((dim * dim, dim * dim), dtype=complex)
    for (kl, kr), block in blocks.items():
        rows = (sectors[kl][:, None] * dim + sectors[kr][None, :]).reshape(-1)
        out[np.ix_(rows, rows)] = block
    return out


def interaction_propagator(config: SpinNetworkConfig) -> np.ndarray:
    """Dense exp(L2 * t2) for the interaction segment, built blockwise."""
    H2 = hamiltonian_interaction(config)
    blocks, sectors = _segment_blocks(H2, config, config.t2)
    return _assemble_blocks(blocks, sectors, config.dim)


def floquet_map(config: SpinNetworkConfig) -> DynamicalMap:
    """One-period dynamical map Phi_T (kick, then dissipative interaction)."""
    U1 = kick_unitary(config)
    kick_superop = np.kron(U1, U1.conj())
    phi = interaction_propagator(config) @ kick_superop
    return DynamicalMap(matrix=phi, period_multiple=1, horizon=config.period)


def floquet_map_2T(config: SpinNetworkConfig) -> DynamicalMap:
    """Two-period map Phi_T^2; commutes with the excitation superoperators
    when the kick is a perfect pi pulse."""
    if _is_perfect_pulse(config):
        blocks = floquet_2T_sector_blocks(config)
        phi2 = _assemble_blocks(blocks, excitation_sectors(config.n_sites), config.dim)
    else:
        phi = floquet_map(config).matrix
        phi2 = phi @ phi
    return DynamicalMap(matrix=phi2, period_multiple=2, horizon=2.0 * config.period)


def floquet_2T_sector_blocks(config: SpinNetworkConfig):
    """Sector-pair blocks of Phi_2T for a perfect pi pulse.

    The pi pulses of a double period cancel up to a global phase and flip the
    sign of the on-site disorder in between, so Phi_2T is the product of two
    block-diagonal segment propagators, one with the disorder negated.
    Returns a dict mapping (k_left, k_right) to the corresponding block; the
    union of block spectra is the full Phi_2T spectrum.  The largest block
    for six sites is 400 x 400, so this is the fast path for disorder sweeps.
    """
    if not _is_perfect_pulse(config):
        raise ValueError(
            "sector-block construction requires epsilon = 0 and 2*g*t1 = pi"
        )
    H_plus = hamiltonian_interaction(config)
    onsite = config.disorder @ z_sign_table(config.n_sites)
    H_minus = H_plus.copy()
    H_minus[np.diag_indices_from(H_minus)] -= 2.0 * onsite
    plus, _ = _segment_blocks(H_plus, config, config.t2)
    minus, _ = _segment_blocks(H_minus, config, config.t2)
    return {key: plus[key] @ minus[key] for key in plus}


def effective_hamiltonian_2T(config: SpinNetworkConfig) -> np.ndarray:
    """Closed-system Hamiltonian generating the double-period unitary.

    Defined through U(2T) = exp(-2i H_eff T).  Without disorder and for a
    perfect pi pulse this has the closed form of half the interaction
    Hamiltonian (the kick segment contributes nothing and the interaction
    acts for half of each period); otherwise the principal matrix logarithm
    of U(2T) is taken and a warning is emitted if any eigenphase sits within
    1e-6 of the +-pi branch cut.
    """
    if _is_perfect_pulse(config) and not np.any(config.disorder):
        return 0.5 * hamiltonian_interaction(config)
    U1 = kick_unitary(config)
    U2 = matrix_exp(-1j * hamiltonian_interaction(config) * config.t2)
    U_2T = U2 @ U1 @ U2 @ U1
    phases = np.angle(np.linalg.eigvals(U_2T))
    if np.any(np.abs(np.abs(phases) - np.pi) < 1e-6):
        warnings.warn(
            "eigenphase of U(2T) within 1e-6 of +-pi; principal-branch "
            "effective Hamiltonian is ambiguous there",
            BranchAmbiguityWarning,
            stacklevel=2,
        )
    H = 1j * scipy.linalg.logm(U_2T) / (2.0 * config.period)
    return (H + H.conj().T) / 2.0


def effective_liouvillian_2T(
    dmap: DynamicalMap, condition_limit: float = 1e12
) -> EffectiveGenerator:
    """Eigenvalue logarithm of a two-period map, divided by its horizon.

    Real parts of the generator spectrum are branch free; imaginary parts are
    only defined modulo 2*pi / horizon, which the branch note records.  A map
    whose eigenvector matrix is ill conditioned beyond ``condition_limit`` is
    reported as numerically defective.
    """
    if dmap.period_multiple != 2:
        raise ValueError("expected a two-period map")
    mu, R = np.linalg.eig(dmap.matrix)
    R_inv = np.linalg.inv(R)
    cond = float(np.abs(R).sum(axis=0).max() * np.abs(R_inv).sum(axis=0).max())
    if cond > condition_limit:
        raise np.linalg.LinAlgError(
            f"map is numerically defective: eigenvector condition number {cond:.3e}"
        )
    lam = np.log(mu) / dmap.horizon
    gen = (R * lam) @ R_inv
    note = (
        "principal branch: Im(eigenvalues) defined modulo "
        f"{2.0 * np.pi / dmap.horizon:.6f} (= 2*pi / horizon); "
        f"eigenvector condition number {cond:.3e}"
    )
    return EffectiveGenerator(matrix=gen, horizon=dmap.horizon, branch_note=note)
