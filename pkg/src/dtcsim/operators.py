"""Pauli operators, many-body embeddings and the drive Hamiltonians.

Conventions used throughout the package:

- basis ordering: site 0 is the leftmost tensor factor, so the computational
  basis index of |b_0 b_1 ... b_{N-1}> is sum_l b_l * 2^(N-1-l);
- |1> is the +1 eigenvector of sigma^z, so the excitation number operator
  counts |1> occupations and an all-|1> state has magnetization +1 everywhere;
- hbar = 1 and all rates/energies are expressed in units of 1/T, where
  T = T1 + T2 is the drive period (T = 1 with the default segment durations).
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

# Pauli matrices in the (|0>, |1>) ordering with sigma^z |1> = +|1>.
_PAULI = {
    "x": np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex),
    "y": np.array([[0.0, 1.0j], [-1.0j, 0.0]], dtype=complex),
    "z": np.array([[-1.0, 0.0], [0.0, 1.0]], dtype=complex),
}

IDENTITY_2 = np.eye(2, dtype=complex)

#: Largest site count accepted for dense superoperator work (4^N matrices).
DEFAULT_DENSE_LIMIT = 6


def pauli(mu: str) -> np.ndarray:
    """Return the 2x2 Pauli matrix for axis ``mu`` in {'x', 'y', 'z'}."""
    try:
        return _PAULI[mu].copy()
    except KeyError:
        raise ValueError(f"unknown Pauli axis {mu!r}, expected 'x', 'y' or 'z'") from None


def kron_all(factors) -> np.ndarray:
    """Kronecker product of a sequence of matrices, leftmost factor first."""
    out = np.array([[1.0 + 0.0j]])
    for f in factors:
        out = np.kron(out, f)
    return out


def embed(op: np.ndarray, site: int, n_sites: int) -> np.ndarray:
    """Embed a single-site operator at ``site`` in an ``n_sites`` register.

    Identity acts on every other site; site 0 is the leftmost tensor factor.
    """
    if not 0 <= site < n_sites:
        raise ValueError(f"site {site} out of range for {n_sites} sites")
    return kron_all(op if k == site else IDENTITY_2 for k in range(n_sites))


def coupling_matrix(n_sites: int, j0: float, alpha: float) -> np.ndarray:
    """Power-law coupling J[l, m] = j0 / |l - m|^alpha, zero on the diagonal.

    alpha = 0 gives an all-to-all network, large alpha nearest-neighbour only.
    """
    if alpha < 0:
        raise ValueError("alpha must be >= 0")
    idx = np.arange(n_sites)
    dist = np.abs(idx[:, None] - idx[None, :]).astype(float)
    with np.errstate(divide="ignore", invalid="ignore"):
        J = j0 / dist**alpha
    np.fill_diagonal(J, 0.0)
    return J


@dataclass(frozen=True)
class SpinNetworkConfig:
    """Drive and network parameters for the periodically kicked spin network.

    The drive alternates between a kick segment of duration ``t1`` generated
    by g(1-epsilon) sum_l sigma_l^x and an interaction segment of duration
    ``t2`` generated by the XY Hamiltonian plus on-site disorder.  Defaults
    give t1 = t2 = 1/2 with 2*g*t1 = pi (a perfect pi pulse), j0*T/2pi = 0.2,
    alpha = 1.51 and gamma*T = 0.02.
    """

    n_sites: int = 6
    j0: float = 0.2 * 2.0 * np.pi
    alpha: float = 1.51
    g: float = np.pi
    epsilon: float = 0.0
    t1: float = 0.5
    t2: float = 0.5
    gamma: float = 0.02
    disorder: np.ndarray = field(default=None)  # type: ignore[assignment]
    dense_limit: int = DEFAULT_DENSE_LIMIT

    def __post_init__(self):
        if self.n_sites < 1:
            raise ValueError("n_sites must be >= 1")
        if self.n_sites > self.dense_limit:
            raise ValueError(
                f"n_sites = {self.n_sites} exceeds the dense limit "
                f"{self.dense_limit}; raise dense_limit explicitly to opt in"
            )
        if self.t1 <= 0 or self.t2 <= 0:
            raise ValueError("segment durations t1, t2 must be positive")
        if self.gamma < 0:
            raise ValueError("gamma must be >= 0")
        if self.epsilon < 0:
            raise ValueError("epsilon must be >= 0")
        if self.alpha < 0:
            raise ValueError("alpha must be >= 0")
        w = np.zeros(self.n_sites) if self.disorder is None else np.asarray(self.disorder, float)
        if w.shape != (self.n_sites,):
            raise ValueError(f"disorder must have length {self.n_sites}")
        if np.any(w < 0):
            raise ValueError("disorder entries must be >= 0")
        w = w.copy()
        w.flags.writeable = False
        object.__setattr__(self, "disorder", w)

    @property
    def period(self) -> float:
        return self.t1 + self.t2

    @property
    def dim(self) -> int:
        return 2**self.n_sites

    def with_disorder(self, disorder) -> "SpinNetworkConfig":
        return replace(self, disorder=np.asarray(disorder, float))


def hamiltonian_kick(config: SpinNetworkConfig) -> np.ndarray:
    """Kick Hamiltonian g(1-epsilon) sum_l sigma_l^x."""
    amp = config.g * (1.0 - config.epsilon)
    H = np.zeros((config.dim, config.dim), dtype=complex)
    for l in range(config.n_sites):
        H += amp * embed(_PAULI["x"], l, config.n_sites)
    return H


def hamiltonian_interaction(config: SpinNetworkConfig) -> np.ndarray:
    """Interaction Hamiltonian: XY coupling over pairs plus on-site disorder.

    The pair sum runs over unordered pairs l < m, each counted once:
    sum_{l<m} J[l, m] (sigma_l^x sigma_m^x + sigma_l^y sigma_m^y)
    + sum_l disorder[l] sigma_l^z.  Commutes with the excitation number
    operator for any disorder vector.
    """
    n = config.n_sites
    J = coupling_matrix(n, config.j0, config.alpha)
    H = np.zeros((config.dim, config.dim), dtype=complex)
    for l in range(n):
        for m in range(l + 1, n):
            if J[l, m] == 0.0:
                continue
            H += J[l, m] * (
                embed(_PAULI["x"], l, n) @ embed(_PAULI["x"], m, n)
                + embed(_PAULI["y"], l, n) @ embed(_PAULI["y"], m, n)
            )
    for l in range(n):
        if config.disorder[l] != 0.0:
            H += config.disorder[l] * embed(_PAULI["z"], l, n)
    return H


def excitation_number_operator(n_sites: int) -> np.ndarray:
    """Diagonal operator counting |1> occupations, eigenvalues 0..n_sites."""
    return np.diag(excitation_counts(n_sites).astype(complex))


def excitation_counts(n_sites: int) -> np.ndarray:
    """Number of |1> bits of every computational basis state, length 2^N."""
    idx = np.arange(2**n_sites)
    return np.array([bin(i).count("1") for i in idx])


def excitation_sectors(n_sites: int) -> list[np.ndarray]:
    """Basis indices grouped by excitation count, one array per sector 0..N."""
    counts = excitation_counts(n_sites)
    return [np.flatnonzero(counts == k) for k in range(n_sites + 1)]


def z_sign_table(n_sites: int) -> np.ndarray:
    """sigma^z eigenvalues per (site, basis state), shape (N, 2^N), entries +-1."""
    idx = np.arange(2**n_sites)
    bits = (idx[None, :] >> (n_sites - 1 - np.arange(n_sites)[:, None])) & 1
    return 2.0 * bits - 1.0


def sample_disorder(n_sites: int, strength: float, seed) -> np.ndarray:
    """Draw on-site energies uniformly from [0, strength], deterministically.

    ``seed`` may be an int, a numpy SeedSequence or a Generator; the same
    seed always yields the same vector.
    """
    if strength < 0:
        raise ValueError("disorder strength must be >= 0")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    return rng.uniform(0.0, strength, n_sites)
