"""Initial states, stroboscopic runs, the ODE oracle and disorder sweeps."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .floquet import DynamicalMap, floquet_map
from .observables import (
    ObservableTrace,
    Partition,
    all_magnetizations,
    default_partition,
    negativity,
    purity,
    total_excitations,
)
from .operators import SpinNetworkConfig, hamiltonian_interaction, hamiltonian_kick
from .spectra import (
    DEFAULT_ZERO_THRESHOLD,
    GapResult,
    sector_eigenvalues,
    gap_from_eigenvalues,
    spectrum_2T,
)
from .superop import lindblad_rhs, validate_density_matrix

_KET = {
    "0": np.array([1.0, 0.0], dtype=complex),
    "1": np.array([0.0, 1.0], dtype=complex),
    "+": np.array([1.0, 1.0], dtype=complex) / np.sqrt(2.0),
}


class StateInvariantError(RuntimeError):
    """A density-matrix invariant failed during a stroboscopic run."""

    def __init__(self, period: int, reason: str):
        super().__init__(f"state invariant violated at period {period}: {reason}")
        self.period = period


@dataclass(frozen=True)
class InitialStateSpec:
    """Recipe for the initial density matrix.

    kind = 'pure_pattern' uses ``pattern`` (symbols 0, 1, + per site);
    kind = 'mixed_B' puts |1> on every region-A site and the fully mixed
    state on region B; kind = 'seed_size' puts |1> on the first
    ``seed_sites`` sites and |+> on the rest.
    """

    kind: str
    pattern: str | None = None
    seed_sites: int | None = None


def build_initial_state(spec: InitialStateSpec, n_sites: int,
                        partition: Partition | None = None) -> np.ndarray:
    """Construct the initial density matrix for a run."""
    if spec.kind == "pure_pattern":
        if spec.pattern is None or len(spec.pattern) != n_sites:
            raise ValueError(f"pattern must have length {n_sites}")
        return _pure_state([_site_ket(s) for s in spec.pattern])
    if spec.kind == "mixed_B":
        part = partition or default_partition(n_sites)
        factors = []
        for site in range(n_sites):
            if site in part.sites_a:
                factors.append(np.outer(_KET["1"], _KET["1"].conj()))
            else:
                factors.append(np.eye(2, dtype=complex) / 2.0)
        rho = factors[0]
        for f in factors[1:]:
            rho = np.kron(rho, f)
        return rho
    if spec.kind == "seed_size":
        k = spec.seed_sites
        if k is None or not 0 <= k <= n_sites:
            raise ValueError(f"seed_sites must be in 0..{n_sites}")
        return _pure_state([_KET["1"]] * k + [_KET["+"]] * (n_sites - k))
    raise ValueError(f"unknown initial state kind {spec.kind!r}")


def _site_ket(symbol: str) -> np.ndarray:
    try:
        return _KET[symbol]
    except KeyError:
        raise ValueError(f"invalid pattern symbol {symbol!r}, expected 0, 1 or +") from None


def _pure_state(kets) -> np.ndarray:
    psi = kets[0]
    for k in kets[1:]:
        psi = np.kron(psi, k)
    return np.outer(psi, psi.conj())


def run_stroboscopic(rho0: np.ndarray, config: SpinNetworkConfig, n_periods: int,
                     partition: Partition | None = None,
                     dynamical_map: DynamicalMap | None = None) -> ObservableTrace:
    """Apply the one-period map repeatedly and record observables at each n.

    The map is built once and reused for every period.  Density-matrix
    invariants (trace, Hermiticity, positivity) are asserted every period;
    a violation aborts with the offending period index.
    """
    if n_periods < 1:
        raise ValueError("n_periods must be >= 1")
    part = partition or default_partition(config.n_sites)
    dmap = dynamical_map or floquet_map(config)
    phi = dmap.matrix

    n_records = n_periods + 1
    mags = np.zeros((n_records, config.n_sites))
    negs = np.zeros(n_records)
    purs = np.zeros(n_records)
    excs = np.zeros(n_records)

    vec = np.asarray(rho0, dtype=complex).reshape(-1).copy()
    for n in range(n_records):
        rho = vec.reshape(config.dim, config.dim)
        try:
            validate_density_matrix(rho, trace_tol=1e-9, herm_tol=1e-9)
        except ValueError as exc:
            raise StateInvariantError(n, str(exc)) from exc
        mags[n] = all_magnetizations(rho)
        negs[n] = negativity(rho, part)
        purs[n] = purity(rho)
        excs[n] = total_excitations(rho)
        if n < n_periods:
            vec = phi @ vec
    return ObservableTrace(
        periods=np.arange(n_records),
        magnetization=mags,
        negativity=negs,
        purity=purs,
        excitations=excs,
    )


def dtc_settling_period(trace: ObservableTrace, change_tol: float = 0.01,
                        run_length: int = 10) -> int | None:
    """First even period after which the doubled dynamics has stabilised.

    Settled means every site changes by less than ``change_tol`` between
    periods n and n+2 for ``run_length`` consecutive even periods; returns
    the first such n, or None if the trace never settles.
    """
    mags = trace.magnetization
    even = np.arange(0, len(mags) - 2, 2)
    quiet = np.array([np.abs(mags[n + 2] - mags[n]).max() < change_tol for n in even])
    for i in range(len(quiet) - run_length + 1):
        if quiet[i:i + run_length].all():
            return int(even[i])
    return None


def ode_oracle_evolve(rho0: np.ndarray, config: SpinNetworkConfig, n_periods: int,
                      dt: float | None = None, richardson_check: bool = True,
                      richardson_tol: float = 1e-6) -> np.ndarray:
    """Integrate the master equation with fixed-step RK4, piecewise per segment.

    This is the independent verification route for the map construction: the
    kick segment is integrated with the dephasing switched off (matching the
    assumption that the pulse is fast), then the interaction segment with the
    full generator.  ``dt`` must divide both segment durations; the default
    is T/2000.  With ``richardson_check`` the run is repeated at twice the
    step and the extrapolated error estimate must stay below
    ``richardson_tol``, otherwise the step is reported as too coarse.
    """
    dt = config.period / 2000.0 if dt is None else dt
    steps_1 = _steps_for(config.t1, dt)
    steps_2 = _steps_for(config.t2, dt)
    rho = _rk4_run(rho0, config, n_periods, steps_1, steps_2)
    if richardson_check:
        if steps_1 % 2 or steps_2 % 2:
            raise ValueError("step-doubling check requires an even step count per segment")
        coarse = _rk4_run(rho0, config, n_periods, steps_1 // 2, steps_2 // 2)
        err = np.abs(rho - coarse).max() / 15.0  # 4th-order Richardson estimate
        if err > richardson_tol:
            raise ValueError(
                f"dt = {dt:.3e} too coarse: estimated integration error {err:.3e}"
            )
    return rho


def _steps_for(duration: float, dt: float) -> int:
    steps = int(round(duration / dt))
    if steps < 1 or abs(steps * dt - duration) > 1e-12 * max(1.0, duration):
        raise ValueError(f"dt = {dt} does not divide segment duration {duration}")
    return steps


def _rk4_run(rho0, config, n_periods, steps_1, steps_2):
    H1 = hamiltonian_kick(config)
    H2 = hamiltonian_interaction(config)
    n = config.n_sites
    rho = np.asarray(rho0, dtype=complex).copy()
    for _ in range(n_periods):
        rho = _rk4_segment(rho, H1, n, 0.0, config.t1, steps_1)  # dephasing off
        rho = _rk4_segment(rho, H2, n, config.gamma, config.t2, steps_2)
    return rho


def _rk4_segment(rho, H, n_sites, gamma, duration, steps):
    dt = duration / steps
    for _ in range(steps):
        k1 = lindblad_rhs(rho, H, n_sites, gamma)
        k2 = lindblad_rhs(rho + 0.5 * dt * k1, H, n_sites, gamma)
        k3 = lindblad_rhs(rho + 0.5 * dt * k2, H, n_sites, gamma)
        k4 = lindblad_rhs(rho + dt * k3, H, n_sites, gamma)
        rho = rho + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    return rho


@dataclass(frozen=True)
class SweepSpec:
    """Disorder-averaged gap sweep: W values, realization count, seeding."""

    config: SpinNetworkConfig
    w_values: tuple
    n_realizations: int = 20
    base_seed: int = 12345
    zero_threshold: float = DEFAULT_ZERO_THRESHOLD

    def __post_init__(self):
        if self.n_realizations < 1:
            raise ValueError("n_realizations must be >= 1")
        w = tuple(float(v) for v in self.w_values)
        if any(v < 0 for v in w):
            raise ValueError("disorder strengths must be >= 0")
        object.__setattr__(self, "w_values", w)


@dataclass(frozen=True)
class SweepResult:
    """Per-W gap statistics plus the raw per-realization values."""

    w_values: tuple
    gaps: np.ndarray          # shape (n_w, n_realizations); nan where failed
    mean: np.ndarray
    min: np.ndarray
    max: np.ndarray
    seeds: tuple              # (base_seed, realization) pairs actually used
    failures: tuple           # (w_index, realization, message) triples
    base_seed: int


def realization_seed(base_seed: int, realization: int) -> np.random.SeedSequence:
    """Stable per-realization seed; adding realizations never reshuffles."""
    return np.random.SeedSequence((base_seed, realization))


def disorder_gap_sweep(sweep: SweepSpec, n_workers: int = 1) -> SweepResult:
    """Average the Liouvillian gap over disorder realizations for each W.

    Every realization samples its disorder from a seed mixed from
    (base_seed, realization index), builds the two-period map through the
    sector-block fast path and extracts the gap.  Fully deterministic for a
    fixed spec; realizations may run in worker threads.
    """
    cfg = sweep.config
    n_w, n_r = len(sweep.w_values), sweep.n_realizations
    gaps = np.full((n_w, n_r), np.nan)
    failures = []

    def one(iw: int, r: int):
        rng = np.random.default_rng(realization_seed(sweep.base_seed, r))
        disorder = rng.uniform(0.0, sweep.w_values[iw], cfg.n_sites)
        lam = sector_eigenvalues_for(cfg.with_disorder(disorder))
        return gap_from_eigenvalues(lam, sweep.zero_threshold)

    tasks = [(iw, r) for iw in range(n_w) for r in range(n_r)]
    if n_workers > 1:
        with ThreadPoolExecutor(max_workers=n_workers) as pool:
            results = list(pool.map(lambda t: _guarded(one, *t), tasks))
    else:
        results = [_guarded(one, *t) for t in tasks]

    for (iw, r), outcome in zip(tasks, results):
        if isinstance(outcome, GapResult) and outcome.gap is not None:
            gaps[iw, r] = outcome.gap
        else:
            message = outcome if isinstance(outcome, str) else "no gap defined"
            failures.append((iw, r, message))

    def _stat(fn):
        return np.array([fn(row[~np.isnan(row)]) if (~np.isnan(row)).any() else np.nan
                         for row in gaps])

    mean, gmin, gmax = _stat(np.mean), _stat(np.min), _stat(np.max)
    return SweepResult(
        w_values=sweep.w_values,
        gaps=gaps,
        mean=mean,
        min=gmin,
        max=gmax,
        seeds=tuple((sweep.base_seed, r) for r in range(n_r)),
        failures=tuple(failures),
        base_seed=sweep.base_seed,
    )


def _guarded(fn, *args):
    try:
        return fn(*args)
    except Exception as exc:  # recorded per realization, never dropped
        return f"{type(exc).__name__}: {exc}"


def sector_eigenvalues_for(config: SpinNetworkConfig) -> np.ndarray:
    """Rates of the two-period generator via the block fast path."""
    from .floquet import floquet_2T_sector_blocks

    blocks = floquet_2T_sector_blocks(config)
    return sector_eigenvalues(blocks, 2.0 * config.period)


def spectrum_snapshot(config: SpinNetworkConfig) -> np.ndarray:
    """Eigenvalue cloud of the two-period effective generator, as data."""
    return spectrum_2T(config)
