"""Monte-Carlo ensemble driver for the spin-boson relaxation curves.

Phase points are sampled from the thermal bath distribution (the sampling
measure absorbs the rho_b factor of the initial wave fields), each trajectory
is propagated at its fixed phase point, and the ensemble mean and standard
error of <sigma_z>(t) are accumulated.

Reproducibility contract: sample i always uses the rng stream derived from
(master_seed, i), and trajectories are reduced in sample-index order, so the
result is bitwise independent of the worker count.
"""

from dataclasses import dataclass, replace

import numpy as np

from . import dynamics
from .adiabatic import dg_dgamma, g_of_gamma, gamma_of
from .bath import PAPER_PARAMS, SpinBosonParams, discretize_bath, sample_phase_point
from .dynamics import PropagationError

__all__ = ["RunConfig", "ObservableSeries", "ConvergenceReport", "run_ensemble", "convergence_report"]


@dataclass(frozen=True)
class RunConfig:
    """Everything needed to reproduce one ensemble run."""

    params: SpinBosonParams = PAPER_PARAMS
    n_samples: int = 10_000
    dt: float = 1e-3
    t_max: float = 20.0
    out_stride: int = 100
    integrator: str = "rk4"
    mode: str = "nonadiabatic"
    master_seed: int = 2024
    sigma_beta: float = None  # generator temperature; defaults to params.beta
    n_jobs: int = 1

    def __post_init__(self):
        if self.n_samples < 1:
            raise ValueError(f"n_samples must be >= 1, got {self.n_samples!r}")
        if self.dt <= 0:
            raise ValueError(f"dt must be positive, got {self.dt!r}")
        if self.t_max < 0:
            raise ValueError(f"t_max must be non-negative, got {self.t_max!r}")
        if self.out_stride < 1:
            raise ValueError(f"out_stride must be >= 1, got {self.out_stride!r}")
        if self.integrator not in dynamics.INTEGRATORS:
            raise ValueError(f"integrator must be one of {dynamics.INTEGRATORS}")
        if self.mode not in dynamics.MODES:
            raise ValueError(f"mode must be one of {dynamics.MODES}")
        if self.n_jobs < 1:
            raise ValueError(f"n_jobs must be >= 1, got {self.n_jobs!r}")


@dataclass(frozen=True)
class ObservableSeries:
    """Ensemble mean and standard error of <sigma_z> on the output grid."""

    times: np.ndarray
    mean: np.ndarray
    stderr: np.ndarray
    n_samples: int
    provenance: RunConfig


def sample_rng(master_seed: int, i: int) -> np.random.Generator:
    """The rng stream owned by sample i; independent of scheduling."""
    return np.random.default_rng(np.random.SeedSequence(entropy=master_seed, spawn_key=(i,)))


def _sample_inputs(cfg: RunConfig):
    """Per-sample scalars (s, P.d12, G) drawn from the thermal distribution."""
    spec = discretize_bath(cfg.params)
    omega = cfg.params.omega
    m = cfg.n_samples
    s = np.empty(m)
    pd = np.empty(m)
    g = np.empty(m)
    for i in range(m):
        rng = sample_rng(cfg.master_seed, i)
        x = sample_phase_point(spec, cfg.params.beta, rng)
        gamma = gamma_of(spec, x.r)
        gi = g_of_gamma(gamma, omega)
        s[i] = np.hypot(omega, gamma)
        g[i] = gi
        # P.d12 with d12 = -c * dG/dgamma / (1 + G^2)
        pd[i] = -np.dot(x.p, spec.couplings) * dg_dgamma(gamma, omega) / (1.0 + gi * gi)
    return s, pd, g


def run_ensemble(cfg: RunConfig) -> ObservableSeries:
    """Sample phase points, propagate trajectories, reduce <sigma_z>(t).

    mean(t) is the plain sample mean (the rho_b weight is absorbed by the
    sampling), stderr the unbiased sample standard deviation over sqrt(M).
    """
    s, pd, g = _sample_inputs(cfg)
    sigma_beta = cfg.sigma_beta if cfg.sigma_beta is not None else cfg.params.beta
    n_steps = int(round(cfg.t_max / cfg.dt))

    def kernel(lo, hi):
        return dynamics.propagate_observable_batch(
            s[lo:hi],
            pd[lo:hi],
            g[lo:hi],
            beta=sigma_beta,
            mode=cfg.mode,
            dt=cfg.dt,
            n_steps=n_steps,
            out_stride=cfg.out_stride,
            integrator=cfg.integrator,
            sample_offset=lo,
        )

    try:
        if cfg.n_jobs == 1:
            times, obs = kernel(0, cfg.n_samples)
        else:
            from joblib import Parallel, delayed

            bounds = np.linspace(0, cfg.n_samples, cfg.n_jobs + 1).astype(int)
            parts = Parallel(n_jobs=cfg.n_jobs)(
                delayed(kernel)(lo, hi)
                for lo, hi in zip(bounds[:-1], bounds[1:])
                if hi > lo
            )
            times = parts[0][0]
            obs = np.concatenate([p[1] for p in parts], axis=1)
    except PropagationError as err:
        idx = err.sample_index
        raise PropagationError(
            f"{err} (master_seed={cfg.master_seed}, sample={idx})", sample_index=idx
        ) from err

    mean = obs.mean(axis=1)
    if cfg.n_samples > 1:
        stderr = obs.std(axis=1, ddof=1) / np.sqrt(cfg.n_samples)
    else:
        stderr = np.zeros_like(mean)
    return ObservableSeries(
        times=times, mean=mean, stderr=stderr, n_samples=cfg.n_samples, provenance=cfg
    )


@dataclass(frozen=True)
class ConvergenceReport:
    """Refinement discrepancies of the ensemble mean curve."""

    times: np.ndarray
    base_mean: np.ndarray
    half_dt_mean: np.ndarray
    double_m_mean: np.ndarray
    max_dt_discrepancy: float
    max_m_discrepancy: float


def convergence_report(cfg: RunConfig) -> ConvergenceReport:
    """Compare the mean curve against dt/2 and 2M refinements of cfg."""
    base = run_ensemble(cfg)
    half = run_ensemble(replace(cfg, dt=cfg.dt / 2.0, out_stride=cfg.out_stride * 2))
    dbl = run_ensemble(replace(cfg, n_samples=cfg.n_samples * 2))
    if not np.allclose(base.times, half.times, rtol=0, atol=1e-12):
        raise RuntimeError("refined time grids failed to align")
    return ConvergenceReport(
        times=base.times,
        base_mean=base.mean,
        half_dt_mean=half.mean,
        double_m_mean=dbl.mean,
        max_dt_discrepancy=float(np.max(np.abs(base.mean - half.mean))),
        max_m_discrepancy=float(np.max(np.abs(base.mean - dbl.mean))),
    )
