"""Ohmic bath discretization and thermal phase-space sampling.

The bath is a set of N harmonic oscillators with an Ohmic spectral density,
discretized on a logarithmic frequency grid.  Dimensionless units are used
throughout (hbar = 1, all oscillator masses = 1); mode indices run j = 1..N
in formulas and are stored zero-based.
"""

from dataclasses import dataclass

import numpy as np

__all__ = [
    "SpinBosonParams",
    "BathSpec",
    "PhasePoint",
    "PAPER_PARAMS",
    "discretize_bath",
    "thermal_variances",
    "sample_phase_point",
    "rho_b_weight",
    "log_rho_b_weight",
]


@dataclass(frozen=True)
class SpinBosonParams:
    """Physical constants of the spin-boson system.

    omega     : tunneling frequency of the two-level subsystem
    beta      : inverse temperature of the bath
    omega_max : cutoff frequency of the Ohmic spectral density
    xi_k      : Kondo (system-bath coupling) parameter
    n_osc     : number of discretized bath modes
    """

    omega: float
    beta: float
    omega_max: float
    xi_k: float
    n_osc: int

    def __post_init__(self):
        for name in ("omega", "beta", "omega_max", "xi_k"):
            v = getattr(self, name)
            if not (np.isfinite(v) and v > 0):
                raise ValueError(f"{name} must be positive and finite, got {v!r}")
        if self.n_osc < 1:
            raise ValueError(f"n_osc must be >= 1, got {self.n_osc!r}")


#: Parameter set used for the reference relaxation calculations.
PAPER_PARAMS = SpinBosonParams(
    omega=1.0 / 3.0, beta=0.3, omega_max=3.0, xi_k=0.007, n_osc=200
)


@dataclass(frozen=True)
class BathSpec:
    """Discretized bath: base spacing omega0, mode frequencies and couplings."""

    omega0: float
    freqs: np.ndarray
    couplings: np.ndarray

    def __post_init__(self):
        freqs = np.asarray(self.freqs, dtype=float)
        couplings = np.asarray(self.couplings, dtype=float)
        object.__setattr__(self, "freqs", freqs)
        object.__setattr__(self, "couplings", couplings)
        if freqs.ndim != 1 or couplings.shape != freqs.shape:
            raise ValueError("freqs and couplings must be 1d arrays of equal length")
        if not (np.all(np.isfinite(freqs)) and np.all(np.isfinite(couplings))):
            raise ValueError("bath frequencies/couplings must be finite")
        if np.any(np.diff(freqs) <= 0):
            raise ValueError("bath frequencies must be strictly increasing")
        if np.any(couplings <= 0):
            raise ValueError("bath couplings must be positive")

    @property
    def n_osc(self) -> int:
        return self.freqs.size


@dataclass(frozen=True)
class PhasePoint:
    """Classical bath coordinates (positions r, momenta p)."""

    r: np.ndarray
    p: np.ndarray

    def __post_init__(self):
        r = np.asarray(self.r, dtype=float)
        p = np.asarray(self.p, dtype=float)
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "p", p)
        if r.shape != p.shape or r.ndim != 1:
            raise ValueError("r and p must be 1d arrays of equal length")
        if not (np.all(np.isfinite(r)) and np.all(np.isfinite(p))):
            raise ValueError("phase point coordinates must be finite")


def discretize_bath(params: SpinBosonParams) -> BathSpec:
    """Discretize the Ohmic spectral density into n_osc harmonic modes.

    omega0 = (1 - exp(-omega_max)) / N
    omega_j = -ln(1 - j * omega0),          j = 1..N
    c_j     = sqrt(xi_k * omega0) * omega_j

    By construction omega_N = omega_max and c_j / omega_j is constant.
    """
    n = params.n_osc
    omega0 = (1.0 - np.exp(-params.omega_max)) / n
    j = np.arange(1, n + 1, dtype=float)
    freqs = -np.log1p(-j * omega0)
    couplings = np.sqrt(params.xi_k * omega0) * freqs
    if not np.all(np.isfinite(freqs)):
        raise ValueError("bath discretization produced non-finite frequencies")
    return BathSpec(omega0=omega0, freqs=freqs, couplings=couplings)


def thermal_variances(beta: float, freq):
    """Position and momentum variances of one thermal bath mode.

    The per-mode weight is exp[-(2 tanh(beta w / 2) / w)(P^2/2 + w^2 R^2/2)],
    a Gaussian with var_p = w / (2 tanh(beta w / 2)) and var_r = var_p / w^2.
    Accepts scalar or array frequencies.
    """
    if beta <= 0:
        raise ValueError("beta must be positive")
    freq = np.asarray(freq, dtype=float)
    if np.any(freq <= 0):
        raise ValueError("mode frequency must be positive")
    t = np.tanh(0.5 * beta * freq)
    var_p = freq / (2.0 * t)
    var_r = 1.0 / (2.0 * freq * t)
    if var_p.ndim == 0:
        return float(var_p), float(var_r)
    return var_p, var_r


def sample_phase_point(spec: BathSpec, beta: float, rng: np.random.Generator) -> PhasePoint:
    """Draw one phase point from the thermal bath distribution.

    Each coordinate is an independent zero-mean Gaussian with the variances
    of ``thermal_variances``.  Positions are drawn first, then momenta, so a
    given rng state always reproduces the same sample.
    """
    var_p, var_r = thermal_variances(beta, spec.freqs)
    r = rng.standard_normal(spec.n_osc) * np.sqrt(var_r)
    p = rng.standard_normal(spec.n_osc) * np.sqrt(var_p)
    return PhasePoint(r=r, p=p)


def log_rho_b_weight(spec: BathSpec, beta: float, x: PhasePoint) -> float:
    """Log of the normalized thermal bath density at a phase point.

    Per mode the density is (tanh(beta w / 2) / pi) *
    exp[-(2 tanh(beta w / 2) / w)(P^2/2 + w^2 R^2/2)], which integrates to 1
    over (R, P).  The log form avoids underflow for large mode counts.
    """
    if x.r.size != spec.n_osc:
        raise ValueError("phase point dimension does not match bath spec")
    t = np.tanh(0.5 * beta * spec.freqs)
    a = 2.0 * t / spec.freqs
    quad = 0.5 * x.p**2 + 0.5 * spec.freqs**2 * x.r**2
    return float(np.sum(np.log(t / np.pi) - a * quad))


def rho_b_weight(spec: BathSpec, beta: float, x: PhasePoint) -> float:
    """Normalized thermal bath density at a phase point.

    Underflows to zero for large mode counts; use ``log_rho_b_weight`` there.
    """
    return float(np.exp(log_rho_b_weight(spec, beta, x)))
