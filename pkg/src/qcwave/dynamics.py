"""Per-phase-point wave propagation under the equilibrium-density generator.

With the thermal, fully decohered density matrix inserted into the nonlinear
wave equations, the forward field psi and the adjoint field phi obey linear
equations d(psi)/dt = Sigma psi, d(phi)/dt = conj(Sigma) phi with a constant
2x2 generator per phase point:

    Sigma = [[-i E1,                -P.d12 (1 - (beta/2) E12)],
             [ P.d12 (1 + (beta/2) E12),              -i E2 ]]

Propagation removes the common bath-potential phase exp(-i V_b t) (a pure
gauge: it cancels in phi * psi products and in every observable).  Without
this shift the sampled V_b, which grows with the mode count, would dominate
the integrator error budget.  ``build_sigma`` keeps the literal energies.
"""

from dataclasses import dataclass

import numpy as np

from .adiabatic import AdiabaticLocal, adiabatic_local, initial_coefficients, sigma_z_matrix
from .bath import BathSpec, PhasePoint, discretize_bath

__all__ = [
    "WavePair",
    "Generator2",
    "DensityMatrix2",
    "PropagationError",
    "build_sigma",
    "build_generator_general",
    "step_euler",
    "step_rk4",
    "propagate_trajectory",
    "density_oracle",
    "local_sigma_z",
    "WaveSeries",
    "DensitySeries",
    "propagate_observable_batch",
]

MODES = ("adiabatic", "nonadiabatic")
INTEGRATORS = ("euler", "rk4")


class PropagationError(RuntimeError):
    """Non-finite field values during time stepping (step too large)."""

    def __init__(self, msg, sample_index=None):
        super().__init__(msg)
        self.sample_index = sample_index


@dataclass
class WavePair:
    """Forward field psi and adjoint field phi (complex 2-vectors)."""

    psi: np.ndarray
    phi: np.ndarray

    def __post_init__(self):
        self.psi = np.asarray(self.psi, dtype=complex)
        self.phi = np.asarray(self.phi, dtype=complex)


@dataclass(frozen=True)
class Generator2:
    """2x2 generator Sigma of the psi equation; conj(Sigma) drives phi."""

    sigma: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "sigma", np.asarray(self.sigma, dtype=complex))

    @property
    def sigma_conj(self) -> np.ndarray:
        return np.conj(self.sigma)


@dataclass
class DensityMatrix2:
    """2x2 density matrix in the adiabatic basis (outer product psi x phi)."""

    rho: np.ndarray

    @classmethod
    def from_wave_pair(cls, w: WavePair) -> "DensityMatrix2":
        return cls(rho=np.outer(w.psi, w.phi))


def _sigma_matrix(e1, e2, p_dot_d12, e12, beta, mode):
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    if mode == "adiabatic":
        off12 = off21 = 0.0
    else:
        off12 = -p_dot_d12 * (1.0 - 0.5 * beta * e12)
        off21 = p_dot_d12 * (1.0 + 0.5 * beta * e12)
    return np.array([[-1j * e1, off12], [off21, -1j * e2]], dtype=complex)


def build_sigma(local: AdiabaticLocal, beta: float, mode: str = "nonadiabatic") -> Generator2:
    """Equilibrium-approximation generator at one phase point.

    Adiabatic mode corresponds to setting d12 = 0, leaving the bare phases.
    At beta = 0 the nonadiabatic generator is anti-Hermitian.
    """
    return Generator2(
        _sigma_matrix(local.e1, local.e2, local.p_dot_d12, local.e12, beta, mode)
    )


def build_generator_general(
    local: AdiabaticLocal, lnrho_dR: np.ndarray, lnrho_dP: np.ndarray
) -> Generator2:
    """Generator for arbitrary state-diagonal log-derivatives of rho.

    lnrho_dR[a], lnrho_dP[a] are the length-N vectors d(ln rho)_aa/dR and
    d(ln rho)_aa/dP for a = 0, 1 (off-diagonal ln rho structure is not
    supported).  The hopping term folds in the S-correction, which collapses
    to the finite contraction -1/2 E_ab (d_ab . lnrho_dP[b]); S itself is
    never formed, so P.d_ab = 0 needs no regularization.  With equilibrium
    inputs (beta F_a, -beta P) the drift terms cancel against each other and
    the result equals ``build_sigma``.
    """
    lnrho_dR = np.asarray(lnrho_dR, dtype=float)
    lnrho_dP = np.asarray(lnrho_dP, dtype=float)
    n = local.d12.size
    if lnrho_dR.shape != (2, n) or lnrho_dP.shape != (2, n):
        raise ValueError(
            "log-derivative inputs must be state-diagonal arrays of shape (2, N)"
        )
    p = local.x.p
    energies = (local.e1, local.e2)
    forces = (local.f1, local.f2)
    d = {(0, 1): local.d12, (1, 0): -local.d12}
    sigma = np.zeros((2, 2), dtype=complex)
    for a in range(2):
        sigma[a, a] = (
            -1j * energies[a]
            - 0.5 * np.dot(p, lnrho_dR[a])
            - 0.5 * np.dot(forces[a], lnrho_dP[a])
        )
        for b in range(2):
            if b == a:
                continue
            e_ab = energies[a] - energies[b]
            sigma[a, b] = -np.dot(p, d[a, b]) - 0.5 * e_ab * np.dot(d[a, b], lnrho_dP[b])
    return Generator2(sigma)


def step_euler(w: WavePair, gen: Generator2, dtau: float) -> WavePair:
    """First-order update psi += dtau Sigma psi, phi += dtau conj(Sigma) phi."""
    if dtau <= 0:
        raise ValueError("dtau must be positive")
    s = gen.sigma
    return WavePair(psi=w.psi + dtau * (s @ w.psi), phi=w.phi + dtau * (gen.sigma_conj @ w.phi))


def step_rk4(w: WavePair, gen: Generator2, dtau: float) -> WavePair:
    """Classical fourth-order Runge-Kutta update for the linear system."""
    if dtau <= 0:
        raise ValueError("dtau must be positive")

    def advance(u, s):
        k1 = s @ u
        k2 = s @ (u + 0.5 * dtau * k1)
        k3 = s @ (u + 0.5 * dtau * k2)
        k4 = s @ (u + dtau * k3)
        return u + (dtau / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)

    return WavePair(psi=advance(w.psi, gen.sigma), phi=advance(w.phi, gen.sigma_conj))


def _output_steps(n_steps: int, stride: int):
    ks = list(range(0, n_steps + 1, stride))
    if ks[-1] != n_steps:
        ks.append(n_steps)
    return ks


def _resolve_cfg(cfg):
    if cfg.dt <= 0:
        raise ValueError("dt must be positive")
    if cfg.t_max < 0:
        raise ValueError("t_max must be non-negative")
    if cfg.out_stride < 1:
        raise ValueError("out_stride must be >= 1")
    if cfg.integrator not in INTEGRATORS:
        raise ValueError(f"integrator must be one of {INTEGRATORS}, got {cfg.integrator!r}")
    if cfg.mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {cfg.mode!r}")
    sigma_beta = getattr(cfg, "sigma_beta", None)
    if sigma_beta is None:
        sigma_beta = cfg.params.beta
    n_steps = int(round(cfg.t_max / cfg.dt))
    return sigma_beta, n_steps


@dataclass
class WaveSeries:
    """Wave-pair samples on the output time grid of one trajectory."""

    times: np.ndarray
    psi: np.ndarray  # (n_out, 2) complex
    phi: np.ndarray  # (n_out, 2) complex
    local: AdiabaticLocal


@dataclass
class DensitySeries:
    times: np.ndarray
    rho: np.ndarray  # (n_out, 2, 2) complex
    local: AdiabaticLocal


def _shifted_generator(local: AdiabaticLocal, beta: float, mode: str) -> Generator2:
    # gauge: drop the common V_b phase (E_a -> E_a - V_b = -/+ s)
    return Generator2(
        _sigma_matrix(
            local.e1 - local.vb, local.e2 - local.vb, local.p_dot_d12, local.e12, beta, mode
        )
    )


def propagate_trajectory(x: PhasePoint, cfg, spec: BathSpec = None) -> WaveSeries:
    """Propagate the wave pair at a fixed phase point.

    cfg carries params, dt, t_max, out_stride, integrator, mode and an
    optional sigma_beta overriding the generator temperature.  The adiabatic
    quantities are computed once; the generator is constant in time.
    """
    sigma_beta, n_steps = _resolve_cfg(cfg)
    if spec is None:
        spec = discretize_bath(cfg.params)
    local = adiabatic_local(spec, cfg.params, x)
    gen = _shifted_generator(local, sigma_beta, cfg.mode)
    psi0, phi0 = initial_coefficients(local.g)
    w = WavePair(psi=psi0, phi=phi0)
    step = step_rk4 if cfg.integrator == "rk4" else step_euler

    ks = _output_steps(n_steps, cfg.out_stride)
    out_set = set(ks)
    psi_out = np.empty((len(ks), 2), dtype=complex)
    phi_out = np.empty((len(ks), 2), dtype=complex)
    row = 0
    for k in range(n_steps + 1):
        if k in out_set:
            if not (np.all(np.isfinite(w.psi)) and np.all(np.isfinite(w.phi))):
                raise PropagationError(
                    f"non-finite wave field at t={k * cfg.dt:g}; reduce dt"
                )
            psi_out[row] = w.psi
            phi_out[row] = w.phi
            row += 1
        if k < n_steps:
            w = step(w, gen, cfg.dt)
    times = np.asarray(ks, dtype=float) * cfg.dt
    return WaveSeries(times=times, psi=psi_out, phi=phi_out, local=local)


def density_oracle(x: PhasePoint, cfg, spec: BathSpec = None) -> DensitySeries:
    """Integrate the density matrix directly: d(rho)/dt = Sigma rho + rho Sigma^dag.

    Starting from rho(0) = psi(0) x phi(0) this is the rank-1-consistency
    oracle for the factorized wave propagation.
    """
    sigma_beta, n_steps = _resolve_cfg(cfg)
    if spec is None:
        spec = discretize_bath(cfg.params)
    local = adiabatic_local(spec, cfg.params, x)
    s = _shifted_generator(local, sigma_beta, cfg.mode).sigma
    s_h = np.conj(s).T
    psi0, phi0 = initial_coefficients(local.g)
    rho = np.outer(psi0, phi0).astype(complex)

    def rhs(m):
        return s @ m + m @ s_h

    dt = cfg.dt
    ks = _output_steps(n_steps, cfg.out_stride)
    out_set = set(ks)
    rho_out = np.empty((len(ks), 2, 2), dtype=complex)
    row = 0
    for k in range(n_steps + 1):
        if k in out_set:
            if not np.all(np.isfinite(rho)):
                raise PropagationError(
                    f"non-finite density matrix at t={k * dt:g}; reduce dt"
                )
            rho_out[row] = rho
            row += 1
        if k < n_steps:
            if cfg.integrator == "euler":
                rho = rho + dt * rhs(rho)
            else:
                k1 = rhs(rho)
                k2 = rhs(rho + 0.5 * dt * k1)
                k3 = rhs(rho + 0.5 * dt * k2)
                k4 = rhs(rho + dt * k3)
                rho = rho + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    times = np.asarray(ks, dtype=float) * dt
    return DensitySeries(times=times, rho=rho_out, local=local)


def local_sigma_z(w: WavePair, sz: np.ndarray) -> float:
    """Per-point observable sum_{a,a'} phi_a' (sigma_z)_{a'a} psi_a.

    Real by construction (phi = conj(psi), sigma_z real symmetric); a residual
    imaginary part >= 1e-10 flags a propagation-consistency failure.
    """
    sz = np.asarray(sz)
    val = complex(w.phi @ sz @ w.psi)
    if abs(val.imag) >= 1e-10:
        raise PropagationError(
            f"local sigma_z has imaginary part {val.imag:g}; propagation inconsistent"
        )
    return val.real


def propagate_observable_batch(
    s,
    p_dot_d12,
    g,
    *,
    beta: float,
    mode: str,
    dt: float,
    n_steps: int,
    out_stride: int,
    integrator: str = "rk4",
    sample_offset: int = 0,
):
    """Vectorized sigma_z series for a batch of trajectories.

    s, p_dot_d12, g are per-sample arrays of sqrt(Omega^2 + gamma^2), P.d12
    and the mixing parameter.  Returns (times, obs) with obs of shape
    (n_out, n_samples).  All operations are elementwise per sample, so the
    per-sample results do not depend on how the batch is chunked.
    """
    s = np.asarray(s, dtype=float)
    pd = np.asarray(p_dot_d12, dtype=float)
    g = np.asarray(g, dtype=float)
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    if integrator not in INTEGRATORS:
        raise ValueError(f"integrator must be one of {INTEGRATORS}, got {integrator!r}")

    # gauge-shifted generator entries: E1 -> -s, E2 -> +s, E12 = -2 s
    a11 = 1j * s
    a22 = -1j * s
    if mode == "nonadiabatic":
        a12 = (-pd * (1.0 + beta * s)).astype(complex)
        a21 = (pd * (1.0 - beta * s)).astype(complex)
    else:
        a12 = np.zeros_like(s, dtype=complex)
        a21 = np.zeros_like(s, dtype=complex)
    # phi evolves under the conjugate generator
    b11, b12_, b21_, b22 = np.conj(a11), np.conj(a12), np.conj(a21), np.conj(a22)

    denom = np.sqrt(2.0 * (1.0 + g * g))
    psi1 = ((1.0 + g) / denom).astype(complex)
    psi2 = ((1.0 - g) / denom).astype(complex)
    phi1 = psi1.copy()
    phi2 = psi2.copy()

    sz_d = 2.0 * g / (1.0 + g * g)
    sz_o = (1.0 - g * g) / (1.0 + g * g)

    ks = _output_steps(n_steps, out_stride)
    out_set = set(ks)
    obs = np.empty((len(ks), s.size))
    row = 0

    def record(row_idx, k):
        v = phi1 * (sz_d * psi1 + sz_o * psi2) + phi2 * (sz_o * psi1 - sz_d * psi2)
        bad = ~np.isfinite(v.real) | ~np.isfinite(v.imag)
        if np.any(bad):
            idx = sample_offset + int(np.argmax(bad))
            raise PropagationError(
                f"non-finite wave field in sample {idx} at t={k * dt:g}; reduce dt",
                sample_index=idx,
            )
        worst = float(np.max(np.abs(v.imag)))
        if worst >= 1e-10:
            idx = sample_offset + int(np.argmax(np.abs(v.imag)))
            raise PropagationError(
                f"sigma_z imaginary part {worst:g} in sample {idx}; propagation inconsistent",
                sample_index=idx,
            )
        obs[row_idx] = v.real

    def rk4_field(u1, u2, m11, m12, m21, m22):
        k1a = m11 * u1 + m12 * u2
        k1b = m21 * u1 + m22 * u2
        t1a = u1 + 0.5 * dt * k1a
        t1b = u2 + 0.5 * dt * k1b
        k2a = m11 * t1a + m12 * t1b
        k2b = m21 * t1a + m22 * t1b
        t2a = u1 + 0.5 * dt * k2a
        t2b = u2 + 0.5 * dt * k2b
        k3a = m11 * t2a + m12 * t2b
        k3b = m21 * t2a + m22 * t2b
        t3a = u1 + dt * k3a
        t3b = u2 + dt * k3b
        k4a = m11 * t3a + m12 * t3b
        k4b = m21 * t3a + m22 * t3b
        u1 = u1 + (dt / 6.0) * (k1a + 2.0 * k2a + 2.0 * k3a + k4a)
        u2 = u2 + (dt / 6.0) * (k1b + 2.0 * k2b + 2.0 * k3b + k4b)
        return u1, u2

    def euler_field(u1, u2, m11, m12, m21, m22):
        return u1 + dt * (m11 * u1 + m12 * u2), u2 + dt * (m21 * u1 + m22 * u2)

    advance = rk4_field if integrator == "rk4" else euler_field
    for k in range(n_steps + 1):
        if k in out_set:
            record(row, k)
            row += 1
        if k < n_steps:
            psi1, psi2 = advance(psi1, psi2, a11, a12, a21, a22)
            phi1, phi2 = advance(phi1, phi2, b11, b12_, b21_, b22)
    times = np.asarray(ks, dtype=float) * dt
    return times, obs
