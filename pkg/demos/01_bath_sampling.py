"""Discretize the Ohmic bath and check the thermal sampling against theory.

The bath is a ladder of harmonic modes whose density reproduces an Ohmic
spectral density with exponential cutoff; the couplings scale as
c_j = sqrt(xi_K w0) w_j.  Initial conditions are drawn from the per-mode
Gaussian thermal distribution, whose momentum variance interpolates between
the zero-point value w/2 and the classical value 1/beta.

Run:  python3 demos/01_bath_sampling.py
Writes bath_sampling.png next to this script.
"""

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from qcwave import PAPER_PARAMS, discretize_bath, sample_phase_point, thermal_variances

spec = discretize_bath(PAPER_PARAMS)
beta = PAPER_PARAMS.beta
print(f"{spec.n_osc} modes, w0 = {spec.omega0:.6f}, "
      f"w_1 = {spec.freqs[0]:.6f}, w_N = {spec.freqs[-1]:.6f}")
print(f"coupling ratio c_j / w_j = {spec.couplings[0] / spec.freqs[0]:.6e} (constant)")

# empirical per-mode variances from a modest sample
rng = np.random.default_rng(1)
n = 2000
r = np.empty((n, spec.n_osc))
p = np.empty((n, spec.n_osc))
for i in range(n):
    x = sample_phase_point(spec, beta, rng)
    r[i] = x.r
    p[i] = x.p

var_p, var_r = thermal_variances(beta, spec.freqs)

fig, axes = plt.subplots(1, 2, figsize=(10, 4))
axes[0].plot(spec.freqs, spec.couplings, ".", ms=3)
axes[0].set_xlabel("mode frequency $\\omega_j$")
axes[0].set_ylabel("coupling $c_j$")
axes[0].set_title("Ohmic discretization")

axes[1].plot(spec.freqs, var_p, "-", label="$\\langle P^2\\rangle$ theory")
axes[1].plot(spec.freqs, p.var(axis=0, ddof=1), ".", ms=3, label="sampled")
axes[1].plot(spec.freqs, spec.freqs**2 * var_r, "--", label="$\\omega^2\\langle R^2\\rangle$ theory")
axes[1].plot(spec.freqs, spec.freqs**2 * r.var(axis=0, ddof=1), "x", ms=3, label="sampled")
axes[1].axhline(1.0 / beta, color="gray", lw=0.8, label="classical $1/\\beta$")
axes[1].set_xlabel("mode frequency $\\omega_j$")
axes[1].set_ylabel("variance")
axes[1].legend(fontsize=8)
axes[1].set_title(f"thermal variances, $\\beta = {beta}$")

out = Path(__file__).with_name("bath_sampling.png")
fig.tight_layout()
fig.savefig(out, dpi=150)
print(f"wrote {out}")
