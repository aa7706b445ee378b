"""Walk through the non-Hamiltonian bracket algebra on desk-scale examples.

Three exhibits:
1. the quantum-classical bracket of a coupled oscillator Hamiltonian with a
   mixed operator, and the Jacobi defect that marks the algebra as
   non-Hamiltonian (purely quantum or purely classical triples have none);
2. the canonical wave-field bracket reproducing a textbook Rabi oscillation;
3. an arbitrary antisymmetric block structure on the wave coordinates: the
   flow is no longer norm-preserving, yet the Hamiltonian functional stays
   pinned to machine precision.

Run:  python3 demos/04_bracket_lab.py
Writes bracket_lab.png next to this script.
"""

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from qcwave.bracketlab import (
    BlockOmega,
    PhaseSpaceOperator,
    WaveState,
    bilinear_observable,
    integrate_ket,
    jacobi_defect,
    nh_bracket_rhs,
    qc_bracket,
    weinberg_rhs,
)

SZ = np.array([[1.0, 0.0], [0.0, -1.0]])
SX = np.array([[0.0, 1.0], [1.0, 0.0]])
SY = np.array([[0.0, -1.0j], [1.0j, 0.0]])
EYE = np.eye(2)

# --- exhibit 1: mixed bracket and Jacobi defect -------------------------------
op = lambda f: PhaseSpaceOperator(dim=2, eval=f, fd_step=1e-3)
h_op = op(lambda x: 0.5 * (x[0] ** 2 + x[1] ** 2) * EYE + x[0] * SZ)
x0 = np.array([0.7, 0.4])

print("(H, R sigma_x) at (R, P) = (0.7, 0.4):")
print(np.array_str(qc_bracket(h_op, op(lambda x: x[0] * SX), x0),
                   precision=4, suppress_small=True))

triples = {
    "pure quantum (sx, sy, sz)": (
        PhaseSpaceOperator.constant(SX, fd_step=1e-3),
        PhaseSpaceOperator.constant(SY, fd_step=1e-3),
        PhaseSpaceOperator.constant(SZ, fd_step=1e-3),
    ),
    "pure classical (H0, RP, P^2)": (
        op(lambda x: 0.5 * (x[0] ** 2 + x[1] ** 2) * EYE),
        op(lambda x: x[0] * x[1] * EYE),
        op(lambda x: x[1] ** 2 * EYE),
    ),
    "mixed (H, RP sy, P^2 sy)": (
        h_op,
        op(lambda x: x[0] * x[1] * SY),
        op(lambda x: x[1] ** 2 * SY),
    ),
}
for name, (a, b, c) in triples.items():
    d = np.max(np.abs(jacobi_defect(a, b, c, x0)))
    print(f"Jacobi defect, {name:32s}: max |J| = {d:.3e}")

# --- exhibits 2 and 3: wave-field flows ---------------------------------------
omega = 1.0 / 3.0
h = bilinear_observable(omega * SX)

times, kets = integrate_ket(
    WaveState(np.array([1.0, 0.0], dtype=complex)),
    lambda st: weinberg_rhs(st, h), dt=1e-3, n_steps=20_000, record_every=100,
)
p1 = np.abs(kets[:, 0]) ** 2
print(f"Rabi check: max |P_1 - cos^2(Omega t)| = "
      f"{np.max(np.abs(p1 - np.cos(omega * times) ** 2)):.2e}")

m0 = np.random.default_rng(7).standard_normal((2, 2))
m0 = 0.5 * (m0 + m0.T)
om = BlockOmega(
    b12=lambda st: m0 / (1.0 + float(np.real(st.bra @ st.vec))),
    b21=lambda st: -m0 / (1.0 + float(np.real(st.bra @ st.vec))),
)
times2, kets2 = integrate_ket(
    WaveState(np.array([0.8, 0.6], dtype=complex)),
    lambda st: nh_bracket_rhs(st, h, om)[0], dt=1e-3, n_steps=20_000,
    record_every=100,
)
h_vals = np.array([h.value(WaveState(k)) for k in kets2])
norms = np.sum(np.abs(kets2) ** 2, axis=1)
print(f"generalized bracket: H drift = {np.max(np.abs(h_vals - h_vals[0])):.2e}, "
      f"norm excursion = {np.max(np.abs(norms - norms[0])):.2e}")

fig, axes = plt.subplots(1, 2, figsize=(10, 4))
axes[0].plot(times, p1, lw=1, label="$|\\psi_1|^2$")
axes[0].plot(times, np.cos(omega * times) ** 2, "k--", lw=0.8, label="$\\cos^2\\Omega t$")
axes[0].set_xlabel("t")
axes[0].legend()
axes[0].set_title("canonical wave bracket: Rabi oscillation")

axes[1].plot(times2, h_vals - h_vals[0], lw=1, label="$\\mathcal{H} - \\mathcal{H}(0)$")
axes[1].plot(times2, norms - norms[0], lw=1, label="$\\|\\psi\\|^2 - \\|\\psi(0)\\|^2$")
axes[1].set_xlabel("t")
axes[1].legend()
axes[1].set_title("non-canonical blocks: H pinned, norm free")

out = Path(__file__).with_name("bracket_lab.png")
fig.tight_layout()
fig.savefig(out, dpi=150)
print(f"wrote {out}")
