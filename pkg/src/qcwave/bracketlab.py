"""Desk-scale laboratory for the non-Hamiltonian bracket algebra.

Two layers live here.  The operator layer works with phase-space dependent
matrices: the mixed quantum-classical bracket combines the commutator with
symmetrized Poisson brackets, and its cyclic Jacobi defect is generically
nonzero, which is what classifies the algebra as non-Hamiltonian.  The wave
layer treats (|Psi>, <Psi|) as phase-space coordinates: the canonical bracket
on wave fields reproduces linear quantum mechanics, and replacing the
canonical block structure by an arbitrary antisymmetric one still conserves
the Hamiltonian functional.

Phase-space derivatives use central differences; the module is a property
test bed (quantum dimension <= 4, at most 2 classical dofs), not a
production engine.
"""

from dataclasses import dataclass
from typing import Callable

import numpy as np

__all__ = [
    "PhaseSpaceOperator",
    "WaveState",
    "ObservableFunctional",
    "BlockOmega",
    "BracketEvalError",
    "qc_bracket",
    "bracket_operator",
    "jacobi_defect",
    "weinberg_rhs",
    "nh_bracket_rhs",
    "homogeneity_check",
    "bilinear_observable",
    "integrate_ket",
]

HOMOGENEITY_TOL = 1e-8


class BracketEvalError(RuntimeError):
    """Operator evaluation returned non-finite entries at a stencil point."""


@dataclass
class PhaseSpaceOperator:
    """A d x d matrix-valued function of a low-dimensional phase point.

    The phase point is a flat array (R_1..R_n, P_1..P_n) with n = n_dof.
    fd_step is the central-difference step for phase-space derivatives;
    nested brackets inherit it, so for Jacobi-defect work pick it large
    enough that second-difference roundoff stays below the target tolerance.
    """

    dim: int
    eval: Callable[[np.ndarray], np.ndarray]
    fd_step: float = 1e-5
    n_dof: int = 1
    hermitian: bool = False

    def __post_init__(self):
        if self.dim < 1 or self.n_dof not in (1, 2):
            raise ValueError("dim must be >= 1 and n_dof in {1, 2}")
        if self.hermitian:
            rng = np.random.default_rng(0)
            for _ in range(3):
                x = rng.standard_normal(2 * self.n_dof)
                m = np.asarray(self.eval(x))
                if not np.allclose(m, np.conj(m).T, atol=1e-12):
                    raise ValueError("operator declared hermitian is not, at sample point")

    @classmethod
    def constant(cls, matrix, n_dof: int = 1, **kw) -> "PhaseSpaceOperator":
        matrix = np.asarray(matrix, dtype=complex)
        return cls(dim=matrix.shape[0], eval=lambda x: matrix, n_dof=n_dof, **kw)


def _eval(op: PhaseSpaceOperator, x: np.ndarray) -> np.ndarray:
    m = np.asarray(op.eval(x), dtype=complex)
    if not np.all(np.isfinite(m)):
        raise BracketEvalError(f"non-finite operator value at stencil point {x!r}")
    return m


def _deriv(op: PhaseSpaceOperator, x: np.ndarray, i: int) -> np.ndarray:
    h = op.fd_step
    e = np.zeros_like(x)
    e[i] = h
    return (_eval(op, x + e) - _eval(op, x - e)) / (2.0 * h)


def _poisson(a: PhaseSpaceOperator, b: PhaseSpaceOperator, x: np.ndarray) -> np.ndarray:
    """{A, B} = sum_i dA/dR_i dB/dP_i - dA/dP_i dB/dR_i (matrix products)."""
    n = x.size // 2
    out = np.zeros((a.dim, a.dim), dtype=complex)
    for i in range(n):
        out += _deriv(a, x, i) @ _deriv(b, x, n + i)
        out -= _deriv(a, x, n + i) @ _deriv(b, x, i)
    return out


def qc_bracket(a: PhaseSpaceOperator, b: PhaseSpaceOperator, x) -> np.ndarray:
    """Quantum-classical bracket (A, B) at phase point x.

    (A, B) = i [A, B] - 1/2 {A, B} + 1/2 {B, A}   (hbar = 1).

    The sign convention makes purely classical arguments reproduce the
    classical evolution dB/dt = {B, A}: qc_bracket(H, chi) generates
    d(chi)/dt, and for constant operators it reduces to i [A, B].
    """
    x = np.asarray(x, dtype=float)
    av = _eval(a, x)
    bv = _eval(b, x)
    comm = 1j * (av @ bv - bv @ av)
    return comm - 0.5 * _poisson(a, b, x) + 0.5 * _poisson(b, a, x)


def bracket_operator(a: PhaseSpaceOperator, b: PhaseSpaceOperator) -> PhaseSpaceOperator:
    """The bracket (A, B) packaged as a new phase-space operator."""
    return PhaseSpaceOperator(
        dim=a.dim,
        eval=lambda x: qc_bracket(a, b, x),
        fd_step=max(a.fd_step, b.fd_step),
        n_dof=a.n_dof,
    )


def jacobi_defect(
    a: PhaseSpaceOperator, b: PhaseSpaceOperator, c: PhaseSpaceOperator, x
) -> np.ndarray:
    """Cyclic sum (A,(B,C)) + (C,(A,B)) + (B,(C,A)).

    Vanishes for purely quantum or purely classical triples; generically
    nonzero for mixed ones, which is the non-Hamiltonian signature.
    """
    x = np.asarray(x, dtype=float)
    return (
        qc_bracket(a, bracket_operator(b, c), x)
        + qc_bracket(c, bracket_operator(a, b), x)
        + qc_bracket(b, bracket_operator(c, a), x)
    )


@dataclass
class WaveState:
    """Wave field |Psi>; the conjugate row <Psi| is derived from it."""

    vec: np.ndarray

    def __post_init__(self):
        self.vec = np.asarray(self.vec, dtype=complex)
        if not np.all(np.isfinite(self.vec)):
            raise ValueError("wave state entries must be finite")

    @property
    def bra(self) -> np.ndarray:
        return np.conj(self.vec)

    @property
    def dim(self) -> int:
        return self.vec.size


@dataclass
class ObservableFunctional:
    """Real functional of the wave fields with its two gradients.

    value     : WaveState -> real
    grad_bra  : WaveState -> d-vector dH/d<Psi|  (a ket)
    grad_ket  : WaveState -> d-vector dH/d|Psi>  (a bra row)

    Gauge invariance requires the homogeneity identity
    <Psi|grad_bra> = <grad_ket|Psi> = H.
    """

    value: Callable[[WaveState], float]
    grad_bra: Callable[[WaveState], np.ndarray]
    grad_ket: Callable[[WaveState], np.ndarray]


def bilinear_observable(matrix) -> ObservableFunctional:
    """H = <Psi|A|Psi> for a fixed matrix A; satisfies homogeneity exactly."""
    a = np.asarray(matrix, dtype=complex)
    return ObservableFunctional(
        value=lambda st: float(np.real(st.bra @ a @ st.vec)),
        grad_bra=lambda st: a @ st.vec,
        grad_ket=lambda st: st.bra @ a,
    )


def homogeneity_check(h: ObservableFunctional, states) -> float:
    """Max violation of the homogeneity identity over the sample states."""
    worst = 0.0
    for st in states:
        v = h.value(st)
        worst = max(worst, abs(st.bra @ h.grad_bra(st) - v))
        worst = max(worst, abs(h.grad_ket(st) @ st.vec - v))
    return worst


def weinberg_rhs(state: WaveState, h: ObservableFunctional) -> np.ndarray:
    """Canonical wave-bracket flow: d|Psi>/dt = -i dH/d<Psi|  (hbar = 1).

    For bilinear H = <Psi|A|Psi> this is the linear Schroedinger equation.
    """
    viol = homogeneity_check(h, [state])
    if viol > HOMOGENEITY_TOL:
        raise ValueError(f"observable violates homogeneity by {viol:g}")
    return -1j * h.grad_bra(state)


@dataclass
class BlockOmega:
    """State-dependent antisymmetric 2-block structure on wave coordinates.

    b12 and b21 map a WaveState to d x d matrices; antisymmetry means
    b21 = -b12 at every state where the bracket is evaluated.
    """

    b12: Callable[[WaveState], np.ndarray]
    b21: Callable[[WaveState], np.ndarray]

    @classmethod
    def canonical(cls, dim: int) -> "BlockOmega":
        eye = np.eye(dim, dtype=complex)
        return cls(b12=lambda st: eye, b21=lambda st: -eye)


def nh_bracket_rhs(state: WaveState, h: ObservableFunctional, omega: BlockOmega):
    """Generalized non-Hamiltonian wave-bracket flow.

    d|Psi>/dt = i Omega_21 dH/d<Psi|,   d<Psi|/dt = i dH/d|Psi> Omega_12.

    Antisymmetry of the block structure forces dH/dt = 0 along the flow even
    though the Jacobi identity is lost.  Returns (d_ket, d_bra).
    """
    o12 = np.asarray(omega.b12(state), dtype=complex)
    o21 = np.asarray(omega.b21(state), dtype=complex)
    if not np.allclose(o21, -o12, atol=1e-10):
        raise ValueError("omega blocks are not antisymmetric (b21 != -b12)")
    d_ket = 1j * (o21 @ h.grad_bra(state))
    d_bra = 1j * (h.grad_ket(state) @ o12)
    return d_ket, d_bra


def integrate_ket(
    state0: WaveState,
    rhs: Callable[[WaveState], np.ndarray],
    dt: float,
    n_steps: int,
    record_every: int = 1,
):
    """RK4 integration of a ket-valued flow d|Psi>/dt = rhs(state).

    Valid whenever the flow preserves <Psi| = conj(|Psi>) (canonical bracket
    with Hermitian generators; real symmetric omega blocks).  Returns
    (times, kets) with kets of shape (n_out, d).
    """
    vec = state0.vec.copy()
    times = [0.0]
    kets = [vec.copy()]
    for k in range(1, n_steps + 1):
        k1 = rhs(WaveState(vec))
        k2 = rhs(WaveState(vec + 0.5 * dt * k1))
        k3 = rhs(WaveState(vec + 0.5 * dt * k2))
        k4 = rhs(WaveState(vec + dt * k3))
        vec = vec + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if k % record_every == 0 or k == n_steps:
            times.append(k * dt)
            kets.append(vec.copy())
    return np.asarray(times), np.asarray(kets)
