"""Command-line front end: simulate, converge, bracket-demo.

Configuration precedence: built-in defaults < config file (key = value
lines, '#' comments) < command-line flags.  Every output file starts with a
comment block echoing the effective configuration, so a run can be
reproduced byte-for-byte from its own header.

Exit codes: 0 success, 1 runtime failure, 2 usage error, 3 convergence
tolerances not met.
"""

import argparse
import json
import os
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__
from .bath import SpinBosonParams
from .ensemble import ObservableSeries, RunConfig, convergence_report, run_ensemble

__all__ = ["CliConfig", "parse_config", "emit_series", "read_series_csv", "main"]

ENV_OUTPUT_DIR = "QCWAVE_OUTPUT_DIR"

EXIT_OK = 0
EXIT_RUNTIME = 1
EXIT_USAGE = 2
EXIT_TOLERANCE = 3

# key -> (type, RunConfig/params destination)
_PARAM_KEYS = {
    "omega": float,
    "beta": float,
    "omega_max": float,
    "xi_k": float,
    "n_osc": int,
}
_RUN_KEYS = {
    "n_samples": int,
    "dt": float,
    "t_max": float,
    "out_stride": int,
    "integrator": str,
    "mode": str,
    "master_seed": int,
    "sigma_beta": float,
    "n_jobs": int,
}
_IO_KEYS = {"output": str, "format": str}
_TOL_KEYS = {"dt_tol": float, "m_tol": float}
_ALL_KEYS = {**_PARAM_KEYS, **_RUN_KEYS, **_IO_KEYS, **_TOL_KEYS}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


@dataclass(frozen=True)
class CliConfig:
    subcommand: str
    run: RunConfig
    output: Path
    fmt: str
    dt_tol: float
    m_tol: float


def _build_parser() -> _Parser:
    parser = _Parser(prog="qcwave", description="Spin-boson wave-field dynamics")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def add_common(p):
        p.add_argument("--config", type=str, help="config file of key = value lines")
        p.add_argument("--omega", type=float, help="tunneling frequency")
        p.add_argument("--beta", type=float, help="inverse temperature")
        p.add_argument("--omega-max", dest="omega_max", type=float, help="bath cutoff")
        p.add_argument("--xi-k", dest="xi_k", type=float, help="Kondo parameter")
        p.add_argument("--n-osc", dest="n_osc", type=int, help="bath mode count")
        p.add_argument("--n-samples", dest="n_samples", type=int, help="trajectory count")
        p.add_argument("--dt", type=float, help="integrator step")
        p.add_argument("--t-max", dest="t_max", type=float, help="final time")
        p.add_argument("--out-stride", dest="out_stride", type=int, help="output decimation")
        p.add_argument("--integrator", choices=["euler", "rk4"])
        p.add_argument("--mode", choices=["adiabatic", "nonadiabatic"])
        p.add_argument("--seed", dest="master_seed", type=int, help="master seed")
        p.add_argument(
            "--sigma-beta", dest="sigma_beta", type=float,
            help="generator temperature (defaults to beta)",
        )
        p.add_argument("--n-jobs", dest="n_jobs", type=int, help="worker count")
        p.add_argument("--output", type=str, help="output file path")
        p.add_argument("--format", dest="format", choices=["csv", "jsonl"])

    sim = sub.add_parser("simulate", help="run an ensemble and write <sigma_z>(t)")
    add_common(sim)
    conv = sub.add_parser("converge", help="dt and M refinement self-check")
    add_common(conv)
    conv.add_argument("--dt-tol", dest="dt_tol", type=float, help="max allowed dt discrepancy")
    conv.add_argument("--m-tol", dest="m_tol", type=float, help="max allowed M discrepancy")
    sub.add_parser("bracket-demo", help="run the bracket-algebra demonstrations")
    return parser


def _read_config_file(path: str) -> dict:
    values = {}
    try:
        text = Path(path).read_text()
    except OSError as err:
        raise UsageError(f"cannot read config file {path}: {err}") from err
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
        key, _, val = line.partition("=")
        key = key.strip()
        val = val.strip()
        if key not in _ALL_KEYS:
            raise UsageError(f"{path}:{lineno}: unknown key {key!r}")
        try:
            values[key] = _ALL_KEYS[key](val)
        except ValueError as err:
            raise UsageError(f"{path}:{lineno}: malformed value for {key}: {val!r}") from err
    return values


def parse_config(argv) -> CliConfig:
    """Resolve argv (and an optional --config file) into a validated CliConfig."""
    parser = _build_parser()
    ns = parser.parse_args(argv)
    sub = ns.subcommand
    if sub == "bracket-demo":
        return CliConfig(
            subcommand=sub, run=RunConfig(), output=_default_output("csv"),
            fmt="csv", dt_tol=0.02, m_tol=0.05,
        )

    merged = {}
    if getattr(ns, "config", None):
        merged.update(_read_config_file(ns.config))
    for key in _ALL_KEYS:
        flag_val = getattr(ns, key, None)
        if flag_val is not None:
            merged[key] = flag_val

    try:
        params = SpinBosonParams(
            omega=merged.get("omega", 1.0 / 3.0),
            beta=merged.get("beta", 0.3),
            omega_max=merged.get("omega_max", 3.0),
            xi_k=merged.get("xi_k", 0.007),
            n_osc=merged.get("n_osc", 200),
        )
        run = RunConfig(
            params=params,
            n_samples=merged.get("n_samples", 10_000),
            dt=merged.get("dt", 1e-3),
            t_max=merged.get("t_max", 20.0),
            out_stride=merged.get("out_stride", 100),
            integrator=merged.get("integrator", "rk4"),
            mode=merged.get("mode", "nonadiabatic"),
            master_seed=merged.get("master_seed", 2024),
            sigma_beta=merged.get("sigma_beta", None),
            n_jobs=merged.get("n_jobs", 1),
        )
    except ValueError as err:
        raise UsageError(str(err)) from err

    fmt = merged.get("format", "csv")
    if fmt not in ("csv", "jsonl"):
        raise UsageError(f"format must be csv or jsonl, got {fmt!r}")
    output = Path(merged["output"]) if "output" in merged else _default_output(fmt)
    return CliConfig(
        subcommand=sub,
        run=run,
        output=output,
        fmt=fmt,
        dt_tol=merged.get("dt_tol", 0.02),
        m_tol=merged.get("m_tol", 0.05),
    )


def _default_output(fmt: str) -> Path:
    outdir = Path(os.environ.get(ENV_OUTPUT_DIR, "."))
    return outdir / ("sigma_z.csv" if fmt == "csv" else "sigma_z.jsonl")


def _config_echo(cfg: CliConfig) -> dict:
    run = cfg.run
    p = run.params
    return {
        "omega": p.omega,
        "beta": p.beta,
        "omega_max": p.omega_max,
        "xi_k": p.xi_k,
        "n_osc": p.n_osc,
        "n_samples": run.n_samples,
        "dt": run.dt,
        "t_max": run.t_max,
        "out_stride": run.out_stride,
        "integrator": run.integrator,
        "mode": run.mode,
        "master_seed": run.master_seed,
        "sigma_beta": run.sigma_beta,
        "n_jobs": run.n_jobs,
        "format": cfg.fmt,
        "version": __version__,
    }


def emit_series(series: ObservableSeries, cfg: CliConfig) -> Path:
    """Write the observable series to cfg.output in csv or jsonl form."""
    echo = _config_echo(cfg)
    try:
        with open(cfg.output, "w") as fh:
            if cfg.fmt == "csv":
                for key, val in echo.items():
                    fh.write(f"# {key} = {val}\n")
                fh.write("t,sigma_z,stderr\n")
                for t, m, se in zip(series.times, series.mean, series.stderr):
                    fh.write(f"{t:.12e},{m:.12e},{se:.12e}\n")
            else:
                fh.write(json.dumps({"config": echo}) + "\n")
                for t, m, se in zip(series.times, series.mean, series.stderr):
                    fh.write(
                        json.dumps({"t": float(t), "sigma_z": float(m), "stderr": float(se)})
                        + "\n"
                    )
    except OSError as err:
        raise RuntimeError(f"cannot write output file {cfg.output}: {err}") from err
    return cfg.output


def read_series_csv(path):
    """Parse an emitted CSV back into (times, mean, stderr) arrays."""
    times, mean, stderr = [], [], []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#") or line.startswith("t,"):
                continue
            t, m, se = line.split(",")
            times.append(float(t))
            mean.append(float(m))
            stderr.append(float(se))
    return np.asarray(times), np.asarray(mean), np.asarray(stderr)


def _cmd_simulate(cfg: CliConfig) -> int:
    series = run_ensemble(cfg.run)
    path = emit_series(series, cfg)
    print(f"wrote {len(series.times)} points to {path}")
    return EXIT_OK


def _cmd_converge(cfg: CliConfig) -> int:
    report = convergence_report(cfg.run)
    dt_ok = report.max_dt_discrepancy <= cfg.dt_tol
    m_ok = report.max_m_discrepancy <= cfg.m_tol
    print(
        f"dt refinement: max |mean_dt - mean_dt/2| = {report.max_dt_discrepancy:.6e} "
        f"(tol {cfg.dt_tol:g}) -> {'PASS' if dt_ok else 'FAIL'}"
    )
    print(
        f"M refinement:  max |mean_M - mean_2M|   = {report.max_m_discrepancy:.6e} "
        f"(tol {cfg.m_tol:g}) -> {'PASS' if m_ok else 'FAIL'}"
    )
    return EXIT_OK if (dt_ok and m_ok) else EXIT_TOLERANCE


def _cmd_bracket_demo() -> int:
    from . import bracketlab as bl

    sz = np.array([[1.0, 0.0], [0.0, -1.0]])
    sx = np.array([[0.0, 1.0], [1.0, 0.0]])
    sy = np.array([[0.0, -1.0j], [1.0j, 0.0]])

    def ho_coupled(x):
        r, p = x
        return (0.5 * (r * r + p * p)) * np.eye(2) + r * sz

    a = bl.PhaseSpaceOperator(dim=2, eval=ho_coupled, fd_step=1e-3)
    b = bl.PhaseSpaceOperator(dim=2, eval=lambda x: x[0] * x[1] * sy, fd_step=1e-3)
    c = bl.PhaseSpaceOperator(dim=2, eval=lambda x: x[1] ** 2 * sy, fd_step=1e-3)
    x0 = np.array([0.7, 0.4])

    print("quantum-classical bracket (H, R P sigma_y) at (R, P) = (0.7, 0.4):")
    print(np.array_str(bl.qc_bracket(a, b, x0), precision=6, suppress_small=True))

    defect = bl.jacobi_defect(a, b, c, x0)
    print(f"Jacobi defect of the mixed triple: max |J| = {np.max(np.abs(defect)):.6f}")

    omega_rabi = 1.0 / 3.0
    h = bl.bilinear_observable(omega_rabi * sx)
    times, kets = bl.integrate_ket(
        bl.WaveState(np.array([1.0, 0.0], dtype=complex)),
        lambda st: bl.weinberg_rhs(st, h),
        dt=1e-3,
        n_steps=10_000,
        record_every=100,
    )
    err = np.max(np.abs(np.abs(kets[:, 0]) ** 2 - np.cos(omega_rabi * times) ** 2))
    print(f"canonical wave bracket, Rabi check: max |P_1 - cos^2| = {err:.2e}")

    rng = np.random.default_rng(7)
    m0 = rng.standard_normal((2, 2))
    m0 = 0.5 * (m0 + m0.T)
    om = bl.BlockOmega(
        b12=lambda st: m0 / (1.0 + float(np.real(st.bra @ st.vec))),
        b21=lambda st: -m0 / (1.0 + float(np.real(st.bra @ st.vec))),
    )
    psi0 = bl.WaveState(np.array([0.8, 0.6], dtype=complex))
    _, kets = bl.integrate_ket(
        psi0, lambda st: bl.nh_bracket_rhs(st, h, om)[0], dt=1e-3, n_steps=10_000,
        record_every=1000,
    )
    h_vals = [h.value(bl.WaveState(k)) for k in kets]
    print(
        "generalized antisymmetric bracket, H drift: "
        f"{np.max(np.abs(np.asarray(h_vals) - h_vals[0])):.2e}"
    )
    return EXIT_OK


def main(argv=None) -> int:
    try:
        cfg = parse_config(sys.argv[1:] if argv is None else argv)
    except UsageError as err:
        print(f"usage error: {err}", file=sys.stderr)
        return EXIT_USAGE
    try:
        if cfg.subcommand == "simulate":
            return _cmd_simulate(cfg)
        if cfg.subcommand == "converge":
            return _cmd_converge(cfg)
        return _cmd_bracket_demo()
    except Exception as err:  # noqa: BLE001 - CLI boundary
        print(f"error: {err}", file=sys.stderr)
        return EXIT_RUNTIME


def entry():
    raise SystemExit(main())


if __name__ == "__main__":
    entry()
