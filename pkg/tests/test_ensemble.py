from dataclasses import replace

import numpy as np
import pytest

from qcwave.bath import PAPER_PARAMS, SpinBosonParams
from qcwave.dynamics import PropagationError
from qcwave.ensemble import (
    ObservableSeries,
    RunConfig,
    convergence_report,
    run_ensemble,
    sample_rng,
)


def small_cfg(**kw):
    base = dict(n_samples=200, dt=2e-3, t_max=2.0, out_stride=100, master_seed=11)
    base.update(kw)
    return RunConfig(**base)


class TestRunConfig:
    @pytest.mark.parametrize("field,value", [
        ("n_samples", 0), ("dt", 0.0), ("t_max", -1.0), ("out_stride", 0),
        ("integrator", "rk2"), ("mode", "surface-hopping"), ("n_jobs", 0),
    ])
    def test_rejects_invalid(self, field, value):
        with pytest.raises(ValueError):
            small_cfg(**{field: value})

    def test_frozen(self):
        cfg = small_cfg()
        with pytest.raises(Exception):
            cfg.dt = 1.0


class TestSampleRng:
    def test_streams_are_reproducible_and_distinct(self):
        a = sample_rng(3, 5).standard_normal(4)
        b = sample_rng(3, 5).standard_normal(4)
        c = sample_rng(3, 6).standard_normal(4)
        assert np.array_equal(a, b)
        assert not np.array_equal(a, c)


class TestRunEnsemble:
    def test_initial_value_identity(self):
        series = run_ensemble(small_cfg(t_max=0.0))
        assert series.times[0] == 0.0
        assert abs(series.mean[0] - 1.0) < 1e-12
        assert series.stderr[0] < 1e-12

    def test_worker_count_invariance(self):
        base = run_ensemble(small_cfg())
        par = run_ensemble(small_cfg(n_jobs=2))
        assert np.array_equal(base.mean, par.mean)
        assert np.array_equal(base.stderr, par.stderr)
        tri = run_ensemble(small_cfg(n_jobs=3))
        assert np.array_equal(base.mean, tri.mean)

    def test_seed_changes_curve(self):
        a = run_ensemble(small_cfg())
        b = run_ensemble(small_cfg(master_seed=12))
        assert not np.array_equal(a.mean, b.mean)

    def test_stderr_scaling(self):
        # quadrupling M should roughly halve the standard error
        small = run_ensemble(small_cfg(n_samples=400, t_max=2.0))
        big = run_ensemble(small_cfg(n_samples=1600, t_max=2.0))
        ratio = small.stderr[-1] / big.stderr[-1]
        assert 1.4 < ratio < 2.9

    def test_adiabatic_mean_independent_of_sigma_beta(self):
        # adiabatic generator has no off-diagonals, so beta cannot enter
        a = run_ensemble(small_cfg(mode="adiabatic"))
        b = run_ensemble(small_cfg(mode="adiabatic", sigma_beta=0.0))
        assert np.max(np.abs(a.mean - b.mean)) < 1e-14

    def test_single_sample_zero_stderr(self):
        series = run_ensemble(small_cfg(n_samples=1))
        assert np.all(series.stderr == 0.0)

    def test_provenance_carried(self):
        cfg = small_cfg()
        series = run_ensemble(cfg)
        assert isinstance(series, ObservableSeries)
        assert series.provenance == cfg
        assert series.n_samples == cfg.n_samples

    def test_failure_reports_sample_and_seed(self):
        # a grossly large step makes RK4 blow up; the error must name the
        # master seed so the offending trajectory can be replayed
        cfg = small_cfg(n_samples=4, dt=50.0, t_max=5000.0, out_stride=10)
        with pytest.raises(PropagationError) as exc:
            run_ensemble(cfg)
        assert "master_seed=11" in str(exc.value)
        assert exc.value.sample_index is not None
        assert 0 <= exc.value.sample_index < 4


class TestConvergenceReport:
    def test_t_max_zero_exact(self):
        report = convergence_report(small_cfg(n_samples=50, t_max=0.0))
        assert report.max_dt_discrepancy == 0.0
        assert report.max_m_discrepancy == 0.0

    def test_grids_align_and_dt_refined(self):
        cfg = small_cfg(n_samples=100, t_max=1.0, out_stride=50)
        report = convergence_report(cfg)
        assert report.times[-1] == pytest.approx(1.0)
        # RK4 at dt = 2e-3 is already deep in the converged regime
        assert report.max_dt_discrepancy < 1e-8
        assert report.base_mean.shape == report.half_dt_mean.shape

    def test_m_refinement_shares_samples(self):
        # the first M samples of the 2M run are the same streams, so the
        # discrepancy is bounded by the extra samples' spread, not 2x noise
        cfg = small_cfg(n_samples=100, t_max=1.0)
        report = convergence_report(cfg)
        assert report.max_m_discrepancy < 0.5
