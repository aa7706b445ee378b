import numpy as np
import pytest
from scipy.integrate import dblquad

from qcwave.bath import (
    PAPER_PARAMS,
    BathSpec,
    PhasePoint,
    SpinBosonParams,
    discretize_bath,
    log_rho_b_weight,
    rho_b_weight,
    sample_phase_point,
    thermal_variances,
)


def single_mode_spec(freq=1.0, coupling=0.5):
    return BathSpec(omega0=0.1, freqs=np.array([freq]), couplings=np.array([coupling]))


class TestParams:
    def test_paper_values(self):
        assert PAPER_PARAMS.omega == pytest.approx(1 / 3)
        assert PAPER_PARAMS.n_osc == 200

    @pytest.mark.parametrize("field,value", [
        ("omega", -1.0), ("beta", 0.0), ("omega_max", -3.0), ("xi_k", 0.0), ("n_osc", 0),
    ])
    def test_rejects_invalid(self, field, value):
        kw = dict(omega=1 / 3, beta=0.3, omega_max=3.0, xi_k=0.007, n_osc=200)
        kw[field] = value
        with pytest.raises(ValueError, match=field):
            SpinBosonParams(**kw)


class TestDiscretize:
    def test_omega0_closed_form(self):
        spec = discretize_bath(PAPER_PARAMS)
        # (1 - e^-3) / 200, evaluated independently
        assert spec.omega0 == pytest.approx(0.004751064658160, abs=1e-14)

    def test_top_frequency_hits_cutoff(self):
        spec = discretize_bath(PAPER_PARAMS)
        assert abs(spec.freqs[-1] - PAPER_PARAMS.omega_max) < 1e-12

    def test_coupling_ratio_constant(self):
        spec = discretize_bath(PAPER_PARAMS)
        ratio = spec.couplings / spec.freqs
        expected = np.sqrt(PAPER_PARAMS.xi_k * spec.omega0)
        assert np.all(np.abs(ratio - expected) < 1e-15)

    def test_frequencies_strictly_increasing(self):
        for n in (1, 7, 200):
            params = SpinBosonParams(omega=1 / 3, beta=0.3, omega_max=3.0, xi_k=0.007, n_osc=n)
            spec = discretize_bath(params)
            assert np.all(np.diff(spec.freqs) > 0)
            assert abs(spec.freqs[-1] - 3.0) < 1e-12


class TestThermalVariances:
    def test_zero_temperature_limit(self):
        var_p, var_r = thermal_variances(beta=1e4, freq=1.0)
        assert var_p == pytest.approx(0.5, abs=1e-12)
        assert var_r == pytest.approx(0.5, abs=1e-12)

    def test_classical_limit(self):
        var_p, _ = thermal_variances(beta=0.01, freq=1.0)
        assert var_p == pytest.approx(100.0, rel=1e-3)

    def test_tanh_value(self):
        var_p, var_r = thermal_variances(beta=2.0, freq=1.0)
        assert var_p == pytest.approx(1.0 / (2.0 * np.tanh(1.0)), abs=1e-14)
        assert var_p == pytest.approx(var_r, abs=1e-14)  # var_p = w^2 var_r at w = 1

    def test_var_ratio(self):
        freqs = np.array([0.3, 1.0, 2.7])
        var_p, var_r = thermal_variances(0.7, freqs)
        assert np.allclose(var_p, freqs**2 * var_r, rtol=1e-14)


class TestSampling:
    def test_deterministic_replay(self):
        spec = discretize_bath(PAPER_PARAMS)
        a = sample_phase_point(spec, 0.3, np.random.default_rng(42))
        b = sample_phase_point(spec, 0.3, np.random.default_rng(42))
        assert np.array_equal(a.r, b.r) and np.array_equal(a.p, b.p)

    def test_moments_match_thermal_variances(self):
        spec = single_mode_spec(freq=1.0)
        beta = 0.3
        rng = np.random.default_rng(7)
        n = 100_000
        r = np.empty(n)
        p = np.empty(n)
        for i in range(n):
            x = sample_phase_point(spec, beta, rng)
            r[i], p[i] = x.r[0], x.p[0]
        var_p, var_r = thermal_variances(beta, 1.0)
        # 3 standard errors on mean and variance estimators
        for sample, var in ((r, var_r), (p, var_p)):
            assert abs(sample.mean()) < 3 * np.sqrt(var / n)
            assert abs(sample.var(ddof=1) - var) < 3 * var * np.sqrt(2.0 / n)


class TestRhoB:
    def test_origin_value(self):
        spec = BathSpec(
            omega0=0.2, freqs=np.array([0.5, 1.0, 2.0]), couplings=np.array([0.1, 0.2, 0.4])
        )
        beta = 0.7
        x = PhasePoint(r=np.zeros(3), p=np.zeros(3))
        expected = np.prod(np.tanh(0.5 * beta * spec.freqs) / np.pi)
        assert rho_b_weight(spec, beta, x) == pytest.approx(expected, rel=1e-12)

    def test_positive(self):
        spec = single_mode_spec()
        rng = np.random.default_rng(0)
        for _ in range(20):
            x = PhasePoint(r=rng.normal(size=1), p=rng.normal(size=1))
            assert rho_b_weight(spec, 0.5, x) > 0

    def test_single_mode_hand_value(self):
        spec = single_mode_spec(freq=1.0)
        x = PhasePoint(r=np.array([1.0]), p=np.array([0.0]))
        t = np.tanh(1.0)
        assert rho_b_weight(spec, 2.0, x) == pytest.approx(t / np.pi * np.exp(-t), rel=1e-12)

    def test_normalization_by_quadrature(self):
        spec = single_mode_spec(freq=1.3)
        beta = 0.8
        f = lambda p, r: rho_b_weight(spec, beta, PhasePoint(r=np.array([r]), p=np.array([p])))
        val, _ = dblquad(f, -15, 15, -15, 15, epsabs=1e-9)
        assert val == pytest.approx(1.0, abs=1e-6)

    def test_log_form_matches(self):
        spec = single_mode_spec()
        x = PhasePoint(r=np.array([0.4]), p=np.array([-1.2]))
        assert np.log(rho_b_weight(spec, 0.9, x)) == pytest.approx(
            log_rho_b_weight(spec, 0.9, x), abs=1e-12
        )
