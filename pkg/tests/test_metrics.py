import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dfsqec.channels import DephasingGenerator, NoiseSpec, incoherent_dephase
from dfsqec.metrics import (
    MetricReport,
    analytic_fe_markov,
    analytic_fe_no_qec,
    analytic_fe_no_qec_markov,
    analytic_fe_qec_independent,
    analytic_fe_qec_strong,
    analytic_reference,
    avg_polarization,
    bloch_vector,
    correlation,
    correlations,
    entanglement_fidelity,
    fit_error_rates,
    fit_grid,
)
from dfsqec.qstate import DensityMatrix, apply_unitary, Operator, pauli_deviation
from .conftest import random_deviation

SINC1 = float(np.sin(1.0))  # sin(1)/1


def dephased(axis: str, kappa: float) -> DensityMatrix:
    gen = DephasingGenerator(np.array([1.0]), kappa)
    return incoherent_dephase(pauli_deviation(axis), gen)


class TestCorrelations:
    def test_identity_channel(self):
        ins = {u: pauli_deviation(u) for u in "xyz"}
        assert correlations(ins, ins) == pytest.approx((1.0, 1.0, 1.0), abs=1e-14)

    def test_complete_dephasing(self):
        ins = {u: pauli_deviation(u) for u in "xyz"}
        outs = {u: dephased(u, 2.0 * np.pi) for u in "xyz"}
        got = correlations(ins, outs)
        assert got == pytest.approx((0.0, 0.0, 1.0), abs=1e-14)

    def test_sinc_dephasing_at_half_spread_one(self):
        ins = {u: pauli_deviation(u) for u in "xyz"}
        outs = {u: dephased(u, 2.0) for u in "xyz"}
        got = correlations(ins, outs)
        assert got == pytest.approx((SINC1, SINC1, 1.0), abs=1e-12)

    def test_zero_norm_input_rejected(self):
        zero = DensityMatrix(np.zeros((2, 2)), "deviation")
        with pytest.raises(ValueError, match="zero norm"):
            correlation(zero, pauli_deviation("x"))


class TestEntanglementFidelity:
    def test_examples(self):
        assert entanglement_fidelity((1, 1, 1)) == 1.0
        assert entanglement_fidelity((0, 0, 1)) == 0.5
        assert entanglement_fidelity((0, 0, 0)) == 0.25


class TestAvgPolarization:
    def test_noise_free_run(self):
        refs = {u: pauli_deviation(u) for u in "xyz"}
        assert avg_polarization(refs, refs) == pytest.approx((1, 1, 1, 1), abs=1e-14)

    def test_complete_dephasing_without_qec(self):
        refs = {u: pauli_deviation(u) for u in "xyz"}
        outs = {u: dephased(u, 2.0 * np.pi) for u in "xyz"}
        px, py, pz, p = avg_polarization(outs, refs)
        assert (px, py, pz) == pytest.approx((0.0, 0.0, 1.0), abs=1e-14)
        assert p == pytest.approx(1.0 / 3.0, abs=1e-14)

    def test_insensitive_to_shared_unitary(self, rng):
        from .test_qstate import _random_unitary

        u = Operator(_random_unitary(rng, 2), unitary=True)
        outs = {u_ax: dephased(u_ax, 1.3) for u_ax in "xyz"}
        refs = {u_ax: pauli_deviation(u_ax) for u_ax in "xyz"}
        rotated_outs = {k: apply_unitary(v, u) for k, v in outs.items()}
        rotated_refs = {k: apply_unitary(v, u) for k, v in refs.items()}
        plain = avg_polarization(outs, refs)
        rotated = avg_polarization(rotated_outs, rotated_refs)
        assert np.max(np.abs(np.array(plain) - np.array(rotated))) <= 1e-12

    def test_zero_purity_reference_rejected(self):
        zero = DensityMatrix(np.zeros((2, 2)), "deviation")
        outs = {u: pauli_deviation(u) for u in "xyz"}
        refs = {"x": zero, "y": pauli_deviation("y"), "z": pauli_deviation("z")}
        with pytest.raises(ValueError, match="zero purity"):
            avg_polarization(outs, refs)


class TestAnalyticCurves:
    def test_independent_at_zero(self):
        assert analytic_fe_qec_independent(0.0) == 1.0

    def test_independent_at_first_sinc_zero(self):
        assert analytic_fe_qec_independent(2.0 * np.pi) == pytest.approx(0.5, abs=1e-15)

    def test_independent_at_half_spread_one(self):
        s = SINC1
        want = 0.5 + (3 * s - s**3) / 4.0
        assert analytic_fe_qec_independent(2.0) == pytest.approx(want, abs=1e-15)
        # frozen against the full circuit simulation
        assert analytic_fe_qec_independent(2.0) == pytest.approx(0.9821474294581827, abs=1e-12)

    def test_strong_reduces_to_independent_when_equal(self):
        for kappa in (0.0, 1.0, 3.7):
            assert analytic_fe_qec_strong(kappa, kappa) == pytest.approx(
                analytic_fe_qec_independent(kappa), abs=1e-15
            )

    def test_strong_is_one_when_only_third_carrier_is_noisy(self):
        for kappa3 in (0.5, 2.0, 50.0):
            assert analytic_fe_qec_strong(0.0, kappa3) == pytest.approx(1.0, abs=1e-15)

    def test_strong_at_half_spread_one_ratio_half(self):
        # frozen against the full circuit simulation
        assert analytic_fe_qec_strong(2.0, 6.0) == pytest.approx(0.9241685492011245, abs=1e-12)

    def test_no_qec_curve(self):
        assert analytic_fe_no_qec(0.0) == 1.0
        assert analytic_fe_no_qec(2.0) == pytest.approx((2 * SINC1 + 2) / 4, abs=1e-15)

    def test_markov_at_zero_time(self):
        assert analytic_fe_markov(1.0, 0.0) == 1.0
        assert analytic_fe_no_qec_markov(1.0, 0.0) == 1.0

    def test_markov_first_derivative_vanishes_at_zero(self):
        h = 1e-7
        slope = (analytic_fe_markov(1.0, h) - analytic_fe_markov(1.0, 0.0)) / h
        assert abs(slope) <= 1e-6

    def test_markov_no_qec_slope_is_minus_half_lambda(self):
        lam = 0.8
        h = 1e-7
        slope = (analytic_fe_no_qec_markov(lam, h) - 1.0) / h
        assert slope == pytest.approx(-lam / 2.0, abs=1e-6)

    @settings(max_examples=50, deadline=None)
    @given(st.floats(0.0, 30.0, allow_nan=False))
    def test_curves_stay_in_physical_range(self, kappa):
        for fe in (
            analytic_fe_qec_independent(kappa),
            analytic_fe_qec_strong(kappa, 3.0 * kappa),
            analytic_fe_no_qec(kappa),
        ):
            assert 0.25 <= fe <= 1.0 + 1e-12

    def test_analytic_reference_dispatch(self):
        spec = NoiseSpec(2.0)
        assert analytic_reference("qec_independent", spec) == analytic_fe_qec_independent(2.0)
        assert analytic_reference("no_qec", spec) == analytic_fe_no_qec(2.0)
        hybrid = NoiseSpec(2.0, collective=True, ratio=0.5)
        assert analytic_reference("qec_hybrid", hybrid) == analytic_fe_qec_strong(2.0, 6.0)
        dfs = NoiseSpec(2.0, collective=True, ratio=0.5)
        assert analytic_reference("dfs_qec", dfs) == analytic_fe_qec_independent(2.0)
        with pytest.raises(ValueError, match="collective"):
            analytic_reference("qec_hybrid", NoiseSpec(2.0))
        with pytest.raises(ValueError, match="scenario"):
            analytic_reference("other", spec)


class TestFitErrorRates:
    def test_known_exponential_curve(self):
        lam = 0.3
        ts = fit_grid(lam)
        samples = [(float(t), (1.0 + np.exp(-lam * t)) / 2.0) for t in ts]
        fit = fit_error_rates(samples, 3, lam)
        assert fit.tau_inv_k[0] == pytest.approx(0.15, abs=1e-4)

    def test_qec_curve_first_order_cancels(self):
        lam = 3.0
        ts = fit_grid(lam)
        samples = [(float(t), analytic_fe_markov(1.0, float(t))) for t in ts]
        fit = fit_error_rates(samples, 3, lam)
        assert abs(fit.tau_inv_k[0]) <= 1e-6
        assert fit.tau_inv_k[1] > 0.0
        assert fit.satisfies_bound()

    def test_constant_samples_give_zero_rates(self):
        samples = [(0.01 * k, 1.0) for k in range(12)]
        fit = fit_error_rates(samples, 3)
        assert all(abs(r) <= 1e-12 for r in fit.tau_inv_k)

    def test_insufficient_samples_rejected(self):
        with pytest.raises(ValueError, match="samples"):
            fit_error_rates([(0.0, 1.0), (0.1, 0.9), (0.2, 0.8)], 2)

    def test_orders_reported(self):
        samples = [(0.01 * k, 1.0 - 0.001 * k) for k in range(12)]
        fit = fit_error_rates(samples, 2)
        assert fit.orders == (1, 2)

    def test_bound_requires_lambda(self):
        samples = [(0.01 * k, 1.0) for k in range(12)]
        with pytest.raises(ValueError, match="bound"):
            fit_error_rates(samples, 1).satisfies_bound()

    def test_initial_slope_distinguishes_noise_kinds(self):
        # without correction, Markovian noise decays linearly from t=0
        # while the incoherent average starts flat (curvature only)
        from dfsqec.experiments import ScenarioConfig, run_scenario

        lam = 3.0
        ts = tuple(float(t) for t in fit_grid(lam))
        markov = run_scenario(ScenarioConfig("no_qec", kind="markovian_exp", sweep=ts))
        fit_m = fit_error_rates([(p.kappa0, p.report.Fe) for p in markov.points], 3)
        assert fit_m.tau_inv_k[0] == pytest.approx(0.5, abs=1e-4)

        incoh = run_scenario(ScenarioConfig("no_qec", kind="incoherent_sinc", sweep=ts))
        fit_i = fit_error_rates([(p.kappa0, p.report.Fe) for p in incoh.points], 3)
        assert abs(fit_i.tau_inv_k[0]) <= 1e-6
        assert fit_i.tau_inv_k[1] > 0.0


class TestMetricReport:
    def test_fe_recomputed_from_correlations(self):
        rep = MetricReport.from_metrics(
            {"x": 0.5, "y": 0.25, "z": 1.0}, {"x": 1.0, "y": 1.0, "z": 1.0}
        )
        assert rep.Fe == (0.5 + 0.25 + 1.0 + 1.0) / 4.0
        assert rep.P == 1.0

    def test_ideal_channel_reports_all_ones(self):
        rep = MetricReport.from_metrics(
            {u: 1.0 for u in "xyz"}, {u: 1.0 for u in "xyz"}, fe_analytic=1.0
        )
        for field in (rep.Cx, rep.Cy, rep.Cz, rep.Fe, rep.Px, rep.Py, rep.Pz, rep.P):
            assert abs(field - 1.0) <= 1e-12

    def test_missing_axis_yields_nan_fe(self):
        rep = MetricReport.from_metrics({"x": 1.0}, {"x": 1.0})
        assert np.isnan(rep.Fe)
        assert rep.P == 1.0


def test_bloch_vector(rng):
    dev = random_deviation(rng, 1)
    vec = bloch_vector(dev)
    for i, axis in enumerate("xyz"):
        want = np.trace(pauli_deviation(axis).entries @ dev.entries).real
        assert vec[i] == pytest.approx(want, abs=1e-12)
    with pytest.raises(ValueError, match="one-qubit"):
        bloch_vector(DensityMatrix(np.eye(4) / 4))
