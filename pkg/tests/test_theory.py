import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bellshare.protocol import ProtocolParams, bilateral_state
from bellshare.quantum import SchmidtVector, correlation
from bellshare.theory import (
    PredictionReport,
    discrepancy_report,
    final_xx_correlation,
    final_zz_correlation,
    highd_first_term,
    highd_first_term_prediction,
    highd_zero_term,
    qubit_chsh_bound,
    qubit_chsh_prediction,
)
from conftest import S1, S3, random_weights

PI = math.pi
D4 = SchmidtVector.from_weights([0.4, 0.3, 0.2, 0.1])
D5 = SchmidtVector.from_weights([0.3, 0.25, 0.2, 0.15, 0.1])

thetas = st.floats(1e-6, PI / 4)
gammas = st.floats(0, 1)
corrs = st.floats(-1, 1)


class TestQubitFormulas:
    def test_xx_examples(self):
        assert final_xx_correlation(PI / 4, 0.0, 1.0) == pytest.approx(0.5, abs=1e-15)
        assert final_xx_correlation(PI / 4, 1.0, 1.0) == pytest.approx(0.25, abs=1e-15)
        assert final_xx_correlation(0.3, 0.4, 0.0) == 0.0

    def test_zz_examples(self):
        assert final_zz_correlation(PI / 4, 1.0) == pytest.approx(0.25, abs=1e-15)
        assert final_zz_correlation(PI / 6, 1.0) == pytest.approx(0.125, abs=1e-15)
        assert final_zz_correlation(0.3, 0.0) == 0.0

    def test_prediction_examples(self):
        assert qubit_chsh_prediction(PI / 4, 1.0, 1.0, 1.0) == pytest.approx(0.707107, abs=1e-6)
        assert qubit_chsh_prediction(PI / 4, 1.0, 1.0, 0.0) == pytest.approx(0.353553, abs=1e-6)
        for theta in (0.1, 0.4, PI / 4):
            assert qubit_chsh_prediction(theta, 0.0, 1.0, 0.7) == pytest.approx(2 * math.cos(theta) ** 3, abs=1e-15)

    def test_bound_examples(self):
        assert qubit_chsh_bound(PI / 4) == pytest.approx(1.060660, abs=1e-6)
        assert qubit_chsh_bound(PI / 6) == pytest.approx(1.424038, abs=1e-6)
        assert 1.999996 < qubit_chsh_bound(0.001) < 2.0

    def test_bound_strictly_decreasing(self):
        grid = np.linspace(PI / 4 / 1000, PI / 4, 1000)
        values = np.array([qubit_chsh_bound(t) for t in grid])
        assert np.all(np.diff(values) < 0)
        assert values.max() < 2.0

    @pytest.mark.parametrize(
        "call",
        [
            lambda: final_xx_correlation(0.0, 0.5, 0.5),
            lambda: final_xx_correlation(0.9, 0.5, 0.5),
            lambda: final_xx_correlation(0.3, -0.1, 0.5),
            lambda: final_xx_correlation(0.3, 0.5, 1.5),
            lambda: final_zz_correlation(0.3, -1.01),
            lambda: qubit_chsh_prediction(0.3, 1.2, 0.0, 0.0),
            lambda: qubit_chsh_bound(-0.1),
            lambda: highd_first_term_prediction(2, 0.3, 0.5, SchmidtVector.uniform(2)),
        ],
    )
    def test_domain_errors(self, call):
        with pytest.raises(ValueError):
            call()

    @settings(max_examples=50, deadline=None)
    @given(thetas, gammas, corrs, corrs)
    def test_prediction_below_bound(self, theta, gamma1, t11, t33):
        assert qubit_chsh_prediction(theta, gamma1, t11, t33) <= qubit_chsh_bound(theta) + 1e-12

    @settings(max_examples=40, deadline=None)
    @given(thetas, gammas, st.floats(0.5, 1.0))
    def test_simulation_matches_formulas(self, theta, gamma1, w1):
        p = ProtocolParams(2, SchmidtVector.from_weights([w1, 1 - w1]), theta, gamma1)
        rho1, rho2 = p.initial_state(), bilateral_state(p)
        t11, t33 = correlation(rho1, S1, S1), correlation(rho1, S3, S3)
        assert correlation(rho2, S1, S1) == pytest.approx(final_xx_correlation(theta, gamma1, t11), abs=1e-10)
        assert correlation(rho2, S3, S3) == pytest.approx(final_zz_correlation(theta, t33), abs=1e-10)


class TestHighdPrediction:
    def test_d4_example(self):
        value = highd_first_term_prediction(4, PI / 6, 0.8, D4)
        assert value == pytest.approx(0.28990381056766595, abs=1e-12)
        assert value == pytest.approx(0.289904, abs=1e-6)

    def test_d3_single_coefficient(self):
        c = SchmidtVector((1.0, 0.0, 0.0))
        for theta, gamma1 in ((0.2, 0.1), (PI / 4, 1.0)):
            assert highd_first_term_prediction(3, theta, gamma1, c) == pytest.approx(2 * math.cos(theta) ** 3, abs=1e-15)

    def test_d5_example(self):
        assert highd_first_term_prediction(5, PI / 6, 0.8, D5) == pytest.approx(0.464952, abs=1e-6)

    def test_short_vector_is_padded(self):
        c = SchmidtVector.uniform(2)
        assert highd_first_term_prediction(4, 0.3, 0.5, c) == pytest.approx(0.0, abs=1e-15)


class TestZeroTerm:
    def test_d3_random(self, rng):
        p = ProtocolParams(3, SchmidtVector.from_weights(random_weights(3, rng)), PI / 5, 0.7)
        assert abs(highd_zero_term(p)) <= 1e-10

    def test_d8_uniform_sharp(self):
        p = ProtocolParams(8, SchmidtVector.uniform(8), PI / 4, 1.0)
        assert abs(highd_zero_term(p)) <= 1e-10

    def test_disjoint_support_vanishes_to_rounding(self):
        # analytically zero; only Lüders-root rounding survives
        p = ProtocolParams(4, SchmidtVector((1.0, 0.0, 0.0, 0.0)), 0.4, 0.6)
        assert abs(highd_zero_term(p)) <= 1e-15

    def test_rejects_qubits(self):
        with pytest.raises(ValueError):
            highd_zero_term(ProtocolParams(2, SchmidtVector.uniform(2), 0.3, 0.3))

    @pytest.mark.parametrize("d", [3, 4, 5, 6, 7, 8])
    def test_zero_and_first_term_bound(self, d, rng):
        for _ in range(4):
            p = ProtocolParams(
                d, SchmidtVector.from_weights(random_weights(d, rng)), rng.uniform(1e-3, PI / 4), rng.uniform(0, 1)
            )
            rho2 = bilateral_state(p)
            assert abs(highd_zero_term(p, rho2)) <= 1e-10
            assert highd_first_term(p, rho2) <= 2 + 1e-9


class TestDiscrepancyReport:
    def test_d4_all_paths_agree(self):
        rep = discrepancy_report(ProtocolParams(4, D4, PI / 6, 0.8))
        for value in (rep.simulated, rep.closed_form, rep.dual_oracle):
            assert value == pytest.approx(0.28990381056766595, abs=1e-10)
        assert rep.delta_sim_closed <= 1e-10 and rep.delta_sim_dual <= 1e-10

    def test_d5_closed_form_disagrees(self):
        rep = discrepancy_report(ProtocolParams(5, D5, PI / 6, 0.8))
        assert rep.simulated == pytest.approx(0.5449519052838332, abs=1e-10)
        assert rep.simulated == pytest.approx(0.544952, abs=1e-6)
        assert rep.dual_oracle == pytest.approx(rep.simulated, abs=1e-10)
        assert rep.closed_form == pytest.approx(0.464952, abs=1e-6)
        assert rep.delta_sim_closed == pytest.approx(0.08, abs=1e-9)

    def test_d3_single_coefficient_agrees(self):
        theta = 0.5
        rep = discrepancy_report(ProtocolParams(3, SchmidtVector((1.0, 0.0, 0.0)), theta, 0.4))
        assert rep.simulated == pytest.approx(2 * math.cos(theta) ** 3, abs=1e-12)
        assert rep.delta_sim_closed <= 1e-12

    def test_deltas_are_absolute_differences(self, rng):
        rep = discrepancy_report(ProtocolParams(5, SchmidtVector.from_weights(random_weights(5, rng)), 0.6, 0.3))
        assert rep.delta_sim_closed == abs(rep.simulated - rep.closed_form)
        assert rep.delta_sim_dual == abs(rep.simulated - rep.dual_oracle)

    @pytest.mark.parametrize("d", [3, 4, 5, 6])
    def test_two_simulation_paths_agree(self, d, rng):
        for _ in range(5):
            p = ProtocolParams(
                d, SchmidtVector.from_weights(random_weights(d, rng)), rng.uniform(1e-3, PI / 4), rng.uniform(0, 1)
            )
            rep = discrepancy_report(p)
            assert rep.delta_sim_dual <= 1e-10
            if d == 4:
                assert rep.delta_sim_closed <= 1e-10

    def test_row_serialization(self):
        row = discrepancy_report(ProtocolParams(4, D4, PI / 6, 0.8)).as_row()
        assert tuple(row) == PredictionReport.CSV_COLUMNS
        assert row["d"] == 4 and len(row["c_spec"]) == 4

    def test_rejects_qubits(self):
        with pytest.raises(ValueError):
            discrepancy_report(ProtocolParams(2, SchmidtVector.uniform(2), 0.3, 0.3))
