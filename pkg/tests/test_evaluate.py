import math

import numpy as np
import pytest

from biosketch import evaluate
from biosketch.errors import InsufficientDataError
from biosketch.evaluate import (
    SCENARIO_STOLEN_KEY,
    SCENARIO_ZERO_EFFORT,
    empirical_far,
    far_analytic,
    gar,
    gar_stats,
    gs_curve_csv,
    params_for_security,
    privacy_report,
    run_gs_curve,
)
from biosketch.pipeline import PipelineConfig
from biosketch.synth import gen_population


@pytest.fixture(scope="module")
def small_dataset():
    return gen_population(6, 8, 16, 16, 1.0, 0.2, seed=42)


SMALL_CFG = PipelineConfig(m=3, k_symbols=1, out_dim=64, seed=5)


class TestParamsForSecurity:
    @pytest.mark.parametrize("m,security,k,rate", [
        (5, 100, 20, 100 / 155),
        (6, 53, 9, 54 / 378),
        (7, 100, 14, 98 / 889),
        (6, 80, 13, 78 / 378),
    ])
    def test_plans(self, m, security, k, rate):
        plan = params_for_security(m, security)
        assert plan.k_symbols == k
        assert plan.rate == pytest.approx(rate)
        assert plan.security_bits == k * m
        assert plan.nominal_security == security

    def test_full_rate_boundary(self):
        plan = params_for_security(3, 21)
        assert plan.k_symbols == plan.n_symbols == 7
        assert plan.rate == 1.0
        assert plan.t == 0

    def test_security_too_high(self):
        with pytest.raises(ValueError):
            params_for_security(3, 22)
        with pytest.raises(ValueError):
            params_for_security(5, 0)

    def test_lengths_per_symbol_size(self):
        for m, n_bits in ((5, 155), (6, 378), (7, 889)):
            plan = params_for_security(m, 10)
            assert plan.n_bits == n_bits
            assert plan.n_symbols == (1 << m) - 1


class TestFarAnalytic:
    def test_halves_per_bit(self):
        for k in (1, 10, 100, 500):
            assert far_analytic(k + 1) / far_analytic(k) == pytest.approx(0.5)

    def test_k_equals_n_value(self):
        assert far_analytic(21) == 2.0 ** -21

    def test_underflow_documented(self):
        assert far_analytic(3000) == 0.0


class TestGar:
    def test_zero_noise_perfect(self):
        ds = gen_population(5, 6, 16, 16, 1.0, 0.0, seed=3)
        assert gar(ds, SMALL_CFG) == 1.0

    @pytest.mark.parametrize("scheme,policy", [
        ("secure-sketch", "fallback"),
        ("fuzzy-commitment", "fallback"),
        ("fuzzy-commitment", "fail-deny"),
    ])
    def test_enrollment_probe_is_always_accepted(self, small_dataset, scheme, policy):
        cfg = PipelineConfig(m=3, k_symbols=2, scheme=scheme, policy=policy,
                             out_dim=64, seed=5)
        assert gar(small_dataset, cfg, probe_mode="enroll") == 1.0

    def test_fail_deny_ss_excludes_unenrollable(self):
        ds = gen_population(10, 8, 8, 8, 1.0, 0.1, seed=3)
        cfg = PipelineConfig(m=2, k_symbols=1, policy="fail-deny", out_dim=12, seed=5)
        st = gar_stats(ds, cfg, probe_mode="enroll")
        assert st.unenrollable > 0
        assert st.enrolled + st.unenrollable == 10
        assert st.rate == 1.0

    def test_stats_add_up(self, small_dataset):
        st = gar_stats(small_dataset, SMALL_CFG)
        assert 0.0 <= st.rate <= 1.0
        assert st.accepted <= st.probed
        # 8 samples: 4 enroll + 4 heldout per subject
        assert st.probed == 6 * 4

    def test_deterministic(self, small_dataset):
        assert gar_stats(small_dataset, SMALL_CFG) == gar_stats(small_dataset, SMALL_CFG)

    def test_probe_mode_validated(self, small_dataset):
        with pytest.raises(ValueError):
            gar(small_dataset, SMALL_CFG, probe_mode="banana")


class TestEmpiricalFar:
    def test_stolen_key_uniform_matches_analytic(self, small_dataset):
        trials = 30_000
        rate = empirical_far(small_dataset, SMALL_CFG, SCENARIO_STOLEN_KEY,
                             trials, seed=1)
        expect = 2.0 ** -3
        sigma = math.sqrt(expect * (1 - expect) / trials)
        assert abs(rate - expect) <= 3 * sigma

    def test_zero_effort_runs(self, small_dataset):
        rate = empirical_far(small_dataset, SMALL_CFG, SCENARIO_ZERO_EFFORT,
                             500, seed=2)
        assert 0.0 <= rate <= 1.0

    def test_dataset_impostor_bits(self, small_dataset):
        rate = empirical_far(small_dataset, SMALL_CFG, SCENARIO_STOLEN_KEY,
                             500, seed=3, impostor_bits="dataset")
        assert 0.0 <= rate <= 1.0

    def test_zero_trials_rejected(self, small_dataset):
        with pytest.raises(ValueError):
            empirical_far(small_dataset, SMALL_CFG, SCENARIO_STOLEN_KEY, 0, seed=1)

    def test_one_subject_rejected(self):
        ds = gen_population(1, 8, 16, 16, 1.0, 0.2, seed=4)
        with pytest.raises(InsufficientDataError):
            empirical_far(ds, SMALL_CFG, SCENARIO_STOLEN_KEY, 100, seed=1)

    def test_unknown_scenario(self, small_dataset):
        with pytest.raises(ValueError):
            empirical_far(small_dataset, SMALL_CFG, "replay", 100, seed=1)

    def test_deterministic(self, small_dataset):
        a = empirical_far(small_dataset, SMALL_CFG, SCENARIO_STOLEN_KEY, 300, seed=9)
        b = empirical_far(small_dataset, SMALL_CFG, SCENARIO_STOLEN_KEY, 300, seed=9)
        assert a == b

    def test_mismatched_probe_is_structurally_denied(self, small_dataset, rs_7_3):
        # a probe of the wrong length never raises out of the trial loop;
        # it simply contributes a denial
        from biosketch.evaluate import _try_accept
        from biosketch.sketch import enroll_ss

        record = enroll_ss(np.zeros(21, dtype=np.uint8), rs_7_3,
                           "fallback", bytes(16))
        assert _try_accept(np.zeros(20, dtype=np.uint8), record, rs_7_3) is False
        assert _try_accept(np.zeros(21, dtype=np.uint8), record, rs_7_3) is True


class TestGsCurve:
    def test_far_analytic_column(self, small_dataset):
        points = run_gs_curve(small_dataset, SMALL_CFG, [1, 2, 7])
        assert [p.security_bits for p in points] == [3, 6, 21]
        assert points[-1].far_analytic == 2.0 ** -21  # K = N
        for a, b in zip(points, points[1:]):
            ratio = b.far_analytic / a.far_analytic
            assert ratio == pytest.approx(2.0 ** -(b.security_bits - a.security_bits))

    def test_csv_layout(self, small_dataset):
        points = run_gs_curve(small_dataset, SMALL_CFG, [2], far_trials=200, seed=4)
        text = gs_curve_csv(points)
        lines = text.strip().splitlines()
        assert lines[0] == ("m,K,security_bits,rate,gar,far_analytic,"
                            "far_empirical,scheme,policy,scenario")
        fields = lines[1].split(",")
        assert fields[0] == "3" and fields[1] == "2" and fields[2] == "6"
        assert fields[7] == "secure-sketch"

    def test_byte_identical_across_runs(self, small_dataset):
        runs = [
            gs_curve_csv(run_gs_curve(small_dataset, SMALL_CFG, [1, 2],
                                      far_trials=300, seed=11))
            for _ in range(2)
        ]
        assert runs[0] == runs[1]

    def test_empty_far_column_without_trials(self, small_dataset):
        text = gs_curve_csv(run_gs_curve(small_dataset, SMALL_CFG, [1]))
        assert ",,secure-sketch" in text.splitlines()[1]


class TestGoldenCurve:
    """Pinned synthetic run: 50 subjects x 20 pairs, m=5, secure sketch.

    The GAR values were computed once from the deterministic pipeline and
    frozen; any change is a behavioral regression, not noise.
    """

    DATASET_ARGS = dict(num_subjects=50, samples_per_subject=20, d_face=64,
                        d_iris=64, between_std=1.0, within_std=0.35,
                        seed=20260811)
    CONFIG = PipelineConfig(m=5, k_symbols=16, out_dim=1024, seed=101)
    EXPECTED = {11: 0.572, 16: 0.466, 20: 0.396}

    def test_golden_gar_values(self):
        ds = gen_population(**self.DATASET_ARGS)
        points = run_gs_curve(ds, self.CONFIG, sorted(self.EXPECTED))
        for point in points:
            assert point.gar == self.EXPECTED[point.k_symbols]

    def test_gar_decreases_with_security(self):
        ds = gen_population(**self.DATASET_ARGS)
        points = run_gs_curve(ds, self.CONFIG, [11, 16, 20])
        gars = [p.gar for p in points]
        assert gars == sorted(gars, reverse=True)


class TestPrivacyReport:
    def test_documented_values(self):
        report = privacy_report(4096, 155)
        assert report.residual_bits == 3941
        assert report.max_leakage_bits == 155
        assert report.feature_bits == 4096

    def test_other_code_length(self):
        assert privacy_report(4096, 378).residual_bits == 3718

    def test_zero_exposure(self):
        report = privacy_report(4096, 0)
        assert report.residual_bits == 4096
        assert report.max_leakage_bits == 0

    def test_invalid(self):
        with pytest.raises(ValueError):
            privacy_report(100, 101)
        with pytest.raises(ValueError):
            privacy_report(0, 0)
