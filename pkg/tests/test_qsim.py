import numpy as np
import pytest

from qrot.bitcore import Rng
from qrot.qsim import (ClickPattern, QsimError, ReportResult, SourceModel,
                       generate_round, multi_photon_estimate, report,
                       run_quantum_phase)


def _rng(i=0):
    return Rng.from_int(4000 + i)


class TestModel:
    def test_probability_domains(self):
        with pytest.raises(QsimError):
            SourceModel(p_err=0.5)
        with pytest.raises(QsimError):
            SourceModel(p_loss=-0.1)
        with pytest.raises(QsimError):
            SourceModel(p_double=1.5)


class TestGenerateRound:
    def test_noiseless_matching_always_agree(self):
        rng = _rng()
        model = SourceModel()
        for _ in range(5000):
            r = generate_round(model, rng)
            if r.alice_basis == r.bob_basis:
                assert r.bob_bit == r.alice_bit

    def test_qber_on_matching(self):
        rng = _rng(1)
        model = SourceModel(p_err=0.05)
        errs = tot = 0
        for _ in range(40000):
            r = generate_round(model, rng)
            if r.alice_basis == r.bob_basis and r.bob_pattern == ClickPattern.SINGLE:
                tot += 1
                errs += r.bob_bit != r.alice_bit
        sigma = (0.05 * 0.95 / tot) ** 0.5
        assert abs(errs / tot - 0.05) < 3 * sigma

    def test_mismatched_uniform_regardless_of_qber(self):
        rng = _rng(2)
        model = SourceModel(p_err=0.05)
        diff = tot = 0
        for _ in range(40000):
            r = generate_round(model, rng)
            if r.alice_basis != r.bob_basis:
                tot += 1
                diff += r.bob_bit != r.alice_bit
        assert abs(diff / tot - 0.5) < 3 * (0.25 / tot) ** 0.5

    def test_loss_yields_no_click(self):
        rng = _rng(3)
        r = generate_round(SourceModel(p_loss=1.0), rng)
        assert r.bob_pattern == ClickPattern.NONE


class TestReport:
    def test_single_passes_bit_through(self):
        assert report(ClickPattern.SINGLE, 1, _rng()) == (ReportResult.SUCCESS, 1)
        assert report(ClickPattern.SINGLE, 0, _rng()) == (ReportResult.SUCCESS, 0)

    def test_double_same_basis_random_bit(self):
        rng = _rng(4)
        ones = 0
        trials = 100000
        for _ in range(trials):
            res, bit = report(ClickPattern.DOUBLE_SAME_BASIS, 0, rng)
            assert res == ReportResult.SUCCESS_RANDOM
            ones += bit
        assert abs(ones / trials - 0.5) < 3 * (0.25 / trials) ** 0.5

    def test_other_and_none_fail(self):
        assert report(ClickPattern.OTHER, 1, _rng())[0] == ReportResult.FAILURE
        assert report(ClickPattern.NONE, 1, _rng())[0] == ReportResult.FAILURE


class TestMultiEstimate:
    def test_exact_ratio(self):
        assert multi_photon_estimate(300, 3) == pytest.approx(1 / 300)
        assert multi_photon_estimate(100, 0) == 0.0

    def test_errors(self):
        with pytest.raises(QsimError):
            multi_photon_estimate(0, 0)
        with pytest.raises(QsimError):
            multi_photon_estimate(10, 11)

    def test_monte_carlo_consistent_with_model(self):
        # undetected multi-photon count should be about a third of detected
        model = SourceModel(p_double=0.01)
        alice, bob = run_quantum_phase(model, 10 ** 6, _rng(5),
                                       adversarial_multi_view=True)
        est = multi_photon_estimate(alice.n_tot, alice.n_multi)
        undetected = int(bob.undetected_multi.sum())
        assert undetected == pytest.approx(est * alice.n_tot, rel=0.15)


class TestRunQuantumPhase:
    def test_exact_count_and_alignment(self):
        alice, bob = run_quantum_phase(SourceModel(), 5000, _rng(6))
        assert alice.theta.length == alice.x.length == 5000
        assert bob.theta.length == bob.x.length == 5000

    def test_noiseless_matching_positions_agree(self):
        alice, bob = run_quantum_phase(SourceModel(), 20000, _rng(7))
        match = alice.theta.bits() == bob.theta.bits()
        assert np.all(alice.x.bits()[match] == bob.x.bits()[match])
        # matched fraction within 3 binomial sigma of 1/2
        assert abs(match.mean() - 0.5) < 3 * (0.25 / 20000) ** 0.5

    def test_qber_estimator_converges(self):
        alice, bob = run_quantum_phase(SourceModel(p_err=0.03), 50000, _rng(8))
        match = alice.theta.bits() == bob.theta.bits()
        qber = (alice.x.bits()[match] != bob.x.bits()[match]).mean()
        n = int(match.sum())
        assert abs(qber - 0.03) < 3 * (0.03 * 0.97 / n) ** 0.5

    def test_loss_only_lengthens_run(self):
        alice, _ = run_quantum_phase(SourceModel(p_loss=0.9), 5000, _rng(9))
        assert alice.theta.length == 5000
        # geometric waiting time: n_tot counts only coincidences
        assert alice.n_tot == 5000

    def test_clean_source_has_no_multi(self):
        alice, _ = run_quantum_phase(SourceModel(), 5000, _rng(10))
        assert alice.n_multi == 0

    def test_multi_counters(self):
        alice, _ = run_quantum_phase(SourceModel(p_double=0.05), 50000, _rng(11))
        # detected fraction of coincidences ~ 0.05 * 0.75
        frac = alice.n_multi / alice.n_tot
        assert frac == pytest.approx(0.0375, abs=0.005)

    def test_deterministic_given_seed(self):
        a1, b1 = run_quantum_phase(SourceModel(p_err=0.02, p_loss=0.3), 3000, _rng(12))
        a2, b2 = run_quantum_phase(SourceModel(p_err=0.02, p_loss=0.3), 3000, _rng(12))
        assert a1.x == a2.x and b1.x == b2.x and a1.n_tot == a2.n_tot

    def test_views_share_nothing(self):
        alice, bob = run_quantum_phase(SourceModel(), 1000, _rng(13))
        assert not hasattr(bob, "n_multi")
        assert bob.undetected_multi is None  # honest mode hides multi tags
        assert {"theta", "x", "n_tot", "n_multi"} == set(vars(alice))

    def test_n0_positive(self):
        with pytest.raises(QsimError):
            run_quantum_phase(SourceModel(), 0, _rng(14))
