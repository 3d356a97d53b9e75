import math

import numpy as np
import pytest

from iskennedy import (
    DetectorModel,
    UndefinedProblemError,
    design_at_optimal_beta,
    detected_count_pmf,
    exact_saturation_floor,
    map_error_imperfect,
    optimal_threshold,
    p_err_ideal,
    p_err_imperfect,
    poisson_pmf,
    saturation_floor,
)
from iskennedy.receiver_imperfect import apply_detector_to_pmf


class TestDetectorModel:
    @pytest.mark.parametrize("eta,nu,M", [(0.0, 0.0, 1), (1.2, 0.0, 1), (0.5, -1e-3, 1), (0.5, 0.0, 0)])
    def test_validation(self, eta, nu, M):
        with pytest.raises(ValueError):
            DetectorModel(eta=eta, nu=nu, M=M)


class TestDetectedCountPmf:
    def test_dark_free_symbol0(self):
        det = DetectorModel(eta=0.8, nu=0.0, M=4)
        dist = detected_count_pmf(design_at_optimal_beta(1.0), det, 0)
        np.testing.assert_allclose(dist.probs, [1, 0, 0, 0, 0], atol=0)

    def test_dark_counts_only(self):
        det = DetectorModel(eta=1.0, nu=0.01, M=2)
        dist = detected_count_pmf(design_at_optimal_beta(1.0), det, 0)
        assert dist.probs[0] == pytest.approx(math.exp(-0.01), rel=1e-14)

    def test_efficiency_scales_the_mean(self):
        design = design_at_optimal_beta(1.0)
        full = detected_count_pmf(design, DetectorModel(eta=1.0, nu=0.0, M=30), 1)
        half = detected_count_pmf(design, DetectorModel(eta=0.5, nu=0.0, M=30), 1)
        for n in range(10):
            assert half.probs[n] == pytest.approx(poisson_pmf(n, 4.0), rel=1e-12)
            assert full.probs[n] == pytest.approx(poisson_pmf(n, 8.0), rel=1e-12)


class TestOptimalThreshold:
    def test_on_off_limit(self):
        assert optimal_threshold(DetectorModel(eta=1.0, nu=0.0, M=7), 2.0) == 1
        assert optimal_threshold(DetectorModel(eta=1.0, nu=1e-13, M=7), 2.0) == 1

    def test_saturates_at_resolution(self):
        assert optimal_threshold(DetectorModel(eta=1.0, nu=1e-2, M=2), 110.0) == 2

    def test_worked_example(self):
        # ceil(8 / (ln 8.01 - ln 0.01)) = ceil(8 / 6.685...) = 2
        det = DetectorModel(eta=1.0, nu=1e-2, M=10)
        assert optimal_threshold(det, 2.0) == 2

    def test_undefined_problem(self):
        with pytest.raises(UndefinedProblemError):
            optimal_threshold(DetectorModel(eta=1.0, nu=0.0, M=3), 0.0)

    def test_nondecreasing_staircase(self):
        det = DetectorModel(eta=0.9, nu=1e-2, M=10)
        values = [optimal_threshold(det, design_at_optimal_beta(N).n_eff)
                  for N in np.linspace(0.02, 3.0, 500)]
        assert all(b >= a for a, b in zip(values, values[1:]))
        assert values[-1] > values[0]  # actually climbs


class TestErrorProbability:
    def test_ideal_limit(self):
        det = DetectorModel(eta=1.0, nu=0.0, M=20)
        for N in (0.3, 1.0, 2.0):
            rule = p_err_imperfect(design_at_optimal_beta(N), det)
            assert rule.p_err == pytest.approx(p_err_ideal(N), rel=1e-12)

    def test_pure_loss_rescaling(self):
        det = DetectorModel(eta=0.5, nu=0.0, M=20)
        for N in (0.5, 1.0, 2.0):
            rule = p_err_imperfect(design_at_optimal_beta(N), det)
            assert rule.p_err == pytest.approx(0.5 * math.exp(-2.0 * N * (N + 1.0)), rel=1e-12)

    def test_high_energy_floor_example(self):
        det = DetectorModel(eta=1.0, nu=1e-2, M=2)
        rule = p_err_imperfect(design_at_optimal_beta(10.0), det)
        assert rule.p_err == pytest.approx(2.5e-5, rel=0.2)

    def test_map_equals_threshold(self):
        for N in (0.2, 0.8, 1.5, 3.0):
            for det in (DetectorModel(1.0, 1e-2, 4), DetectorModel(0.7, 1e-3, 2),
                        DetectorModel(0.5, 0.0, 1)):
                design = design_at_optimal_beta(N)
                rule = p_err_imperfect(design, det)
                assert map_error_imperfect(design, det) == pytest.approx(rule.p_err, abs=1e-14)

    def test_rates_are_poisson_tails(self):
        det = DetectorModel(eta=1.0, nu=5e-3, M=6)
        design = design_at_optimal_beta(1.0)
        rule = p_err_imperfect(design, det)
        mu1 = 4.0 * design.n_eff + det.nu
        fa = sum(poisson_pmf(n, det.nu) for n in range(rule.threshold, 200))
        mi = sum(poisson_pmf(n, mu1) for n in range(0, rule.threshold))
        assert rule.p_fa == pytest.approx(fa, abs=1e-13)
        assert rule.p_mi == pytest.approx(mi, abs=1e-13)


class TestSaturation:
    def test_formula_values(self):
        assert saturation_floor(1, 1e-3) == pytest.approx(5e-4, rel=1e-12)
        assert saturation_floor(3, 1e-2) == pytest.approx(1e-6 / 12.0, rel=1e-12)
        assert saturation_floor(2, 0.0) == 0.0

    @pytest.mark.parametrize("M", [1, 2, 3])
    @pytest.mark.parametrize("nu", [1e-3, 1e-2])
    def test_exact_vs_approximate_floor(self, M, nu):
        exact = exact_saturation_floor(M, nu)
        approx = saturation_floor(M, nu)
        assert exact == pytest.approx(approx, rel=0.2)

    def test_floor_converges_as_darks_vanish(self):
        ratios = [exact_saturation_floor(2, nu) / saturation_floor(2, nu)
                  for nu in (1e-2, 1e-3, 1e-4)]
        assert all(abs(r - 1.0) < abs(prev - 1.0) for prev, r in zip(ratios, ratios[1:]))
        assert abs(ratios[-1] - 1.0) < 1e-3

    def test_high_energy_error_reaches_floor(self):
        for M, nu in [(1, 1e-3), (2, 1e-2), (3, 1e-2)]:
            det = DetectorModel(eta=1.0, nu=nu, M=M)
            rule = p_err_imperfect(design_at_optimal_beta(10.0), det)
            assert rule.p_err == pytest.approx(exact_saturation_floor(M, nu), rel=1e-9)

    def test_floor_independent_of_efficiency(self):
        for M, nu in [(1, 1e-3), (2, 1e-2), (3, 1e-3)]:
            p_full = p_err_imperfect(design_at_optimal_beta(10.0), DetectorModel(1.0, nu, M)).p_err
            p_half = p_err_imperfect(design_at_optimal_beta(10.0), DetectorModel(0.5, nu, M)).p_err
            assert abs(p_full - p_half) / p_full < 0.01


class TestStaircaseKinks:
    def test_jumps_coincide_with_error_curve_kinks(self):
        det = DetectorModel(eta=1.0, nu=1e-2, M=10)
        grid = np.linspace(0.05, 2.5, 800)
        thresholds, p_errs = [], []
        for N in grid:
            design = design_at_optimal_beta(N)
            thresholds.append(optimal_threshold(det, design.n_eff))
            p_errs.append(p_err_imperfect(design, det).p_err)
        jumps = set(np.nonzero(np.diff(thresholds) != 0)[0])
        assert len(jumps) >= 3

        # Kinks: spikes of the discrete second derivative of log p_err.
        d2 = np.abs(np.diff(np.log(p_errs), 2))
        spike = d2 > 50.0 * np.median(d2)
        kink_idx = set(np.nonzero(spike)[0])
        # every jump produces a kink within one grid step
        for j in jumps:
            assert any(abs(j - k) <= 1 for k in kink_idx), f"jump at {grid[j]} has no kink"
        # and no kink occurs away from a jump
        for k in kink_idx:
            assert any(abs(j - k) <= 1 for j in jumps), f"kink at {grid[k + 1]} has no jump"


class TestDetectorComposition:
    def test_poisson_input_reproduces_closed_form(self):
        # Thinning a Poisson and adding Poisson darks must give Poisson(eta mu + nu).
        det = DetectorModel(eta=0.7, nu=5e-3, M=6)
        mu = 5.0
        composed = apply_detector_to_pmf(lambda k: poisson_pmf(k, mu), det)
        for n in range(det.M):
            assert composed.probs[n] == pytest.approx(
                poisson_pmf(n, det.eta * mu + det.nu), abs=1e-12)
        assert composed.probs.sum() == pytest.approx(1.0, abs=1e-12)
