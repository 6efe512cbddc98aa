"""Quasi-Monte-Carlo full-body volume tests.

Analytic oracles, re-derived by hand:

* real base volume = 2^4 * 2^6 * Gamma(5/2)^4 / Gamma(10) = pi^2/1120
  (Dirichlet integral of (abcd)^{3/2} over the probability simplex);
* real refine1 = pi^2 (16 + pi^2)/35840: substituting
  rho_01 = sqrt(ab) sin(alpha), rho_13 = sqrt(bd) sin(beta) turns the
  one-sided narrowed width into sqrt(ad)(1 + cos(alpha - beta)) and the
  angular integral gives the (16 + pi^2)/32 base-width fraction;
* real refine2 = pi^4/26880: both two-sided minor widths contribute
  cos(alpha) factors, giving the (pi^2/6)/8 fraction;
* complex base volume = 2^7 * 4^6 (pi/4)^6 Gamma(4)^4/Gamma(16)
  = pi^6/7882875.
"""

import math

import numpy as np
import pytest

from bloch_atlas import fullspace as fs


class TestClosedForms:
    def test_dirichlet_oracle(self):
        dirichlet = math.gamma(2.5) ** 4 / math.gamma(10.0)
        assert fs.closed_form_base_real() == pytest.approx(
            2 ** 4 * 2 ** 6 * dirichlet, rel=1e-15)
        assert fs.closed_form_base_real() == pytest.approx(
            math.pi ** 2 / 1120.0, rel=1e-15)

    def test_complex_base_target(self):
        dirichlet = math.gamma(4.0) ** 4 / math.gamma(16.0)
        want = 2 ** 7 * 4 ** 6 * (math.pi / 4) ** 6 * dirichlet
        assert fs.target_volume("complex", "base") == pytest.approx(
            want, rel=1e-12)

    def test_reference_constants(self):
        ref = fs.reference_constants()
        assert set(ref) == {
            "real_hs_volume", "complex_hs_volume",
            "conjectured_separable_probability", "ppt_real", "ppt_complex"}
        assert ref["real_hs_volume"] == pytest.approx(0.0016106, abs=5e-8)
        assert ref["complex_hs_volume"] == pytest.approx(1.12925e-6,
                                                         rel=1e-5)
        assert ref["conjectured_separable_probability"] == pytest.approx(
            0.242379, abs=5e-7)
        assert ref["ppt_real"] == pytest.approx(0.00548249, abs=5e-9)
        # the relaxation overestimates the true real volume by 54/pi^2
        assert ref["real_hs_volume"] / fs.closed_form_base_real() == \
            pytest.approx(math.pi ** 2 / 54, rel=1e-12)

    def test_crude_probability_ratios(self):
        assert fs.target_volume("real", "ppt") / \
            fs.target_volume("real", "base") == pytest.approx(
                0.622151, abs=5e-7)
        assert fs.target_volume("complex", "ppt") / \
            fs.target_volume("complex", "base") == pytest.approx(
                1964 / 3861, rel=1e-12)

    def test_unrecorded_targets_are_none(self):
        assert fs.target_volume("complex", "refine1") is None
        assert fs.target_volume("complex", "refine2") is None


class TestEstimator:
    @pytest.mark.parametrize("case,cons", [
        ("real", "base"), ("real", "ppt"),
        ("real", "refine1"), ("real", "refine2"),
        ("complex", "base"), ("complex", "ppt"),
    ])
    def test_targets_within_three_sigma(self, case, cons):
        est = fs.minor_volume(fs.MinorConstraintSet(case, cons),
                              2 ** 16, seed=7)
        assert abs(est.z_score(fs.target_volume(case, cons))) < 3.0
        assert est.standard_error > 0.0

    def test_deterministic_and_parallel_identical(self):
        cset = fs.MinorConstraintSet("real", "base")
        a = fs.minor_volume(cset, 2 ** 14, seed=5)
        b = fs.minor_volume(cset, 2 ** 14, seed=5)
        c = fs.minor_volume(cset, 2 ** 14, seed=5, parallel=2)
        assert a == b == c

    def test_sample_count_rounded_to_streams(self):
        est = fs.minor_volume(fs.MinorConstraintSet("real", "base"),
                              10 ** 4, seed=1)
        assert est.samples % fs.N_STREAMS == 0
        assert est.samples >= 10 ** 4

    @pytest.mark.parametrize("case", ["real", "complex"])
    def test_nesting_per_shared_stream(self, case):
        means = {cons: fs._stream_mean((case, cons, 2048, 11, 0, "sobol"))
                 for cons in fs.CONSTRAINT_SETS}
        assert means["ppt"] <= means["base"]
        assert means["refine2"] <= means["refine1"] <= means["base"]

    def test_plain_mc_error_scaling(self):
        ratios = []
        for seed in (3, 4, 5):
            small = fs.minor_volume(fs.MinorConstraintSet("real", "ppt"),
                                    2 ** 15, seed, method="plain")
            large = fs.minor_volume(fs.MinorConstraintSet("real", "ppt"),
                                    2 ** 16, seed, method="plain")
            ratios.append(small.standard_error / large.standard_error)
        assert np.mean(ratios) == pytest.approx(math.sqrt(2), rel=0.2)

    def test_sobol_beats_plain(self):
        cset = fs.MinorConstraintSet("real", "base")
        qmc_est = fs.minor_volume(cset, 2 ** 16, seed=9)
        mc_est = fs.minor_volume(cset, 2 ** 16, seed=9, method="plain")
        assert qmc_est.standard_error < mc_est.standard_error

    def test_validation(self):
        with pytest.raises(ValueError):
            fs.MinorConstraintSet("quaternionic", "base")
        with pytest.raises(ValueError):
            fs.MinorConstraintSet("real", "refine3")
        with pytest.raises(ValueError):
            fs.minor_volume(fs.MinorConstraintSet("real", "base"),
                            100, seed=0)
        with pytest.raises(ValueError):
            fs.minor_volume(fs.MinorConstraintSet("real", "base"),
                            10 ** 4, seed=0, method="halton")

    def test_json_shape(self):
        est = fs.minor_volume(fs.MinorConstraintSet("complex", "ppt"),
                              10 ** 4, seed=2)
        record = est.to_json_dict()
        assert list(record.keys()) == [
            "mean", "standard_error", "samples", "seed", "normalization"]
        assert record["normalization"] == 2.0 ** 7
