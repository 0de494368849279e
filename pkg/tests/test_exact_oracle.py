import math

import numpy as np
import pytest

from delinscap.core import ChannelParams
from delinscap import analytic_bounds as ab
from delinscap import exact_oracle as oracle


class TestChannelLaw:
    def test_single_bit_law(self):
        law = oracle.enumerate_channel_law("0", ChannelParams(d=0.3, i=0.2, alpha=0.5))
        assert law[""] == pytest.approx(0.3, abs=1e-15)
        assert law["0"] == pytest.approx(0.5, abs=1e-15)
        assert law["00"] == pytest.approx(0.1, abs=1e-15)
        assert law["01"] == pytest.approx(0.1, abs=1e-15)

    def test_point_mass_for_identity(self):
        law = oracle.enumerate_channel_law("0110", ChannelParams())
        assert law == {"0110": 1.0}

    def test_normalization_random_input(self):
        rng = np.random.default_rng(4)
        x = rng.integers(0, 2, size=8).astype(np.uint8)
        law = oracle.enumerate_channel_law(x, ChannelParams(d=0.25, i=0.2, alpha=0.4))
        assert math.fsum(law.values()) == pytest.approx(1.0, abs=1e-12)

    def test_mean_output_length(self):
        p = ChannelParams(d=0.3, i=0.2, alpha=0.6)
        law = oracle.enumerate_channel_law("01011010", p)
        mean = math.fsum(len(y) * v for y, v in law.items())
        assert mean == pytest.approx(8 * (1.0 - p.d + p.i), abs=1e-12)

    def test_refuses_large_inputs(self):
        with pytest.raises(ValueError, match="12"):
            oracle.enumerate_channel_law("0" * 13, ChannelParams(d=0.1))


class TestCascadeEquivalence:
    def test_combined_params(self):
        worst = oracle.cascade_equivalence_check(6, ChannelParams(d=0.2, i=0.1, alpha=0.8))
        assert worst <= 1e-12

    def test_deletion_only_exact(self):
        worst = oracle.cascade_equivalence_check(5, ChannelParams(d=0.35, i=0.0))
        assert worst <= 1e-14

    def test_insertion_only_exact(self):
        worst = oracle.cascade_equivalence_check(5, ChannelParams(d=0.0, i=0.3, alpha=0.5))
        assert worst <= 1e-14

    def test_subset_path_for_n9(self):
        # n >= 9 samples a fixed pseudorandom subset of 64 inputs
        worst = oracle.cascade_equivalence_check(9, ChannelParams(d=0.15, i=0.1, alpha=0.7), seed=5)
        assert worst <= 1e-12

    def test_n_limit(self):
        with pytest.raises(ValueError):
            oracle.cascade_equivalence_check(11, ChannelParams(d=0.1, i=0.1, alpha=0.5))


class TestExactRunLaw:
    def test_deletion_binomial(self):
        table = oracle.exact_run_law(3, ChannelParams(d=0.4), "deletion")
        row = table[2]
        assert row[0] == pytest.approx(0.16, abs=1e-15)
        assert row[1] == pytest.approx(0.48, abs=1e-15)
        assert row[2] == pytest.approx(0.36, abs=1e-15)

    def test_duplication_single_bit(self):
        table = oracle.exact_run_law(2, ChannelParams(i=0.15, alpha=1.0), "insertion")
        assert table[1][1] == pytest.approx(0.85, abs=1e-15)
        assert table[1][2] == pytest.approx(0.15, abs=1e-15)

    def test_delins_matches_formula(self):
        p = ChannelParams(d=0.2, i=0.25, alpha=0.3)
        table = oracle.exact_run_law(3, p, "delins")
        for r, row in table.items():
            ref = ab.delins_run_law_row(r, p.d, p.i)
            assert np.abs(row - ref).max() <= 1e-12

    def test_all_three_kinds_match_formulas_to_r8(self):
        d, i, a = 0.3, 0.2, 0.6
        table = oracle.exact_run_law(8, ChannelParams(d=d), "deletion")
        assert max(np.abs(table[r] - ab.deletion_run_law_row(r, d)).max() for r in table) <= 1e-12
        table = oracle.exact_run_law(8, ChannelParams(i=i, alpha=a), "insertion")
        assert max(np.abs(table[r] - ab.duplication_run_law_row(r, i)).max() for r in table) <= 1e-12
        table = oracle.exact_run_law(8, ChannelParams(d=d, i=i, alpha=a), "delins")
        assert max(np.abs(table[r] - ab.delins_run_law_row(r, d, i)).max() for r in table) <= 1e-12

    def test_refuses_large_runs(self):
        with pytest.raises(ValueError):
            oracle.exact_run_law(11, ChannelParams(d=0.1), "deletion")


class TestDecomposition:
    def test_deletion_identity(self):
        chk = oracle.exact_decomposition_check(6, 0.5, ChannelParams(d=0.3), "deletion")
        assert chk.residual <= 1e-10
        assert chk.mass_error <= 1e-12

    def test_delins_identity(self):
        chk = oracle.exact_decomposition_check(5, 0.5, ChannelParams(d=0.15, i=0.15, alpha=0.8), "delins")
        assert chk.residual <= 1e-10

    def test_insertion_identity(self):
        chk = oracle.exact_decomposition_check(5, 0.6, ChannelParams(i=0.25, alpha=0.7), "insertion")
        assert chk.residual <= 1e-10

    def test_identity_channel_degenerate(self):
        chk = oracle.exact_decomposition_check(4, 0.5, ChannelParams(), "delins")
        assert chk.residual == 0.0
        assert chk.h_aux_given_xy == 0.0

    def test_conditioning_reduces_entropy(self):
        chk = oracle.exact_decomposition_check(5, 0.5, ChannelParams(d=0.3), "deletion")
        assert chk.h_x_aux_given_y >= chk.h_x_given_y >= 0.0
