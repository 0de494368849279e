import math

import numpy as np
import pytest

from delinscap.core import ChannelParams, MarkovSourceParams, bits_from_str, bits_to_str, generate_markov_sequence, to_runs
from delinscap.channel_sim import (
    Action,
    apply_cascade,
    apply_deletion,
    apply_delins,
    apply_insertion,
    apply_pattern,
    augment_with_deleted_runs,
    flip_complementary,
)
from delinscap.exact_oracle import enumerate_channel_law, reference_apply

K, D, P, C = Action.KEEP, Action.DELETE, Action.DUPLICATE, Action.COMPLEMENT


class TestWorkedExamples:
    def test_tail_runs_deleted(self):
        # delete the last six bits of 000111000: two whole runs disappear at the end
        out = apply_pattern(bits_from_str("000111000"), [K, K, K, D, D, D, D, D, D])
        assert bits_to_str(out.y) == "000"
        assert out.aux.s_counts.tolist() == [0, 0, 0, 2]

    def test_interior_run_deleted(self):
        out = apply_pattern(bits_from_str("000111000"), [K, K, D, D, D, D, D, D, K])
        assert bits_to_str(out.y) == "000"
        assert out.aux.s_counts.tolist() == [0, 0, 1, 0]

    def test_partial_survivors(self):
        # keep bits 1, 2, 4, 7 (1-based): every run keeps a survivor
        out = apply_pattern(bits_from_str("000111000"), [K, K, D, K, D, D, K, D, D])
        assert bits_to_str(out.y) == "0010"
        assert out.aux.s_counts.tolist() == [0] * 5

    def test_insertion_example(self):
        # two complementary insertions and one duplication on 000111000
        actions = [K, C, K, K, K, C, K, K, P]
        out = apply_pattern(bits_from_str("000111000"), actions)
        assert bits_to_str(out.y) == "001011100000"
        assert out.aux.t_flags.tolist() == [0, 0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0]
        assert out.aux.i_flags.tolist() == [0, 0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 1]
        assert out.aux.s_counts.tolist() == [0] * 13

        flipped = flip_complementary(out.y, out.aux.t_flags)
        assert bits_to_str(flipped) == "000011110000"
        assert to_runs(flipped).num_runs == 3

    def test_all_deleted(self):
        out = apply_pattern(bits_from_str("0101"), [D, D, D, D])
        assert out.m == 0
        assert out.aux.s_counts.tolist() == [4]

    def test_identity_channel(self):
        x = bits_from_str("0110100")
        out = apply_delins(x, ChannelParams(), seed=3)
        assert np.array_equal(out.y, x)
        assert not out.aux.i_flags.any()
        assert not out.aux.t_flags.any()
        assert not out.aux.s_counts.any()

    def test_d_one_rejected(self):
        with pytest.raises(ValueError):
            apply_deletion(bits_from_str("010"), 1.0, seed=0)


class TestFlip:
    def test_all_zero_t(self):
        y = bits_from_str("0110")
        assert np.array_equal(flip_complementary(y, np.zeros(4, np.uint8)), y)

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            flip_complementary(bits_from_str("01"), np.zeros(3, np.uint8))

    def test_single_comp_in_single_run(self):
        out = apply_pattern(bits_from_str("1111"), [K, C, K, K])
        flipped = flip_complementary(out.y, out.aux.t_flags)
        assert to_runs(flipped).num_runs == 1


class TestAugment:
    def test_two_tail_markers(self):
        runs = augment_with_deleted_runs(bits_from_str("000"), [0, 0, 0, 2])
        assert runs.lengths == (3, 0, 0)
        assert runs.first_bit == 0

    def test_all_zero_s(self):
        runs = augment_with_deleted_runs(bits_from_str("00100"), [0] * 6)
        assert runs == to_runs(bits_from_str("00100"))

    def test_split_run(self):
        runs = augment_with_deleted_runs(bits_from_str("00"), [0, 1, 0])
        assert runs.lengths == (1, 0, 1)
        assert runs.first_bit == 0

    def test_leading_marker_flips_first_bit(self):
        runs = augment_with_deleted_runs(bits_from_str("000"), [1, 0, 0, 0])
        assert runs.first_bit == 1
        assert runs.lengths == (0, 3)

    def test_parity_violations(self):
        with pytest.raises(ValueError):
            augment_with_deleted_runs(bits_from_str("01"), [0, 1, 0])
        with pytest.raises(ValueError):
            augment_with_deleted_runs(bits_from_str("00"), [0, 2, 0])

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            augment_with_deleted_runs(bits_from_str("01"), [0, 0])

    def test_empty_output(self):
        runs = augment_with_deleted_runs(np.zeros(0, np.uint8), [3])
        assert runs.lengths == (0, 0, 0)


class TestRealizationInvariants:
    def test_bookkeeping_over_random_realizations(self):
        src = MarkovSourceParams(0.6)
        params = ChannelParams(d=0.2, i=0.15, alpha=0.7)
        rng = np.random.default_rng(12)
        for trial in range(10 ** 4):
            n = int(rng.integers(1, 26))
            x = generate_markov_sequence(src, n, seed=int(rng.integers(2 ** 32)))
            out = apply_delins(x, params, seed=int(rng.integers(2 ** 32)))
            pat = out.pattern
            n_del = int((pat == Action.DELETE).sum())
            n_ins = int(((pat == Action.DUPLICATE) | (pat == Action.COMPLEMENT)).sum())
            assert out.m == n - n_del + n_ins
            # T marks a subset of I, and insertions are never adjacent
            assert np.all(out.aux.t_flags <= out.aux.i_flags)
            assert int(out.aux.i_flags.sum()) == n_ins
            if out.m > 1:
                assert not np.any(out.aux.i_flags[1:] & out.aux.i_flags[:-1])
            assert int(out.aux.s_counts.sum()) <= to_runs(x).num_runs
            # augmenting the flipped output restores one slot per input run
            flipped = flip_complementary(out.y, out.aux.t_flags)
            aug = augment_with_deleted_runs(flipped, out.aux.s_counts)
            assert aug.num_runs == to_runs(x).num_runs

    def test_insertion_only_flip_preserves_run_count(self):
        src = MarkovSourceParams(0.5)
        rng = np.random.default_rng(77)
        for _ in range(2000):
            n = int(rng.integers(1, 40))
            x = generate_markov_sequence(src, n, seed=int(rng.integers(2 ** 32)))
            out = apply_insertion(x, 0.3, 0.4, seed=int(rng.integers(2 ** 32)))
            assert not out.aux.s_counts.any()
            flipped = flip_complementary(out.y, out.aux.t_flags)
            assert to_runs(flipped).num_runs == to_runs(x).num_runs

    def test_duplications_never_create_runs(self):
        rng = np.random.default_rng(5)
        for _ in range(500):
            n = int(rng.integers(1, 40))
            x = generate_markov_sequence(MarkovSourceParams(0.5), n, seed=int(rng.integers(2 ** 32)))
            out = apply_insertion(x, 0.4, 1.0, seed=int(rng.integers(2 ** 32)))
            assert to_runs(out.y).num_runs == to_runs(x).num_runs

    def test_matches_reference_semantics(self):
        rng = np.random.default_rng(2024)
        for _ in range(10 ** 4):
            n = int(rng.integers(1, 18))
            x = rng.integers(0, 2, size=n).astype(np.uint8)
            actions = rng.integers(0, 4, size=n).astype(np.int8)
            out = apply_pattern(x, actions)
            y, i_fl, t_fl, s = reference_apply(x.tolist(), actions.tolist())
            assert out.y.tolist() == y
            assert out.aux.i_flags.tolist() == i_fl
            assert out.aux.t_flags.tolist() == t_fl
            assert out.aux.s_counts.tolist() == s

    def test_action_frequencies(self):
        params = ChannelParams(d=0.25, i=0.2, alpha=0.6)
        x = generate_markov_sequence(MarkovSourceParams(0.5), 10 ** 6, seed=31)
        out = apply_delins(x, params, seed=32)
        n = x.size
        expected = {
            Action.DELETE: 0.25,
            Action.KEEP: 0.55,
            Action.DUPLICATE: 0.12,
            Action.COMPLEMENT: 0.08,
        }
        for act, p in expected.items():
            freq = float((out.pattern == act).mean())
            assert abs(freq - p) <= 3 * math.sqrt(p * (1 - p) / n)


class TestCascade:
    def test_i_zero_matches_deletion_law(self):
        x = bits_from_str("01101")
        params = ChannelParams(d=0.3, i=0.0)
        counts_a, counts_b = {}, {}
        for t in range(4000):
            ya = bits_to_str(apply_cascade(x, params, seed=t).y)
            yb = bits_to_str(apply_deletion(x, 0.3, seed=10 ** 6 + t).y)
            counts_a[ya] = counts_a.get(ya, 0) + 1
            counts_b[yb] = counts_b.get(yb, 0) + 1
        law = enumerate_channel_law(x, params)
        for y, p in law.items():
            if p < 0.01:
                continue
            for counts in (counts_a, counts_b):
                freq = counts.get(y, 0) / 4000
                assert abs(freq - p) <= 4 * math.sqrt(p * (1 - p) / 4000)

    def test_cascade_empirical_matches_exact_law(self):
        # the exact enumerated law is the ground truth for the one-shot channel
        x = bits_from_str("00101101")
        params = ChannelParams(d=0.2, i=0.1, alpha=0.8)
        law = enumerate_channel_law(x, params)
        trials = 10 ** 5
        counts: dict[str, int] = {}
        for t in range(trials):
            y = bits_to_str(apply_cascade(x, params, seed=t).y)
            counts[y] = counts.get(y, 0) + 1
        # 4 sigma per outcome keeps the family-wise false-alarm rate ~1%
        # across the ~150 outcomes heavy enough to test
        for y, p in law.items():
            if p < 1e-3:
                continue
            freq = counts.get(y, 0) / trials
            assert abs(freq - p) <= 4 * math.sqrt(p * (1 - p) / trials), y

    def test_delins_sampler_matches_exact_law(self):
        x = bits_from_str("0110")
        params = ChannelParams(d=0.2, i=0.15, alpha=0.6)
        law = enumerate_channel_law(x, params)
        trials = 2 * 10 ** 4
        counts: dict[str, int] = {}
        for t in range(trials):
            y = bits_to_str(apply_delins(x, params, seed=50_000 + t).y)
            counts[y] = counts.get(y, 0) + 1
        for y, p in law.items():
            if p < 5e-3:
                continue
            freq = counts.get(y, 0) / trials
            assert abs(freq - p) <= 4 * math.sqrt(p * (1 - p) / trials), y

    def test_cascade_aux_consistency(self):
        rng = np.random.default_rng(8)
        for _ in range(2000):
            n = int(rng.integers(1, 24))
            x = generate_markov_sequence(MarkovSourceParams(0.5), n, seed=int(rng.integers(2 ** 32)))
            out = apply_cascade(x, ChannelParams(d=0.25, i=0.2, alpha=0.5), seed=int(rng.integers(2 ** 32)))
            ref = reference_apply(x.tolist(), out.pattern.tolist())
            assert out.y.tolist() == ref[0]
            assert out.aux.s_counts.tolist() == ref[3]
