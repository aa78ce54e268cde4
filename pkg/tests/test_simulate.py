import numpy as np
import pytest

from lrsd.simulate import (
    PatternSpec,
    compute_snr,
    factor_vectors,
    generate,
    load_instance,
    save_instance,
)


class TestFactorVectors:
    def test_unit_norms(self):
        for x in factor_vectors():
            assert np.linalg.norm(x) == pytest.approx(1.0)

    def test_lengths_and_supports(self):
        u1, v1, u2, v2 = factor_vectors()
        assert (len(u1), len(v1), len(u2), len(v2)) == (100, 50, 100, 50)
        assert np.count_nonzero(u1) == 25
        assert np.count_nonzero(v1) == 16
        assert np.count_nonzero(u2) == 25
        assert np.count_nonzero(v2) == 16

    def test_v2_placement(self):
        _, _, _, v2 = factor_vectors()
        assert np.all(v2[:9] == 0)
        assert np.all(v2[9:25] != 0)
        assert np.all(v2[25:] == 0)


class TestComputeSnr:
    def test_constant_signal(self):
        sig = np.zeros((10, 10))
        sig[:3, :4] = 6.0
        assert compute_snr(sig, 1.0) == pytest.approx(6.0)

    def test_pattern1_exact(self):
        u1, v1, _, _ = factor_vectors()
        sig = 50.0 * np.outer(u1, v1)
        # Frobenius norm 50 over a 25x16 support
        assert compute_snr(sig, 1.0) == pytest.approx(np.sqrt(2500 / 400), abs=1e-12)

    def test_all_zero_errors(self):
        with pytest.raises(ValueError):
            compute_snr(np.zeros((3, 3)), 1.0)


class TestGenerate:
    def test_invalid_pattern(self):
        with pytest.raises(ValueError):
            PatternSpec(pattern_id=9)

    def test_pattern1_support_and_snr(self):
        inst = generate(PatternSpec(1, seed=0))
        assert inst.truth_mask.sum() == 400
        assert inst.snr == pytest.approx(2.5)

    def test_pattern3_snr_by_divisor(self):
        for div, target in [(1.0, 2.6), (1.2, 2.2), (1.5, 1.8)]:
            inst = generate(PatternSpec(3, signal_divisor=div, seed=0))
            assert inst.snr == pytest.approx(target, abs=0.05)

    def test_pattern4_snr(self):
        snrs = [generate(PatternSpec(4, seed=s)).snr for s in range(20)]
        assert np.mean(snrs) == pytest.approx(2.9, abs=0.15)

    def test_reproducible(self):
        a = generate(PatternSpec(2, seed=11))
        b = generate(PatternSpec(2, seed=11))
        assert np.array_equal(a.data.values, b.data.values)
        assert np.array_equal(a.row_perm, b.row_perm)

    def test_mask_matches_signal_support(self):
        inst = generate(PatternSpec(4, seed=3))
        assert np.array_equal(inst.truth_mask, inst.truth_signal.values != 0)

    def test_data_is_signal_plus_noise(self):
        inst = generate(PatternSpec(3, seed=5))
        noise = inst.data.values - inst.truth_signal.values
        # pure N(0,1) residual
        assert abs(noise.mean()) < 0.1
        assert abs(noise.std() - 1.0) < 0.1

    def test_unshuffle_recovers_block_structure(self):
        inst = generate(PatternSpec(1, seed=9))
        unshuffled = np.empty_like(inst.truth_signal.values)
        unshuffled[np.ix_(inst.row_perm, inst.col_perm)] = inst.truth_signal.values
        u1, v1, _, _ = factor_vectors()
        assert np.allclose(unshuffled, 50.0 * np.outer(u1, v1))

    def test_pattern_nesting(self):
        for base, ext in [(1, 2), (3, 4)]:
            a = generate(PatternSpec(base, seed=21, signal_divisor=1.2))
            b = generate(PatternSpec(ext, seed=21, signal_divisor=1.2))
            diff = b.truth_signal.values - a.truth_signal.values
            vals = np.unique(diff)
            assert np.all(np.isclose(vals, 0.0) | np.isclose(vals, 6.0 / 1.2))
            assert np.array_equal(a.row_perm, b.row_perm)

    def test_snr_monotone_in_divisor(self):
        for seed in range(5):
            snrs = [
                generate(PatternSpec(2, seed=seed, signal_divisor=d)).snr
                for d in (1.0, 1.2, 1.5)
            ]
            assert snrs[0] > snrs[1] > snrs[2]

    def test_shuffle_invariant_mask_cardinality(self):
        counts = {generate(PatternSpec(3, seed=s)).truth_mask.sum() for s in range(5)}
        assert len(counts) == 1


def test_save_load_roundtrip(tmp_path):
    inst = generate(PatternSpec(4, seed=2, signal_divisor=1.5))
    save_instance(inst, tmp_path / "inst")
    back = load_instance(tmp_path / "inst")
    assert np.allclose(back.data.values, inst.data.values)
    assert np.allclose(back.truth_signal.values, inst.truth_signal.values)
    assert np.array_equal(back.truth_mask, inst.truth_mask)
    assert np.array_equal(back.row_perm, inst.row_perm)
    assert np.array_equal(back.col_perm, inst.col_perm)
    assert back.snr == pytest.approx(inst.snr)
    assert back.spec == inst.spec
