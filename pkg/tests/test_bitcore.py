import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qrot.bitcore import (BitString, BitcoreError, IndexSet, Rng, extract,
                          relative_hamming, sample_subset)


class TestBitString:
    def test_msb_first_packing(self):
        b = BitString.from_bits([1, 0, 1, 1, 0])
        assert b.payload == bytes([0b10110000])
        assert b.length == 5

    def test_pad_bits_forced_zero(self):
        b = BitString(bytes([0xFF]), 5)
        assert b.payload == bytes([0b11111000])
        assert b.popcount() == 5

    @given(st.lists(st.integers(0, 1), max_size=1024))
    @settings(max_examples=200, deadline=None)
    def test_bits_round_trip(self, bits):
        b = BitString.from_bits(bits)
        assert b.bits().tolist() == bits
        parsed, used = BitString.parse(b.serialize())
        assert parsed == b and used == len(b.serialize())

    @given(st.integers(1, 200))
    @settings(max_examples=50, deadline=None)
    def test_int_round_trip(self, length):
        v = (1 << length) - 1 if length < 4 else (1 << (length - 1)) | 1
        assert BitString.from_int(v, length).to_int() == v

    def test_from_int_range_checked(self):
        with pytest.raises(BitcoreError):
            BitString.from_int(4, 2)

    def test_xor_popcount(self):
        a = BitString.from_bits([1, 1, 0, 0])
        b = BitString.from_bits([1, 0, 1, 0])
        assert (a ^ b).bits().tolist() == [0, 1, 1, 0]
        assert (a ^ a).popcount() == 0

    def test_concat(self):
        a = BitString.from_bits([1, 0, 1])
        b = BitString.from_bits([1, 1])
        assert a.concat(b).bits().tolist() == [1, 0, 1, 1, 1]

    def test_empty(self):
        z = BitString.zeros(0)
        assert len(z) == 0 and z.to_int() == 0
        assert BitString.parse(z.serialize())[0] == z

    def test_getitem(self):
        b = BitString.from_bits([0, 1, 0, 0, 0, 0, 0, 0, 1])
        assert b[1] == 1 and b[8] == 1 and b[0] == 0
        with pytest.raises(IndexError):
            b[9]

    def test_truncated_parse(self):
        with pytest.raises(BitcoreError):
            BitString.parse(b"\x00\x00\x00\x09\xff")


class TestIndexSet:
    def test_sorted_unique(self):
        s = IndexSet([4, 1, 7], 10)
        assert s.indices.tolist() == [1, 4, 7]

    def test_rejects_duplicates_and_range(self):
        with pytest.raises(BitcoreError):
            IndexSet([1, 1], 4)
        with pytest.raises(BitcoreError):
            IndexSet([4], 4)

    def test_complement_partitions(self):
        s = IndexSet([0, 2, 5], 6)
        c = s.complement()
        assert c.indices.tolist() == [1, 3, 4]
        assert np.all(s.membership_mask() ^ c.membership_mask())

    def test_wire_round_trip(self):
        s = IndexSet([3, 0, 9], 16)
        parsed, used = IndexSet.parse(s.serialize(), 16)
        assert parsed == s and used == len(s.serialize())


class TestExtract:
    def test_restriction_reads_positions_in_order(self):
        x = BitString.from_bits([1, 0, 1, 1, 0])
        got = extract(x, IndexSet([0, 2, 4], 5))
        assert got.bits().tolist() == [1, 1, 0]

    def test_empty_selection(self):
        assert extract(BitString.from_bits([1, 1]), IndexSet([], 2)).length == 0

    def test_out_of_range(self):
        with pytest.raises(BitcoreError):
            extract(BitString.from_bits([1]), IndexSet([0], 5))

    @given(st.lists(st.integers(0, 1), min_size=1, max_size=64),
           st.data())
    @settings(max_examples=100, deadline=None)
    def test_matches_direct_indexing(self, bits, data):
        idx = data.draw(st.lists(st.integers(0, len(bits) - 1), unique=True))
        got = extract(BitString.from_bits(bits), IndexSet(idx, len(bits)))
        assert got.bits().tolist() == [bits[i] for i in sorted(idx)]


class TestRelativeHamming:
    def test_weight_fraction(self):
        assert relative_hamming(BitString.from_bits([1, 0, 1, 0])) == 0.5

    def test_empty_rejected(self):
        with pytest.raises(BitcoreError):
            relative_hamming(BitString.zeros(0))

    @given(st.lists(st.integers(0, 1), min_size=1, max_size=128),
           st.lists(st.integers(0, 1), min_size=1, max_size=128))
    @settings(max_examples=100, deadline=None)
    def test_xor_distance_symmetric(self, a, b):
        n = min(len(a), len(b))
        x, y = BitString.from_bits(a[:n]), BitString.from_bits(b[:n])
        assert relative_hamming(x ^ y) == relative_hamming(y ^ x)


class TestRng:
    def test_deterministic(self):
        a, b = Rng.from_int(7), Rng.from_int(7)
        assert a.bytes(64) == b.bytes(64)
        assert a.bits(33) == b.bits(33)

    def test_seed_length_checked(self):
        with pytest.raises(BitcoreError):
            Rng(b"short")

    def test_spawn_streams_differ(self):
        root = Rng.from_int(7)
        assert root.spawn(b"a").bytes(16) != root.spawn(b"a").bytes(16)

    def test_randbelow_in_range(self):
        rng = Rng.from_int(1)
        bounds = np.array([1, 2, 3, 100, 2 ** 31])
        for _ in range(50):
            vals = rng.randbelow_array(bounds)
            assert np.all(vals >= 0) and np.all(vals < bounds)

    def test_uniform_range(self):
        u = Rng.from_int(2).uniform(10000)
        assert np.all((u >= 0) & (u < 1))
        assert abs(u.mean() - 0.5) < 0.02


class TestSampleSubset:
    def test_size_and_range(self):
        s = sample_subset(Rng.from_int(3), 100, 10)
        assert len(s) == 10 and s.universe == 100

    def test_all_subsets_near_uniform(self):
        # C(4,2)=6 outcomes; chi-square-ish tolerance over 6000 draws
        rng = Rng.from_int(4)
        counts = {}
        trials = 6000
        for _ in range(trials):
            key = tuple(sample_subset(rng, 4, 2).indices.tolist())
            counts[key] = counts.get(key, 0) + 1
        assert len(counts) == 6
        for v in counts.values():
            assert abs(v - trials / 6) < 4 * (trials / 6) ** 0.5

    def test_full_and_empty(self):
        assert len(sample_subset(Rng.from_int(5), 7, 7)) == 7
        assert len(sample_subset(Rng.from_int(5), 7, 0)) == 0

    def test_oversized_rejected(self):
        with pytest.raises(BitcoreError):
            sample_subset(Rng.from_int(5), 3, 4)
