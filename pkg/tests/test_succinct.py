import random

import pytest
from hypothesis import given, settings, strategies as st

from plastore.succinct import (
    BitVector,
    BitWriter,
    EliasFano,
    PackedIntArray,
    RankSelectIndex,
    bv_rank1,
    bv_select1,
    ef_encode,
    ef_pred,
    ef_select,
)


def rs(bits: str) -> RankSelectIndex:
    return RankSelectIndex(BitVector.from_bits(int(b) for b in bits))


class TestRankSelect:
    def test_rank_empty_prefix(self):
        assert bv_rank1(rs("101101"), 0) == 0

    def test_rank_hand_counted(self):
        assert bv_rank1(rs("101101"), 4) == 3

    def test_select_first(self):
        assert bv_select1(rs("101101"), 1) == 0

    def test_select_hand_counted(self):
        assert bv_select1(rs("101101"), 3) == 3

    def test_rank_select_out_of_range(self):
        idx = rs("101101")
        with pytest.raises(IndexError):
            idx.rank1(7)
        with pytest.raises(IndexError):
            idx.rank1(-1)
        with pytest.raises(IndexError):
            idx.select1(0)
        with pytest.raises(IndexError):
            idx.select1(5)

    def test_random_large_vs_linear_scan(self):
        rng = random.Random(7)
        bits = [rng.random() < 0.37 for _ in range(10**4)]
        idx = RankSelectIndex(BitVector.from_bits(bits))
        prefix = 0
        ones_positions = []
        for pos, b in enumerate(bits):
            assert idx.rank1(pos) == prefix
            if b:
                ones_positions.append(pos)
                prefix += 1
        assert idx.rank1(len(bits)) == prefix
        for k, pos in enumerate(ones_positions, start=1):
            assert idx.select1(k) == pos

    @given(st.lists(st.booleans(), max_size=300))
    @settings(max_examples=150, deadline=None)
    def test_rank_select_consistency(self, bits):
        idx = RankSelectIndex(BitVector.from_bits(bits))
        ones = sum(bits)
        assert idx.total_ones == ones
        for pos, b in enumerate(bits):
            r = idx.rank1(pos)
            if b:
                assert idx.select1(r + 1) == pos
            elif r + 1 <= ones:
                assert idx.select1(r + 1) >= pos + 1

    def test_sparse_across_sample_boundary(self):
        # more than one select sample: > 512 ones
        positions = list(range(0, 4000, 3))
        bv = BitVector.from_ones(4000, positions)
        idx = RankSelectIndex(bv)
        for k, pos in enumerate(positions, start=1):
            assert idx.select1(k) == pos


class TestBitOps:
    def test_writer_fields_cross_word_boundaries(self):
        w = BitWriter()
        vals = [(0b1011, 4), (0xFFFFFFFFFFFFFFF, 60), ((1 << 64) - 1, 64), (0, 3), (5, 3)]
        for v, width in vals:
            w.append_field(v, width)
        bv = w.to_bitvector()
        pos = 0
        for v, width in vals:
            assert bv.read_field(pos, width) == v
            pos += width
        assert bv.nbits == pos

    def test_field_too_wide_rejected(self):
        w = BitWriter()
        with pytest.raises(ValueError):
            w.append_field(8, 3)

    def test_packed_array_roundtrip(self):
        rng = random.Random(3)
        for width in (0, 1, 3, 13, 64):
            vals = [rng.randrange(1 << width) if width else 0 for _ in range(97)]
            arr = PackedIntArray.from_values(vals, width)
            assert [arr.get(i) for i in range(len(vals))] == vals
            data = arr.to_bytes()
            arr2, _ = PackedIntArray.from_bytes(data)
            assert [arr2.get(i) for i in range(len(vals))] == vals

    def test_bitvector_serialization_bit_exact(self):
        bits = [1, 0, 1, 1, 0, 1] * 33
        bv = BitVector.from_bits(bits)
        bv2, _ = BitVector.from_bytes(bv.to_bytes())
        assert bv2.nbits == bv.nbits and bv2.words == bv.words


class TestEliasFano:
    def test_direct_readback(self):
        ef = ef_encode([2, 3, 5, 7, 11], 12)
        assert ef_select(ef, 3) == 5

    def test_duplicates(self):
        ef = ef_encode([4, 4, 4], 5)
        assert ef_select(ef, 2) == 4
        assert ef.values() == [4, 4, 4]

    def test_singleton(self):
        assert ef_select(ef_encode([1], 2), 1) == 1

    def test_small(self):
        assert ef_select(ef_encode([2, 3, 5], 6), 2) == 3

    def test_select_out_of_range(self):
        ef = ef_encode([2, 3, 5], 6)
        with pytest.raises(IndexError):
            ef_select(ef, 0)
        with pytest.raises(IndexError):
            ef_select(ef, 4)

    def test_encode_validation(self):
        with pytest.raises(ValueError):
            ef_encode([3, 2], 5)
        with pytest.raises(ValueError):
            ef_encode([1, 5], 5)

    def test_pred_hand(self):
        ef = ef_encode([2, 3, 5, 7, 11], 12)
        assert ef_pred(ef, 6) == (3, 5)
        assert ef_pred(ef, 1) is None
        assert ef_pred(ef, 2) == (1, 2)
        assert ef_pred(ef, 100) == (5, 11)

    def test_random_roundtrip_and_pred(self):
        rng = random.Random(11)
        values = sorted(rng.randrange(10**6) for _ in range(10**4))
        ef = ef_encode(values, 10**6)
        assert ef.values() == values
        for _ in range(300):
            x = rng.randrange(-5, 10**6 + 5)
            expect = None
            for k, v in enumerate(values, start=1):
                if v <= x:
                    expect = (k, v)
            assert ef_pred(ef, x) == expect

    @given(st.lists(st.integers(min_value=0, max_value=5000), min_size=0, max_size=200))
    @settings(max_examples=150, deadline=None)
    def test_roundtrip_property(self, vals):
        vals.sort()
        ef = ef_encode(vals, 5001)
        assert ef.values() == vals

    def test_size_bound(self):
        rng = random.Random(5)
        for n, u in ((10, 100), (100, 100), (500, 10**6), (1000, 1024)):
            values = sorted(rng.randrange(u) for _ in range(n))
            ef = ef_encode(values, u)
            rep = ef.size_report()
            assert rep["core_bits"] <= rep["bound_bits"], (n, u, rep)
            assert rep["aux_bits"] >= 0

    def test_empty(self):
        ef = ef_encode([], 0)
        assert len(ef) == 0
        assert ef_pred(ef, 10) is None

    def test_serialization_roundtrip(self):
        values = [0, 0, 5, 9, 12, 40, 41, 500]
        ef = ef_encode(values, 501)
        ef2, _ = EliasFano.from_bytes(ef.to_bytes())
        assert ef2.values() == values
        raw = ef.to_bytes_raw()
        ef3, off = EliasFano.from_bytes_raw(raw, 0, len(values), 501)
        assert off == len(raw)
        assert ef3.values() == values
