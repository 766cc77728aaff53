"""Bit-level building blocks: plain bitvectors with rank/select support,
fixed-width packed integer arrays, and Elias-Fano encoding of monotone
integer sequences.

Conventions used throughout the package:

* bit positions are 0-indexed,
* ordinals handed to select-style operations are 1-indexed,
* every structure is immutable after construction and safe for any number
  of concurrent readers.

Each type serializes to a little-endian byte string.  Two forms exist: a
standalone form carrying its own length header (``to_bytes``), and a raw
form (``to_bytes_raw``) that omits every field derivable from context,
used by the store containers to avoid paying per-component headers.
"""

from __future__ import annotations

import struct

WORD_BITS = 64
_WORD_MASK = (1 << WORD_BITS) - 1

# Directory parameters are fixed by the serialization format (version 1):
# one cumulative rank count per 512-bit block, one sampled position per
# 512 one-bits.
RANK_BLOCK_BITS = 512
SELECT_SAMPLE_RATE = 512
_BLOCK_WORDS = RANK_BLOCK_BITS // WORD_BITS


def ceil_log2(m: int) -> int:
    """Number of bits needed to address m distinct values (m >= 1)."""
    if m < 1:
        raise ValueError("ceil_log2 requires m >= 1")
    return (m - 1).bit_length()


def floor_log2_ratio(numer: int, denom: int) -> int:
    """floor(log2(numer/denom)) for numer >= denom >= 1, else 0."""
    if denom <= 0:
        raise ValueError("denominator must be positive")
    if numer < denom:
        return 0
    return (numer // denom).bit_length() - 1


class BitWriter:
    """Append-only accumulator of bits, least significant bit first."""

    def __init__(self):
        self._words = [0]
        self._nbits = 0

    def append_bit(self, bit: int) -> None:
        self.append_field(bit & 1, 1)

    def append_field(self, value: int, width: int) -> None:
        """Append `width` low bits of a non-negative value."""
        if width == 0:
            return
        if value < 0 or value >> width:
            raise ValueError(f"value {value} does not fit in {width} bits")
        off = self._nbits & 63
        self._words[-1] |= (value << off) & _WORD_MASK
        written = 64 - off
        while written < width:
            self._words.append((value >> written) & _WORD_MASK)
            written += 64
        self._nbits += width
        if self._nbits > len(self._words) * 64 - 64 and self._nbits % 64 == 0:
            self._words.append(0)

    @property
    def bit_length(self) -> int:
        return self._nbits

    def to_bitvector(self) -> "BitVector":
        nwords = (self._nbits + 63) // 64 if self._nbits else 0
        return BitVector(self._words[:nwords], self._nbits)


class BitVector:
    """Immutable packed sequence of bits."""

    __slots__ = ("words", "nbits")

    def __init__(self, words, nbits: int):
        self.words = words
        self.nbits = nbits

    @classmethod
    def from_bits(cls, bits) -> "BitVector":
        w = BitWriter()
        for b in bits:
            w.append_bit(int(b))
        return w.to_bitvector()

    @classmethod
    def from_ones(cls, length: int, one_positions) -> "BitVector":
        """Bitvector of `length` zeros with ones at the given positions."""
        words = [0] * ((length + 63) // 64)
        for p in one_positions:
            if not 0 <= p < length:
                raise ValueError(f"bit position {p} out of range [0, {length})")
            words[p >> 6] |= 1 << (p & 63)
        return cls(words, length)

    def get(self, pos: int) -> int:
        if not 0 <= pos < self.nbits:
            raise IndexError(f"bit position {pos} out of range [0, {self.nbits})")
        return (self.words[pos >> 6] >> (pos & 63)) & 1

    def read_field(self, pos: int, width: int) -> int:
        """Read `width` bits starting at `pos` as an unsigned integer."""
        if width == 0:
            return 0
        if pos < 0 or pos + width > self.nbits:
            raise IndexError(f"field [{pos}, {pos + width}) out of range")
        w = pos >> 6
        off = pos & 63
        chunk = self.words[w] >> off
        got = 64 - off
        if got < width:
            chunk |= self.words[w + 1] << got
        return chunk & ((1 << width) - 1)

    def count_ones(self) -> int:
        return sum(w.bit_count() for w in self.words)

    def __len__(self) -> int:
        return self.nbits

    # -- serialization ----------------------------------------------------

    def to_bytes(self) -> bytes:
        return struct.pack("<Q", self.nbits) + self.to_bytes_raw()

    def to_bytes_raw(self) -> bytes:
        return b"".join(struct.pack("<Q", w) for w in self.words)

    @classmethod
    def from_bytes(cls, data, off: int = 0):
        (nbits,) = struct.unpack_from("<Q", data, off)
        return cls.from_bytes_raw(data, off + 8, nbits)

    @classmethod
    def from_bytes_raw(cls, data, off: int, nbits: int):
        nwords = (nbits + 63) // 64
        words = list(struct.unpack_from(f"<{nwords}Q", data, off))
        return cls(words, nbits), off + 8 * nwords

    def payload_bits(self) -> int:
        return self.nbits

    def padding_bits(self) -> int:
        return len(self.words) * 64 - self.nbits


class RankSelectIndex:
    """Constant-time rank and sampled select directories over a BitVector.

    rank1 touches one cumulative block count plus at most eight word
    popcounts; select1 starts from the nearest sampled one-position and
    scans forward by whole words.
    """

    __slots__ = ("owner", "block_counts", "samples", "total_ones")

    def __init__(self, owner: BitVector, block_counts=None, samples=None):
        self.owner = owner
        if block_counts is None:
            block_counts, samples = self._build(owner)
        self.block_counts = block_counts
        self.samples = samples
        nblocks = (owner.nbits + RANK_BLOCK_BITS - 1) // RANK_BLOCK_BITS
        if nblocks:
            tail = 0
            for w in owner.words[(nblocks - 1) * _BLOCK_WORDS:]:
                tail += w.bit_count()
            self.total_ones = block_counts[nblocks - 1] + tail
        else:
            self.total_ones = 0

    @staticmethod
    def _build(bv: BitVector):
        counts = []
        samples = []
        ones = 0
        nblocks = (bv.nbits + RANK_BLOCK_BITS - 1) // RANK_BLOCK_BITS
        for b in range(nblocks):
            counts.append(ones)
            for wi in range(b * _BLOCK_WORDS, min((b + 1) * _BLOCK_WORDS, len(bv.words))):
                w = bv.words[wi]
                if w:
                    c = w.bit_count()
                    while w:
                        if ones % SELECT_SAMPLE_RATE == 0:
                            samples.append((wi << 6) + ((w & -w).bit_length() - 1))
                        ones += 1
                        w &= w - 1
        return counts, samples

    def rank1(self, pos: int) -> int:
        """Count of 1-bits in positions [0, pos)."""
        if not 0 <= pos <= self.owner.nbits:
            raise IndexError(f"rank position {pos} out of range [0, {self.owner.nbits}]")
        words = self.owner.words
        b = pos // RANK_BLOCK_BITS
        if b >= len(self.block_counts):
            return self.total_ones
        c = self.block_counts[b]
        target = pos >> 6
        for wi in range(b * _BLOCK_WORDS, target):
            c += words[wi].bit_count()
        rem = pos & 63
        if rem:
            c += (words[target] & ((1 << rem) - 1)).bit_count()
        return c

    def select1(self, k: int) -> int:
        """Position of the k-th 1-bit, 1-indexed."""
        if not 1 <= k <= self.total_ones:
            raise IndexError(f"select ordinal {k} out of range [1, {self.total_ones}]")
        j = (k - 1) // SELECT_SAMPLE_RATE
        pos = self.samples[j]
        need = k - (j * SELECT_SAMPLE_RATE + 1)
        if need == 0:
            return pos
        words = self.owner.words
        wi = pos >> 6
        w = words[wi] & ~((1 << ((pos & 63) + 1)) - 1)
        while True:
            c = w.bit_count()
            if c >= need:
                for _ in range(need - 1):
                    w &= w - 1
                return (wi << 6) + (w & -w).bit_length() - 1
            need -= c
            wi += 1
            w = words[wi]

    # -- serialization ----------------------------------------------------

    def aux_bits(self) -> int:
        return 32 * (len(self.block_counts) + len(self.samples))

    def to_bytes_raw(self) -> bytes:
        return struct.pack(f"<{len(self.block_counts)}I", *self.block_counts) + struct.pack(
            f"<{len(self.samples)}I", *self.samples
        )

    @classmethod
    def from_bytes_raw(cls, owner: BitVector, ones: int, data, off: int):
        nblocks = (owner.nbits + RANK_BLOCK_BITS - 1) // RANK_BLOCK_BITS
        counts = list(struct.unpack_from(f"<{nblocks}I", data, off))
        off += 4 * nblocks
        nsamples = (ones + SELECT_SAMPLE_RATE - 1) // SELECT_SAMPLE_RATE if ones else 0
        samples = list(struct.unpack_from(f"<{nsamples}I", data, off))
        off += 4 * nsamples
        return cls(owner, counts, samples), off


def bv_rank1(idx: RankSelectIndex, pos: int) -> int:
    """Number of 1-bits strictly before `pos`."""
    return idx.rank1(pos)


def bv_select1(idx: RankSelectIndex, k: int) -> int:
    """Position of the k-th 1-bit (1-indexed)."""
    return idx.select1(k)


class PackedIntArray:
    """Immutable array of fixed-width non-negative integers."""

    __slots__ = ("width", "count", "words")

    def __init__(self, width: int, count: int, words):
        self.width = width
        self.count = count
        self.words = words

    @classmethod
    def from_values(cls, values, width: int) -> "PackedIntArray":
        w = BitWriter()
        for v in values:
            w.append_field(v, width)
        bv = w.to_bitvector()
        return cls(width, len(values), bv.words)

    def get(self, i: int) -> int:
        if not 0 <= i < self.count:
            raise IndexError(f"index {i} out of range [0, {self.count})")
        width = self.width
        if width == 0:
            return 0
        pos = i * width
        w = pos >> 6
        off = pos & 63
        chunk = self.words[w] >> off
        got = 64 - off
        if got < width:
            chunk |= self.words[w + 1] << got
        return chunk & ((1 << width) - 1)

    def __len__(self) -> int:
        return self.count

    def payload_bits(self) -> int:
        return self.count * self.width

    def padding_bits(self) -> int:
        return len(self.words) * 64 - self.payload_bits()

    def to_bytes(self) -> bytes:
        return struct.pack("<QB", self.count, self.width) + self.to_bytes_raw()

    def to_bytes_raw(self) -> bytes:
        return b"".join(struct.pack("<Q", w) for w in self.words)

    @classmethod
    def from_bytes(cls, data, off: int = 0):
        count, width = struct.unpack_from("<QB", data, off)
        return cls.from_bytes_raw(data, off + 9, count, width)

    @classmethod
    def from_bytes_raw(cls, data, off: int, count: int, width: int):
        nwords = (count * width + 63) // 64
        words = list(struct.unpack_from(f"<{nwords}Q", data, off))
        return cls(width, count, words), off + 8 * nwords


class EliasFano:
    """Elias-Fano encoding of a non-decreasing integer sequence.

    Each value v < universe splits into `low_width` low bits, stored
    packed, and a high part encoded in unary inside `high`: the k-th
    value (0-indexed) sets bit (v >> low_width) + k.  select is one
    select1 on the high bits plus one packed read.
    """

    __slots__ = ("n_values", "universe", "low_width", "lows", "high", "high_rs")

    def __init__(self, n_values, universe, low_width, lows, high, high_rs):
        self.n_values = n_values
        self.universe = universe
        self.low_width = low_width
        self.lows = lows
        self.high = high
        self.high_rs = high_rs

    @classmethod
    def encode(cls, values, universe: int) -> "EliasFano":
        values = list(values)
        n = len(values)
        if n == 0 or universe == 0:
            if n > 0:
                raise ValueError("non-empty sequence needs universe >= 1")
            empty = BitVector([], 0)
            return cls(0, universe, 0, PackedIntArray(0, 0, []), empty, RankSelectIndex(empty))
        if universe < 1:
            raise ValueError("universe must be >= 1")
        prev = 0
        for v in values:
            if v < prev:
                raise ValueError("sequence must be non-decreasing")
            if not 0 <= v < universe:
                raise ValueError(f"value {v} outside [0, {universe})")
            prev = v
        lw = floor_log2_ratio(universe, n)
        lows = PackedIntArray.from_values([v & ((1 << lw) - 1) for v in values], lw)
        high_len = n + ((universe - 1) >> lw)
        high = BitVector.from_ones(high_len, [(v >> lw) + k for k, v in enumerate(values)])
        return cls(n, universe, lw, lows, high, RankSelectIndex(high))

    def select(self, k: int) -> int:
        """k-th encoded value, 1-indexed."""
        if not 1 <= k <= self.n_values:
            raise IndexError(f"ordinal {k} out of range [1, {self.n_values}]")
        pos = self.high_rs.select1(k)
        return ((pos - (k - 1)) << self.low_width) | self.lows.get(k - 1)

    def pred(self, x: int):
        """Largest (k, value) with value <= x, or None; binary search."""
        lo, hi = 1, self.n_values
        if hi == 0 or self.select(1) > x:
            return None
        while lo < hi:
            mid = (lo + hi + 1) // 2
            if self.select(mid) <= x:
                lo = mid
            else:
                hi = mid - 1
        return lo, self.select(lo)

    def values(self):
        return [self.select(k) for k in range(1, self.n_values + 1)]

    def __len__(self) -> int:
        return self.n_values

    # -- size accounting ---------------------------------------------------

    def payload_bits(self) -> int:
        return self.lows.payload_bits() + self.high.payload_bits()

    def aux_bits(self) -> int:
        return self.high_rs.aux_bits()

    def padding_bits(self) -> int:
        return self.lows.padding_bits() + self.high.padding_bits()

    def size_report(self) -> dict:
        """Measured size against the classic 2n + n*ceil(log2(u/n)) bound."""
        n, u = self.n_values, self.universe
        core = self.payload_bits()
        if n == 0:
            return {"core_bits": core, "bound_bits": 0, "aux_bits": self.aux_bits()}
        w = 0
        while n << (w + 1) <= u:
            w += 1
        if n << w < u:
            w += 1  # ceil(log2(u/n))
        return {"core_bits": core, "bound_bits": 2 * n + n * w, "aux_bits": self.aux_bits()}

    # -- serialization ----------------------------------------------------

    def to_bytes(self) -> bytes:
        return struct.pack("<QQB", self.n_values, self.universe, self.low_width) + self.to_bytes_raw()

    def to_bytes_raw(self) -> bytes:
        return self.lows.to_bytes_raw() + self.high.to_bytes_raw() + self.high_rs.to_bytes_raw()

    @classmethod
    def from_bytes(cls, data, off: int = 0):
        n, universe, lw = struct.unpack_from("<QQB", data, off)
        return cls.from_bytes_raw(data, off + 17, n, universe)

    @classmethod
    def from_bytes_raw(cls, data, off: int, n_values: int, universe: int):
        if n_values == 0:
            empty = BitVector([], 0)
            return cls(0, universe, 0, PackedIntArray(0, 0, []), empty, RankSelectIndex(empty)), off
        lw = floor_log2_ratio(universe, n_values)
        lows, off = PackedIntArray.from_bytes_raw(data, off, n_values, lw)
        high_len = n_values + ((universe - 1) >> lw)
        high, off = BitVector.from_bytes_raw(data, off, high_len)
        rs, off = RankSelectIndex.from_bytes_raw(high, n_values, data, off)
        return cls(n_values, universe, lw, lows, high, rs), off


def ef_encode(values, universe: int) -> EliasFano:
    """Encode a non-decreasing sequence of integers below `universe`."""
    return EliasFano.encode(values, universe)


def ef_select(ef: EliasFano, k: int) -> int:
    """k-th encoded value, 1-indexed."""
    return ef.select(k)


def ef_pred(ef: EliasFano, x: int):
    """Largest (ordinal, value) with value <= x, or None."""
    return ef.pred(x)
