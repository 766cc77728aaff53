"""Shared plumbing for the two store containers: signed-delta packing,
size accounting, query instrumentation, and the file envelope.

File layout (format version 1), identical for both containers apart from
the magic: magic (4 bytes) | version u8 | mode u8 | n, u, ell, epsilon,
epsilon_eff, w_delta as little-endian u64 | length-prefixed (u32)
component payloads.  Components are stored in raw form: every length that
can be derived from the header is omitted from the payload.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass, field

from .errors import FormatError

FORMAT_VERSION = 1

MODE_EF = "ef"
MODE_RS = "rs"
_MODE_CODE = {MODE_EF: 0, MODE_RS: 1}
_MODE_NAME = {0: MODE_EF, 1: MODE_RS}

ENVELOPE_FMT = "<4sBB6Q"
ENVELOPE_BYTES = struct.calcsize(ENVELOPE_FMT)


def zigzag(d: int) -> int:
    """Fold a signed delta into an unsigned code (sign in the low bit)."""
    return (d << 1) if d >= 0 else ((-d << 1) - 1)


def unzigzag(z: int) -> int:
    return (z >> 1) if (z & 1) == 0 else -((z + 1) >> 1)


class ProbeCounter:
    """Instrumentation for query-cost tests.

    `primitives` counts accesses to the underlying succinct structures
    (one select, rank, packed read, or bit-field read each); `search_steps`
    counts probes made by the predecessor binary search alone.
    """

    __slots__ = ("primitives", "search_steps")

    def __init__(self):
        self.primitives = 0
        self.search_steps = 0

    def reset(self):
        self.primitives = 0
        self.search_steps = 0


@dataclass
class BitBudget:
    """Exact per-component bit counts for one serialized container.

    `components` holds logical bits per named component; `padding_bits` is
    the word/byte alignment slack, so that total_bits + padding_bits equals
    the serialized file size in bits.
    """

    setting: str
    mode: str
    components: dict = field(default_factory=dict)
    padding_bits: int = 0

    @property
    def total_bits(self) -> int:
        return sum(self.components.values())

    @property
    def file_bits(self) -> int:
        return self.total_bits + self.padding_bits

    @property
    def structure_bits(self) -> int:
        """Bits of the data structure proper, excluding the file envelope
        and the per-component length prefixes (the `header` entry)."""
        return self.total_bits - self.components.get("header", 0)

    def as_dict(self) -> dict:
        return {
            "setting": self.setting,
            "mode": self.mode,
            "components": dict(self.components),
            "total_bits": self.total_bits,
            "structure_bits": self.structure_bits,
            "padding_bits": self.padding_bits,
            "file_bits": self.file_bits,
        }


def pack_envelope(magic: bytes, mode: str, header: tuple) -> bytes:
    n, u, ell, epsilon, epsilon_eff, w_delta = header
    return struct.pack(
        ENVELOPE_FMT, magic, FORMAT_VERSION, _MODE_CODE[mode], n, u, ell, epsilon, epsilon_eff, w_delta
    )


def unpack_envelope(expected_magic: bytes, data) -> tuple:
    if len(data) < ENVELOPE_BYTES:
        raise FormatError("container truncated: envelope missing")
    magic, version, mode_code, n, u, ell, epsilon, epsilon_eff, w_delta = struct.unpack_from(
        ENVELOPE_FMT, data, 0
    )
    if magic != expected_magic:
        raise FormatError(f"bad magic {magic!r}, expected {expected_magic!r}")
    if version != FORMAT_VERSION:
        raise FormatError(f"unsupported format version {version}")
    if mode_code not in _MODE_NAME:
        raise FormatError(f"unknown mode byte {mode_code}")
    return _MODE_NAME[mode_code], (n, u, ell, epsilon, epsilon_eff, w_delta)


def pack_components(payloads) -> bytes:
    out = []
    for p in payloads:
        out.append(struct.pack("<I", len(p)))
        out.append(p)
    return b"".join(out)


def unpack_components(data, off: int, count: int):
    parts = []
    for _ in range(count):
        if off + 4 > len(data):
            raise FormatError("container truncated: component length missing")
        (ln,) = struct.unpack_from("<I", data, off)
        off += 4
        if off + ln > len(data):
            raise FormatError("container truncated: component payload missing")
        parts.append(bytes(data[off : off + ln]))
        off += ln
    if off != len(data):
        raise FormatError(f"{len(data) - off} trailing bytes after last component")
    return parts
