"""Packed bit-stream files.

Layout: magic b"FBIT", 8-byte little-endian bit count, then the payload
packed most-significant-bit first within each byte; the final partial
byte is zero-padded.
"""

from __future__ import annotations

import struct
from pathlib import Path

MAGIC = b"FBIT"
_HEADER = struct.Struct("<Q")


def pack_bits(bits: str) -> bytes:
    if bits.count("0") + bits.count("1") != len(bits):
        raise ValueError("non-binary character in bit stream")
    out = bytearray(MAGIC)
    out += _HEADER.pack(len(bits))
    for i in range(0, len(bits), 8):
        chunk = bits[i : i + 8]
        out.append(int(chunk.ljust(8, "0"), 2))
    return bytes(out)


def unpack_bits(data: bytes) -> str:
    if data[: len(MAGIC)] != MAGIC:
        raise ValueError("bad magic: not a packed bit-stream file")
    offset = len(MAGIC)
    if len(data) < offset + _HEADER.size:
        raise ValueError("truncated header")
    (count,) = _HEADER.unpack_from(data, offset)
    payload = data[offset + _HEADER.size :]
    if len(payload) * 8 < count:
        raise ValueError(f"payload holds {len(payload) * 8} bits, header claims {count}")
    return "".join(format(byte, "08b") for byte in payload)[:count]


def write_bits(path: str | Path, bits: str) -> None:
    Path(path).write_bytes(pack_bits(bits))


def read_bits(path: str | Path) -> str:
    return unpack_bits(Path(path).read_bytes())
