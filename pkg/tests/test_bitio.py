import struct

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from halfhc.bitio import MAGIC, pack_bits, read_bits, unpack_bits, write_bits


def test_golden_layout():
    data = pack_bits("10110")
    assert data[:4] == MAGIC
    assert struct.unpack_from("<Q", data, 4) == (5,)
    assert data[12:] == bytes([0b10110000])  # msb-first, zero padded


def test_empty_stream():
    assert unpack_bits(pack_bits("")) == ""


@settings(max_examples=80, deadline=None)
@given(st.text(alphabet="01", max_size=200))
def test_round_trip(bits):
    assert unpack_bits(pack_bits(bits)) == bits


def test_file_round_trip(tmp_path):
    path = tmp_path / "stream.fbit"
    write_bits(path, "0011" * 7)
    assert read_bits(path) == "0011" * 7


def test_rejects_bad_input():
    with pytest.raises(ValueError, match="non-binary"):
        pack_bits("012")
    with pytest.raises(ValueError, match="magic"):
        unpack_bits(b"NOPE" + b"\x00" * 9)
    with pytest.raises(ValueError, match="truncated header"):
        unpack_bits(MAGIC + b"\x00\x00")
    short = MAGIC + struct.pack("<Q", 64) + b"\xff"
    with pytest.raises(ValueError, match="header claims"):
        unpack_bits(short)
