import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from subbyte.bitcodec import (
    IneligibleCharError,
    PackedChar,
    PrefixClass,
    classify_lead_byte,
    pack_char,
    unpack_char,
)

from conftest import oracle_split

LEADS = range(0xE4, 0xF0)
CONT = range(0x80, 0xC0)


@pytest.mark.parametrize(
    "b, expected",
    [(0xE4, PrefixClass.P1), (0xEC, PrefixClass.P3), (0xC3, None)],
)
def test_classify_examples(b, expected):
    assert classify_lead_byte(b) is expected


def test_classify_is_total():
    for b in range(256):
        cls = classify_lead_byte(b)
        if 0xE4 <= b <= 0xE7:
            assert cls is PrefixClass.P1
        elif 0xE8 <= b <= 0xEB:
            assert cls is PrefixClass.P2
        elif 0xEC <= b <= 0xEF:
            assert cls is PrefixClass.P3
        else:
            assert cls is None


def test_prefix_bits_match_lead_bytes():
    assert [int(c) for c in PrefixClass] == [0x39, 0x3A, 0x3B]
    for cls in PrefixClass:
        assert all(b >> 2 == cls.bits6 for b in cls.lead_bytes)


@pytest.mark.parametrize(
    "triple, packed",
    [
        ((0xE4, 0xBC, 0x97), (PrefixClass.P1, 0x05E, 0x097)),
        ((0xE5, 0x94, 0xA4), (PrefixClass.P1, 0x0CA, 0x0A4)),
        ((0xE8, 0xAA, 0x8D), (PrefixClass.P2, 0x055, 0x08D)),
    ],
)
def test_pack_worked_examples(triple, packed):
    assert pack_char(*triple) == packed
    assert unpack_char(PackedChar(*packed)) == triple


def test_unpack_korean_example():
    # ED 9E 88 cut at 6/9/9 by the string oracle
    assert oracle_split(0xED, 0x9E, 0x88) == (0x3B, 0x0CF, 0x088)
    assert unpack_char(PackedChar(PrefixClass.P3, 0x0CF, 0x088)) == (0xED, 0x9E, 0x88)
    assert pack_char(0xED, 0x9E, 0x88) == (PrefixClass.P3, 0x0CF, 0x088)


@pytest.mark.parametrize(
    "triple",
    [(0xC3, 0xA9, 0x80), (0xE0, 0xA0, 0x80), (0xE3, 0x81, 0x82), (0xF0, 0x9F, 0x98),
     (0xE4, 0x41, 0x80), (0xE4, 0x80, 0xC0), (0xE4, 0xBC, 0x7F)],
)
def test_pack_rejects_ineligible(triple):
    with pytest.raises(IneligibleCharError):
        pack_char(*triple)


def test_exhaustive_against_oracle():
    for b1, b2, b3 in itertools.product(LEADS, CONT, CONT):
        p = pack_char(b1, b2, b3)
        assert (p.prefix.bits6, p.hi, p.lo) == oracle_split(b1, b2, b3)
        assert p.prefix is classify_lead_byte(b1)


@given(st.sampled_from(LEADS), st.sampled_from(CONT), st.sampled_from(CONT))
def test_bit_conservation(b1, b2, b3):
    p = pack_char(b1, b2, b3)
    assert p.prefix.bits6 * 2**18 + p.hi * 2**9 + p.lo == b1 * 2**16 + b2 * 2**8 + b3
    assert 0 <= p.hi <= 511 and 0 <= p.lo <= 511
    assert unpack_char(p) == (b1, b2, b3)


@given(st.sampled_from(list(PrefixClass)), st.integers(0, 511), st.integers(0, 511))
def test_unpack_lead_always_in_range(cls, hi, lo):
    b1, b2, b3 = unpack_char(PackedChar(cls, hi, lo))
    assert 0xE4 <= b1 <= 0xEF
    assert classify_lead_byte(b1) is cls


def test_unpack_rejects_wide_payload():
    with pytest.raises(ValueError):
        unpack_char(PackedChar(PrefixClass.P1, 512, 0))
