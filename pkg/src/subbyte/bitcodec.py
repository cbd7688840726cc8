"""Bit-level repacking of 3-byte UTF-8 characters.

A character with lead byte in 0xE4..0xEF is split on a 6/9/9 bit boundary
instead of 8/8/8: the top six bits of the lead byte become a shared prefix
class, and the remaining 18 bits are carried by two 9-bit payloads.

    E4 BC 97 = 111001|00 10111100 10010111
             = 111001 | 001011110 | 010010111
             = P1       0x05E       0x097
"""

from __future__ import annotations

from enum import IntEnum
from typing import NamedTuple, Optional, Tuple

__all__ = [
    "PrefixClass",
    "PackedChar",
    "IneligibleCharError",
    "classify_lead_byte",
    "is_continuation",
    "is_eligible",
    "pack_char",
    "unpack_char",
    "PAYLOAD_BITS",
    "PAYLOAD_SIZE",
]

PAYLOAD_BITS = 9
PAYLOAD_SIZE = 1 << PAYLOAD_BITS


class PrefixClass(IntEnum):
    """Shared 6-bit prefix of a group of four lead bytes; the value is the bits."""

    P1 = 0x39  # 111001xx: E4-E7
    P2 = 0x3A  # 111010xx: E8-EB
    P3 = 0x3B  # 111011xx: EC-EF

    @property
    def bits6(self) -> int:
        return int(self)

    @property
    def lead_bytes(self) -> range:
        return range(self << 2, (self << 2) + 4)


class PackedChar(NamedTuple):
    prefix: PrefixClass
    hi: int
    lo: int


class IneligibleCharError(ValueError):
    """Raised when a byte triple cannot be repacked and must stay raw."""


def classify_lead_byte(b: int) -> Optional[PrefixClass]:
    """Return the prefix class of lead byte ``b``, or None if it has none."""
    if 0xE4 <= b <= 0xEF:
        return PrefixClass(b >> 2)
    return None


def is_continuation(b: int) -> bool:
    return 0x80 <= b <= 0xBF


def is_eligible(b1: int, b2: int, b3: int) -> bool:
    return 0xE4 <= b1 <= 0xEF and 0x80 <= b2 <= 0xBF and 0x80 <= b3 <= 0xBF


def pack_char(b1: int, b2: int, b3: int) -> PackedChar:
    """Repack one eligible character into (prefix, hi, lo).

    The two low bits of ``b1`` and the top seven bits of ``b2`` form ``hi``;
    the low bit of ``b2`` and all of ``b3`` form ``lo``.
    """
    if not is_eligible(b1, b2, b3):
        raise IneligibleCharError(
            f"not an eligible 3-byte character: {b1:02X} {b2:02X} {b3:02X}"
        )
    prefix = PrefixClass(b1 >> 2)
    hi = ((b1 & 3) << 7) | ((b2 & 254) >> 1)
    lo = ((b2 & 1) << 8) | b3
    return PackedChar(prefix, hi, lo)


def unpack_char(p: PackedChar) -> Tuple[int, int, int]:
    """Re-align (prefix, hi, lo) to three 8-bit bytes."""
    prefix, hi, lo = p
    if not (0 <= hi < PAYLOAD_SIZE and 0 <= lo < PAYLOAD_SIZE):
        raise ValueError(f"payload out of 9-bit range: hi={hi}, lo={lo}")
    b1 = (int(prefix) << 2) | (hi >> 7)
    b2 = ((hi & 127) << 1) | (lo >> 8)
    b3 = lo & 255
    return b1, b2, b3
