"""Whole-sequence conversion between baseline byte-fallback form and the
compressed sub-byte form.

Baseline streams hold only ``Subword`` and ``Byte`` tokens. Compressed
streams additionally hold ``Prefix`` markers and ``ExtByte`` payloads
(9-bit values 256..511). Inside a byte run, raw bytes may precede a
compressed segment but never follow it: once a ``Prefix`` is seen, every
payload up to the next ``Subword``/``Prefix``/end of stream is read in
(hi, lo) pairs.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, List, Literal, Optional, Sequence, Tuple, Union

from .bitcodec import PackedChar, PrefixClass, is_eligible, pack_char, unpack_char

__all__ = [
    "Subword",
    "Byte",
    "ExtByte",
    "Prefix",
    "Token",
    "payload_token",
    "ByteRun",
    "EncodeReport",
    "DecodeReport",
    "DecodeError",
    "VocabMap",
    "VocabMismatchError",
    "segment_byte_runs",
    "encode_stream",
    "decode_stream",
    "to_ids",
    "from_ids",
]


@dataclass(frozen=True, slots=True)
class Subword:
    id: int


@dataclass(frozen=True, slots=True)
class Byte:
    value: int


@dataclass(frozen=True, slots=True)
class ExtByte:
    value: int


@dataclass(frozen=True, slots=True)
class Prefix:
    cls: PrefixClass


Token = Union[Subword, Byte, ExtByte, Prefix]

_BYTES = tuple(Byte(v) for v in range(256))
_EXT = tuple(ExtByte(v) for v in range(256, 512))
_PREFIXES = {c: Prefix(c) for c in PrefixClass}


def payload_token(v: int) -> Token:
    """Token carrying 9-bit payload ``v``: Byte below 256, ExtByte above."""
    if v < 256:
        return _BYTES[v]
    return _EXT[v - 256]


class DecodeError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at offset {position}")
        self.position = position


class VocabMismatchError(ValueError):
    pass


# --------------------------------------------------------------------------
# segmentation


@dataclass(frozen=True)
class ByteRun:
    """A maximal span of Byte tokens, ``stream[start:end]``.

    ``raw`` is the leading residue passed through untouched; ``chars`` are the
    eligible characters of the compressible suffix, in order.
    """

    start: int
    end: int
    raw: bytes
    chars: Tuple[Tuple[int, int, int], ...]

    @property
    def split(self) -> int:
        """Stream offset where the compressible suffix begins."""
        return self.start + len(self.raw)


def _compressible_suffix(data: bytes) -> int:
    # Suffix is built from 3-byte chunks aligned to the end, so scanning
    # backwards and stopping at the first ineligible chunk is maximal.
    i = len(data)
    while i >= 3 and is_eligible(data[i - 3], data[i - 2], data[i - 1]):
        i -= 3
    return i


def segment_byte_runs(stream: Sequence[Token]) -> List[ByteRun]:
    runs: List[ByteRun] = []
    n = len(stream)
    i = 0
    while i < n:
        tok = stream[i]
        if type(tok) is Subword:
            i += 1
            continue
        if type(tok) is not Byte:
            raise ValueError(
                f"baseline stream expected, found {tok!r} at offset {i}"
            )
        j = i
        while j < n and type(stream[j]) is Byte:
            j += 1
        data = bytes(t.value for t in stream[i:j])
        cut = _compressible_suffix(data)
        chars = tuple(
            (data[k], data[k + 1], data[k + 2]) for k in range(cut, len(data), 3)
        )
        runs.append(ByteRun(i, j, data[:cut], chars))
        i = j
    return runs


# --------------------------------------------------------------------------
# encoding


@dataclass
class EncodeReport:
    input_len: int = 0
    output_len: int = 0
    # one per emitted Prefix token, including the first of each segment
    prefix_switches: int = 0
    compressed_chars: int = 0
    raw_bytes_passed: int = 0

    @property
    def reduction(self) -> float:
        if self.input_len == 0:
            return 0.0
        return (self.input_len - self.output_len) / self.input_len

    def merge(self, other: "EncodeReport") -> "EncodeReport":
        return EncodeReport(
            self.input_len + other.input_len,
            self.output_len + other.output_len,
            self.prefix_switches + other.prefix_switches,
            self.compressed_chars + other.compressed_chars,
            self.raw_bytes_passed + other.raw_bytes_passed,
        )

    def to_dict(self) -> dict:
        return {
            "input_len": self.input_len,
            "output_len": self.output_len,
            "reduction": self.reduction,
            "prefix_switches": self.prefix_switches,
            "compressed_chars": self.compressed_chars,
            "raw_bytes_passed": self.raw_bytes_passed,
        }


def encode_stream(stream: Sequence[Token]) -> Tuple[List[Token], EncodeReport]:
    """Compress a baseline stream.

    Each compressible character becomes a (hi, lo) payload pair. A Prefix is
    emitted before the first character of a segment and again whenever the
    class changes.
    """
    out: List[Token] = []
    report = EncodeReport(input_len=len(stream))
    pos = 0
    for run in segment_byte_runs(stream):
        out.extend(stream[pos : run.split])
        report.raw_bytes_passed += len(run.raw)
        current: Optional[PrefixClass] = None
        for b1, b2, b3 in run.chars:
            prefix, hi, lo = pack_char(b1, b2, b3)
            if prefix is not current:
                out.append(_PREFIXES[prefix])
                report.prefix_switches += 1
                current = prefix
            out.append(payload_token(hi))
            out.append(payload_token(lo))
        report.compressed_chars += len(run.chars)
        pos = run.end
    out.extend(stream[pos:])
    report.output_len = len(out)
    return out, report


# --------------------------------------------------------------------------
# decoding


@dataclass
class DecodeReport:
    tokens: List[Token] = field(default_factory=list)
    decode_errors: int = 0
    error_positions: List[int] = field(default_factory=list)


def decode_stream(
    stream: Sequence[Token], mode: Literal["strict", "lenient"] = "strict"
) -> DecodeReport:
    """Expand a compressed stream back to baseline form.

    In strict mode the first undecodable token raises :class:`DecodeError`.
    In lenient mode it is dropped, counted, and its offset recorded.
    Undecodable tokens are an ExtByte with no active prefix and the dangling
    first half of a pair cut off by a Subword, Prefix, or end of stream.
    """
    if mode not in ("strict", "lenient"):
        raise ValueError(f"unknown decode mode: {mode!r}")
    strict = mode == "strict"
    report = DecodeReport()
    out = report.tokens

    def fail(message: str, position: int) -> None:
        if strict:
            raise DecodeError(message, position)
        report.decode_errors += 1
        report.error_positions.append(position)

    prefix: Optional[PrefixClass] = None
    pending: Optional[int] = None
    pending_pos = -1

    for i, tok in enumerate(stream):
        kind = type(tok)
        if kind is Byte or kind is ExtByte:
            if prefix is None:
                if kind is Byte:
                    out.append(tok)
                else:
                    fail("9-bit payload without an active prefix", i)
            elif pending is None:
                pending, pending_pos = tok.value, i
            else:
                for b in unpack_char(PackedChar(prefix, pending, tok.value)):
                    out.append(_BYTES[b])
                pending = None
        elif kind is Prefix:
            if pending is not None:
                fail("unpaired payload before prefix", pending_pos)
                pending = None
            prefix = tok.cls
        elif kind is Subword:
            if pending is not None:
                fail("unpaired payload before subword", pending_pos)
                pending = None
            prefix = None
            out.append(tok)
        else:
            raise TypeError(f"not a token: {tok!r}")

    if pending is not None:
        fail("unpaired payload at end of stream", pending_pos)
    return report


# --------------------------------------------------------------------------
# id mapping


@dataclass(frozen=True)
class VocabMap:
    """Binds byte, extended-byte and prefix tokens to concrete tokenizer ids.

    Every id outside the three reserved tables is a subword id. When
    ``vocab_size`` is set, ids at or above it are rejected as unknown.
    """

    byte_ids: Tuple[int, ...]
    ext_ids: Tuple[int, ...]
    prefix_ids: Tuple[int, int, int]
    vocab_size: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "byte_ids", tuple(self.byte_ids))
        object.__setattr__(self, "ext_ids", tuple(self.ext_ids))
        object.__setattr__(self, "prefix_ids", tuple(self.prefix_ids))
        if len(self.byte_ids) != 256:
            raise VocabMismatchError(f"byte_ids needs 256 ids, got {len(self.byte_ids)}")
        if len(self.ext_ids) != 256:
            raise VocabMismatchError(f"ext_ids needs 256 ids, got {len(self.ext_ids)}")
        if len(self.prefix_ids) != 3:
            raise VocabMismatchError(f"prefix_ids needs 3 ids, got {len(self.prefix_ids)}")
        reserved = self.byte_ids + self.ext_ids + self.prefix_ids
        if len(set(reserved)) != len(reserved):
            raise VocabMismatchError("reserved ids are not pairwise distinct")
        if any(i < 0 for i in reserved):
            raise VocabMismatchError("ids must be non-negative")
        if self.vocab_size is not None and max(reserved) >= self.vocab_size:
            raise VocabMismatchError("reserved id outside vocab_size")
        lookup = {}
        for v, i in enumerate(self.byte_ids):
            lookup[i] = _BYTES[v]
        for v, i in enumerate(self.ext_ids):
            lookup[i] = _EXT[v]
        for c, i in zip(PrefixClass, self.prefix_ids):
            lookup[i] = _PREFIXES[c]
        object.__setattr__(self, "_lookup", lookup)
        object.__setattr__(
            self, "_prefix_index", dict(zip(PrefixClass, self.prefix_ids))
        )

    @classmethod
    def contiguous(cls, base: int = 0, vocab_size: Optional[int] = None) -> "VocabMap":
        """Bytes at ``base..base+255``, ext bytes next, then P1, P2, P3."""
        return cls(
            tuple(range(base, base + 256)),
            tuple(range(base + 256, base + 512)),
            (base + 512, base + 513, base + 514),
            vocab_size,
        )

    @property
    def reserved_ids(self) -> frozenset:
        return frozenset(self._lookup)

    def is_byte_class(self, token_id: int) -> bool:
        return token_id in self._lookup

    def token_for(self, token_id: int) -> Token:
        tok = self._lookup.get(token_id)
        if tok is not None:
            return tok
        if token_id < 0 or (self.vocab_size is not None and token_id >= self.vocab_size):
            raise VocabMismatchError(f"unknown token id {token_id}")
        return Subword(token_id)

    def id_for(self, tok: Token) -> int:
        kind = type(tok)
        if kind is Byte:
            return self.byte_ids[tok.value]
        if kind is ExtByte:
            return self.ext_ids[tok.value - 256]
        if kind is Prefix:
            return self._prefix_index[tok.cls]
        if kind is Subword:
            if tok.id in self._lookup:
                raise VocabMismatchError(
                    f"subword id {tok.id} collides with a reserved id"
                )
            if tok.id < 0 or (self.vocab_size is not None and tok.id >= self.vocab_size):
                raise VocabMismatchError(f"subword id {tok.id} outside vocabulary")
            return tok.id
        raise TypeError(f"not a token: {tok!r}")

    # JSON document: {"byte_ids": [...256], "ext_ids": [...256],
    #                 "prefix_ids": [p1, p2, p3], "vocab_size": optional}
    def to_json(self) -> dict:
        doc = {
            "byte_ids": list(self.byte_ids),
            "ext_ids": list(self.ext_ids),
            "prefix_ids": list(self.prefix_ids),
        }
        if self.vocab_size is not None:
            doc["vocab_size"] = self.vocab_size
        return doc

    @classmethod
    def from_json(cls, doc: dict) -> "VocabMap":
        try:
            return cls(
                tuple(int(i) for i in doc["byte_ids"]),
                tuple(int(i) for i in doc["ext_ids"]),
                tuple(int(i) for i in doc["prefix_ids"]),
                doc.get("vocab_size"),
            )
        except (KeyError, TypeError) as e:
            raise VocabMismatchError(f"malformed vocab map: {e}") from e

    @classmethod
    def load(cls, path: Union[str, Path]) -> "VocabMap":
        with open(path, encoding="utf-8") as f:
            return cls.from_json(json.load(f))

    def save(self, path: Union[str, Path]) -> None:
        with open(path, "w", encoding="utf-8") as f:
            json.dump(self.to_json(), f)
            f.write("\n")


def to_ids(stream: Iterable[Token], vm: VocabMap) -> List[int]:
    return [vm.id_for(t) for t in stream]


def from_ids(ids: Iterable[int], vm: VocabMap) -> List[Token]:
    return [vm.token_for(i) for i in ids]
