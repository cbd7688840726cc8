"""Greedy longest-match subword tokenizer with UTF-8 byte fallback.

This is a stand-in for a real BPE tokenizer. The compression codec only
cares that uncovered characters fall back to byte tokens, so merge order
fidelity does not matter here.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

from .tokenstream import Byte, Subword, Token, VocabMap

__all__ = [
    "RESERVED_IDS",
    "SubwordVocab",
    "tokenize",
    "detokenize",
    "detokenize_with_errors",
]

# 256 bytes + 256 extended bytes + 3 prefixes
RESERVED_IDS = 515

_BYTES = tuple(Byte(v) for v in range(256))


@dataclass
class SubwordVocab:
    entries: Dict[str, int]
    vocab_map: VocabMap = field(default_factory=VocabMap.contiguous)

    def __post_init__(self):
        reserved = self.vocab_map.reserved_ids
        seen = set()
        for surface, i in self.entries.items():
            if not surface:
                raise ValueError("empty subword surface")
            if i in reserved:
                raise ValueError(f"subword {surface!r} uses reserved id {i}")
            if i in seen:
                raise ValueError(f"duplicate subword id {i}")
            seen.add(i)
        self._surface = {i: s for s, i in self.entries.items()}
        self._max_len = max(map(len, self.entries), default=0)

    @classmethod
    def from_lines(
        cls, lines: Iterable[str], offset: int = RESERVED_IDS,
        vocab_map: Optional[VocabMap] = None,
    ) -> "SubwordVocab":
        """One surface form per line; id = line number + ``offset``.

        Blank lines are skipped but still consume their id.
        """
        entries: Dict[str, int] = {}
        for n, line in enumerate(lines):
            surface = line[:-1] if line.endswith("\n") else line
            if not surface:
                continue
            if surface in entries:
                raise ValueError(f"duplicate subword {surface!r} on line {n + 1}")
            entries[surface] = offset + n
        return cls(entries, vocab_map or VocabMap.contiguous())

    @classmethod
    def load(cls, path: Union[str, Path], vocab_map: Optional[VocabMap] = None) -> "SubwordVocab":
        with open(path, encoding="utf-8", newline=None) as f:
            return cls.from_lines(f, vocab_map=vocab_map)

    @classmethod
    def byte_only(cls, vocab_map: Optional[VocabMap] = None) -> "SubwordVocab":
        return cls({}, vocab_map or VocabMap.contiguous())

    def surface(self, token_id: int) -> str:
        return self._surface[token_id]

    @property
    def baseline_size(self) -> int:
        """Vocabulary size without the compression tokens."""
        return len(self.entries) + 256

    @property
    def augmented_size(self) -> int:
        return len(self.entries) + RESERVED_IDS


def tokenize(text: str, v: SubwordVocab) -> List[Token]:
    out: List[Token] = []
    entries = v.entries
    max_len = v._max_len
    i, n = 0, len(text)
    while i < n:
        for size in range(min(max_len, n - i), 0, -1):
            tid = entries.get(text[i : i + size])
            if tid is not None:
                out.append(Subword(tid))
                i += size
                break
        else:
            out.extend(_BYTES[b] for b in text[i].encode("utf-8"))
            i += 1
    return out


def detokenize_with_errors(stream: Sequence[Token], v: SubwordVocab) -> Tuple[str, int]:
    """Return the text and the number of invalid UTF-8 spans replaced."""
    buf = bytearray()
    for tok in stream:
        if type(tok) is Byte:
            buf.append(tok.value)
        elif type(tok) is Subword:
            buf += v.surface(tok.id).encode("utf-8")
        else:
            raise ValueError(f"baseline stream expected, found {tok!r}")

    data = bytes(buf)
    parts: List[str] = []
    errors = 0
    pos = 0
    while True:
        try:
            parts.append(data[pos:].decode("utf-8"))
            break
        except UnicodeDecodeError as e:
            parts.append(data[pos : pos + e.start].decode("utf-8"))
            parts.append("\ufffd")
            errors += 1
            pos += e.end
    return "".join(parts), errors


def detokenize(stream: Sequence[Token], v: SubwordVocab) -> str:
    return detokenize_with_errors(stream, v)[0]
