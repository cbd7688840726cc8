"""Bundled synthetic CJK corpus and the ASCII vocabulary it is measured with.

The corpus alternates Chinese-like and Korean-like sentences. Characters are
drawn from a Zipf-weighted pool of CJK Unified Ideographs and Hangul
syllables, words are separated by spaces, and sentences end in ASCII
punctuation so that byte runs are broken by subwords the way real text is.
"""

from __future__ import annotations

import random
import string
from importlib import resources
from typing import Iterator, List

from .tokenizer import RESERVED_IDS, SubwordVocab

__all__ = [
    "generate_synthetic_corpus",
    "load_synthetic_corpus",
    "ascii_vocab",
    "SYNTHETIC_CORPUS_FILE",
    "SYNTHETIC_SEED",
    "SYNTHETIC_CHARS",
]

SYNTHETIC_CORPUS_FILE = "synthetic_cjk.txt"
SYNTHETIC_SEED = 20240613
SYNTHETIC_CHARS = 120_000

_HAN = (0x4E00, 0x9FFF)
_HANGUL = (0xAC00, 0xD7A3)


def _pool(rng: random.Random, lo: int, hi: int, size: int) -> List[str]:
    return [chr(c) for c in rng.sample(range(lo, hi + 1), size)]


def _zipf_weights(n: int, s: float = 1.1) -> List[float]:
    return [1.0 / (k**s) for k in range(1, n + 1)]


def generate_synthetic_corpus(seed: int = SYNTHETIC_SEED, n_chars: int = SYNTHETIC_CHARS) -> str:
    """Generate at least ``n_chars`` CJK characters of mixed text, one sentence per line."""
    rng = random.Random(seed)
    han = _pool(rng, *_HAN, 3000)
    hangul = _pool(rng, *_HANGUL, 1500)
    han_w = _zipf_weights(len(han))
    hangul_w = _zipf_weights(len(hangul))

    lines: List[str] = []
    produced = 0
    korean = False
    while produced < n_chars:
        pool, weights = (hangul, hangul_w) if korean else (han, han_w)
        words = []
        for _ in range(rng.randint(3, 9)):
            size = rng.randint(1, 4)
            words.append("".join(rng.choices(pool, weights, k=size)))
            produced += size
        sentence = " ".join(words) + rng.choice([".", ",", "!", "?", "."])
        if rng.random() < 0.15:
            sentence = f"{rng.randint(1, 999)} " + sentence
        lines.append(sentence)
        korean = not korean
    return "\n".join(lines) + "\n"


def load_synthetic_corpus() -> str:
    return resources.files("subbyte.data").joinpath(SYNTHETIC_CORPUS_FILE).read_text(encoding="utf-8")


def iter_documents(text: str) -> Iterator[str]:
    """Split into line documents, keeping line terminators."""
    return iter(text.splitlines(keepends=True))


def ascii_vocab() -> SubwordVocab:
    """Printable ASCII, newline and a few digit pairs; covers no CJK at all,
    so every CJK character falls back to bytes."""
    surfaces = list(string.ascii_letters + string.digits + string.punctuation + " \n")
    surfaces += [f"{d}{e}" for d in string.digits for e in string.digits]
    return SubwordVocab({s: RESERVED_IDS + i for i, s in enumerate(surfaces)})
