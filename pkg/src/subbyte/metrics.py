"""Corpus measurements: token histograms, Rényi entropy/efficiency, length
reduction, relative gain and perceived TPS."""

from __future__ import annotations

import csv
import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, Hashable, Iterable, List, Optional, TextIO

from .tokenizer import RESERVED_IDS, SubwordVocab, tokenize
from .tokenstream import VocabMap, encode_stream, to_ids

__all__ = [
    "DEFAULT_ALPHA",
    "FreqHistogram",
    "renyi_entropy",
    "renyi_efficiency",
    "byte_portion",
    "relative_gain",
    "perceived_tps",
    "ThroughputReport",
    "LengthRow",
    "LengthReport",
    "LengthAccumulator",
    "length_reduction_report",
]

DEFAULT_ALPHA = 2.5
BASELINE_BYTE_VOCAB = 256
AUGMENTED_BYTE_VOCAB = RESERVED_IDS


@dataclass
class FreqHistogram:
    counts: Counter = field(default_factory=Counter)
    vocab_size: int = 0

    @classmethod
    def from_tokens(cls, tokens: Iterable[Hashable], vocab_size: int) -> "FreqHistogram":
        return cls(Counter(tokens), vocab_size)

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    def update(self, tokens: Iterable[Hashable]) -> None:
        self.counts.update(tokens)

    def merge(self, other: "FreqHistogram") -> "FreqHistogram":
        if self.vocab_size != other.vocab_size:
            raise ValueError(
                f"cannot merge histograms over vocabularies of size "
                f"{self.vocab_size} and {other.vocab_size}"
            )
        return FreqHistogram(self.counts + other.counts, self.vocab_size)

    def probabilities(self) -> Dict[Hashable, float]:
        total = self.total
        return {k: c / total for k, c in self.counts.items() if c > 0}

    def write_csv(self, f: TextIO) -> None:
        """Rows of (token_id, count, rank), most frequent first."""
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["token_id", "count", "rank"])
        ranked = sorted(
            ((k, c) for k, c in self.counts.items() if c > 0),
            key=lambda kc: (-kc[1], kc[0]),
        )
        for rank, (k, c) in enumerate(ranked, 1):
            w.writerow([k, c, rank])


def renyi_entropy(h: FreqHistogram, alpha: float, base: float = math.e) -> float:
    """Rényi entropy of the empirical distribution of ``h``.

    ``alpha == 1`` takes the Shannon limit. Natural log unless ``base`` given.
    """
    if alpha <= 0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    total = h.total
    if total <= 0:
        raise ValueError("entropy of an empty histogram")
    probs = [c / total for c in h.counts.values() if c > 0]
    if alpha == 1:
        value = -math.fsum(p * math.log(p) for p in probs)
    elif math.isinf(alpha):
        value = -math.log(max(probs))
    else:
        value = math.log(math.fsum(p**alpha for p in probs)) / (1 - alpha)
    # a point mass gives -0.0 or a rounding-level negative
    value = max(value, 0.0)
    return value / math.log(base)


def renyi_efficiency(h: FreqHistogram, alpha: float) -> float:
    if h.vocab_size < 2:
        raise ValueError(f"efficiency needs vocab_size >= 2, got {h.vocab_size}")
    return renyi_entropy(h, alpha) / math.log(h.vocab_size)


def byte_portion(h: FreqHistogram, vm: VocabMap, augmented: bool = True) -> FreqHistogram:
    """Restrict ``h`` (keyed by token id) to byte, ext-byte and prefix ids.

    The byte-class vocabulary is 256 for the baseline scheme and 515 for the
    augmented one.
    """
    counts = Counter({k: c for k, c in h.counts.items() if vm.is_byte_class(k)})
    size = AUGMENTED_BYTE_VOCAB if augmented else BASELINE_BYTE_VOCAB
    return FreqHistogram(counts, size)


def relative_gain(control_len: int, experimental_len: int) -> float:
    if experimental_len <= 0:
        raise ValueError("experimental length must be positive")
    return control_len / experimental_len


def perceived_tps(tps: float, gain: float) -> float:
    if tps < 0:
        raise ValueError("tps must be non-negative")
    if gain <= 0:
        raise ValueError("gain must be positive")
    return tps * gain


@dataclass
class ThroughputReport:
    tokens_out: Optional[int]
    total_time: Optional[float]
    tps: float
    reference_tokens_control: int
    reference_tokens_experimental: int
    relative_gain: float
    perceived_tps: float

    @classmethod
    def build(
        cls,
        reference_tokens_control: int,
        reference_tokens_experimental: int,
        tps: Optional[float] = None,
        tokens_out: Optional[int] = None,
        total_time: Optional[float] = None,
    ) -> "ThroughputReport":
        """Either ``tps`` or both ``tokens_out`` and ``total_time`` are needed."""
        if tps is None:
            if tokens_out is None or total_time is None:
                raise ValueError("need tps, or tokens_out and total_time")
            if total_time <= 0:
                raise ValueError("total_time must be positive")
            tps = tokens_out / total_time
        gain = relative_gain(reference_tokens_control, reference_tokens_experimental)
        return cls(
            tokens_out, total_time, tps,
            reference_tokens_control, reference_tokens_experimental,
            gain, perceived_tps(tps, gain),
        )

    def to_dict(self) -> dict:
        return dict(self.__dict__)


# --------------------------------------------------------------------------
# length / entropy reports


@dataclass
class LengthRow:
    scope: str  # "total" or "byte_portion"
    baseline_len: int
    ours_len: int
    baseline_eff: Optional[float]
    ours_eff: Optional[float]

    @property
    def diff(self) -> float:
        if self.baseline_len == 0:
            return 0.0
        return (self.baseline_len - self.ours_len) / self.baseline_len

    def to_dict(self) -> dict:
        return {
            "scope": self.scope,
            "baseline_len": self.baseline_len,
            "ours_len": self.ours_len,
            "diff": self.diff,
            "baseline_eff": self.baseline_eff,
            "ours_eff": self.ours_eff,
        }


@dataclass
class LengthReport:
    corpus: str
    alpha: float
    total: LengthRow
    byte_portion: LengthRow
    documents: int = 0

    @property
    def rows(self) -> List[LengthRow]:
        return [self.total, self.byte_portion]

    def to_dict(self) -> dict:
        return {
            "corpus": self.corpus,
            "alpha": self.alpha,
            "documents": self.documents,
            "rows": [r.to_dict() for r in self.rows],
        }

    def csv_rows(self) -> List[list]:
        """Long form: one row per (corpus, scope, form)."""
        out = []
        for r in self.rows:
            out.append([self.corpus, r.scope, "baseline", r.baseline_len, r.baseline_eff])
            out.append([self.corpus, r.scope, "ours", r.ours_len, r.ours_eff])
        return out


CSV_HEADER = ["corpus", "scope", "form", "length", "efficiency"]


@dataclass
class LengthAccumulator:
    """Token-id histograms for both forms. Merging is associative and
    commutative, so documents can be sharded across workers."""

    baseline: Counter = field(default_factory=Counter)
    ours: Counter = field(default_factory=Counter)
    documents: int = 0

    def add(self, text: str, vocab: SubwordVocab) -> None:
        vm = vocab.vocab_map
        base = tokenize(text, vocab)
        comp, _ = encode_stream(base)
        self.baseline.update(to_ids(base, vm))
        self.ours.update(to_ids(comp, vm))
        self.documents += 1

    def merge(self, other: "LengthAccumulator") -> "LengthAccumulator":
        return LengthAccumulator(
            self.baseline + other.baseline,
            self.ours + other.ours,
            self.documents + other.documents,
        )

    def histograms(self, vocab: SubwordVocab) -> Dict[str, FreqHistogram]:
        vm = vocab.vocab_map
        base = FreqHistogram(Counter(self.baseline), vocab.baseline_size)
        ours = FreqHistogram(Counter(self.ours), vocab.augmented_size)
        return {
            "total_baseline": base,
            "total_ours": ours,
            "byte_baseline": byte_portion(base, vm, augmented=False),
            "byte_ours": byte_portion(ours, vm, augmented=True),
        }

    def report(self, vocab: SubwordVocab, alpha: float = DEFAULT_ALPHA,
               corpus: str = "corpus") -> LengthReport:
        h = self.histograms(vocab)

        def eff(hist: FreqHistogram) -> Optional[float]:
            return renyi_efficiency(hist, alpha) if hist.total else None

        def row(scope: str, b: FreqHistogram, o: FreqHistogram) -> LengthRow:
            return LengthRow(scope, b.total, o.total, eff(b), eff(o))

        return LengthReport(
            corpus,
            alpha,
            row("total", h["total_baseline"], h["total_ours"]),
            row("byte_portion", h["byte_baseline"], h["byte_ours"]),
            self.documents,
        )


def length_reduction_report(
    corpus: Iterable[str],
    v: SubwordVocab,
    alpha: float = DEFAULT_ALPHA,
    name: str = "corpus",
) -> LengthReport:
    """Tokenize and compress every document, then compare both forms."""
    acc = LengthAccumulator()
    for doc in corpus:
        acc.add(doc, v)
    return acc.report(v, alpha, name)
