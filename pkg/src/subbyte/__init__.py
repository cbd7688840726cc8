"""Lossless sub-byte compression of UTF-8 byte-fallback token streams."""

from .bitcodec import (
    IneligibleCharError,
    PackedChar,
    PrefixClass,
    classify_lead_byte,
    pack_char,
    unpack_char,
)
from .metrics import (
    FreqHistogram,
    LengthReport,
    ThroughputReport,
    byte_portion,
    length_reduction_report,
    perceived_tps,
    relative_gain,
    renyi_efficiency,
    renyi_entropy,
)
from .tokenizer import SubwordVocab, detokenize, detokenize_with_errors, tokenize
from .tokenstream import (
    Byte,
    DecodeError,
    DecodeReport,
    EncodeReport,
    ExtByte,
    Prefix,
    Subword,
    VocabMap,
    VocabMismatchError,
    decode_stream,
    encode_stream,
    from_ids,
    segment_byte_runs,
    to_ids,
)

__version__ = "0.1.0"
