import io

import pytest

from subbyte.corpus import (
    SYNTHETIC_CHARS,
    ascii_vocab,
    generate_synthetic_corpus,
    iter_documents,
    load_synthetic_corpus,
)
from subbyte.streamio import StreamFormatError, parse_line, read_streams, write_streams
from subbyte.tokenizer import tokenize
from subbyte.tokenstream import Byte, Subword


@pytest.mark.parametrize("fmt", ["ids", "json"])
def test_stream_file_round_trip(fmt):
    streams = [[1, 2, 3], [], [515, 0, 4096]]
    buf = io.StringIO()
    write_streams(buf, streams, fmt)
    buf.seek(0)
    assert list(read_streams(buf, fmt)) == streams


def test_ids_line_layout():
    buf = io.StringIO()
    write_streams(buf, [[512, 94, 151]], "ids")
    assert buf.getvalue() == "512 94 151\n"
    assert parse_line("  7   8\t9 \r\n", "ids") == [7, 8, 9]


@pytest.mark.parametrize(
    "line, fmt",
    [("1 x 2", "ids"), ("1 -2", "ids"), ("[1, 2", "json"), ('{"a": 1}', "json"),
     ("[1, true]", "json"), ("[1.5]", "json"), ("[-1]", "json")],
)
def test_malformed_lines(line, fmt):
    with pytest.raises(StreamFormatError):
        parse_line(line, fmt)


def test_bundled_corpus_matches_generator():
    assert load_synthetic_corpus() == generate_synthetic_corpus()


def test_synthetic_corpus_shape():
    text = generate_synthetic_corpus(seed=3, n_chars=2000)
    cjk = sum(1 for c in text if ord(c) >= 0x4E00)
    assert cjk >= 2000
    assert generate_synthetic_corpus(seed=3, n_chars=2000) == text
    assert SYNTHETIC_CHARS >= 100_000


def test_ascii_vocab_covers_ascii_only():
    v = ascii_vocab()
    doc = next(iter_documents("12 of them, 中!\n"))
    toks = tokenize(doc, v)
    assert [type(t) for t in toks].count(Byte) == 3
    assert all(type(t) is Subword for t in tokenize("Hello, World 42!\n", v))
