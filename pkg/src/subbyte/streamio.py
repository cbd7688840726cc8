"""Token-stream files: one sequence per line, either space-separated decimal
ids (``ids``) or a JSON array of ids (``json``)."""

from __future__ import annotations

import json
from typing import Iterable, Iterator, List, Sequence, TextIO

__all__ = ["STREAM_FORMATS", "StreamFormatError", "parse_line", "read_streams", "write_streams", "format_line"]

STREAM_FORMATS = ("ids", "json")


class StreamFormatError(ValueError):
    pass


def parse_line(line: str, fmt: str, lineno: int = 0) -> List[int]:
    line = line.rstrip("\r\n")
    if fmt == "ids":
        try:
            ids = [int(tok) for tok in line.split()]
        except ValueError as e:
            raise StreamFormatError(f"line {lineno}: {e}") from e
    elif fmt == "json":
        try:
            ids = json.loads(line)
        except json.JSONDecodeError as e:
            raise StreamFormatError(f"line {lineno}: {e}") from e
        if not isinstance(ids, list) or not all(
            isinstance(i, int) and not isinstance(i, bool) for i in ids
        ):
            raise StreamFormatError(f"line {lineno}: expected a JSON array of integers")
    else:
        raise ValueError(f"unknown stream format {fmt!r}")
    if any(i < 0 for i in ids):
        raise StreamFormatError(f"line {lineno}: ids must be unsigned")
    return ids


def read_streams(f: TextIO, fmt: str) -> Iterator[List[int]]:
    for n, line in enumerate(f, 1):
        yield parse_line(line, fmt, n)


def format_line(ids: Sequence[int], fmt: str) -> str:
    if fmt == "ids":
        return " ".join(map(str, ids))
    if fmt == "json":
        return json.dumps(list(ids), separators=(",", ":"))
    raise ValueError(f"unknown stream format {fmt!r}")


def write_streams(f: TextIO, streams: Iterable[Sequence[int]], fmt: str) -> None:
    for ids in streams:
        f.write(format_line(ids, fmt))
        f.write("\n")
