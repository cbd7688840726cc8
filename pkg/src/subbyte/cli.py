"""Command-line front end.

Exit codes: 0 success, 2 usage error, 3 I/O error, 4 vocabulary mismatch,
5 strict decode failure, 6 malformed input.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from pathlib import Path
from typing import Iterable, List, Optional, Sequence, TextIO

from .bitcodec import IneligibleCharError, pack_char, unpack_char
from .metrics import (
    CSV_HEADER,
    DEFAULT_ALPHA,
    LengthAccumulator,
    ThroughputReport,
    relative_gain,
)
from .streamio import StreamFormatError, format_line, read_streams
from .tokenizer import SubwordVocab, detokenize_with_errors, tokenize
from .tokenstream import (
    DecodeError,
    EncodeReport,
    VocabMap,
    VocabMismatchError,
    decode_stream,
    encode_stream,
    from_ids,
    to_ids,
)

log = logging.getLogger("subbyte")

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_IO = 3
EXIT_VOCAB = 4
EXIT_DECODE = 5
EXIT_INPUT = 6


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


# --------------------------------------------------------------------------
# helpers


def _open_in(path: str, **kw) -> TextIO:
    if path == "-":
        return io.TextIOWrapper(sys.stdin.buffer, **kw)
    return open(path, **kw)


def _read_text(path: str) -> str:
    # newline="" keeps \r\n intact so the round trip stays byte-identical;
    # splitlines() still recognises every newline convention.
    with _open_in(path, encoding="utf-8", newline="") as f:
        return f.read()


def _write_out(text: str, out: Optional[str]) -> None:
    if out is None or out == "-":
        sys.stdout.buffer.write(text.encode("utf-8"))
        sys.stdout.flush()
    else:
        with open(out, "w", encoding="utf-8", newline="") as f:
            f.write(text)


def _dump_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def _load_vocabs(args) -> SubwordVocab:
    vm = VocabMap.load(args.vocab_map) if args.vocab_map else VocabMap.contiguous()
    if args.subword_vocab:
        return SubwordVocab.load(args.subword_vocab, vocab_map=vm)
    return SubwordVocab.byte_only(vm)


def _read_id_streams(path: str, fmt: str) -> List[List[int]]:
    with _open_in(path, encoding="utf-8") as f:
        return list(read_streams(f, fmt))


def _emit_report(report: dict, args, csv_rows: Optional[Sequence[Sequence]] = None,
                 header: Optional[Sequence[str]] = None) -> None:
    if args.report == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        if csv_rows is None:
            w.writerow(report.keys())
            w.writerow(report.values())
        else:
            w.writerow(header)
            w.writerows(csv_rows)
        text = buf.getvalue()
    else:
        text = _dump_json(report)
    _write_out(text, args.out)


def _side_report(report: dict, args) -> None:
    """Reports that accompany a stream go to --report-out, else stderr."""
    text = _dump_json(report)
    if args.report_out:
        with open(args.report_out, "w", encoding="utf-8") as f:
            f.write(text)
    else:
        sys.stderr.write(text)


# --------------------------------------------------------------------------
# subcommands


def cmd_encode(args) -> int:
    vocab = _load_vocabs(args)
    vm = vocab.vocab_map
    if args.format == "text":
        baseline = [tokenize(doc, vocab) for doc in _read_text(args.input).splitlines(keepends=True)]
    else:
        baseline = [from_ids(ids, vm) for ids in _read_id_streams(args.input, args.format)]

    out_fmt = "json" if args.format == "json" else "ids"
    lines = []
    total = None
    for stream in baseline:
        comp, rep = encode_stream(stream)
        total = rep if total is None else total.merge(rep)
        lines.append(format_line(to_ids(comp, vm), out_fmt) + "\n")
    _write_out("".join(lines), args.out)
    report = (total or EncodeReport()).to_dict()
    report["sequences"] = len(baseline)
    _side_report(report, args)
    return EXIT_OK


def cmd_decode(args) -> int:
    vocab = _load_vocabs(args)
    vm = vocab.vocab_map
    in_fmt = "json" if args.format == "json" else "ids"
    streams = _read_id_streams(args.input, in_fmt)

    pieces = []
    decode_errors = 0
    invalid_spans = 0
    positions = []
    for lineno, ids in enumerate(streams, 1):
        comp = from_ids(ids, vm)
        try:
            rep = decode_stream(comp, args.mode)
        except DecodeError as e:
            raise CliError(f"line {lineno}: {e}", EXIT_DECODE) from e
        decode_errors += rep.decode_errors
        positions.extend([lineno, p] for p in rep.error_positions)
        if args.format == "text":
            text, bad = detokenize_with_errors(rep.tokens, vocab)
            invalid_spans += bad
            pieces.append(text)
        else:
            pieces.append(format_line(to_ids(rep.tokens, vm), in_fmt) + "\n")
    _write_out("".join(pieces), args.out)
    report = {
        "sequences": len(streams),
        "decode_errors": decode_errors,
        "error_positions": positions,
    }
    if args.format == "text":
        report["invalid_utf8_spans"] = invalid_spans
    _side_report(report, args)
    return EXIT_OK


def _corpus_files(paths: Iterable[str]) -> List[tuple]:
    """Each argument is one corpus: a file, or every file under a directory."""
    corpora = []
    for p in paths:
        path = Path(p)
        if path.is_dir():
            files = sorted(f for f in path.rglob("*") if f.is_file())
        elif path.is_file():
            files = [path]
        else:
            raise CliError(f"no such file or directory: {p}", EXIT_IO)
        corpora.append((p, files))
    return corpora


def _accumulate_file(path: str, vocab: SubwordVocab) -> LengthAccumulator:
    acc = LengthAccumulator()
    for doc in _read_text(path).splitlines(keepends=True):
        acc.add(doc, vocab)
    return acc


def cmd_analyze(args) -> int:
    vocab = _load_vocabs(args)
    corpora = _corpus_files(args.inputs)
    reports = []
    for name, files in corpora:
        paths = [str(f) for f in files]
        if args.jobs > 1 and len(paths) > 1:
            from concurrent.futures import ProcessPoolExecutor

            with ProcessPoolExecutor(args.jobs) as pool:
                parts = list(pool.map(_accumulate_file, paths, [vocab] * len(paths)))
        else:
            parts = [_accumulate_file(p, vocab) for p in paths]
        acc = LengthAccumulator()
        for part in parts:
            acc = acc.merge(part)
        reports.append(acc.report(vocab, args.alpha, name))
        if args.histograms:
            outdir = Path(args.histograms)
            outdir.mkdir(parents=True, exist_ok=True)
            stem = Path(name).name or "corpus"
            for key, hist in acc.histograms(vocab).items():
                with open(outdir / f"{stem}.{key}.csv", "w", encoding="utf-8", newline="") as f:
                    hist.write_csv(f)

    doc = {"alpha": args.alpha, "corpora": [r.to_dict() for r in reports]}
    rows = [row for r in reports for row in r.csv_rows()]
    _emit_report(doc, args, rows, CSV_HEADER)
    return EXIT_OK


def _count_tokens(path: str, fmt: str) -> int:
    return sum(len(ids) for ids in _read_id_streams(path, fmt))


def cmd_compare(args) -> int:
    control = _count_tokens(args.control, args.format)
    experimental = _count_tokens(args.experimental, args.format)
    if experimental == 0:
        raise CliError("experimental reference has no tokens", EXIT_INPUT)
    gain = relative_gain(control, experimental)
    if args.report == "text":
        _write_out(f"{gain:.4f}\n", args.out)
        return EXIT_OK
    _emit_report(
        {"control_tokens": control, "experimental_tokens": experimental,
         "relative_gain": gain},
        args,
    )
    return EXIT_OK


def cmd_tps(args) -> int:
    control = _count_tokens(args.control, args.format)
    experimental = _count_tokens(args.experimental, args.format)
    if experimental == 0:
        raise CliError("experimental reference has no tokens", EXIT_INPUT)
    try:
        rep = ThroughputReport.build(
            control, experimental, tps=args.tps,
            tokens_out=args.tokens_out, total_time=args.total_time,
        )
    except ValueError as e:
        raise CliError(str(e), EXIT_INPUT) from e
    if args.report == "text":
        _write_out(
            f"tps {rep.tps:.2f}\nrelative_gain {rep.relative_gain:.4f}\n"
            f"perceived_tps {rep.perceived_tps:.2f}\n",
            args.out,
        )
        return EXIT_OK
    _emit_report(rep.to_dict(), args)
    return EXIT_OK


def _parse_hex_bytes(s: str) -> List[int]:
    digits = "".join(s.replace(",", " ").replace("0x", " ").split())
    if len(digits) % 2:
        raise CliError(f"odd number of hex digits in {s!r}", EXIT_INPUT)
    try:
        return list(bytes.fromhex(digits))
    except ValueError as e:
        raise CliError(f"bad hex bytes {s!r}: {e}", EXIT_INPUT) from e


def cmd_pack(args) -> int:
    data = _parse_hex_bytes(" ".join(args.bytes))
    if len(data) != 3:
        raise CliError(f"expected 3 bytes, got {len(data)}", EXIT_INPUT)
    b1, b2, b3 = data
    try:
        packed = pack_char(b1, b2, b3)
    except IneligibleCharError as e:
        raise CliError(str(e), EXIT_INPUT) from e
    r1, r2, r3 = unpack_char(packed)
    lines = [
        f"input   {b1:02X} {b2:02X} {b3:02X}",
        f"bits    {b1:08b} {b2:08b} {b3:08b}",
        f"split   {packed.prefix.bits6:06b} {packed.hi:09b} {packed.lo:09b}",
        f"prefix  0x{packed.prefix.bits6:02X} ({packed.prefix.name})",
        f"hi      0x{packed.hi:03X}",
        f"lo      0x{packed.lo:03X}",
        f"unpack  {r1:02X} {r2:02X} {r3:02X}",
        f"roundtrip {'ok' if (r1, r2, r3) == (b1, b2, b3) else 'FAILED'}",
    ]
    try:
        lines.insert(1, f"char    {bytes(data).decode('utf-8')}")
    except UnicodeDecodeError:
        pass
    _write_out("\n".join(lines) + "\n", args.out)
    return EXIT_OK


# --------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="subbyte",
        description="Sub-byte compression of UTF-8 byte-fallback token streams.",
    )
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def vocab_flags(sp):
        sp.add_argument("--vocab-map", help="JSON id binding for byte/ext/prefix tokens")
        sp.add_argument("--subword-vocab", help="subword vocabulary, one surface per line")

    def out_flags(sp, report_choices=("json", "csv")):
        sp.add_argument("--out", help="output path (default stdout)")
        sp.add_argument("--report", choices=report_choices, default="json")

    sp = sub.add_parser("encode", help="tokenize (text input) and compress")
    sp.add_argument("input", help="input path, - for stdin")
    vocab_flags(sp)
    sp.add_argument("--format", choices=("text", "ids", "json"), required=True,
                    help="input format; compressed output is ids, or json for json input")
    sp.add_argument("--out")
    sp.add_argument("--report-out", help="where to write the encode report (default stderr)")
    sp.set_defaults(func=cmd_encode)

    sp = sub.add_parser("decode", help="decompress, then detokenize for text output")
    sp.add_argument("input", help="compressed id stream, - for stdin")
    vocab_flags(sp)
    sp.add_argument("--format", choices=("text", "ids", "json"), required=True,
                    help="output format; input is ids, or json for json output")
    sp.add_argument("--mode", choices=("strict", "lenient"), default="strict")
    sp.add_argument("--out")
    sp.add_argument("--report-out", help="where to write the decode report (default stderr)")
    sp.set_defaults(func=cmd_decode)

    sp = sub.add_parser("analyze", help="length reduction and Rényi efficiency over corpora")
    sp.add_argument("inputs", nargs="+", help="corpus files or directories")
    vocab_flags(sp)
    sp.add_argument("--alpha", type=float, default=DEFAULT_ALPHA)
    sp.add_argument("--histograms", metavar="DIR", help="also write token histograms as CSV")
    sp.add_argument("--jobs", type=int, default=1, help="worker processes per corpus")
    out_flags(sp)
    sp.set_defaults(func=cmd_analyze)

    for name, helptext, func in (
        ("compare", "relative gain of two reference tokenizations", cmd_compare),
        ("tps", "perceived TPS from measured throughput", cmd_tps),
    ):
        sp = sub.add_parser(name, help=helptext)
        sp.add_argument("control", help="control tokenization of the reference")
        sp.add_argument("experimental", help="experimental tokenization of the reference")
        sp.add_argument("--format", choices=("ids", "json"), default="ids")
        out_flags(sp, ("json", "csv", "text"))
        if name == "tps":
            sp.add_argument("--tps", type=float, help="measured tokens per second")
            sp.add_argument("--tokens-out", type=int)
            sp.add_argument("--total-time", type=float, help="seconds")
        sp.set_defaults(func=func)

    sp = sub.add_parser("pack", help="show the bit repacking of one character")
    sp.add_argument("bytes", nargs="+", help='hex bytes, e.g. "E4 BC 97"')
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_pack)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(name)s: %(message)s",
    )
    try:
        return args.func(args)
    except CliError as e:
        log.error("%s", e)
        return e.code
    except VocabMismatchError as e:
        log.error("vocabulary mismatch: %s", e)
        return EXIT_VOCAB
    except (StreamFormatError, UnicodeDecodeError) as e:
        log.error("malformed input: %s", e)
        return EXIT_INPUT
    except OSError as e:
        log.error("%s", e)
        return EXIT_IO
    except ValueError as e:
        # e.g. a baseline stream carrying compression tokens
        log.error("invalid input: %s", e)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
