import random

import pytest

from subbyte.tokenstream import Byte, Subword


def oracle_split(b1, b2, b3):
    """Independent reference: re-cut the 24-bit string at 6/9/9."""
    bits = f"{b1:08b}{b2:08b}{b3:08b}"
    return int(bits[:6], 2), int(bits[6:15], 2), int(bits[15:], 2)


def byte_tokens(hexstr):
    return [Byte(b) for b in bytes.fromhex(hexstr)]


def random_baseline_stream(rng: random.Random, max_parts: int = 8):
    """Random mixture of subwords, eligible CJK characters, other multi-byte
    characters, ASCII bytes and malformed fragments."""
    out = []
    for _ in range(rng.randint(0, max_parts)):
        kind = rng.random()
        if kind < 0.2:
            out.append(Subword(rng.randint(515, 2000)))
        elif kind < 0.6:
            for _ in range(rng.randint(1, 6)):
                b1 = rng.randint(0xE4, 0xEF)
                out += [Byte(b1), Byte(rng.randint(0x80, 0xBF)), Byte(rng.randint(0x80, 0xBF))]
        elif kind < 0.7:
            # other valid UTF-8: 2-byte, E0-E3 lead, 4-byte
            ch = chr(rng.choice([rng.randint(0x80, 0x7FF), rng.randint(0x800, 0x3FFF),
                                 rng.randint(0x10000, 0x10FFFF)]))
            out += [Byte(b) for b in ch.encode("utf-8", "surrogatepass")]
        elif kind < 0.8:
            out += [Byte(rng.randint(0, 0x7F)) for _ in range(rng.randint(1, 3))]
        else:
            # malformed: truncated characters, stray continuations, any byte
            out += [Byte(rng.randint(0, 255)) for _ in range(rng.randint(1, 4))]
    return out


@pytest.fixture
def rng():
    return random.Random(1234)


# -- acceptance summary ---------------------------------------------------

_criteria = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    n, title = marker.args
    if rep.when == "call" or (rep.when == "setup" and rep.failed):
        _criteria[n] = (title, rep.passed)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_criteria):
        title, ok = _criteria[n]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {n}. {title}")
