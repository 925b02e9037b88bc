from __future__ import annotations

import random
from pathlib import Path

import pytest

from profsum.ingest import parse_folded

FIXTURES = Path(__file__).parent / "fixtures"
SOURCES = FIXTURES / "sources"
JAVA_CORPUS = FIXTURES / "javacorpus"
JAVA_BROKEN = FIXTURES / "javacorpus_broken"
PPROF_DIR = FIXTURES / "pprof"


@pytest.fixture(scope="session")
def fig32_profile():
    profile, _ = parse_folded((FIXTURES / "fig32.folded").read_bytes())
    return profile


@pytest.fixture(scope="session")
def searchrunner_profile():
    profile, _ = parse_folded((FIXTURES / "searchrunner.folded").read_bytes())
    return profile


@pytest.fixture(scope="session")
def fft_profile():
    profile, _ = parse_folded((FIXTURES / "fft.folded").read_bytes())
    return profile


# ----------------------------------------------------------------------
# random folded profiles
# ----------------------------------------------------------------------

_FILES = [None, "Alpha.java", "Beta.java", "util/Gamma.java"]


def random_frame_token(rng: random.Random, pool_size: int = 24) -> str:
    fn = f"pkg.Cls{rng.randrange(4)}.fn{rng.randrange(pool_size)}"
    shape = rng.randrange(4)
    if shape == 0:
        return fn
    if shape == 1:
        return f"{fn}:L{rng.randrange(1, 300)}"
    file = rng.choice(_FILES[1:])
    if shape == 2:
        return f"{fn}({file}:{rng.randrange(1, 300)})"
    return f"{fn}({file}:0)"  # known file, unknown line


def random_folded_text(rng: random.Random, max_stacks: int = 50,
                       max_depth: int = 12, metric_pragma: bool = False) -> str:
    lines = []
    if metric_pragma:
        lines.append("#metric cache-misses count")
    n_stacks = rng.randrange(1, max_stacks + 1)
    for _ in range(n_stacks):
        depth = rng.randrange(1, max_depth + 1)
        stack = ";".join(random_frame_token(rng) for _ in range(depth))
        lines.append(f"{stack} {rng.randrange(1, 1000)}")
    return "\n".join(lines) + "\n"


@pytest.fixture
def rng():
    return random.Random(0xC0FFEE)


# ----------------------------------------------------------------------
# acceptance summary: one line per criterion at the end of the run
# ----------------------------------------------------------------------

def pytest_terminal_summary(terminalreporter, exitstatus, config):
    rows = []
    for status in ("passed", "failed"):
        for rep in terminalreporter.stats.get(status, []):
            nodeid = getattr(rep, "nodeid", "")
            if "test_acceptance.py" not in nodeid or rep.when != "call":
                continue
            rows.append((nodeid.split("::")[-1], status == "passed"))
    if not rows:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok in sorted(rows):
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}")
