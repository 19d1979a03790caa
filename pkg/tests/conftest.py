import itertools

import numpy as np
import pytest

from rcsim.complex import make_rng


def colex_subsets(n, size):
    """Independent colex enumeration: sort by reversed tuple."""
    return sorted(itertools.combinations(range(n), size), key=lambda f: f[::-1])


def brute_rank(rows):
    """GF(2) rank as log2 of the number of distinct subset sums of int rows."""
    span = {0}
    for r in rows:
        span |= {s ^ r for s in span}
    return len(span).bit_length() - 1


@pytest.fixture
def rng():
    return make_rng(12345)


def pure_cohomology_counts(n, k, kfaces):
    """(|Z|, |B|) for degree k-1 cochains, by plain enumeration of sets of faces.

    Uses only itertools; no package code. Reduced convention at k = 1.
    """
    lower = list(itertools.combinations(range(n), k))
    index = {f: i for i, f in enumerate(lower)}
    tops = [tuple(sorted(f)) for f in kfaces]
    bnd = [[index[f[:i] + f[i + 1:]] for i in range(len(f))] for f in tops]
    cocycles = 0
    for mask in range(1 << len(lower)):
        if all(sum(mask >> b & 1 for b in row) % 2 == 0 for row in bnd):
            cocycles += 1
    if k == 1:
        cobounds = {0, (1 << n) - 1}
    else:
        below = list(itertools.combinations(range(n), k - 1))
        rows = []
        for g in below:
            r = 0
            for f in lower:
                if set(g) <= set(f):
                    r |= 1 << index[f]
            rows.append(r)
        cobounds = {0}
        for r in rows:
            cobounds |= {s ^ r for s in cobounds}
    return cocycles, len(cobounds)


def pure_betti(n, k, kfaces):
    z, b = pure_cohomology_counts(n, k, kfaces)
    return (z.bit_length() - 1) - (b.bit_length() - 1)


ACCEPTANCE_KEY = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[ACCEPTANCE_KEY] = []


@pytest.fixture
def acceptance_log(request):
    """Append (criterion, passed, detail) lines for the end-of-run summary."""
    lines = request.config.stash[ACCEPTANCE_KEY]

    def record(name, passed, detail=""):
        line = f"{name}: {'PASS' if passed else 'FAIL'}  {detail}".rstrip()
        lines.append(line)
        print(line)
        return passed

    return record


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(ACCEPTANCE_KEY, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
