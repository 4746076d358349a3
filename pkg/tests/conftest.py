import time
from contextlib import contextmanager

import pytest

from secureic.model import enumerate_instances, parse_instance

# receivers 2 and 3 hold each other's message, receiver 1 holds nothing
SWAP_PLAIN = "(1|-),(2|3),(3|2);(e|-)"
SWAP_EVE = "(1|-),(2|3),(3|2);(e|1)"


@pytest.fixture(scope="session")
def n3_feasible():
    return enumerate_instances(3, feasible_only=True)


@pytest.fixture(scope="session")
def swap_plain():
    return parse_instance(SWAP_PLAIN)


@pytest.fixture(scope="session")
def swap_eve():
    return parse_instance(SWAP_EVE)


# ------------------------------------------------------ acceptance reporting

_RESULTS: dict[int, str] = {}


@contextmanager
def _criterion(num: int, title: str, limit: float | None = None):
    started = time.perf_counter()
    notes: list[str] = []
    try:
        yield notes
    except BaseException as exc:
        took = time.perf_counter() - started
        _RESULTS[num] = f"FAIL  criterion {num:>2}: {title} ({took:.1f} s) - {type(exc).__name__}: {exc}"
        raise
    took = time.perf_counter() - started
    extra = f" [{'; '.join(notes)}]" if notes else ""
    if limit is not None and took > limit:
        _RESULTS[num] = f"FAIL  criterion {num:>2}: {title} ({took:.1f} s > {limit:g} s limit){extra}"
        raise AssertionError(f"criterion {num} took {took:.1f} s, limit {limit:g} s")
    bound = f" < {limit:g} s" if limit is not None else ""
    _RESULTS[num] = f"PASS  criterion {num:>2}: {title} ({took:.1f} s{bound}){extra}"


@pytest.fixture
def criterion():
    return _criterion


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for num in sorted(_RESULTS):
        terminalreporter.write_line(_RESULTS[num])
