import contextlib
import os
import time

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("ci", deadline=None, max_examples=200,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

_CRITERIA = pytest.StashKey[list]()


@pytest.fixture
def data_dir():
    from importlib import resources

    return resources.files("expertaudit.data")


def pytest_configure(config):
    config.stash[_CRITERIA] = []


@pytest.fixture
def criterion(request):
    """Context manager that records one PASS/FAIL line for an acceptance criterion."""
    lines = request.config.stash[_CRITERIA]

    @contextlib.contextmanager
    def record(number: int, title: str, limit_s: float | None = None):
        start = time.perf_counter()
        notes: list[str] = []
        try:
            yield notes
            elapsed = time.perf_counter() - start
            if limit_s is not None:
                assert elapsed < limit_s, f"took {elapsed:.1f}s, limit {limit_s:g}s"
        except BaseException as exc:
            elapsed = time.perf_counter() - start
            msg = str(exc).splitlines()[0] if str(exc) else type(exc).__name__
            line = f"FAIL  criterion {number:>2}: {title} ({elapsed:.2f}s) -- {msg}"
            lines.append((number, line))
            print(line)
            raise
        detail = "; ".join(notes)
        line = f"PASS  criterion {number:>2}: {title} ({elapsed:.2f}s)" + (f" -- {detail}" if detail else "")
        lines.append((number, line))
        print(line)

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_CRITERIA, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(lines):
            terminalreporter.write_line(line)
