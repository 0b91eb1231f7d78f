from __future__ import annotations

from importlib import resources
from pathlib import Path
from time import perf_counter
from typing import Optional

import pytest
from hypothesis import HealthCheck, settings

from logfront.exactalg import SparsePoly, poly_parse

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

DATA = Path(str(resources.files("logfront") / "data"))


def load(name: str) -> SparsePoly:
    return poly_parse((DATA / name).read_text())


@pytest.fixture
def data_dir() -> Path:
    return DATA


@pytest.fixture
def budget(request):
    """Call with a time limit in seconds at the end of a criterion; records the elapsed time."""
    start = perf_counter()

    def check(limit: Optional[float]) -> float:
        elapsed = perf_counter() - start
        request.node.user_properties.append(("elapsed", elapsed))
        request.node.user_properties.append(("limit", limit))
        if limit is not None:
            assert elapsed < limit, f"took {elapsed:.1f} s, budget {limit} s"
        return elapsed

    return check


def pytest_terminal_summary(terminalreporter):
    rows = []
    for outcome in ("passed", "failed"):
        for rep in terminalreporter.stats.get(outcome, []):
            if rep.when == "call" and "test_acceptance.py" in rep.nodeid:
                rows.append((rep.nodeid.split("::")[-1], outcome, dict(rep.user_properties)))
    if not rows:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome, props in sorted(rows):
        timing = f"{props['elapsed']:7.2f} s" if "elapsed" in props else ""
        if props.get("limit") is not None:
            timing += f" / {props['limit']:g} s"
        terminalreporter.write_line(f"{'PASS' if outcome == 'passed' else 'FAIL'}  {name:<48} {timing}")
