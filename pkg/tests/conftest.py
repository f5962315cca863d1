"""Shared fixtures and the acceptance summary.

Tests carrying ``@pytest.mark.acceptance(n, "label")`` are tallied per
criterion; one PASS/FAIL line per criterion is printed at the end of the run.
"""

import os
import sys

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, os.path.dirname(__file__))

settings.register_profile(
    "default",
    deadline=None,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

_criteria: dict[int, dict] = {}


def pytest_runtest_logreport(report):
    marker = _markers.get(report.nodeid)
    if marker is None:
        return
    n, label = marker
    entry = _criteria.setdefault(n, {"label": label, "ok": True, "ran": False})
    if report.when == "call":
        entry["ran"] = True
    if report.failed or (report.when == "call" and report.skipped):
        entry["ok"] = False


_markers: dict[str, tuple[int, str]] = {}


def pytest_collection_modifyitems(items):
    for item in items:
        m = item.get_closest_marker("acceptance")
        if m is not None and m.args:
            _markers[item.nodeid] = (int(m.args[0]), m.args[1] if len(m.args) > 1 else "")


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_criteria):
        e = _criteria[n]
        status = "PASS" if e["ok"] and e["ran"] else "FAIL"
        terminalreporter.write_line(f"criterion {n:2d}: {status}  {e['label']}")


@pytest.fixture(scope="session")
def f3():
    from integrality.places import FunctionField

    return FunctionField(3)


@pytest.fixture(scope="session")
def qq():
    from integrality.places import Rationals

    return Rationals()


@pytest.fixture(scope="session")
def f3_def(f3):
    from integrality.diophdef import build_definition
    from integrality.places import parse_place

    return build_definition(f3, parse_place("finite:t", f3))


@pytest.fixture(scope="session")
def q5_def(qq):
    from integrality.diophdef import build_definition
    from integrality.places import Place

    return build_definition(qq, Place.prime(5))


@pytest.fixture(scope="session")
def perf_def(f3):
    from integrality.perfectclosure import build_perf_definition
    from integrality.places import parse_place

    return build_perf_definition(f3, parse_place("finite:t", f3))
