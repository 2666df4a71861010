import os

import pytest
from hypothesis import HealthCheck, settings

from swkb.catalog import UnitSystem, default_catalog

settings.register_profile("ci", max_examples=40, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("thorough", max_examples=400, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "ci"))

CATALOG = default_catalog()


def pytest_make_parametrize_id(config, val, argname):
    label = getattr(val, "label", None)
    return label if isinstance(label, str) else None


@pytest.fixture(params=CATALOG)
def entry(request):
    return request.param


@pytest.fixture(params=[0.5, 1.0, 2.0], ids=lambda h: f"hbar={h}")
def units(request):
    return UnitSystem(hbar=request.param)

# one line per acceptance criterion, printed at the end of the run
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
