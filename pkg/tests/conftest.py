import pytest
from hypothesis import HealthCheck, settings

from mathieu_gaussian import ctx_new

settings.register_profile(
    "default", deadline=None, max_examples=25,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


@pytest.fixture(scope="session")
def ctx():
    return ctx_new(50)


@pytest.fixture(scope="session")
def ctx30():
    return ctx_new(30)


def rel(x, y):
    """Relative difference |x - y| / |y| (absolute when y == 0)."""
    d = abs(x - y)
    return d / abs(y) if y != 0 else d


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(results):
        terminalreporter.write_line(results[n])
