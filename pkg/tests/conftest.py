import pytest

from skewseries.ring import Ring, preset

PRESETS = ("qcomm(2)", "delta-x2", "yx-p2")


@pytest.fixture(scope="session")
def rings():
    return {name: Ring(preset(name)) for name in PRESETS}


@pytest.fixture(scope="session")
def flagship():
    return Ring(preset("yx-p2"))


@pytest.fixture(scope="session")
def dring():
    return Ring(preset("delta-x2"))


@pytest.fixture(scope="session")
def qring():
    return Ring(preset("qcomm(2)"))


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    if mod and mod.RESULTS:
        terminalreporter.section("acceptance criteria")
        for k in sorted(mod.RESULTS):
            terminalreporter.write_line(mod.RESULTS[k])
