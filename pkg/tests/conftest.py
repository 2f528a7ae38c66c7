import numpy as np
import pytest

from magnolink.sweep import baseline_params, baseline_scenario, figure_preset, run_sweep

_ACCEPTANCE_LINES = []


@pytest.fixture
def report():
    """Record one pass/fail line for the terminal summary."""

    def _report(label, ok, detail=""):
        line = f"[{'PASS' if ok else 'FAIL'}] {label}" + (f" -- {detail}" if detail else "")
        _ACCEPTANCE_LINES.append(line)
        print(line)
        return ok

    return _report


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def params():
    return baseline_params()


@pytest.fixture
def scenario():
    return baseline_scenario()


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


_SWEEPS = {}


@pytest.fixture(scope="session")
def figure_result():
    """Cached baseline figure sweeps, keyed by preset name."""

    def get(name):
        if name not in _SWEEPS:
            _SWEEPS[name] = run_sweep(figure_preset(name))
        return _SWEEPS[name]

    return get
