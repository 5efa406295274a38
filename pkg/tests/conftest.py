import numpy as np
import pytest

from swarmtwin import DigitalTwin, ScenarioConfig


@pytest.fixture
def paper_scenario():
    """The 640 x 600 m map, target (400, 300), v_max 5, sigma 1, 50 agents."""
    return ScenarioConfig(agent_count=50, scheme=DigitalTwin(), max_rounds=100)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


# name -> (passed, detail); filled by test_acceptance.py
ACCEPTANCE: dict[str, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[name]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")
