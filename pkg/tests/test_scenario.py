from pathlib import Path

import pytest

from appgate.castore import ScenarioFailure, ScenarioRunner, run_scenario_file

SCENARIOS = Path(__file__).resolve().parent.parent / "fixtures" / "scenarios"

ALL_SCENARIOS = sorted(SCENARIOS.glob("*.scenario"))


@pytest.mark.parametrize("path", ALL_SCENARIOS, ids=lambda p: p.stem)
def test_fixture_scenarios_hold(path):
    runner = run_scenario_file(path)
    assert runner.checks, "scenario must contain at least one expectation"


def test_scenario_mismatch_reports_line():
    text = """
node origin origin
node gw1 gateway
add origin A hello
fetch gw1 A expect notfound
"""
    with pytest.raises(ScenarioFailure) as info:
        ScenarioRunner().run_text(text)
    assert info.value.line_no == 5


def test_scenario_corrupt_outcome():
    runner = ScenarioRunner()
    runner.run_text(
        """
node origin origin
node gw1 gateway
add origin A hello
"""
    )
    cid = runner.aliases["A"]
    runner.network.node("origin").corrupt(cid)
    with pytest.raises(ScenarioFailure):
        runner.run_text("fetch gw1 A expect ok")
