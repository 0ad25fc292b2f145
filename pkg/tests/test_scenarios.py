"""Pins the shipped scenario files to the in-package builders."""

from __future__ import annotations

from pathlib import Path

import pytest

from qosalloc.harness import load_scenario
from qosalloc.scenarios import comparison_scenario, surge_rates, tracking_rates, tracking_scenario

SCENARIO_DIR = Path(__file__).resolve().parent.parent / "scenarios"


@pytest.mark.parametrize("qos_level", [1, 2, 3])
def test_tracking_files_match_builder(qos_level):
    loaded = load_scenario(SCENARIO_DIR / f"tracking_q{qos_level}.json")
    assert loaded == tracking_scenario(qos_level=qos_level)


def test_comparison_file_matches_builder():
    loaded = load_scenario(SCENARIO_DIR / "comparison.json")
    assert loaded == comparison_scenario()


def test_tracking_trace_has_midrun_step():
    rates = tracking_rates()
    assert len(rates) == 40
    assert set(rates[:20]) == {40.0}
    assert set(rates[20:]) == {45.0}


def test_surge_trace_plateaus():
    rates = surge_rates()
    assert len(rates) == 40
    assert rates[0] == 40.0 and rates[10] == 58.0 and rates[20] == 36.0 and rates[30] == 44.0
