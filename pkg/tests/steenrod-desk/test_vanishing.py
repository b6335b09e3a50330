from pathlib import Path

import pytest

from steenrod_desk.comodule import regular_comodule, trivial_comodule
from steenrod_desk.config import ScenarioConfig, WindowConfig
from steenrod_desk.errors import WindowError
from steenrod_desk.graded import DegreeWindow
from steenrod_desk.subquot import exterior_quotient
from steenrod_desk.vanishing import (
    VanishingScenario,
    _column_generators,
    _primitives,
    double_vanishing_check,
    run_vanishing_chain,
)

SCENARIO_FILES = sorted((Path(__file__).parents[2] / "scenarios").glob("*.json"))


def _config(scenario, max_degree, guard, n=None):
    return ScenarioConfig(scenario, n, [WindowConfig(max_degree, guard)])


def test_primitives_under_guard():
    actual = [_primitives(0, 10), _primitives(1, 6), _primitives(2, 4)]
    expected = [[(1,), (0, 1), (0, 0, 1)], [(2,), (0, 2)], [(4,)]]
    assert actual == expected


def test_column_generators():
    actual = _column_generators(2, 14)
    expected = [(0, 1), (0, 2), (0, 4)]
    assert actual == expected


def test_cofree_comodule_keeps_zero_support_under_doubling():
    c = exterior_quotient(1)
    report = double_vanishing_check(c, regular_comodule(c), trivial_comodule(c), 1, 3, 4)

    actual = (report.passed, [st for st in report.support if st[0] > 0])
    expected = (True, [])
    assert actual == expected


@pytest.mark.parametrize("path", SCENARIO_FILES, ids=lambda p: p.stem)
def test_shipped_scenario_ladder_passes(path):
    config = ScenarioConfig.from_file(path)
    report = run_vanishing_chain(config)

    actual = (
        report.passed,
        report.aborted,
        len(report.windows),
        all(c.passed for w in report.windows for c in w.checks),
    )
    expected = (True, None, len(config.windows), True)
    assert actual == expected


def test_shipped_scenarios_cover_every_kind():
    configs = [ScenarioConfig.from_file(path) for path in SCENARIO_FILES]

    actual = sorted((c.scenario, c.n) for c in configs)
    expected = [
        ("H_BP", None),
        ("MSP_BP", None),
        ("YN_MSP", 1),
        ("YN_MSP", 2),
        ("YN_YNEXT", 1),
        ("YN_YNEXT", 2),
    ]
    assert actual == expected


def test_zero_guard_rejected():
    with pytest.raises(WindowError):
        VanishingScenario(_config("H_BP", 20, 0))


def test_yn_needs_n():
    with pytest.raises(WindowError):
        VanishingScenario(_config("YN_MSP", 32, 18))


def test_socle_without_generators():
    scenario = VanishingScenario(_config("YN_YNEXT", 8, 1, 1))
    checks = {name: run for name, _, run in scenario.checks(DegreeWindow(8, 1))}

    with pytest.raises(WindowError):
        checks["socle over Sq(0,..,2^j) in P(2)"]()


def test_report_table():
    report = run_vanishing_chain(_config("H_BP", 20, 10))

    actual = [(row["window"], row["result"]) for row in report.table()]
    expected = [("(20,10)", "pass"), ("(20,10)", "pass")]
    assert actual == expected
