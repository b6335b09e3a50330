import pytest

from steenrod_desk.config import (
    PresentationConfig,
    ProfileConfig,
    ScenarioConfig,
    WindowConfig,
)
from steenrod_desk.errors import ParseError, WindowError
from steenrod_desk.graded import DegreeWindow
from steenrod_desk.subquot import Profile


def test_window_config_from_dict():
    actual = WindowConfig.from_dict({"max": 30, "guard": 16})
    expected = WindowConfig(30, 16)
    assert actual == expected


def test_window_config_window():
    actual = WindowConfig(30, 16).window()
    expected = DegreeWindow(30, 16)
    assert actual == expected


def test_scenario_config_from_dict():
    data = {"scenario": "YN_YNEXT", "n": 1, "windows": [{"max": 32, "guard": 14}]}
    actual = ScenarioConfig.from_dict(data)

    expected = ScenarioConfig("YN_YNEXT", 1, [WindowConfig(32, 14)])
    assert actual == expected


def test_scenario_config_to_dict():
    data = {"scenario": "H_BP", "n": None, "windows": [{"max": 20, "guard": 10}]}

    actual = ScenarioConfig.from_dict(data).to_dict()
    expected = data
    assert actual == expected


def test_scenario_config_from_yaml(tmp_path):
    path = tmp_path / "scenario.yaml"
    path.write_text(
        "scenario: MSP_BP\n"
        "windows:\n"
        "  - {max: 24, guard: 14}\n"
        "  - {max: 30, guard: 14}\n"
    )
    actual = ScenarioConfig.from_file(path)

    expected = ScenarioConfig("MSP_BP", None, [WindowConfig(24, 14), WindowConfig(30, 14)])
    assert actual == expected


def test_scenario_config_rejects_unknown_scenario():
    with pytest.raises(ParseError):
        ScenarioConfig.from_dict({"scenario": "XYZ", "windows": [{"max": 8, "guard": 2}]})


def test_scenario_config_rejects_empty_ladder():
    with pytest.raises(WindowError):
        ScenarioConfig.from_dict({"scenario": "H_BP", "windows": []})


def test_config_file_must_be_mapping(tmp_path):
    path = tmp_path / "list.yaml"
    path.write_text("- 1\n- 2\n")
    with pytest.raises(ParseError):
        ScenarioConfig.from_file(path)


def test_profile_config(tmp_path):
    path = tmp_path / "profile.json"
    path.write_text('{"caps": [1, "inf"], "tail": "inf"}')

    actual = ProfileConfig.from_file(path).to_profile()
    expected = Profile((1,), None)
    assert actual == expected


def test_presentation_config(tmp_path):
    path = tmp_path / "y1.yaml"
    path.write_text(
        "name: H_*(Y_1)\n"
        "generators:\n"
        "  - {name: y1, degree: 4}\n"
        "coaction:\n"
        '  y1: "1|y1 + z1^4|1"\n'
        "conjugate: true\n"
    )
    presentation = PresentationConfig.from_file(path).to_presentation()

    actual = (presentation.name, presentation.coaction_text("y1"))
    expected = ("H_*(Y_1)", "1|y1 + z1^4|1")
    assert actual == expected
