import json

import pytest

from steenrod_desk.cli import main


@pytest.mark.parametrize(
    "argv, output",
    [
        (["coprod", "z2"], "z2|1 + z1^2|z1 + 1|z2"),
        (["antipode", "z2"], "z1^3 + z2"),
        (["mul", "Sq(2)", "Sq(1)"], "Sq(3) + Sq(0,1)"),
        (["mul", "z1", "z1"], "z1^2"),
        (["ys", "--s", "2", "--element", "y3", "--coaction"], "1|y3 + z1^4|y1^2 + z2^4|1"),
        (
            ["ys", "--s", "2", "--element", "y3", "--computed"],
            "1|y3 + z1^4|y1^2 + z1^12|1 + z2^4|1",
        ),
        (["pd-check", "--n", "1"], "A(1): dim 8, pd 6, pairing perfect"),
    ],
)
def test_one_line_outputs(capsys, argv, output):
    code = main(argv)

    actual = (code, capsys.readouterr().out.strip())
    expected = (0, output)
    assert actual == expected


def test_ext_lines(capsys):
    code = main(["ext", "--span", "A(0)", "--max-s", "2", "--max-t", "2"])

    actual = (code, capsys.readouterr().out.splitlines())
    expected = (0, ["0 0 1", "1 1 1", "2 2 1"])
    assert actual == expected


def test_coext_into_cofree(capsys):
    argv = ["coext", "--span", "A(1)", "--source", "regular", "--max-s", "1", "--max-t", "0"]
    code = main(argv)

    actual = (code, capsys.readouterr().out.strip())
    expected = (0, "0 -6 1")
    assert actual == expected


def test_chart_written_to_file(tmp_path):
    out = tmp_path / "a0.txt"
    code = main(["chart", "--span", "A(0)", "--max-s", "2", "--max-t", "2", "--out", str(out)])

    actual = (code, out.read_text())
    expected = (0, "2 | 1\n1 | 1\n0 | 1\n  +--\ns   0  (t-s)\n")
    assert actual == expected


def test_vanish_json(tmp_path, capsys):
    path = tmp_path / "h_bp.json"
    path.write_text(json.dumps({"scenario": "H_BP", "windows": [{"max": 20, "guard": 10}]}))
    code = main(["vanish", "--scenario", str(path), "--json"])
    report = json.loads(capsys.readouterr().out)

    actual = (code, report["passed"], report["aborted"])
    expected = (0, True, None)
    assert actual == expected


def test_ys_splitting(capsys):
    code = main(["ys", "--s", "1", "--split", "--max-degree", "16"])

    actual = (code, capsys.readouterr().out.strip())
    expected = (0, "splitting of H_*(Y_1) through degree 16: passed")
    assert actual == expected


def test_ys_without_source_is_usage_error():
    actual = main(["ys"])
    expected = 2
    assert actual == expected


def test_unknown_generator_is_usage_error():
    actual = main(["ys", "--s", "1", "--element", "y5"])
    expected = 2
    assert actual == expected


def test_unknown_preset_is_usage_error():
    actual = main(["basis", "--span", "B(2)", "--max-degree", "4"])
    expected = 2
    assert actual == expected


def test_zero_guard_is_usage_error(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"scenario": "H_BP", "windows": [{"max": 20, "guard": 0}]}))

    actual = main(["vanish", "--scenario", str(path)])
    expected = 2
    assert actual == expected


def test_no_command_prints_help(capsys):
    code = main([])

    actual = (code, "steenrod-desk" in capsys.readouterr().out)
    expected = (0, True)
    assert actual == expected
