import json
from pathlib import Path

import pytest

from steenrod_desk.cli import main
from steenrod_desk.parallel import THREADS_ENV, map_degrees, num_threads

GOLDEN = Path(__file__).parent / "golden"


def test_num_threads_default(monkeypatch):
    monkeypatch.delenv(THREADS_ENV, raising=False)

    actual = num_threads()
    expected = 1
    assert actual == expected


def test_num_threads_ignores_garbage(monkeypatch):
    monkeypatch.setenv(THREADS_ENV, "many")

    actual = num_threads()
    expected = 1
    assert actual == expected


def test_map_degrees_keeps_order(monkeypatch):
    monkeypatch.setenv(THREADS_ENV, "4")

    actual = map_degrees(lambda d: d * d, range(10))
    expected = [d * d for d in range(10)]
    assert actual == expected


@pytest.mark.parametrize("threads", ["1", "4"])
def test_chart_matches_golden(tmp_path, monkeypatch, threads):
    monkeypatch.setenv(THREADS_ENV, threads)
    out = tmp_path / "a1.txt"
    code = main(["chart", "--span", "A(1)", "--max-s", "3", "--max-t", "7", "--out", str(out)])

    actual = (code, out.read_bytes())
    expected = (0, (GOLDEN / "a1_chart.txt").read_bytes())
    assert actual == expected


def test_vanish_report_independent_of_threads(tmp_path, monkeypatch, capsys):
    path = tmp_path / "h_bp.json"
    path.write_text(json.dumps({"scenario": "H_BP", "windows": [{"max": 20, "guard": 10}]}))
    outputs = []
    for threads in ["1", "4"]:
        monkeypatch.setenv(THREADS_ENV, threads)
        code = main(["vanish", "--scenario", str(path), "--json"])
        outputs.append((code, capsys.readouterr().out))
    report = json.loads(outputs[0][1])
    for window in report["windows"]:
        window["checks"] = [
            {key: check[key] for key in ("name", "anchor", "passed")} for check in window["checks"]
        ]

    actual = (outputs[0], report)
    expected = (outputs[1], json.loads((GOLDEN / "h_bp_20_10.json").read_text()))
    assert actual == expected
