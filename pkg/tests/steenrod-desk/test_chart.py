import pytest

from steenrod_desk.chart import EMPTY, adams_points, emit_chart, to_ascii
from steenrod_desk.errors import WindowError
from steenrod_desk.homalg import ExtChart


def test_empty_chart():
    actual = emit_chart(ExtChart({}, 2, 4), "ascii")
    expected = EMPTY
    assert actual == expected


def test_adams_points():
    chart = ExtChart({(1, 2): 1, (3, 7): 1, (2, 4): 0}, 3, 7)

    actual = adams_points(chart)
    expected = {(1, 1): 1, (4, 3): 1}
    assert actual == expected


def test_ascii_tower():
    chart = ExtChart({(0, 0): 1, (1, 1): 1, (2, 2): 1}, 2, 2)

    actual = to_ascii(chart)
    expected = "2 | 1\n1 | 1\n0 | 1\n  +--\ns   0  (t-s)"
    assert actual == expected


def test_ascii_marks_empty_cells():
    chart = ExtChart({(0, 0): 1, (1, 2): 1}, 1, 2)

    actual = to_ascii(chart).splitlines()[:2]
    expected = ["1 | . 1", "0 | 1 ."]
    assert actual == expected


def test_svg_dots():
    chart = ExtChart({(0, 0): 1, (1, 1): 2}, 1, 1, note="Ext")
    svg = emit_chart(chart, "svg")

    actual = (svg.startswith("<svg "), svg.count("<circle "), "<title>Ext</title>" in svg)
    expected = (True, 3, True)
    assert actual == expected


def test_svg_is_stable():
    chart = ExtChart({(0, 0): 1, (1, 1): 1}, 1, 1)

    actual = emit_chart(chart, "svg")
    expected = emit_chart(ExtChart({(1, 1): 1, (0, 0): 1}, 1, 1), "svg")
    assert actual == expected


def test_chart_rejects_empty_range():
    with pytest.raises(WindowError):
        emit_chart(ExtChart({}, 1, 0, min_t=2))


def test_chart_rejects_format():
    with pytest.raises(ValueError):
        emit_chart(ExtChart({(0, 0): 1}, 0, 0), "png")
