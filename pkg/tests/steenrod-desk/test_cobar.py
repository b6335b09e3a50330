from steenrod_desk.cobar import balance_check, cobar_coext, cobar_regrade_check
from steenrod_desk.comodule import regular_comodule, trivial_comodule
from steenrod_desk.subquot import FULL, steenrod_quotient


def test_cobar_over_a0():
    c = steenrod_quotient(0)
    f2 = trivial_comodule(c)

    actual = cobar_coext(f2, f2, c, 3, 3).dims
    expected = {(0, 0): 1, (1, 1): 1, (2, 2): 1, (3, 3): 1}
    assert actual == expected


def test_cobar_over_full_dual_in_low_degrees():
    f2 = trivial_comodule()

    actual = cobar_coext(f2, f2, FULL, 2, 4).dims
    expected = {(0, 0): 1, (1, 1): 1, (1, 2): 1, (1, 4): 1, (2, 2): 1, (2, 4): 1}
    assert actual == expected


def test_cobar_of_cofree_comodule():
    c = steenrod_quotient(1)

    actual = cobar_coext(regular_comodule(c), trivial_comodule(c), c, 1, 0).dims
    expected = {(0, -6): 1}
    assert actual == expected


def test_balance_over_a1():
    c = steenrod_quotient(1)
    f2 = trivial_comodule(c)

    actual = balance_check(f2, f2, c, 4, 12).passed
    expected = True
    assert actual == expected


def test_balance_into_cofree_comodule():
    c = steenrod_quotient(1)

    report = balance_check(trivial_comodule(c), regular_comodule(c), c, 2, 6, 0)

    actual = (report.passed, report.mismatches)
    expected = (True, [])
    assert actual == expected


def test_cobar_regrading():
    actual = cobar_regrade_check(steenrod_quotient(0), 1, 2, 4).passed
    expected = True
    assert actual == expected
