import pytest

from steenrod_desk.algebra import trivial_module
from steenrod_desk.comodule import regular_comodule, trivial_comodule
from steenrod_desk.errors import CoherenceError
from steenrod_desk.homalg import build_An
from steenrod_desk.spectral import (
    E2Page,
    NormalSequence,
    ce_e2_algebras,
    ce_e2_comodule_first,
    ce_e2_comodule_second,
    check_normal,
)
from steenrod_desk.milnor import UNIT
from steenrod_desk.subquot import FULL, FiniteSpan, exterior_quotient, steenrod_quotient


@pytest.fixture(scope="module")
def e1_in_a1():
    return NormalSequence(exterior_quotient(1), steenrod_quotient(1)).verify()


def test_quotient_of_e1_in_a1(e1_in_a1):
    actual = (e1_in_a1.quotient_algebra.dimension, e1_in_a1.freeness.passed)
    expected = (2, True)
    assert actual == expected


def test_a0_is_not_normal_in_a1():
    report = check_normal(build_An(1), steenrod_quotient(0))

    actual = (report.passed, report.degree)
    expected = (False, 3)
    assert actual == expected


def test_e2_from_algebras(e1_in_a1):
    page = ce_e2_algebras(
        e1_in_a1,
        trivial_module(e1_in_a1.quotient_algebra),
        trivial_module(e1_in_a1.algebra),
        2,
        2,
        6,
    )

    actual = (page.first_quadrant, page.get(0, 0, 0), page.subquotient.passed)
    expected = (True, 1, True)
    assert actual == expected


def test_e2_comodule_first_cross_check(e1_in_a1):
    page = ce_e2_comodule_first(
        e1_in_a1,
        trivial_comodule(e1_in_a1.quotient),
        trivial_comodule(e1_in_a1.ambient),
        2,
        2,
        6,
    )

    actual = (page.first_quadrant, page.cross_checked, page.subquotient.passed)
    expected = (True, True, True)
    assert actual == expected


def test_e2_comodule_second(e1_in_a1):
    page = ce_e2_comodule_second(
        e1_in_a1,
        trivial_comodule(e1_in_a1.ambient),
        trivial_comodule(e1_in_a1.quotient),
        2,
        2,
        6,
    )

    actual = (page.first_quadrant, page.subquotient.passed)
    expected = (True, True)
    assert actual == expected


def test_comodule_second_needs_coherent_comodule(e1_in_a1):
    with pytest.raises(CoherenceError):
        ce_e2_comodule_second(
            e1_in_a1,
            regular_comodule(FULL, 8),
            trivial_comodule(e1_in_a1.quotient),
            1,
            1,
            4,
        )


def test_e2_page_rejects_construction():
    with pytest.raises(ValueError):
        E2Page({}, 1, 1, 0, 4, "spectral")


def test_comodule_second_matches_algebras_on_trivial_coefficients(e1_in_a1):
    # N* = M* = F2, so both pages are Ext_{S//R}(F2, Ext_R(F2, F2))
    second = ce_e2_comodule_second(
        e1_in_a1,
        trivial_comodule(e1_in_a1.ambient),
        trivial_comodule(e1_in_a1.quotient),
        2,
        2,
        6,
    )
    algebras = ce_e2_algebras(
        e1_in_a1,
        trivial_module(e1_in_a1.quotient_algebra),
        trivial_module(e1_in_a1.algebra),
        2,
        2,
        6,
    )

    actual = second.dims
    expected = algebras.dims
    assert actual == expected


def _e2_over_f2(seq, max_s, max_t, max_u):
    return ce_e2_algebras(
        seq,
        trivial_module(seq.quotient_algebra),
        trivial_module(seq.algebra),
        max_s,
        max_t,
        max_u,
    )


def test_e2_collapses_when_sub_is_everything():
    a1 = steenrod_quotient(1)
    seq = NormalSequence(a1, a1).verify()
    page = _e2_over_f2(seq, 2, 2, 6)

    actual = (seq.quotient_algebra.dimension, page.dims)
    expected = (1, {(0, t, u): n for (t, u), n in page.abutment.dims.items()})
    assert actual == expected


def test_e2_collapses_when_sub_is_trivial():
    seq = NormalSequence(FiniteSpan(frozenset({UNIT}), "F2"), steenrod_quotient(1)).verify()
    page = _e2_over_f2(seq, 2, 2, 6)

    actual = (seq.quotient_algebra.dimension, page.dims)
    expected = (8, {(s, 0, u): n for (s, u), n in page.abutment.dims.items()})
    assert actual == expected


def test_e2_bounds_ext_a1_through_total_degree_8(e1_in_a1):
    page = _e2_over_f2(e1_in_a1, 8, 8, 16)

    actual = (page.subquotient.passed, page.abutment.max_s, page.abutment.get(8, 8))
    expected = (True, 8, 1)
    assert actual == expected
