import pytest

from steenrod_desk.comodule import regular_comodule, trivial_comodule
from steenrod_desk.errors import NotHopfError, ParseError
from steenrod_desk.subquot import (
    E_QUOTIENT,
    FULL,
    ClosureReport,
    Profile,
    QuotientHopf,
    check_hopf_quotient,
    check_subhopf,
    convolve,
    cotensor,
    exterior_quotient,
    frobenius_profile,
    is_subhopf,
    p_profile,
    preset,
    quotient_basis,
    steenrod_quotient,
    subalgebra_basis,
    verify_freeness,
)


def _count_profile(caps, tail, max_degree):
    """Monomial count by brute force over exponent vectors."""
    dims = [0] * (max_degree + 1)

    def fill(i, degree):
        weight = (1 << i) - 1
        if weight > max_degree:
            dims[degree] += 1
            return
        cap = caps[i - 1] if i <= len(caps) else tail
        if cap is None:
            fill(i + 1, degree)
            return
        e = 0
        while degree + e * weight <= max_degree:
            fill(i + 1, degree + e * weight)
            e += 1 << cap

    fill(1, 0)
    return dims


def test_profile_from_dict():
    actual = Profile.from_dict({"caps": [1, "inf"], "tail": "inf"})
    expected = Profile((1,), None)
    assert actual == expected


def test_profile_to_dict_strips_tail():
    actual = Profile((2, 2, 0, 0), 0).to_dict()
    expected = {"caps": [2, 2], "tail": 0}
    assert actual == expected


def test_profile_rejects_bad_cap():
    with pytest.raises(ParseError):
        Profile.from_dict({"caps": ["x"]})


@pytest.mark.parametrize(
    "caps, tail",
    [((), 0), ((), 1), ((0, 0), None), ((2, 2), None), ((0,), 2)],
)
def test_profile_dims_match_counting(caps, tail):
    actual = Profile(caps, tail).dims(20)
    expected = _count_profile(caps, tail, 20)
    assert actual == expected


def test_p_profile_dims():
    actual = p_profile(2).dims(6)
    expected = [1, 1, 1, 2, 2, 2, 3]
    assert actual == expected


@pytest.mark.parametrize("n, dimension, top", [(0, 2, 1), (1, 8, 6), (2, 64, 23)])
def test_steenrod_quotient(n, dimension, top):
    span = steenrod_quotient(n)

    actual = (span.total_dimension, span.top_degree, sum(span.dims(top)), span.is_finite)
    expected = (dimension, top, dimension, True)
    assert actual == expected


def test_exterior_quotient():
    span = exterior_quotient(1)

    actual = (span.dims(4), span.top_degree)
    expected = ([1, 1, 0, 1, 1], 4)
    assert actual == expected


def test_subhopf_profiles():
    actual = [
        is_subhopf(frobenius_profile(1), 20),
        is_subhopf(p_profile(2, 2), 20),
        is_subhopf(p_profile(3), 20),
    ]
    expected = [True, True, True]
    assert actual == expected


def test_subhopf_rejects_with_witness():
    actual = check_subhopf(Profile((1,), 0), 3)
    expected = ClosureReport(False, 3, 3, "z2 -> z1^2|z1")
    assert actual == expected


def test_hopf_quotients():
    actual = [
        check_hopf_quotient(steenrod_quotient(1), 6).passed,
        check_hopf_quotient(steenrod_quotient(2), 23).passed,
        check_hopf_quotient(E_QUOTIENT, 12).passed,
    ]
    expected = [True, True, True]
    assert actual == expected


def test_quotient_basis_rejects_bad_denominator():
    with pytest.raises(NotHopfError):
        quotient_basis(QuotientHopf(FULL, Profile((1,), 0)), 6)


def test_preset_names():
    actual = [preset(text).name for text in ["A", "A(1)", "E(1)", "P(2)^(1)", "A//P(2)"]]
    expected = ["A", "A(1)", "E(1)", "P(2)^(1)", "A//P(2)"]
    assert actual == expected


def test_preset_rejects_unknown():
    with pytest.raises(ParseError):
        preset("B(3)")


def test_convolve():
    actual = convolve([1, 1, 1], [1, 0, 1], 2)
    expected = [1, 1, 2]
    assert actual == expected


@pytest.mark.parametrize("n", [1, 2, 3])
def test_cotensor_recovers_p_n(n):
    c = QuotientHopf(FULL, p_profile(n))
    a_right = regular_comodule(FULL, 20, side="right")

    actual = cotensor(a_right, c, trivial_comodule(c), 20).dims
    expected = p_profile(n).dims(20)
    assert actual == expected


def test_cotensor_over_e_gives_even_squares():
    a_right = regular_comodule(FULL, 20, side="right")

    actual = cotensor(a_right, E_QUOTIENT, trivial_comodule(E_QUOTIENT), 20).dims
    expected = frobenius_profile(1).dims(20)
    assert actual == expected


@pytest.mark.parametrize(
    "sub, amb",
    [
        (frobenius_profile(1), FULL),
        (frobenius_profile(2), frobenius_profile(1)),
        (p_profile(1), p_profile(2)),
        (p_profile(2), p_profile(3)),
    ],
)
def test_freeness_windows(sub, amb):
    actual = verify_freeness(sub, amb, 16).passed
    expected = True
    assert actual == expected


def test_freeness_with_quotient_spans():
    sub = p_profile(1, 2)
    report = verify_freeness(
        QuotientHopf(frobenius_profile(2), sub),
        QuotientHopf(FULL, sub),
        16,
        quotient=QuotientHopf(FULL, frobenius_profile(2)),
    )

    actual = report.passed
    expected = True
    assert actual == expected


def test_freeness_failure_reports_degree():
    report = verify_freeness(p_profile(1), p_profile(2), 10, quotient=p_profile(1))

    actual = (report.passed, report.degree)
    expected = (False, 1)
    assert actual == expected


def test_subalgebra_basis():
    actual = (subalgebra_basis(p_profile(1, 2), 8).dims, subalgebra_basis(p_profile(2), 3).dim(3))
    expected = ([1, 0, 0, 0, 1, 0, 0, 0, 1], 2)
    assert actual == expected
