import itertools
from typing import FrozenSet, List, Tuple

import pytest

from steenrod_desk.errors import ParseError, WindowError
from steenrod_desk.milnor import (
    UNIT,
    DualElement,
    SqElement,
    antipode,
    canonical,
    coproduct,
    coproduct_element,
    format_monomial,
    format_tensor,
    frobenius,
    halve,
    milnor_product,
    mono_mul,
    mono_degree,
    monomials_of_degree,
    parse_monomial,
    sq_mul,
    toggle,
)


def _row_choices(r: int, cols: int) -> List[Tuple[int, ...]]:
    """(x_1, ..., x_cols) with sum 2^j x_j <= r."""
    if cols == 0:
        return [()]
    choices = []
    for rest in _row_choices(r, cols - 1):
        used = sum(x << (j + 1) for j, x in enumerate(rest))
        for x in range((r - used) // (1 << cols) + 1):
            choices.append(rest + (x,))
    return choices


def milnor_matrix_product(r: Tuple[int, ...], s: Tuple[int, ...]) -> FrozenSet[Tuple[int, ...]]:
    """Sq(R) Sq(S) from Milnor's matrix formula."""
    rows, cols = len(r), len(s)
    result = set()
    for choice in itertools.product(*[_row_choices(ri, cols) for ri in r]):
        col_sums = [sum(choice[i][j] for i in range(rows)) for j in range(cols)]
        if any(col_sums[j] > s[j] for j in range(cols)):
            continue
        matrix = {}
        for i in range(1, rows + 1):
            row = choice[i - 1]
            matrix[(i, 0)] = r[i - 1] - sum(x << (j + 1) for j, x in enumerate(row))
            for j in range(1, cols + 1):
                matrix[(i, j)] = row[j - 1]
        for j in range(1, cols + 1):
            matrix[(0, j)] = s[j - 1] - col_sums[j - 1]
        t, odd = [], True
        for n in range(1, rows + cols + 1):
            bits, total = 0, 0
            for i in range(0, n + 1):
                x = matrix.get((i, n - i), 0)
                if bits & x:
                    odd = False
                bits |= x
                total += x
            t.append(total)
        if odd:
            toggle(result, canonical(t))
    return frozenset(result)


def test_monomials_of_degree():
    actual = [format_monomial(m) for m in monomials_of_degree(4)]
    expected = ["z1^4", "z1 z2"]
    assert actual == expected


def test_mono_degree():
    actual = mono_degree((1, 2, 1))
    expected = 1 + 6 + 7
    assert actual == expected


def test_parse_format_monomial():
    actual = format_monomial(parse_monomial("z2 z1^2"))
    expected = "z1^2 z2"
    assert actual == expected


@pytest.mark.parametrize("text", ["x1", "z0", "z1^", ""])
def test_parse_monomial_rejects(text):
    with pytest.raises(ParseError):
        parse_monomial(text)


def test_dual_element_parse_rejects_dangling_plus():
    with pytest.raises(ParseError):
        DualElement.parse("z1 +")


def test_coproduct_z2():
    actual = format_tensor(coproduct_element(DualElement.parse("z2")))
    expected = "z2|1 + z1^2|z1 + 1|z2"
    assert actual == expected


def test_coproduct_of_square():
    actual = coproduct((2,))
    expected = frozenset({((2,), UNIT), (UNIT, (2,))})
    assert actual == expected


def test_antipode_low_degrees():
    actual = [str(antipode((1,))), str(antipode((0, 1))), str(antipode((0, 0, 1)))]
    expected = ["z1", "z1^3 + z2", "z1^7 + z1 z2^2 + z1^4 z2 + z3"]
    assert actual == expected


def test_dual_multiplication():
    actual = str(DualElement.parse("z1 + z2") * DualElement.parse("z1"))
    expected = "z1^2 + z1 z2"
    assert actual == expected


def test_frobenius_and_square():
    actual = (frobenius((1, 1)), str(DualElement.parse("z1 + z2").square()))
    expected = ((2, 2), "z1^2 + z2^2")
    assert actual == expected


def test_hopf_axioms_through_degree_24():
    for d in range(25):
        for m in monomials_of_degree(d):
            terms = coproduct(m)
            left, right = set(), set()
            for a, b in terms:
                for a1, a2 in coproduct(a):
                    toggle(left, (a1, a2, b))
                for b1, b2 in coproduct(b):
                    toggle(right, (a, b1, b2))
            assert left == right, format_monomial(m)
            assert (m, UNIT) in terms and (UNIT, m) in terms
            convolution = DualElement()
            for a, b in terms:
                convolution = convolution + antipode(a) * DualElement.of(b)
            expected = DualElement.of(UNIT) if d == 0 else DualElement()
            assert convolution == expected, format_monomial(m)


def test_milnor_product_examples():
    actual = [
        milnor_product((1,), (1,)),
        milnor_product((2,), (1,)),
        milnor_product((1,), (2,)),
    ]
    expected = [
        frozenset(),
        frozenset({(3,), (0, 1)}),
        frozenset({(3,)}),
    ]
    assert actual == expected


def test_milnor_product_matches_matrix_formula():
    for total in range(17):
        for i in range(total + 1):
            for r in monomials_of_degree(i):
                for s in monomials_of_degree(total - i):
                    actual = milnor_product(r, s)
                    expected = milnor_matrix_product(r, s)
                    assert actual == expected, (r, s)


def test_sq_mul():
    actual = str(sq_mul(SqElement.parse("Sq(2)"), SqElement.parse("Sq(1)"), 3))
    expected = "Sq(3) + Sq(0,1)"
    assert actual == expected


def test_sq_mul_window():
    with pytest.raises(WindowError):
        sq_mul(SqElement.parse("Sq(2)"), SqElement.parse("Sq(1)"), 2)


def test_sq_element_round_trip_text():
    text = "Sq(4) + Sq(1,1)"
    actual = str(SqElement.parse(text))
    expected = text
    assert actual == expected


def test_halve():
    actual = halve(SqElement.of((2,), (0, 2), (1,)))
    expected = SqElement.of((1,), (0, 1))
    assert actual == expected


def test_coproduct_is_multiplicative():
    low = [m for d in range(8) for m in monomials_of_degree(d)]
    for a in low:
        for b in low:
            expected = set()
            for a1, a2 in coproduct(a):
                for b1, b2 in coproduct(b):
                    toggle(expected, (mono_mul(a1, b1), mono_mul(a2, b2)))
            actual = coproduct(mono_mul(a, b))
            assert actual == frozenset(expected), (a, b)


def test_halve_is_dual_to_frobenius():
    for d in range(13):
        for r in monomials_of_degree(2 * d):
            halved = halve(SqElement.of(r)).support
            for m in monomials_of_degree(d):
                actual = m in halved
                expected = frobenius(m) == r
                assert actual == expected, (r, m)
        for r in monomials_of_degree(2 * d + 1):
            assert not halve(SqElement.of(r))
