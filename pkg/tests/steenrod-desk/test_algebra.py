import numpy as np
import pytest

from steenrod_desk.algebra import (
    FDHopfAlgebra,
    quotient_module,
    regular_module,
    tensor_modules,
    trivial_module,
)
from steenrod_desk.errors import BudgetError, ParseError, WindowError
from steenrod_desk.homalg import build_An
from steenrod_desk.milnor import SqElement
from steenrod_desk.subquot import FULL, steenrod_quotient


def test_a1_dims():
    algebra = build_An(1)

    actual = (algebra.dims, algebra.dimension, algebra.pd, algebra.complete)
    expected = ([1, 1, 1, 2, 1, 1, 1], 8, 6, True)
    assert actual == expected


@pytest.mark.parametrize("n, generators", [(1, [(1,), (2,)]), (2, [(1,), (2,), (4,)])])
def test_generators(n, generators):
    actual = build_An(n).generators()
    expected = generators
    assert actual == expected


def test_multiply_in_a1():
    algebra = build_An(1)

    actual = [
        str(algebra.multiply(algebra.element("Sq(2)"), algebra.element("Sq(1)"))),
        str(algebra.multiply(algebra.element("Sq(1)"), algebra.element("Sq(2)"))),
        str(algebra.multiply(algebra.element("Sq(1)"), algebra.element("Sq(1)"))),
    ]
    expected = ["Sq(3) + Sq(0,1)", "Sq(3)", "0"]
    assert actual == expected


def test_element_outside_span():
    with pytest.raises(ParseError):
        build_An(1).element("Sq(4)")


def test_infinite_span_needs_window():
    with pytest.raises(WindowError):
        FDHopfAlgebra(FULL)


def test_window_enforced():
    algebra = FDHopfAlgebra(FULL, max_degree=3)
    with pytest.raises(WindowError):
        algebra.product((2,), (2,))


def test_budget():
    with pytest.raises(BudgetError):
        FDHopfAlgebra(steenrod_quotient(2), max_dimension=10)


def test_coproduct_and_antipode():
    algebra = FDHopfAlgebra(FULL, max_degree=3)

    actual = (
        algebra.coproduct((0, 1)),
        SqElement(algebra.antipode((3,))),
        SqElement(algebra.antipode((0, 1))),
    )
    expected = (
        frozenset({((), (0, 1)), ((0, 1), ())}),
        SqElement.of((3,), (0, 1)),
        SqElement.of((0, 1)),
    )
    assert actual == expected


def test_double():
    doubled = build_An(0).double(1)

    actual = (doubled.dims, doubled.pd)
    expected = ([1, 0, 1], 2)
    assert actual == expected


def test_module_actions():
    algebra = build_An(1)

    actual = [
        regular_module(algebra).check_action().passed,
        trivial_module(algebra).check_action().passed,
    ]
    expected = [True, True]
    assert actual == expected


def test_quotient_by_left_ideal():
    algebra = build_An(1)
    quotient = quotient_module(regular_module(algebra), {1: [np.array([1], dtype=np.uint8)]})

    actual = (quotient.space.dims, quotient.check_action().passed)
    expected = ([1, 0, 1, 1, 0, 1, 0], True)
    assert actual == expected


def test_tensor_with_trivial():
    algebra = build_An(1)
    h = regular_module(algebra)
    product = tensor_modules(trivial_module(algebra), h)

    actual = (product.space.dims, product.check_action().passed)
    expected = (h.space.dims, True)
    assert actual == expected


def test_act_on():
    algebra = build_An(1)
    h = regular_module(algebra)
    unit = np.array([1], dtype=np.uint8)

    sq1 = h.act((1,), 0) @ unit % 2

    actual = h.act_on(algebra.element("Sq(2)"), sq1, 1).tolist()
    expected = [1, 1]
    assert actual == expected
