import numpy as np
import pytest

from steenrod_desk.algebra import FDHopfAlgebra, FDModule, regular_module, trivial_module
from steenrod_desk.errors import WindowError
from steenrod_desk.graded import DegreeWindow
from steenrod_desk.homalg import (
    ExtChart,
    build_An,
    coext,
    doubling_regrade_check,
    ext,
    hom_dimension,
    injective_embed_stage,
    minimal_resolution,
    module_socle,
    poincare_check,
    poincare_family,
    socle_scan,
)
from steenrod_desk.comodule import regular_comodule, trivial_comodule
from steenrod_desk.milnor import mono_degree
from steenrod_desk.subquot import FULL, steenrod_quotient


def test_h0_tower_over_a0():
    algebra = build_An(0)
    f2 = trivial_module(algebra)

    actual = ext(algebra, f2, f2, 4, 6).dims
    expected = {(s, s): 1 for s in range(5)}
    assert actual == expected


def test_ext_a1_low_stems():
    algebra = build_An(1)
    f2 = trivial_module(algebra)

    actual = ext(algebra, f2, f2, 3, 7).dims
    expected = {(0, 0): 1, (1, 1): 1, (1, 2): 1, (2, 2): 1, (2, 4): 1, (3, 3): 1, (3, 7): 1}
    assert actual == expected


def test_ext_into_free_module_sits_at_minus_top():
    algebra = build_An(1)

    chart = ext(algebra, trivial_module(algebra), regular_module(algebra), 5, 30)

    actual = (chart.dims, chart.min_t)
    expected = ({(0, -6): 1}, -6)
    assert actual == expected


def test_ext_rejects_empty_range():
    algebra = build_An(0)
    f2 = trivial_module(algebra)
    with pytest.raises(WindowError):
        ext(algebra, f2, f2, 1, 2, min_t=3)


def test_hom_dimension_matches_ext_zero():
    algebra = build_An(1)
    f2, h = trivial_module(algebra), regular_module(algebra)

    actual = [hom_dimension(algebra, f2, h, t) for t in range(-6, 1)]
    expected = [1, 0, 0, 0, 0, 0, 0]
    assert actual == expected


def test_minimal_resolution_of_f2_over_a1():
    algebra = build_An(1)
    res = minimal_resolution(algebra, trivial_module(algebra), 2, 8)

    actual = (
        [res.generator_degrees(s) for s in range(3)],
        res.check_d_squared(),
        res.check_minimal(),
    )
    expected = ([[0], [1, 2], [2, 4]], None, None)
    assert actual == expected


def test_minimal_resolution_is_exact():
    algebra = build_An(1)
    res = minimal_resolution(algebra, trivial_module(algebra), 3, 6)

    actual = res.check_exact()
    expected = None
    assert actual == expected


def test_resolution_needs_window():
    algebra = FDHopfAlgebra(FULL, max_degree=4)
    with pytest.raises(WindowError):
        minimal_resolution(algebra, trivial_module(algebra), 1, 6)


@pytest.mark.parametrize("n, dimension, pd", [(0, 2, 1), (1, 8, 6), (2, 64, 23)])
def test_poincare_duality(n, dimension, pd):
    report = poincare_check(build_An(n))

    actual = (report.dimension, report.pd, report.passed)
    expected = (dimension, pd, True)
    assert actual == expected


def test_poincare_family_increasing():
    actual = poincare_family([0, 1, 2]).increasing
    expected = True
    assert actual == expected


def test_poincare_needs_complete_algebra():
    with pytest.raises(WindowError):
        poincare_check(FDHopfAlgebra(FULL, max_degree=4))


def test_socle_below_guard_vanishes():
    report = socle_scan(build_An(1), [(1,), (2,)], DegreeWindow(6, 2))

    actual = (report.dims, report.is_zero)
    expected = ([0, 0, 0, 0, 0], True)
    assert actual == expected


def test_socle_finds_top_class():
    report = socle_scan(build_An(1), [(1,), (2,)], DegreeWindow(8, 2))

    actual = report.dims
    expected = [0, 0, 0, 0, 0, 0, 1]
    assert actual == expected


def test_socle_guard_must_cover_generators():
    with pytest.raises(WindowError):
        socle_scan(build_An(1), [(2,)], DegreeWindow(6, 1))


def test_doubling_regrades_ext():
    algebra = build_An(1)
    f2 = trivial_module(algebra)

    actual = doubling_regrade_check(algebra, f2, f2, 1, 2, 8).passed
    expected = True
    assert actual == expected


def test_coext_of_cofree_comodule():
    c = steenrod_quotient(1)

    actual = coext(regular_comodule(c), trivial_comodule(c), c, 1, 0).dims
    expected = {(0, -6): 1}
    assert actual == expected


def test_coext_rejects_infinite_coalgebra():
    with pytest.raises(WindowError):
        coext(trivial_comodule(), trivial_comodule(), FULL, 1, 4)


def test_ext_chart_from_dict():
    data = {"max_s": 2, "max_t": 4, "classes": [[0, 0, 1], [1, 1, 1], [2, 3, 0]]}

    actual = ExtChart.from_dict(data)
    expected = ExtChart({(0, 0): 1, (1, 1): 1}, 2, 4)
    assert actual == expected


def _change_basis(module: FDModule, degree: int, change: np.ndarray) -> FDModule:
    """The same module in a new basis of ``degree``; ``change`` is its own
    inverse."""
    actions = {}
    for (t, d), matrix in module.actions.items():
        if d + mono_degree(t) == degree:
            matrix = change @ matrix % 2
        if d == degree:
            matrix = matrix @ change % 2
        actions[(t, d)] = matrix.astype(np.uint8)
    return FDModule(module.algebra, module.space, actions, module.shift, module.name)


def test_ext_ignores_basis_of_coefficients():
    algebra = build_An(1)
    f2 = trivial_module(algebra)
    n = injective_embed_stage(algebra, f2).cokernel
    relabeled = _change_basis(n, 3, np.array([[1, 1], [0, 1]], dtype=np.uint8))

    actual = ext(algebra, f2, relabeled, 3, 8).dims
    expected = ext(algebra, f2, n, 3, 8).dims
    assert expected
    assert actual == expected


def test_socle_of_a0_is_sq1():
    socle = module_socle(regular_module(build_An(0)))

    actual = {d: rows.tolist() for d, rows in socle.items()}
    expected = {1: [[1]]}
    assert actual == expected


def test_socle_of_a1_is_top_class():
    socle = module_socle(regular_module(build_An(1)))

    actual = {d: rows.tolist() for d, rows in socle.items()}
    expected = {6: [[1]]}
    assert actual == expected


def test_embedding_of_f2_over_a1():
    algebra = build_An(1)
    stage = injective_embed_stage(algebra, trivial_module(algebra))

    actual = (
        stage.offset,
        stage.target.space.total_dimension,
        stage.cokernel.space.total_dimension,
    )
    expected = (6, 8, 7)
    assert actual == expected


def test_socle_shrinks_as_guard_grows():
    algebra = build_An(2)
    ladder = [(1, [(1,)]), (2, [(1,), (2,)]), (4, [(1,), (2,), (4,)])]
    reports = [socle_scan(algebra, gens, DegreeWindow(12, guard)) for guard, gens in ladder]

    for wider, narrower in zip(reports, reports[1:]):
        for d in range(len(narrower.dims)):
            assert narrower.dims[d] <= wider.dims[d], d
    actual = reports[-1].dims
    expected = [0] * 9
    assert actual == expected
