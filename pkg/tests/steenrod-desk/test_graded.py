import numpy as np
import pytest

from steenrod_desk.errors import ShapeError, WindowError
from steenrod_desk.graded import (
    DegreeWindow,
    EchelonBasis,
    GradedMap,
    GradedSpace,
    cokernel,
    dualize,
    dualize_map,
    kernel,
    nullspace,
    rank,
    row_reduce,
    solve,
)


def test_rank_over_f2():
    # rows sum to zero mod 2
    actual = rank([[1, 1, 0], [0, 1, 1], [1, 0, 1]])
    expected = 2
    assert actual == expected


def test_rank_empty():
    actual = rank(np.zeros((0, 3), dtype=np.uint8))
    expected = 0
    assert actual == expected


def test_row_reduce_pivots():
    _, actual = row_reduce([[0, 1, 1], [0, 1, 0]])
    expected = [1, 2]
    assert actual == expected


def test_row_reduce_across_byte_boundary():
    matrix = [
        [1, 0, 0, 0, 0, 0, 0, 0, 0, 1, 1],
        [1, 0, 0, 0, 0, 0, 0, 0, 1, 0, 1],
        [0, 0, 0, 0, 0, 0, 0, 0, 1, 1, 0],
    ]
    reduced, pivots = row_reduce(matrix)

    actual = (reduced.tolist(), pivots)
    expected = (
        [
            [1, 0, 0, 0, 0, 0, 0, 0, 0, 1, 1],
            [0, 0, 0, 0, 0, 0, 0, 0, 1, 1, 0],
            [0] * 11,
        ],
        [0, 8],
    )
    assert actual == expected


def test_nullspace_is_annihilated():
    matrix = np.array([[1, 1, 0, 0], [0, 1, 1, 0]], dtype=np.uint8)
    kernel_rows = nullspace(matrix)

    actual = (len(kernel_rows), (matrix @ kernel_rows.T % 2).any())
    expected = (2, False)
    assert actual == expected


def test_nullspace_of_empty_rows():
    actual = nullspace(np.zeros((0, 2), dtype=np.uint8)).tolist()
    expected = [[1, 0], [0, 1]]
    assert actual == expected


def test_solve():
    matrix = [[1, 1], [0, 1]]
    x = solve(matrix, [0, 1])

    actual = x.tolist()
    expected = [1, 1]
    assert actual == expected


def test_solve_inconsistent():
    actual = solve([[1, 1], [1, 1]], [1, 0])
    expected = None
    assert actual is expected


def test_solve_shape_mismatch():
    with pytest.raises(ShapeError):
        solve([[1, 0]], [1, 0])


def test_echelon_basis():
    basis = EchelonBasis(3)

    actual = [
        basis.add([1, 1, 0]),
        basis.add([0, 1, 1]),
        basis.add([1, 0, 1]),
        basis.contains([1, 0, 1]),
        len(basis),
    ]
    expected = [True, True, False, True, 2]
    assert actual == expected


def test_degree_window():
    window = DegreeWindow(30, 14)

    actual = (window.asserted_max, list(window.degrees())[-1])
    expected = (16, 30)
    assert actual == expected


@pytest.mark.parametrize("max_degree, guard", [(-1, 0), (10, 11), (10, -1)])
def test_degree_window_rejects(max_degree, guard):
    with pytest.raises(WindowError):
        DegreeWindow(max_degree, guard)


def test_graded_space_from_dims():
    space = GradedSpace.from_dims([1, 0, 2])

    actual = (space.dims, space.total_dimension, space.top_degree, space.basis(2))
    expected = ([1, 0, 2], 3, 2, ("e2_0", "e2_1"))
    assert actual == expected


def test_graded_space_from_dict():
    data = {"labels": {"0": ["1"], "3": ["a", "b"]}, "max_degree": 4}
    actual = GradedSpace.from_dict(data)

    expected = GradedSpace({0: ("1",), 3: ("a", "b")}, 4)
    assert actual == expected


def test_graded_space_rejects_out_of_window():
    with pytest.raises(WindowError):
        GradedSpace({5: ("x",)}, 3)


def test_graded_map_shape_checked():
    space = GradedSpace.from_dims([1, 1])
    with pytest.raises(ShapeError):
        GradedMap(space, space, 0, {0: np.zeros((2, 1), dtype=np.uint8)})


def test_kernel_and_cokernel():
    source = GradedSpace({1: ("a", "b")}, 1)
    target = GradedSpace({2: ("x",)}, 2)
    f = GradedMap(source, target, 1, {1: np.array([[1, 1]], dtype=np.uint8)})

    actual = (kernel(f).basis(1), cokernel(f).dims)
    expected = (("a + b",), [0, 0, 0])
    assert actual == expected


def test_dualize_twice():
    space = GradedSpace({0: ("1",), 2: ("x", "y")}, 2)

    actual = dualize(dualize(space))
    expected = space
    assert actual == expected


def test_dualize_map_transposes():
    source = GradedSpace({0: ("a",)}, 0)
    target = GradedSpace({1: ("x", "y")}, 1)
    f = GradedMap(source, target, 1, {0: np.array([[1], [0]], dtype=np.uint8)})
    g = dualize_map(f)

    actual = (g.shift, g.matrix(1).tolist(), g.source.basis(1))
    expected = (-1, [[1, 0]], ("x*", "y*"))
    assert actual == expected


def test_dualize_map_twice():
    source = GradedSpace({0: ("a",), 1: ("b", "c")}, 1)
    target = GradedSpace({1: ("x", "y"), 2: ("z",)}, 2)
    matrices = {
        0: np.array([[1], [1]], dtype=np.uint8),
        1: np.array([[0, 1]], dtype=np.uint8),
    }
    f = GradedMap(source, target, 1, matrices)
    g = dualize_map(dualize_map(f))

    actual = (g.source, g.target, g.shift, {d: m.tolist() for d, m in g.matrices.items()})
    expected = (source, target, 1, {d: m.tolist() for d, m in matrices.items()})
    assert actual == expected
