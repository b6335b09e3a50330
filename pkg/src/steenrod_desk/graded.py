from __future__ import annotations

from dataclasses import dataclass, field
from logging import getLogger
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from .errors import ShapeError, WindowError

logger = getLogger(__name__)


def as_f2(matrix: Any, shape: Optional[Tuple[int, int]] = None) -> np.ndarray:
    """Return a fresh ``uint8`` copy of ``matrix`` reduced mod 2."""
    if shape is not None and np.size(matrix) == 0:
        return np.zeros(shape, dtype=np.uint8)
    array = np.array(matrix, dtype=np.uint8) % 2
    if shape is not None:
        array = array.reshape(shape)
    return array


def row_reduce(
    matrix: Any, pivot_cols: Optional[int] = None
) -> Tuple[np.ndarray, List[int]]:
    """Reduced row echelon form over F2.

    Pivots are chosen column by column from the left; within a column the
    lowest-index nonzero row is used, so the result only depends on the
    order of rows and columns.

    Args:
        matrix: 2d array-like with entries in {0, 1}.
        pivot_cols (int, optional): Only the first ``pivot_cols`` columns are
            searched for pivots. Row operations still act on whole rows, which
            is what augmented systems need.

    Returns:
        (R, pivots): ``R`` has the same shape as ``matrix`` and ``pivots``
            lists the pivot column of row ``i`` at position ``i``.
    """
    R = as_f2(matrix)
    if R.ndim != 2:
        raise ShapeError(f"expected a 2d matrix, got shape {R.shape}")
    m, n = R.shape
    if pivot_cols is None:
        pivot_cols = n
    # eight columns per byte, column c at bit 7 - c % 8 of byte c // 8
    packed = np.packbits(R, axis=1)
    pivots: List[int] = []
    row = 0
    for col in range(pivot_cols):
        if row == m:
            break
        mask = np.uint8(0x80 >> (col & 7))
        below = np.flatnonzero(packed[row:, col >> 3] & mask)
        if below.size == 0:
            continue
        found = row + int(below[0])
        if found != row:
            packed[[row, found]] = packed[[found, row]]
        hits = np.flatnonzero(packed[:, col >> 3] & mask)
        hits = hits[hits != row]
        if hits.size:
            packed[hits] ^= packed[row]
        pivots.append(col)
        row += 1
    return np.unpackbits(packed, axis=1, count=n), pivots


def rank(matrix: Any) -> int:
    if np.size(matrix) == 0:
        return 0
    return len(row_reduce(matrix)[1])


def nullspace(matrix: Any, ncols: Optional[int] = None) -> np.ndarray:
    """Basis of ``{x : matrix @ x = 0}`` as the rows of the returned array.

    Free columns are taken in increasing order, so the basis is deterministic.
    """
    M = np.asarray(matrix, dtype=np.uint8)
    if M.ndim != 2:
        if ncols is None:
            raise ShapeError("an empty matrix needs an explicit column count")
        M = np.zeros((0, ncols), dtype=np.uint8)
    n = M.shape[1]
    if M.shape[0] == 0:
        return np.eye(n, dtype=np.uint8)
    R, pivots = row_reduce(M)
    free = [c for c in range(n) if c not in set(pivots)]
    K = np.zeros((len(free), n), dtype=np.uint8)
    for i, col in enumerate(free):
        K[i, col] = 1
    if pivots and free:
        K[:, pivots] = R[: len(pivots)][:, free].T
    return K


def solve(matrix: Any, rhs: Any) -> Optional[np.ndarray]:
    """One solution ``x`` of ``matrix @ x = rhs`` over F2, or None.

    Free variables are set to zero.
    """
    M = np.asarray(matrix, dtype=np.uint8)
    b = as_f2(rhs).reshape(-1)
    if M.ndim != 2 or M.shape[0] != b.size:
        raise ShapeError(f"cannot solve {M.shape} system with rhs of size {b.size}")
    n = M.shape[1]
    if not b.any():
        return np.zeros(n, dtype=np.uint8)
    augmented = np.concatenate([M % 2, b[:, None]], axis=1)
    R, pivots = row_reduce(augmented, pivot_cols=n)
    if R[len(pivots) :, n].any():
        return None
    x = np.zeros(n, dtype=np.uint8)
    for row, col in enumerate(pivots):
        x[col] = R[row, n]
    return x


class EchelonBasis:
    """Incrementally maintained reduced echelon basis of a subspace of F2^n."""

    def __init__(self, n: int, rows: Optional[Iterable[Any]] = None) -> None:
        self.n = n
        self._rows = np.zeros((0, n), dtype=np.uint8)
        self._pivots: List[int] = []
        for row in rows if rows is not None else []:
            self.add(row)

    def __len__(self) -> int:
        return len(self._pivots)

    @property
    def rows(self) -> np.ndarray:
        return self._rows

    @property
    def pivots(self) -> List[int]:
        return list(self._pivots)

    def reduce(self, vector: Any) -> np.ndarray:
        v = as_f2(vector).reshape(-1)
        if not self._pivots:
            return v
        coefficients = v[self._pivots]
        if coefficients.any():
            v ^= (coefficients @ self._rows % 2).astype(np.uint8)
        return v

    def contains(self, vector: Any) -> bool:
        return not self.reduce(vector).any()

    def add(self, vector: Any) -> bool:
        """Add ``vector``; returns False when it was already in the span."""
        v = self.reduce(vector)
        nonzero = np.flatnonzero(v)
        if nonzero.size == 0:
            return False
        pivot = int(nonzero[0])
        if self._pivots:
            hits = np.flatnonzero(self._rows[:, pivot])
            if hits.size:
                self._rows[hits] ^= v
        self._rows = np.concatenate([self._rows, v[None, :]], axis=0)
        self._pivots.append(pivot)
        return True


def combination_label(labels: Sequence[str], vector: Any) -> str:
    terms = [labels[i] for i in np.flatnonzero(np.asarray(vector) % 2)]
    return " + ".join(terms) if terms else "0"


@dataclass(frozen=True)
class DegreeWindow:
    """Degrees ``[0, max_degree]`` are computed, ``[0, max_degree - guard]``
    are asserted."""

    max_degree: int
    guard: int = 0

    def __post_init__(self) -> None:
        if self.max_degree < 0:
            raise WindowError(f"max degree must be non-negative: {self.max_degree}")
        if self.guard < 0 or self.guard > self.max_degree:
            raise WindowError(
                f"guard {self.guard} must lie in [0, {self.max_degree}]"
            )

    @property
    def asserted_max(self) -> int:
        return self.max_degree - self.guard

    def degrees(self) -> range:
        return range(self.max_degree + 1)


WindowLike = Union[DegreeWindow, int]


def window_max(window: WindowLike) -> int:
    if isinstance(window, DegreeWindow):
        return window.max_degree
    return DegreeWindow(int(window)).max_degree


@dataclass(frozen=True)
class GradedSpace:
    """A graded F2 vector space with labelled bases, populated on
    ``[0, max_degree]``."""

    labels: Dict[int, Tuple[str, ...]]
    max_degree: int

    def __post_init__(self) -> None:
        if self.max_degree < 0:
            raise WindowError(f"max degree must be non-negative: {self.max_degree}")
        for degree in self.labels:
            if degree < 0 or degree > self.max_degree:
                raise WindowError(
                    f"degree {degree} lies outside the window [0, {self.max_degree}]"
                )

    @classmethod
    def from_dims(
        cls, dims: Sequence[int], prefix: str = "e"
    ) -> GradedSpace:
        labels = {
            d: tuple(f"{prefix}{d}_{i}" for i in range(n))
            for d, n in enumerate(dims)
            if n
        }
        return cls(labels, max(len(dims) - 1, 0))

    def dim(self, degree: int) -> int:
        return len(self.labels.get(degree, ()))

    def basis(self, degree: int) -> Tuple[str, ...]:
        return self.labels.get(degree, ())

    @property
    def dims(self) -> List[int]:
        return [self.dim(d) for d in range(self.max_degree + 1)]

    @property
    def total_dimension(self) -> int:
        return sum(self.dims)

    @property
    def top_degree(self) -> Optional[int]:
        populated = [d for d, names in self.labels.items() if names]
        return max(populated) if populated else None

    def restrict(self, max_degree: int) -> GradedSpace:
        if max_degree > self.max_degree:
            raise WindowError(
                f"cannot restrict to {max_degree}: populated up to {self.max_degree}"
            )
        labels = {d: v for d, v in self.labels.items() if d <= max_degree}
        return GradedSpace(labels, max_degree)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "dims": {str(d): n for d, n in enumerate(self.dims) if n},
            "labels": {str(d): list(v) for d, v in sorted(self.labels.items()) if v},
            "max_degree": self.max_degree,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> GradedSpace:
        labels = {int(d): tuple(v) for d, v in data.get("labels", {}).items()}
        for d, n in data.get("dims", {}).items():
            if len(labels.get(int(d), ())) != n:
                raise ShapeError(f"dims and labels disagree in degree {d}")
        max_degree = data.get("max_degree", max(labels, default=0))
        return cls(labels, max_degree)


@dataclass(frozen=True, eq=False)
class GradedMap:
    """Degree ``shift`` map; ``matrices[d]`` sends source(d) to
    target(d + shift)."""

    source: GradedSpace
    target: GradedSpace
    shift: int = 0
    matrices: Dict[int, np.ndarray] = field(default_factory=dict)

    def __post_init__(self) -> None:
        for degree, matrix in self.matrices.items():
            expected = (self.target.dim(degree + self.shift), self.source.dim(degree))
            if np.shape(matrix) != expected:
                raise ShapeError(
                    f"matrix in degree {degree} has shape {np.shape(matrix)}, "
                    f"expected {expected}"
                )

    def matrix(self, degree: int) -> np.ndarray:
        if degree in self.matrices:
            return self.matrices[degree]
        shape = (self.target.dim(degree + self.shift), self.source.dim(degree))
        return np.zeros(shape, dtype=np.uint8)

    def rank(self, degree: int) -> int:
        return rank(self.matrix(degree))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "source": self.source.to_dict(),
            "target": self.target.to_dict(),
            "shift": self.shift,
            "matrices": {
                str(d): m.astype(int).tolist() for d, m in sorted(self.matrices.items())
            },
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> GradedMap:
        source = GradedSpace.from_dict(data["source"])
        target = GradedSpace.from_dict(data["target"])
        shift = data.get("shift", 0)
        matrices = {
            int(d): as_f2(m, (target.dim(int(d) + shift), source.dim(int(d))))
            for d, m in data.get("matrices", {}).items()
        }
        return cls(source, target, shift, matrices)


def _dual_label(label: str) -> str:
    return label[:-1] if label.endswith("*") else f"{label}*"


def dualize(space: GradedSpace, window: Optional[WindowLike] = None) -> GradedSpace:
    """Degree-wise dual with the dual basis; dualizing twice gives back the
    original labels."""
    max_degree = space.max_degree if window is None else window_max(window)
    if max_degree > space.max_degree:
        raise WindowError(
            f"window {max_degree} exceeds the populated range {space.max_degree}"
        )
    labels = {
        d: tuple(_dual_label(name) for name in names)
        for d, names in space.labels.items()
        if d <= max_degree
    }
    return GradedSpace(labels, max_degree)


def dualize_map(f: GradedMap) -> GradedMap:
    """Transpose of ``f``; it runs from the dual target to the dual source."""
    source = dualize(f.target)
    target = dualize(f.source)
    matrices = {d + f.shift: m.T.copy() for d, m in f.matrices.items()}
    return GradedMap(source, target, -f.shift, matrices)


def kernel_basis(f: GradedMap) -> Dict[int, np.ndarray]:
    return {
        d: nullspace(f.matrix(d), ncols=f.source.dim(d))
        for d in range(f.source.max_degree + 1)
    }


def kernel(f: GradedMap) -> GradedSpace:
    labels = {}
    for degree, rows in kernel_basis(f).items():
        names = f.source.basis(degree)
        if len(rows):
            labels[degree] = tuple(combination_label(names, row) for row in rows)
    return GradedSpace(labels, f.source.max_degree)


def cokernel(f: GradedMap) -> GradedSpace:
    """Cokernel spanned by the target basis vectors outside the pivots of the
    image."""
    labels: Dict[int, Tuple[str, ...]] = {}
    for degree in range(f.target.max_degree + 1):
        names = f.target.basis(degree)
        source_degree = degree - f.shift
        if 0 <= source_degree <= f.source.max_degree:
            image = f.matrix(source_degree)
        else:
            image = np.zeros((len(names), 0), dtype=np.uint8)
        pivots = set(row_reduce(image.T)[1]) if image.size else set()
        kept = tuple(name for i, name in enumerate(names) if i not in pivots)
        if kept:
            labels[degree] = kept
    return GradedSpace(labels, f.target.max_degree)
