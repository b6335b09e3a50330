"""Finite-dimensional (or degree-windowed) graded Hopf algebras dual to spans
of A_*, and graded modules over them given by explicit action matrices."""
from __future__ import annotations

from dataclasses import dataclass, field
from logging import getLogger
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

import numpy as np
from serdescontainer import BaseContainer

from .errors import BudgetError, ParseError, WindowError
from .graded import EchelonBasis, GradedSpace
from .milnor import (
    UNIT,
    Monomial,
    SqElement,
    TensorTerms,
    _format_milnor,
    antipode,
    canonical,
    frobenius,
    mono_degree,
    toggle,
)
from .subquot import MonomialSpan

logger = getLogger(__name__)

DEFAULT_MAX_DIMENSION = 1024


class FDHopfAlgebra:
    """The graded dual of a span of A_* in the Milnor basis.

    Sq(R) Sq(S) is the sum of the Sq(T) whose projected coproduct contains
    z^R | z^S. For an infinite span only degrees up to ``max_degree`` exist
    and products leaving the window raise WindowError.

    Args:
        span (MonomialSpan): Coalgebra whose dual is built.
        max_degree (int, optional): Window; required for infinite spans.
        max_dimension (int): Budget on the total dimension.
        name (str, optional): Display name, defaults to the span's.
    """

    def __init__(
        self,
        span: MonomialSpan,
        max_degree: Optional[int] = None,
        max_dimension: int = DEFAULT_MAX_DIMENSION,
        name: Optional[str] = None,
    ) -> None:
        self.span = span
        top = span.top_degree if span.is_finite else None
        if max_degree is None:
            max_degree = span.max_computable_degree()
        elif top is not None:
            max_degree = min(max_degree, top)
        self.max_degree = max_degree
        self.complete = top is not None and max_degree >= top
        self.name = name or span.name
        self.dims = span.dims(max_degree)
        self.dimension = sum(self.dims)
        if self.dimension > max_dimension:
            raise BudgetError(
                f"{self.name} has dimension {self.dimension} through degree "
                f"{max_degree}, over the budget {max_dimension}"
            )
        self._tables: Dict[int, Dict[Tuple[Monomial, Monomial], FrozenSet[Monomial]]] = {}
        self._generators: Optional[List[Monomial]] = None
        logger.debug(f"built {self.name}: dims {self.dims}")

    def __repr__(self) -> str:
        return f"FDHopfAlgebra({self.name}, max_degree={self.max_degree})"

    @property
    def pd(self) -> Optional[int]:
        """Top nonzero degree of a complete algebra."""
        if not self.complete:
            return None
        return max(d for d, n in enumerate(self.dims) if n)

    def dim(self, degree: int) -> int:
        return self.dims[degree] if 0 <= degree <= self.max_degree else 0

    def basis(self, degree: int) -> Tuple[Monomial, ...]:
        if 0 <= degree <= self.max_degree:
            return self.span.basis(degree)
        return ()

    def index(self, degree: int) -> Dict[Monomial, int]:
        return self.span.index(degree)

    def labels(self, degree: int) -> Tuple[str, ...]:
        return tuple(_format_milnor(t) for t in self.basis(degree))

    def space(self) -> GradedSpace:
        labels = {d: self.labels(d) for d in range(self.max_degree + 1) if self.dims[d]}
        return GradedSpace(labels, self.max_degree)

    def elements(self) -> Iterable[Monomial]:
        for d in range(self.max_degree + 1):
            yield from self.basis(d)

    def positive_elements(self) -> Iterable[Monomial]:
        for d in range(1, self.max_degree + 1):
            yield from self.basis(d)

    def contains(self, t: Monomial) -> bool:
        return mono_degree(t) <= self.max_degree and self.span.contains(t)

    def _check_window(self, degree: int) -> None:
        if degree > self.max_degree:
            raise WindowError(
                f"degree {degree} lies outside the window of {self.name} "
                f"({self.max_degree})"
            )

    def _table(self, degree: int) -> Dict[Tuple[Monomial, Monomial], FrozenSet[Monomial]]:
        if degree not in self._tables:
            table: Dict[Tuple[Monomial, Monomial], set] = {}
            for t in self.basis(degree):
                for pair in self.span.coproduct(t):
                    table.setdefault(pair, set()).add(t)
            self._tables[degree] = {pair: frozenset(ts) for pair, ts in table.items()}
        return self._tables[degree]

    def product(self, r: Monomial, s: Monomial) -> FrozenSet[Monomial]:
        degree = mono_degree(r) + mono_degree(s)
        self._check_window(degree)
        return self._table(degree).get((r, s), frozenset())

    def multiply(self, x: SqElement, y: SqElement) -> SqElement:
        result: set = set()
        for r in x.support:
            for s in y.support:
                for t in self.product(r, s):
                    toggle(result, t)
        return SqElement(frozenset(result))

    def element(self, text: str) -> SqElement:
        x = SqElement.parse(text)
        for t in x.support:
            if not self.contains(t):
                raise ParseError(f"{_format_milnor(t)} is not in {self.name}")
        return x

    def left_matrix(self, a: Monomial, degree: int) -> np.ndarray:
        """Matrix of x -> a x from degree ``degree`` to ``degree + |a|``."""
        return self._mult_matrix(a, degree, left=True)

    def right_matrix(self, a: Monomial, degree: int) -> np.ndarray:
        return self._mult_matrix(a, degree, left=False)

    def _mult_matrix(self, a: Monomial, degree: int, left: bool) -> np.ndarray:
        target_degree = degree + mono_degree(a)
        self._check_window(target_degree)
        target = self.index(target_degree)
        matrix = np.zeros((len(target), self.dim(degree)), dtype=np.uint8)
        for j, x in enumerate(self.basis(degree)):
            for t in self.product(a, x) if left else self.product(x, a):
                matrix[target[t], j] = 1
        return matrix

    def coproduct(self, t: Monomial) -> TensorTerms:
        """Delta Sq(T) = sum of Sq(R) | Sq(S) over R + S = T inside the span."""
        self._check_window(mono_degree(t))
        terms = set()

        def split(i: int, left: List[int]) -> None:
            if i == len(t):
                r = canonical(left)
                s = canonical(x - y for x, y in zip(t, left))
                if self.span.contains(r) and self.span.contains(s):
                    terms.add((r, s))
                return
            for k in range(t[i] + 1):
                left.append(k)
                split(i + 1, left)
                left.pop()

        split(0, [])
        return frozenset(terms)

    def antipode(self, t: Monomial) -> FrozenSet[Monomial]:
        """Transpose of the antipode of A_* restricted to the span."""
        degree = mono_degree(t)
        self._check_window(degree)
        return frozenset(u for u in self.basis(degree) if t in antipode(u).support)

    def generators(self) -> List[Monomial]:
        """Milnor basis elements spanning the indecomposables, lowest degree
        first."""
        if self._generators is None:
            generators = []
            for d in range(1, self.max_degree + 1):
                index = self.index(d)
                decomposables = EchelonBasis(len(index))
                for i in range(1, d):
                    for r in self.basis(i):
                        for s in self.basis(d - i):
                            row = np.zeros(len(index), dtype=np.uint8)
                            for t in self.product(r, s):
                                row[index[t]] ^= 1
                            decomposables.add(row)
                for t in self.basis(d):
                    row = np.zeros(len(index), dtype=np.uint8)
                    row[index[t]] = 1
                    if decomposables.add(row):
                        generators.append(t)
            self._generators = generators
        return self._generators

    def double(self, e: int = 1) -> FDHopfAlgebra:
        """Dual of the 2^e-th power image of the span."""
        if e == 0:
            return self
        return FDHopfAlgebra(
            self.span.double(e),
            max_degree=self.max_degree << e,
            max_dimension=max(self.dimension, DEFAULT_MAX_DIMENSION),
        )


@dataclass
class ActionReport(BaseContainer):
    passed: bool
    degree: Optional[int] = None
    witness: Optional[str] = None


@dataclass(frozen=True, eq=False)
class FDModule:
    """A graded left module over an FDHopfAlgebra.

    ``actions[(t, d)]`` is the matrix of Sq(t) from degree ``d`` to
    ``d + |t|``; absent entries act by zero and the unit acts by the identity.
    Stored degrees are offset by ``shift`` from the true internal degrees.
    """

    algebra: FDHopfAlgebra
    space: GradedSpace
    actions: Dict[Tuple[Monomial, int], np.ndarray] = field(default_factory=dict)
    shift: int = 0
    name: str = ""

    def dim(self, degree: int) -> int:
        return self.space.dim(degree)

    @property
    def top_degree(self) -> int:
        top = self.space.top_degree
        return 0 if top is None else top

    def act(self, t: Monomial, degree: int) -> np.ndarray:
        target = degree + mono_degree(t)
        if t == UNIT:
            return np.eye(self.dim(degree), dtype=np.uint8)
        matrix = self.actions.get((t, degree))
        if matrix is None:
            return np.zeros((self.dim(target), self.dim(degree)), dtype=np.uint8)
        return matrix

    def act_on(self, x: SqElement, vector: np.ndarray, degree: int) -> np.ndarray:
        target = degree + (x.degree() or 0)
        result = np.zeros(self.dim(target), dtype=np.uint8)
        for t in x.support:
            result ^= (self.act(t, degree) @ vector % 2).astype(np.uint8)
        return result

    def check_action(self) -> ActionReport:
        """Unit and associativity of the action over every pair of basis
        elements."""
        top = self.space.max_degree
        for d in range(top + 1):
            if not self.dim(d):
                continue
            for b in self.algebra.elements():
                mid = d + mono_degree(b)
                if mid > top:
                    continue
                inner = self.act(b, d)
                for a in self.algebra.elements():
                    target = mid + mono_degree(a)
                    if target > top or target > self.algebra.max_degree + d:
                        continue
                    lhs = (self.act(a, mid) @ inner) % 2
                    rhs = np.zeros_like(lhs)
                    for t in self.algebra.product(a, b):
                        rhs ^= self.act(t, d)
                    if not np.array_equal(lhs, rhs):
                        witness = f"{_format_milnor(a)}*{_format_milnor(b)}"
                        return ActionReport(False, d, witness)
        return ActionReport(True)

    def shifted(self, k: int) -> FDModule:
        return FDModule(self.algebra, self.space, self.actions, self.shift + k, self.name)


def trivial_module(algebra: FDHopfAlgebra, name: str = "F2") -> FDModule:
    return FDModule(algebra, GradedSpace({0: ("1",)}, 0), {}, 0, name)


def free_module(
    algebra: FDHopfAlgebra, generator_degrees: Sequence[int], name: str = ""
) -> FDModule:
    """Free module on generators g0, g1, ... of the given degrees, truncated
    at the algebra's window."""
    if any(d < 0 for d in generator_degrees):
        raise ValueError(f"negative generator degree in {generator_degrees}")
    top = max(generator_degrees, default=0) + algebra.max_degree
    cells: Dict[int, List[Tuple[int, Monomial]]] = {}
    for k, g in enumerate(generator_degrees):
        for d in range(algebra.max_degree + 1):
            for t in algebra.basis(d):
                cells.setdefault(g + d, []).append((k, t))
    index = {d: {cell: i for i, cell in enumerate(cs)} for d, cs in cells.items()}
    actions = {}
    for a in algebra.positive_elements():
        for d, cs in cells.items():
            target = d + mono_degree(a)
            if target not in index:
                continue
            matrix = np.zeros((len(index[target]), len(cs)), dtype=np.uint8)
            for j, (k, t) in enumerate(cs):
                if mono_degree(a) + mono_degree(t) > algebra.max_degree:
                    continue
                for u in algebra.product(a, t):
                    matrix[index[target][(k, u)], j] = 1
            if matrix.any():
                actions[(a, d)] = matrix
    labels = {
        d: tuple(f"g{k}*{_format_milnor(t)}" for k, t in cs) for d, cs in cells.items()
    }
    return FDModule(algebra, GradedSpace(labels, top), actions, 0, name)


def regular_module(algebra: FDHopfAlgebra) -> FDModule:
    return free_module(algebra, [0], name=algebra.name)


def submodule_closure(
    module: FDModule, vectors: Dict[int, Iterable[np.ndarray]]
) -> Dict[int, EchelonBasis]:
    """Echelon bases of the submodule generated by ``vectors`` per degree."""
    top = module.space.max_degree
    spans = {d: EchelonBasis(module.dim(d)) for d in range(top + 1)}
    for d in range(top + 1):
        for v in vectors.get(d, []):
            spans[d].add(v)
    for d in range(top + 1):
        rows = list(spans[d].rows)
        for a in module.algebra.positive_elements():
            target = d + mono_degree(a)
            if target > top or not rows:
                continue
            matrix = module.act(a, d)
            for row in rows:
                spans[target].add(matrix @ row % 2)
    return spans


def quotient_module(
    module: FDModule, vectors: Dict[int, Iterable[np.ndarray]], name: str = ""
) -> FDModule:
    """M / (submodule generated by ``vectors``), spanned by the basis vectors
    of M outside the pivots of the submodule."""
    return quotient_with_projection(module, vectors, name)[0]


def quotient_with_projection(
    module: FDModule, vectors: Dict[int, Iterable[np.ndarray]], name: str = ""
) -> Tuple[FDModule, Dict[int, np.ndarray]]:
    """``quotient_module`` together with the projection matrices M_d -> Q_d."""
    spans = submodule_closure(module, vectors)
    kept: Dict[int, List[int]] = {}
    for d, span in spans.items():
        pivots = set(span.pivots)
        kept[d] = [i for i in range(module.dim(d)) if i not in pivots]

    def project(d: int, vector: np.ndarray) -> np.ndarray:
        return spans[d].reduce(vector)[kept[d]]

    projections = {}
    for d in range(module.space.max_degree + 1):
        if module.dim(d) and kept[d]:
            identity = np.eye(module.dim(d), dtype=np.uint8)
            projections[d] = np.array([project(d, e) for e in identity], dtype=np.uint8).T

    actions = {}
    for (t, d), matrix in module.actions.items():
        target = d + mono_degree(t)
        if not kept.get(d) or not kept.get(target):
            continue
        columns = [project(target, matrix[:, i]) for i in kept[d]]
        reduced = np.array(columns, dtype=np.uint8).T
        if reduced.any():
            actions[(t, d)] = reduced
    labels = {
        d: tuple(module.space.basis(d)[i] for i in idx) for d, idx in kept.items() if idx
    }
    space = GradedSpace(labels, module.space.max_degree)
    return FDModule(module.algebra, space, actions, module.shift, name), projections


def tensor_modules(m: FDModule, n: FDModule, name: str = "") -> FDModule:
    """M (x) N with the diagonal action through the coproduct."""
    algebra = m.algebra
    top = m.space.max_degree + n.space.max_degree
    cells: Dict[int, List[Tuple[int, int]]] = {}
    for d in range(top + 1):
        for i in range(d + 1):
            if m.dim(i) and n.dim(d - i):
                cells.setdefault(d, []).append((i, d - i))

    def offsets(d: int) -> Dict[Tuple[int, int], int]:
        result, position = {}, 0
        for i, j in cells.get(d, []):
            result[(i, j)] = position
            position += m.dim(i) * n.dim(j)
        return result

    dims = {d: sum(m.dim(i) * n.dim(j) for i, j in cs) for d, cs in cells.items()}
    actions = {}
    for a in algebra.positive_elements():
        delta = algebra.coproduct(a)
        for d in cells:
            target = d + mono_degree(a)
            if target not in dims:
                continue
            source_offsets, target_offsets = offsets(d), offsets(target)
            matrix = np.zeros((dims[target], dims[d]), dtype=np.uint8)
            for (i, j), start in source_offsets.items():
                for r, s in delta:
                    key = (i + mono_degree(r), j + mono_degree(s))
                    if key not in target_offsets:
                        continue
                    block = np.kron(m.act(r, i), n.act(s, j)) % 2
                    row = target_offsets[key]
                    matrix[
                        row : row + block.shape[0], start : start + block.shape[1]
                    ] ^= block.astype(np.uint8)
            if matrix.any():
                actions[(a, d)] = matrix
    labels = {
        d: tuple(
            f"{x}|{y}" for i, j in cs for x in m.space.basis(i) for y in n.space.basis(j)
        )
        for d, cs in cells.items()
    }
    return FDModule(algebra, GradedSpace(labels, top), actions, m.shift + n.shift, name)


def double_monomial_actions(
    actions: Dict[Tuple[Monomial, int], np.ndarray], e: int
) -> Dict[Tuple[Monomial, int], np.ndarray]:
    return {(frobenius(t, e), d << e): matrix for (t, d), matrix in actions.items()}
