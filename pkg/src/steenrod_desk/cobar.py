"""Coext computed on the comodule side through the cobar complex
Hom_k(M, Cbar^(x)s (x) N).

This codepath shares nothing with the resolution engine beyond the F2 rank,
so it serves as an oracle for ``homalg.ext``/``homalg.coext``, and it is the
only engine for windowed infinite coalgebras.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from logging import getLogger
from typing import Dict, List, Optional, Tuple

import numpy as np
from serdescontainer import BaseContainer

from .algebra import DEFAULT_MAX_DIMENSION
from .comodule import Comodule, project_comodule, trivial_comodule
from .errors import WindowError
from .graded import rank
from .homalg import ExtChart, RegradeReport, chart_mismatches, coext, compare_regraded
from .milnor import UNIT, Monomial, mono_degree
from .parallel import map_degrees
from .subquot import MonomialSpan

logger = getLogger(__name__)

BarCell = Tuple[Tuple[Monomial, ...], int, int]


class CobarComplex:
    """Cochains of Coext_C(M, N) for left comodules M (finite) and N.

    A cochain of bidegree (s, t) sends the basis vector i of M_d to a cell
    [c_1|...|c_s] n of degree d + t with every c_k of positive degree.
    """

    def __init__(self, coalgebra: MonomialSpan, m: Comodule, n: Comodule) -> None:
        for comodule in (m, n):
            if comodule.side != "left":
                raise ValueError(f"{comodule.name or 'comodule'} is not a left comodule")
        if not m.complete:
            raise WindowError(f"{m.name or 'source'} must be finite for the cobar complex")
        self.coalgebra = coalgebra
        self.m = project_comodule(m, coalgebra)
        self.n = project_comodule(n, coalgebra)
        self._cells: Dict[Tuple[int, int], List[BarCell]] = {}
        self._index: Dict[Tuple[int, int], Dict[BarCell, int]] = {}
        self._inverse: Dict[Tuple[int, int], List[Tuple[Monomial, int, int]]] = {}
        for d, entries in self.m.coaction.items():
            for k, terms in enumerate(entries):
                for c, i in terms:
                    if c != UNIT:
                        key = (d - mono_degree(c), i)
                        self._inverse.setdefault(key, []).append((c, d, k))

    @property
    def top_source(self) -> int:
        top = self.m.space.top_degree
        return 0 if top is None else top

    def _words(self, s: int, degree: int) -> List[Tuple[Monomial, ...]]:
        if s == 0:
            return [()] if degree == 0 else []
        words = []
        for first in range(1, degree - s + 2):
            for c in self.coalgebra.basis(first):
                for rest in self._words(s - 1, degree - first):
                    words.append((c,) + rest)
        return words

    def cells(self, s: int, degree: int) -> List[BarCell]:
        key = (s, degree)
        if key not in self._cells:
            if not self.n.complete and degree > self.n.space.max_degree:
                raise WindowError(
                    f"cobar degree {degree} exceeds the window of {self.n.name} "
                    f"({self.n.space.max_degree})"
                )
            self._cells[key] = [
                (word, nd, j)
                for nd in range(degree + 1)
                for j in range(self.n.space.dim(nd))
                for word in self._words(s, degree - nd)
            ]
        return self._cells[key]

    def cell_index(self, s: int, degree: int) -> Dict[BarCell, int]:
        key = (s, degree)
        if key not in self._index:
            self._index[key] = {cell: i for i, cell in enumerate(self.cells(s, degree))}
        return self._index[key]

    def _blocks(self, s: int, t: int) -> Dict[Tuple[int, int], int]:
        """Offset of the block of M-basis vector (d, i) in the cochains."""
        offsets, position = {}, 0
        for d in range(self.top_source + 1):
            if d + t < 0:
                continue
            size = len(self.cells(s, d + t))
            for i in range(self.m.space.dim(d)):
                offsets[(d, i)] = position
                position += size
        return offsets

    def dim(self, s: int, t: int) -> int:
        return sum(
            self.m.space.dim(d) * len(self.cells(s, d + t))
            for d in range(self.top_source + 1)
            if d + t >= 0
        )

    def differential(self, s: int, t: int) -> np.ndarray:
        source, target = self._blocks(s, t), self._blocks(s + 1, t)
        matrix = np.zeros((self.dim(s + 1, t), self.dim(s, t)), dtype=np.uint8)

        def hit(d: int, i: int, cell: BarCell, column: int) -> None:
            index = self.cell_index(s + 1, d + t)
            matrix[target[(d, i)] + index[cell], column] ^= 1

        for (d, i), start in source.items():
            for x, (word, nd, j) in enumerate(self.cells(s, d + t)):
                column = start + x
                for c, d2, k in self._inverse.get((d, i), []):
                    hit(d2, k, ((c,) + word, nd, j), column)
                for p, c in enumerate(word):
                    for a, b in self.coalgebra.coproduct(c):
                        if a != UNIT and b != UNIT:
                            hit(d, i, (word[:p] + (a, b) + word[p + 1 :], nd, j), column)
                for c, j2 in self.n.terms(nd, j):
                    if c != UNIT:
                        hit(d, i, (word + (c,), nd - mono_degree(c), j2), column)
        return matrix

    def chart(
        self, max_s: int, max_t: int, min_t: Optional[int] = None, note: str = ""
    ) -> ExtChart:
        if min_t is None:
            min_t = -self.top_source
        if max_t < min_t:
            raise WindowError(f"empty t range [{min_t}, {max_t}]")

        def column(t: int) -> Dict[int, int]:
            ranks = [rank(self.differential(s, t)) for s in range(max_s + 1)]
            dims = {}
            for s in range(max_s + 1):
                value = self.dim(s, t) - ranks[s] - (ranks[s - 1] if s else 0)
                if value:
                    dims[s] = value
            return dims

        ts = list(range(min_t, max_t + 1))
        dims = {}
        for t, col in zip(ts, map_degrees(column, ts)):
            for s, value in col.items():
                dims[(s, t)] = value
        note = note or f"Coext_{self.coalgebra.name}({self.m.name}, {self.n.name}) [cobar]"
        logger.info(f"{note}: {sum(dims.values())} classes")
        return ExtChart(dims, max_s, max_t, min_t, note)


def cobar_coext(
    m: Comodule,
    n: Comodule,
    c: MonomialSpan,
    max_s: int,
    max_t: int,
    min_t: Optional[int] = None,
) -> ExtChart:
    return CobarComplex(c, m, n).chart(max_s, max_t, min_t)


@dataclass
class BalanceReport(BaseContainer):
    coalgebra: str
    passed: bool
    mismatches: List[List[int]] = field(default_factory=list)


def balance_check(
    m: Comodule,
    n: Comodule,
    c: MonomialSpan,
    max_s: int,
    max_t: int,
    min_t: Optional[int] = None,
    max_dimension: int = DEFAULT_MAX_DIMENSION,
) -> BalanceReport:
    """Coext through the dual algebra against Coext through the cobar
    complex."""
    if min_t is None:
        top = m.space.top_degree
        min_t = -(top or 0)
    via_modules = coext(m, n, c, max_s, max_t, min_t, max_dimension=max_dimension)
    via_cobar = cobar_coext(m, n, c, max_s, max_t, min_t)
    mismatches = chart_mismatches(via_cobar, via_modules)
    if mismatches:
        logger.error(f"Coext over {c.name} disagrees at {mismatches[0]}")
    return BalanceReport(c.name, not mismatches, mismatches)


def cobar_regrade_check(c: MonomialSpan, e: int, max_s: int, max_t: int) -> RegradeReport:
    """Coext_C(F2, F2) regraded by 2^e against Coext over the 2^e-th power
    image of C, for t up to ``max_t`` on the undoubled side."""
    chart = cobar_coext(trivial_comodule(c), trivial_comodule(c), c, max_s, max_t, 0)
    doubled = c.double(e)
    doubled_chart = cobar_coext(
        trivial_comodule(doubled), trivial_comodule(doubled), doubled, max_s, max_t << e, 0
    )
    report = compare_regraded(chart, doubled_chart, e)
    if not report.passed:
        logger.error(f"{doubled.name}: regrading fails at {report.mismatches[0]}")
    return report
