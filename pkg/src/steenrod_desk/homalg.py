"""Minimal free resolutions, Ext charts, Poincare duality, socles and
injective embeddings over finite-dimensional (or windowed) Hopf algebras.

Gradings follow Adams: Ext^{s,t}_H(M, N) is built from H-maps lowering
degree by t, so classes with t < 0 appear whenever N sits above M.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from logging import getLogger
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
import tqdm
from serdescontainer import BaseContainer

from .algebra import (
    DEFAULT_MAX_DIMENSION,
    FDHopfAlgebra,
    FDModule,
    free_module,
    quotient_with_projection,
)
from .comodule import Comodule, double_module, dualize_comodule, project_comodule
from .errors import CheckFailure, WindowError
from .graded import (
    DegreeWindow,
    EchelonBasis,
    combination_label,
    nullspace,
    rank,
    solve,
)
from .milnor import UNIT, Monomial, _format_milnor, mono_degree
from .parallel import map_degrees
from .subquot import MonomialSpan, steenrod_quotient

logger = getLogger(__name__)

Cell = Tuple[int, Monomial]


class FreeModule:
    """Free module over ``algebra`` on generators added in increasing degree.

    The basis of degree d is the cells (g, T) with |g| + |T| = d, ordered by
    generator then by T.
    """

    def __init__(self, algebra: FDHopfAlgebra, max_degree: int) -> None:
        self.algebra = algebra
        self.max_degree = max_degree
        self.generator_degrees: List[int] = []
        self._cells: Dict[int, List[Cell]] = {}
        self._index: Dict[int, Dict[Cell, int]] = {}
        self._actions: Dict[Tuple[Monomial, int], np.ndarray] = {}

    def add_generator(self, degree: int) -> int:
        if self.generator_degrees and degree < self.generator_degrees[-1]:
            raise ValueError("generators must be added in increasing degree")
        self.generator_degrees.append(degree)
        for d in [d for d in self._cells if d >= degree]:
            del self._cells[d]
            self._index.pop(d, None)
        self._actions.clear()
        return len(self.generator_degrees) - 1

    def basis(self, degree: int) -> List[Cell]:
        if degree not in self._cells:
            self._cells[degree] = [
                (g, t)
                for g, gd in enumerate(self.generator_degrees)
                if gd <= degree
                for t in self.algebra.basis(degree - gd)
            ]
        return self._cells[degree]

    def index(self, degree: int) -> Dict[Cell, int]:
        if degree not in self._index:
            self._index[degree] = {cell: i for i, cell in enumerate(self.basis(degree))}
        return self._index[degree]

    def dim(self, degree: int) -> int:
        return len(self.basis(degree))

    def act(self, a: Monomial, degree: int) -> np.ndarray:
        """Matrix of left multiplication by Sq(a) out of degree ``degree``."""
        key = (a, degree)
        if key not in self._actions:
            target = degree + mono_degree(a)
            index = self.index(target)
            matrix = np.zeros((len(index), self.dim(degree)), dtype=np.uint8)
            for j, (g, t) in enumerate(self.basis(degree)):
                if mono_degree(a) + mono_degree(t) > self.algebra.max_degree:
                    continue
                for u in self.algebra.product(a, t):
                    matrix[index[(g, u)], j] = 1
            self._actions[key] = matrix
        return self._actions[key]

    def label(self, degree: int, vector: np.ndarray) -> str:
        names = [f"{_format_milnor(t)} g{g}" for g, t in self.basis(degree)]
        return combination_label(names, vector)


@dataclass
class FreeResolution:
    """F_0 <- F_1 <- ... resolving ``module``; ``boundaries[s][g]`` is the
    image of the g-th generator of F_s in F_(s-1) (in ``module`` for s = 0)."""

    algebra: FDHopfAlgebra
    module: FDModule
    max_degree: int
    stages: List[FreeModule] = field(default_factory=list)
    boundaries: List[List[np.ndarray]] = field(default_factory=list)

    @property
    def length(self) -> int:
        return len(self.stages) - 1

    def generator_degrees(self, s: int) -> List[int]:
        return list(self.stages[s].generator_degrees)

    def target_dim(self, s: int, degree: int) -> int:
        if s == 0:
            return self.module.dim(degree)
        return self.stages[s - 1].dim(degree)

    def apply(self, s: int, t: Monomial, g: int) -> np.ndarray:
        """Image of the cell (g, T) of F_s under the differential."""
        gd = self.stages[s].generator_degrees[g]
        boundary = self.boundaries[s][g]
        if t == UNIT:
            return boundary
        if s == 0:
            return (self.module.act(t, gd) @ boundary % 2).astype(np.uint8)
        return (self.stages[s - 1].act(t, gd) @ boundary % 2).astype(np.uint8)

    def differential_matrix(self, s: int, degree: int) -> np.ndarray:
        cells = self.stages[s].basis(degree)
        matrix = np.zeros((self.target_dim(s, degree), len(cells)), dtype=np.uint8)
        for j, (g, t) in enumerate(cells):
            matrix[:, j] = self.apply(s, t, g)
        return matrix

    def check_d_squared(self) -> Optional[Tuple[int, int]]:
        """First (s, degree) where d o d != 0, or None."""
        for s in range(1, self.length + 1):
            for d in range(self.max_degree + 1):
                product = self.differential_matrix(s - 1, d) @ self.differential_matrix(s, d)
                if (product % 2).any():
                    return s, d
        return None

    def check_minimal(self) -> Optional[Tuple[int, int]]:
        """First (s, generator) whose boundary has a unit coefficient."""
        for s in range(1, self.length + 1):
            for g, boundary in enumerate(self.boundaries[s]):
                gd = self.stages[s].generator_degrees[g]
                for (h, t), bit in zip(self.stages[s - 1].basis(gd), boundary):
                    if bit and t == UNIT:
                        return s, g
        return None

    def check_exact(self) -> Optional[Tuple[int, int]]:
        """First (s, degree) where ker d_s != im d_(s+1) below the top stage,
        or where F_0 fails to cover the module."""
        for d in range(self.max_degree + 1):
            if rank(self.differential_matrix(0, d)) != self.module.dim(d):
                return 0, d
        for s in range(self.length):
            for d in range(self.max_degree + 1):
                kernel = self.stages[s].dim(d) - rank(self.differential_matrix(s, d))
                if kernel != rank(self.differential_matrix(s + 1, d)):
                    return s, d
        return None

    def to_dict(self) -> Dict[str, Any]:
        stages = []
        for s, stage in enumerate(self.stages):
            matrices = {}
            for d in range(self.max_degree + 1):
                matrix = self.differential_matrix(s, d)
                if matrix.any():
                    matrices[str(d)] = matrix.astype(int).tolist()
            stages.append(
                {"s": s, "generators": stage.generator_degrees, "matrices": matrices}
            )
        return {
            "algebra": self.algebra.name,
            "module": self.module.name,
            "max_degree": self.max_degree,
            "stages": stages,
        }


def _check_resolvable(algebra: FDHopfAlgebra, max_degree: int) -> None:
    if not algebra.complete and max_degree > algebra.max_degree:
        raise WindowError(
            f"resolving through degree {max_degree} needs {algebra.name} beyond its "
            f"window {algebra.max_degree}"
        )


def minimal_resolution(
    algebra: FDHopfAlgebra, module: FDModule, max_s: int, max_t: int
) -> FreeResolution:
    """Minimal free resolution through stage ``max_s`` and internal degree
    ``max_t``.

    New generators in each degree are the kernel vectors (in nullspace order)
    independent of the image of the generators already present.
    """
    if module.algebra is not algebra:
        raise ValueError(f"{module.name} is not a module over {algebra.name}")
    _check_resolvable(algebra, max_t)
    res = FreeResolution(algebra, module, max_t)
    for s in tqdm.tqdm(range(max_s + 1), desc="resolution", leave=False, disable=None):
        stage = FreeModule(algebra, max_t)
        res.stages.append(stage)
        res.boundaries.append([])
        if s == 0:
            kernels = [np.eye(module.dim(d), dtype=np.uint8) for d in range(max_t + 1)]
        else:
            kernels = map_degrees(
                lambda d: nullspace(
                    res.differential_matrix(s - 1, d), ncols=res.stages[s - 1].dim(d)
                ),
                range(max_t + 1),
            )
        for d in range(max_t + 1):
            image = EchelonBasis(res.target_dim(s, d))
            for g, t in stage.basis(d):
                image.add(res.apply(s, t, g))
            for vector in kernels[d]:
                if image.add(vector):
                    stage.add_generator(d)
                    res.boundaries[s].append(vector.astype(np.uint8))
        logger.debug(f"stage {s}: generators in degrees {stage.generator_degrees}")
    logger.info(
        f"resolved {module.name or 'module'} over {algebra.name} through "
        f"s={max_s}, t={max_t}"
    )
    return res


@dataclass
class ChainMap:
    """Images of the generators of each stage of ``source`` in ``target``,
    raising degree by ``shift``; None where the image leaves the window."""

    source: FreeResolution
    target: FreeResolution
    shift: int
    images: List[List[Optional[np.ndarray]]] = field(default_factory=list)

    def apply_cell(self, s: int, g: int, t: Monomial) -> np.ndarray:
        """Image of the cell (g, T) of source stage s."""
        image = self.images[s][g]
        if image is None:
            raise WindowError(f"generator {g} of stage {s} was not lifted")
        if t == UNIT:
            return image
        degree = self.source.stages[s].generator_degrees[g] + self.shift
        return (self.target.stages[s].act(t, degree) @ image % 2).astype(np.uint8)

    def apply(self, s: int, degree: int, vector: np.ndarray) -> np.ndarray:
        result = np.zeros(self.target.stages[s].dim(degree + self.shift), dtype=np.uint8)
        for (g, t), bit in zip(self.source.stages[s].basis(degree), vector):
            if bit:
                result ^= self.apply_cell(s, g, t)
        return result


def lift_chain_map(
    source: FreeResolution,
    target: FreeResolution,
    alpha: Dict[int, np.ndarray],
    shift: int,
    max_s: int,
) -> ChainMap:
    """Lift a module map alpha: X -> Y raising degree by ``shift`` to the
    resolutions, generator by generator; free variables of each lift are
    zero.

    ``alpha[d]`` is the matrix X_d -> Y_(d + shift); missing degrees are zero.
    Generators whose image would lie above ``target.max_degree`` are left
    unlifted.
    """
    chain = ChainMap(source, target, shift)
    for s in range(min(max_s, source.length, target.length) + 1):
        stage_images: List[Optional[np.ndarray]] = []
        chain.images.append(stage_images)
        for g, gd in enumerate(source.stages[s].generator_degrees):
            degree = gd + shift
            if degree > target.max_degree:
                stage_images.append(None)
                continue
            if s == 0:
                boundary = source.boundaries[0][g]
                if gd in alpha:
                    rhs = (alpha[gd] @ boundary % 2).astype(np.uint8)
                else:
                    rhs = np.zeros(target.module.dim(degree), dtype=np.uint8)
            else:
                rhs = chain.apply(s - 1, gd, source.boundaries[s][g])
            image = solve(target.differential_matrix(s, degree), rhs)
            if image is None:
                raise CheckFailure(f"no lift for generator {g} of stage {s}", gd)
            stage_images.append(image)
    return chain


@dataclass
class ExtChart:
    """Nonzero dimensions of a bigraded group, keyed by (s, t)."""

    dims: Dict[Tuple[int, int], int]
    max_s: int
    max_t: int
    min_t: int = 0
    note: str = ""

    def get(self, s: int, t: int) -> int:
        return self.dims.get((s, t), 0)

    @property
    def is_zero(self) -> bool:
        return not self.dims

    def lines(self) -> List[str]:
        return [f"{s} {t} {n}" for (s, t), n in sorted(self.dims.items())]

    def to_text(self) -> str:
        return "\n".join(self.lines())

    def regrade(self, factor: int) -> ExtChart:
        return ExtChart(
            {(s, t * factor): n for (s, t), n in self.dims.items()},
            self.max_s,
            self.max_t * factor,
            self.min_t * factor,
            self.note,
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            "max_s": self.max_s,
            "max_t": self.max_t,
            "min_t": self.min_t,
            "note": self.note,
            "classes": [[s, t, n] for (s, t), n in sorted(self.dims.items())],
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> ExtChart:
        dims = {(s, t): n for s, t, n in data.get("classes", []) if n}
        return cls(dims, data["max_s"], data["max_t"], data.get("min_t", 0), data.get("note", ""))


def cochain_basis(
    res: FreeResolution, n: FDModule, s: int, t: int
) -> List[Tuple[int, int]]:
    if s >= len(res.stages):
        return []
    return [
        (g, k)
        for g, gd in enumerate(res.stages[s].generator_degrees)
        for k in range(n.dim(gd - t))
    ]


def coboundary_matrix(res: FreeResolution, n: FDModule, s: int, t: int) -> np.ndarray:
    """delta: Hom(F_s, N)_t -> Hom(F_(s+1), N)_t, phi -> phi o d."""
    source = cochain_basis(res, n, s, t)
    target = cochain_basis(res, n, s + 1, t)
    matrix = np.zeros((len(target), len(source)), dtype=np.uint8)
    if not source or not target:
        return matrix
    column = {cell: j for j, cell in enumerate(source)}
    row_offset: Dict[int, int] = {}
    for i, (g, k) in enumerate(target):
        row_offset.setdefault(g, i)
    stage, below = res.stages[s + 1], res.stages[s]
    for g2, gd2 in enumerate(stage.generator_degrees):
        if not n.dim(gd2 - t):
            continue
        rows = slice(row_offset[g2], row_offset[g2] + n.dim(gd2 - t))
        for (g, u), bit in zip(below.basis(gd2), res.boundaries[s + 1][g2]):
            if not bit:
                continue
            gd = below.generator_degrees[g]
            action = n.act(u, gd - t)
            for k in range(n.dim(gd - t)):
                matrix[rows, column[(g, k)]] ^= action[:, k]
    return matrix


def ext(
    algebra: FDHopfAlgebra,
    m: FDModule,
    n: FDModule,
    max_s: int,
    max_t: int,
    min_t: Optional[int] = None,
    resolution: Optional[FreeResolution] = None,
    note: str = "",
) -> ExtChart:
    """Ext^{s,t}_H(M, N) for s <= max_s and min_t <= t <= max_t from a
    minimal resolution of M.

    ``min_t`` defaults to the lowest t at which a class can exist.
    """
    offset = m.shift - n.shift
    top_n = n.space.max_degree
    lo = -top_n if min_t is None else min_t - offset
    hi = max_t - offset
    if min_t is None:
        min_t = lo + offset
    if hi < lo:
        raise WindowError(f"empty t range [{min_t}, {max_t}]")
    if resolution is None:
        resolution = minimal_resolution(algebra, m, max_s + 1, max(hi + top_n, 0))
    elif resolution.length < max_s + 1 or resolution.max_degree < hi + top_n:
        raise WindowError("the given resolution is too short for the requested range")

    def column(t: int) -> Dict[int, int]:
        dims = {}
        ranks = [rank(coboundary_matrix(resolution, n, s, t)) for s in range(max_s + 1)]
        for s in range(max_s + 1):
            cochains = len(cochain_basis(resolution, n, s, t))
            value = cochains - ranks[s] - (ranks[s - 1] if s else 0)
            if value:
                dims[s] = value
        return dims

    ts = list(range(lo, hi + 1))
    dims = {}
    for t, col in zip(ts, map_degrees(column, ts)):
        for s, value in col.items():
            dims[(s, t + offset)] = value
    chart = ExtChart(dims, max_s, max_t, min_t, note or f"Ext_{algebra.name}({m.name}, {n.name})")
    logger.info(f"{chart.note}: {sum(dims.values())} classes")
    return chart


def hom_dimension(algebra: FDHopfAlgebra, m: FDModule, n: FDModule, t: int) -> int:
    """dim Hom_H(M, N) in degree t, solved directly from the commutation
    constraints with the algebra generators."""
    offset = m.shift - n.shift
    t_space = t - offset
    blocks = [
        (d, n.dim(d - t_space), m.dim(d))
        for d in range(m.space.max_degree + 1)
        if m.dim(d) and n.dim(d - t_space)
    ]
    start, position = {}, 0
    for d, rows, cols in blocks:
        start[d] = position
        position += rows * cols
    if not position:
        return 0
    constraints = []
    for a in algebra.generators():
        for d, rows, cols in blocks:
            target = d + mono_degree(a)
            out_rows = n.dim(target - t_space)
            if not out_rows:
                continue
            # phi_(d+|a|) A_M(a, d) - A_N(a, d-t) phi_d, vectorized column-major
            block = np.zeros((out_rows * cols, position), dtype=np.uint8)
            if target in start:
                action = m.act(a, d)
                block[:, start[target] : start[target] + out_rows * m.dim(target)] ^= (
                    np.kron(action.T, np.eye(out_rows, dtype=np.uint8)) % 2
                ).astype(np.uint8)
            action = n.act(a, d - t_space)
            block[:, start[d] : start[d] + rows * cols] ^= (
                np.kron(np.eye(cols, dtype=np.uint8), action) % 2
            ).astype(np.uint8)
            constraints.append(block)
    if not constraints:
        return position
    return position - rank(np.concatenate(constraints, axis=0))


def build_An(n: int, max_dimension: int = DEFAULT_MAX_DIMENSION) -> FDHopfAlgebra:
    """A(n), the dual of the staircase quotient with z_i-exponents below
    2^(n+2-i)."""
    if n < 0:
        raise ValueError(f"n must be non-negative: {n}")
    return FDHopfAlgebra(steenrod_quotient(n), max_dimension=max_dimension, name=f"A({n})")


@dataclass
class PoincareReport(BaseContainer):
    name: str
    dimension: int
    pd: int
    passed: bool
    degree: Optional[int] = None
    witness: Optional[str] = None


def pairing_matrix(algebra: FDHopfAlgebra, k: int) -> np.ndarray:
    """Coefficient of the top class in b_i * b'_j for b_i in degree k, b'_j in
    degree pd - k."""
    pd = algebra.pd
    top = algebra.basis(pd)[0]
    left, right = algebra.basis(k), algebra.basis(pd - k)
    matrix = np.zeros((len(left), len(right)), dtype=np.uint8)
    for i, a in enumerate(left):
        for j, b in enumerate(right):
            if top in algebra.product(a, b):
                matrix[i, j] = 1
    return matrix


def poincare_check(algebra: FDHopfAlgebra) -> PoincareReport:
    if not algebra.complete:
        raise WindowError(f"{algebra.name} is windowed: Poincare duality needs all degrees")
    pd = algebra.pd
    report = PoincareReport(algebra.name, algebra.dimension, pd, True)
    if algebra.dim(0) != 1 or algebra.dim(pd) != 1:
        report.passed, report.degree = False, 0 if algebra.dim(0) != 1 else pd
        report.witness = "degree 0 and the top degree must be one-dimensional"
        return report
    for k in range(pd + 1):
        matrix = pairing_matrix(algebra, k)
        if matrix.shape[0] != matrix.shape[1] or rank(matrix) != matrix.shape[0]:
            kernel = nullspace(matrix.T, ncols=matrix.shape[0])
            report.passed, report.degree = False, k
            report.witness = combination_label(algebra.labels(k), kernel[0]) if len(kernel) else None
            logger.error(f"{algebra.name}: degenerate pairing in degree {k}")
            return report
    return report


@dataclass
class PoincareFamilyReport(BaseContainer):
    reports: List[PoincareReport]
    increasing: bool


def poincare_family(ns: Sequence[int]) -> PoincareFamilyReport:
    """poincare_check on A(n) for each n, and pd(n) < pd(n+1)."""
    reports = [poincare_check(build_An(n)) for n in ns]
    pds = [r.pd for r in reports]
    return PoincareFamilyReport(reports, all(a < b for a, b in zip(pds, pds[1:])))


@dataclass
class SocleReport(BaseContainer):
    algebra: str
    generators: List[str]
    max_degree: int
    guard: int
    dims: List[int]

    @property
    def is_zero(self) -> bool:
        return not any(self.dims)


def socle_scan(
    algebra: FDHopfAlgebra, generators: Sequence[Monomial], window: DegreeWindow
) -> SocleReport:
    """Dimensions of {x : b x = 0 for every listed b} in degrees up to
    ``window.asserted_max``."""
    if not algebra.complete and algebra.max_degree < window.max_degree:
        raise WindowError(
            f"{algebra.name} is only populated through degree {algebra.max_degree}"
        )
    for b in generators:
        if not 0 < mono_degree(b) <= window.guard:
            raise WindowError(
                f"guard {window.guard} does not cover {_format_milnor(b)} "
                f"(degree {mono_degree(b)})"
            )
        if not algebra.contains(b):
            raise ValueError(f"{_format_milnor(b)} is not in {algebra.name}")

    def socle_dim(d: int) -> int:
        blocks = [
            algebra.left_matrix(b, d)
            for b in generators
            if d + mono_degree(b) <= algebra.max_degree
        ]
        if not blocks:
            return algebra.dim(d)
        return algebra.dim(d) - rank(np.concatenate(blocks, axis=0))

    dims = map_degrees(socle_dim, range(window.asserted_max + 1))
    labels = [_format_milnor(b) for b in generators]
    logger.info(f"socle of {algebra.name} over {labels}: {dims}")
    return SocleReport(algebra.name, labels, window.max_degree, window.guard, dims)


def module_socle(module: FDModule) -> Dict[int, np.ndarray]:
    """Rows spanning the common kernel of the generators' actions per
    degree."""
    socle = {}
    for d in range(module.space.max_degree + 1):
        if not module.dim(d):
            continue
        blocks = [
            module.act(a, d)
            for a in module.algebra.generators()
            if module.dim(d + mono_degree(a))
        ]
        if blocks:
            rows = nullspace(np.concatenate(blocks, axis=0), ncols=module.dim(d))
        else:
            rows = np.eye(module.dim(d), dtype=np.uint8)
        if len(rows):
            socle[d] = rows
    return socle


@dataclass
class InjectiveStage:
    """M -> J into a finite free module, M in degree e landing in J's stored
    degree e + offset, with its cokernel."""

    target: FDModule
    matrices: Dict[int, np.ndarray]
    offset: int
    cokernel: FDModule
    projection: Dict[int, np.ndarray] = field(default_factory=dict)


def injective_embed_stage(algebra: FDHopfAlgebra, module: FDModule) -> InjectiveStage:
    """Embed M into a sum of shifted copies of H, one per socle basis vector.

    For a socle vector x of degree d a functional l with l(x) = 1 gives
    m -> (h -> l(h m)) in H*, identified with Sigma^(d - pd) H through the
    Poincare pairing.
    """
    report = poincare_check(algebra)
    if not report.passed:
        raise CheckFailure(
            f"{algebra.name} is not a Poincare duality algebra", report.degree, report.witness
        )
    pd = algebra.pd
    socle = module_socle(module)
    summands: List[Tuple[int, np.ndarray]] = []
    for d, rows in sorted(socle.items()):
        for j in range(len(rows)):
            unit = np.zeros(len(rows), dtype=np.uint8)
            unit[j] = 1
            functional = solve(rows, unit)
            summands.append((d, functional))
    offset = max([pd - d for d, _ in summands] + [0])
    target = free_module(algebra, [d - pd + offset for d, _ in summands])
    target = FDModule(algebra, target.space, target.actions, module.shift - offset, "J")
    starts = {}
    for d in range(target.space.max_degree + 1):
        position = 0
        for k, (g, _) in enumerate(summands):
            gd = g - pd + offset
            starts[(k, d)] = position
            position += algebra.dim(d - gd)
    matrices = {}
    for e in range(module.space.max_degree + 1):
        if not module.dim(e):
            continue
        matrix = np.zeros((target.dim(e + offset), module.dim(e)), dtype=np.uint8)
        for k, (d, functional) in enumerate(summands):
            h_degree = d - e
            if h_degree < 0 or h_degree > pd:
                continue
            # f_m(h_i) = l(h_i m) for the basis h_i of H_(d - e)
            values = np.array(
                [functional @ module.act(h, e) % 2 for h in algebra.basis(h_degree)],
                dtype=np.uint8,
            ).reshape(algebra.dim(h_degree), module.dim(e))
            pairing = pairing_matrix(algebra, h_degree)
            start = starts[(k, e + offset)]
            for col in range(module.dim(e)):
                x = solve(pairing, values[:, col])
                matrix[start : start + len(x), col] = x
        if rank(matrix) != module.dim(e):
            raise CheckFailure(f"embedding of {module.name} is not injective", e)
        matrices[e] = matrix
    images = {e + offset: list(matrix.T) for e, matrix in matrices.items()}
    cokernel, projection = quotient_with_projection(target, images, name=f"J/{module.name}")
    logger.debug(
        f"embedded {module.name} into {len(summands)} copies of {algebra.name}, "
        f"cokernel dim {cokernel.space.total_dimension}"
    )
    return InjectiveStage(target, matrices, offset, cokernel, projection)


def coext(
    m: Comodule,
    n: Comodule,
    c: MonomialSpan,
    max_s: int,
    max_t: int,
    min_t: Optional[int] = None,
    max_dimension: int = DEFAULT_MAX_DIMENSION,
) -> ExtChart:
    """Coext^{s,t}_C(M, N) = Ext^{s,t}_{C*}(N*, M*) for a finite C."""
    if not c.is_finite:
        raise WindowError(f"{c.name} is infinite: use the cobar complex")
    algebra = FDHopfAlgebra(c, max_dimension=max_dimension)
    m_star = dualize_comodule(project_comodule(m, c), algebra=algebra)
    n_star = dualize_comodule(project_comodule(n, c), algebra=algebra)
    chart = ext(algebra, n_star, m_star, max_s, max_t, min_t)
    chart.note = f"Coext_{c.name}({m.name}, {n.name})"
    return chart


@dataclass
class RegradeReport(BaseContainer):
    e: int
    passed: bool
    mismatches: List[List[int]] = field(default_factory=list)


def chart_mismatches(expected: ExtChart, actual: ExtChart) -> List[List[int]]:
    """[s, t, expected, actual] for every entry where the charts differ."""
    return [
        [s, t, expected.get(s, t), actual.get(s, t)]
        for s, t in sorted(set(expected.dims) | set(actual.dims))
        if expected.get(s, t) != actual.get(s, t)
    ]


def compare_regraded(chart: ExtChart, doubled: ExtChart, e: int) -> RegradeReport:
    """Entries of ``doubled`` at (s, 2^e t) must equal those of ``chart`` at
    (s, t) and vanish elsewhere."""
    mismatches = chart_mismatches(chart.regrade(1 << e), doubled)
    return RegradeReport(e, not mismatches, mismatches)


def doubling_regrade_check(
    algebra: FDHopfAlgebra,
    m: FDModule,
    n: FDModule,
    e: int,
    max_s: int,
    max_t: int,
    min_t: Optional[int] = None,
) -> RegradeReport:
    chart = ext(algebra, m, n, max_s, max_t, min_t)
    doubled_algebra = algebra.double(e)
    m2 = double_module(m, e, doubled_algebra)
    n2 = double_module(n, e, doubled_algebra)
    doubled = ext(
        doubled_algebra,
        m2,
        n2,
        max_s,
        max_t << e,
        None if min_t is None else min_t << e,
    )
    report = compare_regraded(chart, doubled, e)
    if not report.passed:
        logger.error(f"regrading by 2^{e} fails at {report.mismatches[0]}")
    return report
