"""E2 pages of the Cartan-Eilenberg spectral sequences for a normal sequence
R -> S -> S//R of finite Hopf algebras, with the subquotient consistency check
against the directly computed abutment.

Comodule data are dualized first: a quotient Hopf algebra K of H corresponds
to the subalgebra R = K* of S = H*, and K\\H to S//R. Internal degrees follow
the Adams grading of ``homalg.ext``; inner classes of internal degree u sit in
true degree -u of the inner module.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from logging import getLogger
from typing import Any, Callable, Dict, Iterator, List, Optional, Tuple

import numpy as np
from serdescontainer import BaseContainer

from .algebra import (
    DEFAULT_MAX_DIMENSION,
    FDHopfAlgebra,
    FDModule,
    quotient_with_projection,
    regular_module,
    tensor_modules,
    trivial_module,
)
from .comodule import Comodule, dualize_comodule, project_comodule
from .errors import CheckFailure, CoherenceError, NormalityError, NotHopfError, WindowError
from .graded import EchelonBasis, GradedSpace, nullspace, solve
from .homalg import (
    ChainMap,
    ExtChart,
    FreeModule,
    FreeResolution,
    coboundary_matrix,
    cochain_basis,
    ext,
    injective_embed_stage,
    lift_chain_map,
    minimal_resolution,
)
from .milnor import UNIT, Monomial, _format_milnor, basis_key, format_monomial, mono_degree
from .parallel import map_degrees
from .subquot import (
    FiniteSpan,
    FreenessReport,
    MonomialSpan,
    check_hopf_quotient,
    check_subhopf,
    verify_freeness,
)

logger = getLogger(__name__)

CONSTRUCTIONS = ("algebras", "comodule-first", "comodule-second")


@dataclass
class NormalityReport(BaseContainer):
    passed: bool
    degree: Optional[int] = None
    witness: Optional[str] = None


def _product_row(algebra: FDHopfAlgebra, a: Monomial, b: Monomial) -> np.ndarray:
    degree = mono_degree(a) + mono_degree(b)
    row = np.zeros(algebra.dim(degree), dtype=np.uint8)
    index = algebra.index(degree)
    for t in algebra.product(a, b):
        row[index[t]] ^= 1
    return row


def _ideal_pairs(
    algebra: FDHopfAlgebra, elements: List[Monomial]
) -> Iterator[Tuple[Monomial, Monomial]]:
    for r in elements:
        for s in algebra.elements():
            if mono_degree(r) + mono_degree(s) <= algebra.max_degree:
                yield r, s


def check_normal(algebra: FDHopfAlgebra, sub: MonomialSpan) -> NormalityReport:
    """S R+ = R+ S inside S, for R spanned by the Milnor basis elements of
    ``sub``. The witness is a product r*s outside S R+ (or s*r outside R+ S)."""
    positive = [t for t in algebra.positive_elements() if sub.contains(t)]
    spans = {
        side: {d: EchelonBasis(algebra.dim(d)) for d in range(algebra.max_degree + 1)}
        for side in ("left", "right")
    }
    for r, s in _ideal_pairs(algebra, positive):
        spans["left"][mono_degree(r) + mono_degree(s)].add(_product_row(algebra, s, r))
    for r, s in _ideal_pairs(algebra, positive):
        degree = mono_degree(r) + mono_degree(s)
        row = _product_row(algebra, r, s)
        if not spans["left"][degree].contains(row):
            return NormalityReport(False, degree, f"{_format_milnor(r)}*{_format_milnor(s)}")
        spans["right"][degree].add(row)
    for r, s in _ideal_pairs(algebra, positive):
        degree = mono_degree(r) + mono_degree(s)
        if not spans["right"][degree].contains(_product_row(algebra, s, r)):
            return NormalityReport(False, degree, f"{_format_milnor(s)}*{_format_milnor(r)}")
    return NormalityReport(True)


def derive_quotient(sub: MonomialSpan, ambient: MonomialSpan) -> FiniteSpan:
    """Monomials x of ``ambient`` whose coproduct has no term x'|x'' with x''
    of positive degree in ``sub``; the dual of S//R."""
    members = frozenset(
        m
        for m in ambient.monomials(ambient.top_degree)
        if not any(b != UNIT and sub.contains(b) for _, b in ambient.coproduct(m))
    )
    return FiniteSpan(members, f"{ambient.name}//{sub.name}")


class NormalSequence:
    """R -> S -> S//R given by the spans of R_*, S_* and (S//R)_*.

    ``sub`` is a quotient coalgebra of ``ambient``, ``quotient`` a subHopf
    algebra of it.
    """

    def __init__(
        self,
        sub: MonomialSpan,
        ambient: MonomialSpan,
        quotient: Optional[MonomialSpan] = None,
        max_dimension: int = DEFAULT_MAX_DIMENSION,
    ) -> None:
        if not ambient.is_finite or not sub.is_finite:
            raise WindowError("normal sequences are built from finite spans only")
        self.sub = sub
        self.ambient = ambient
        self.quotient = quotient if quotient is not None else derive_quotient(sub, ambient)
        self.algebra = FDHopfAlgebra(ambient, max_dimension=max_dimension)
        self.sub_algebra = FDHopfAlgebra(sub, max_dimension=max_dimension)
        self.quotient_algebra = FDHopfAlgebra(self.quotient, max_dimension=max_dimension)
        self.freeness: Optional[FreenessReport] = None
        self._quotient_module: Optional[Tuple[FDModule, Dict[int, np.ndarray]]] = None

    @property
    def name(self) -> str:
        return f"{self.sub.name} -> {self.ambient.name} -> {self.quotient.name}"

    def verify(self) -> NormalSequence:
        top = self.ambient.top_degree
        report = check_hopf_quotient(self.sub, top, self.ambient)
        if not report.passed:
            raise NotHopfError(
                f"{self.sub.name} is not a quotient Hopf algebra of {self.ambient.name}",
                report.degree,
                report.witness,
            )
        report = check_subhopf(self.quotient, top, self.ambient)
        if not report.passed:
            raise NotHopfError(
                f"{self.quotient.name} is not a subHopf algebra of {self.ambient.name}",
                report.degree,
                report.witness,
            )
        self.freeness = verify_freeness(self.quotient, self.ambient, top, quotient=self.sub)
        if not self.freeness.passed:
            raise CheckFailure(
                f"{self.ambient.name} is not free over {self.sub.name}: {self.freeness.reason}",
                self.freeness.degree,
            )
        normality = check_normal(self.algebra, self.sub)
        if not normality.passed:
            logger.error(f"{self.sub.name} is not normal in {self.ambient.name}")
            raise NormalityError(
                f"{self.sub.name} is not normal in {self.ambient.name}",
                normality.degree,
                normality.witness,
            )
        logger.info(f"verified normal sequence {self.name}")
        return self

    def sub_generators(self) -> List[Monomial]:
        """Algebra generators of R, read as elements of S."""
        return self.sub_algebra.generators()

    def quotient_module(self) -> Tuple[FDModule, Dict[int, np.ndarray]]:
        """S//R = S / S R+ as a left S-module, with the projections from S."""
        if self._quotient_module is None:
            s = self.algebra
            vectors: Dict[int, List[np.ndarray]] = {}
            for t in s.positive_elements():
                if self.sub.contains(t):
                    d = mono_degree(t)
                    vector = np.zeros(s.dim(d), dtype=np.uint8)
                    vector[s.index(d)[t]] = 1
                    vectors.setdefault(d, []).append(vector)
            module, projections = quotient_with_projection(
                regular_module(s), vectors, name=self.quotient.name
            )
            self._quotient_module = (module, projections)
        return self._quotient_module

    def right_multiplication(self, q: Monomial) -> Dict[int, np.ndarray]:
        """x -> x Sq(q) on S//R, degree by degree."""
        s = self.algebra
        module, projections = self.quotient_module()
        k = mono_degree(q)
        alpha = {}
        for d, projection in projections.items():
            if d + k > s.max_degree or d + k not in projections:
                continue
            lifts = [
                solve(projection, np.eye(module.dim(d), dtype=np.uint8)[j])
                for j in range(module.dim(d))
            ]
            section = np.array(lifts, dtype=np.uint8).T
            matrix = projections[d + k] @ s.right_matrix(q, d) @ section % 2
            if matrix.any():
                alpha[d] = matrix.astype(np.uint8)
        return alpha

    def restrict(self, module: FDModule) -> FDModule:
        """Pull an S//R-module back along S -> S//R."""
        if module.algebra is not self.quotient_algebra:
            raise ValueError(f"{module.name} is not a module over {self.quotient.name}")
        return FDModule(self.algebra, module.space, module.actions, module.shift, module.name)

    def fixed_vectors(self, module: FDModule) -> Dict[int, np.ndarray]:
        """Rows spanning Hom_R(k, M) per degree for an S-module M."""
        generators = self.sub_generators()
        fixed = {}
        for d in range(module.space.max_degree + 1):
            if not module.dim(d):
                continue
            blocks = [
                module.act(r, d) for r in generators if module.dim(d + mono_degree(r))
            ]
            if blocks:
                rows = nullspace(np.concatenate(blocks, axis=0), ncols=module.dim(d))
            else:
                rows = np.eye(module.dim(d), dtype=np.uint8)
            if len(rows):
                fixed[d] = rows
        return fixed


class _Subquotient:
    """Z/B inside F2^n, with representatives of a complement of B in Z."""

    def __init__(self, n: int, cycles: Any, boundaries: Any) -> None:
        echelon = EchelonBasis(n, list(boundaries))
        self.n = n
        self.boundaries = echelon.rows.copy()
        self.reps: List[np.ndarray] = []
        for z in cycles:
            if echelon.add(z):
                self.reps.append(np.asarray(z, dtype=np.uint8) % 2)
        columns = list(self.boundaries) + self.reps
        self._system = (
            np.array(columns, dtype=np.uint8).T if columns else np.zeros((n, 0), dtype=np.uint8)
        )

    def coordinates(self, vector: np.ndarray) -> np.ndarray:
        x = solve(self._system, vector)
        if x is None:
            raise CheckFailure("induced action leaves the cycles")
        return x[len(self.boundaries) :]


def _homology_module(
    algebra: FDHopfAlgebra,
    pieces: Dict[int, _Subquotient],
    act: Callable[[Monomial, int, np.ndarray], np.ndarray],
    shift: int,
    name: str,
) -> Optional[FDModule]:
    pieces = {d: piece for d, piece in pieces.items() if piece.reps}
    if not pieces:
        return None
    labels = {
        d: tuple(f"x{d + shift}_{i}" for i in range(len(piece.reps)))
        for d, piece in pieces.items()
    }
    actions = {}
    for q in algebra.positive_elements():
        for d, piece in pieces.items():
            target = d + mono_degree(q)
            if target not in pieces:
                continue
            columns = [pieces[target].coordinates(act(q, d, rep)) for rep in piece.reps]
            matrix = np.array(columns, dtype=np.uint8).T
            if matrix.any():
                actions[(q, d)] = matrix
    space = GradedSpace(labels, max(pieces))
    return FDModule(algebra, space, actions, shift, name)


def _pull_back(
    res: FreeResolution, m: FDModule, chain: ChainMap, s: int, t: int, cochain: np.ndarray
) -> np.ndarray:
    """f -> f o phi from Hom(F_s, M)_t to Hom(F_s, M)_(t - shift)."""
    t2 = t - chain.shift
    stage = res.stages[s]
    source_start: Dict[int, int] = {}
    for i, (g, _) in enumerate(cochain_basis(res, m, s, t)):
        source_start.setdefault(g, i)
    result = []
    for g, gd in enumerate(stage.generator_degrees):
        size = m.dim(gd - t2)
        if not size:
            continue
        value = np.zeros(size, dtype=np.uint8)
        image = chain.images[s][g]
        for (h, a), bit in zip(stage.basis(gd + chain.shift), image):
            if not bit or h not in source_start:
                continue
            hd = stage.generator_degrees[h]
            start = source_start[h]
            f_h = cochain[start : start + m.dim(hd - t)]
            value ^= (m.act(a, hd - t) @ f_h % 2).astype(np.uint8)
        result.append(value)
    if not result:
        return np.zeros(0, dtype=np.uint8)
    return np.concatenate(result)


def inner_ext_by_lifts(
    seq: NormalSequence, m: FDModule, max_t: int, max_u: int
) -> List[Optional[FDModule]]:
    """Ext^t_R(k, M) = Ext^t_S(S//R, M) as S//R-modules for t <= max_t and
    internal degree <= max_u; S//R acts through chain lifts of the right
    multiplications of S//R on itself."""
    s_alg, q_alg = seq.algebra, seq.quotient_algebra
    x, _ = seq.quotient_module()
    offset = x.shift - m.shift
    top = m.space.max_degree
    lo, hi = -top, max_u - offset
    if hi < lo:
        return [None] * (max_t + 1)
    bound = hi + top
    res = minimal_resolution(s_alg, x, max_t + 1, bound)
    lifts = {
        q: lift_chain_map(res, res, seq.right_multiplication(q), mono_degree(q), max_t)
        for q in q_alg.positive_elements()
        if mono_degree(q) <= bound
    }
    modules = []
    for t in range(max_t + 1):
        pieces = {}
        for u in range(lo, hi + 1):
            n = len(cochain_basis(res, m, t, u))
            if not n:
                continue
            cycles = nullspace(coboundary_matrix(res, m, t, u), ncols=n)
            boundaries = coboundary_matrix(res, m, t - 1, u).T if t else []
            pieces[hi - u] = _Subquotient(n, cycles, boundaries)

        def act(q: Monomial, stored: int, vector: np.ndarray, t: int = t) -> np.ndarray:
            return _pull_back(res, m, lifts[q], t, hi - stored, vector)

        modules.append(_homology_module(q_alg, pieces, act, -(offset + hi), f"Ext^{t}_R(k,{m.name})"))
    return modules


class _ReducedComplex:
    """S//R (x)_S P for a free S-resolution P: free S//R-modules on the
    generators of P with the reduced differential."""

    def __init__(self, seq: NormalSequence, res: FreeResolution) -> None:
        q_alg = seq.quotient_algebra
        self.stages: List[FreeModule] = []
        self.boundaries: List[List[np.ndarray]] = []
        for s, stage in enumerate(res.stages):
            free = FreeModule(q_alg, res.max_degree)
            for gd in stage.generator_degrees:
                free.add_generator(gd)
            self.stages.append(free)
            reduced = []
            if s:
                below = self.stages[s - 1]
                for g, gd in enumerate(stage.generator_degrees):
                    vector = np.zeros(below.dim(gd), dtype=np.uint8)
                    index = below.index(gd)
                    for (h, t), bit in zip(res.stages[s - 1].basis(gd), res.boundaries[s][g]):
                        if bit and (h, t) in index:
                            vector[index[(h, t)]] ^= 1
                    reduced.append(vector)
            self.boundaries.append(reduced)

    def differential(self, s: int, degree: int) -> np.ndarray:
        cells = self.stages[s].basis(degree)
        if s == 0:
            return np.zeros((0, len(cells)), dtype=np.uint8)
        below = self.stages[s - 1]
        matrix = np.zeros((below.dim(degree), len(cells)), dtype=np.uint8)
        for j, (g, t) in enumerate(cells):
            gd = self.stages[s].generator_degrees[g]
            matrix[:, j] = below.act(t, gd) @ self.boundaries[s][g] % 2
        return matrix

    def homology(self, s: int, max_degree: int, name: str) -> Optional[FDModule]:
        stage = self.stages[s]
        pieces = {}
        for d in range(max_degree + 1):
            n = stage.dim(d)
            if not n:
                continue
            cycles = nullspace(self.differential(s, d), ncols=n)
            boundaries = self.differential(s + 1, d).T
            pieces[d] = _Subquotient(n, cycles, boundaries)

        def act(q: Monomial, d: int, vector: np.ndarray) -> np.ndarray:
            return (stage.act(q, d) @ vector % 2).astype(np.uint8)

        return _homology_module(stage.algebra, pieces, act, 0, name)


def inner_tor(
    seq: NormalSequence, x: FDModule, max_t: int, max_degree: int
) -> List[Optional[FDModule]]:
    """Tor^R_t(k, X) as S//R-modules for t <= max_t, through ``max_degree``."""
    if x.shift:
        raise ValueError("inner_tor expects an unshifted module")
    res = minimal_resolution(seq.algebra, x, max_t + 1, max_degree)
    complex_ = _ReducedComplex(seq, res)
    return [
        complex_.homology(t, max_degree, f"Tor_{t}^R(k,{x.name})") for t in range(max_t + 1)
    ]


def inner_ext_by_injectives(
    seq: NormalSequence, m: FDModule, max_t: int
) -> List[Optional[FDModule]]:
    """Ext^t_R(k, M) as S//R-modules from a minimal injective resolution of M
    by free S-modules: the homology of Hom_R(k, J^*)."""
    modules: List[Optional[FDModule]] = []
    current, previous = m, None
    for t in range(max_t + 1):
        fixed = seq.fixed_vectors(current)
        pieces = {}
        for d, rows in fixed.items():
            boundaries = []
            if previous is not None and d in previous.projection:
                source_fixed = seq.fixed_vectors(previous.target).get(d)
                if source_fixed is not None:
                    boundaries = list((previous.projection[d] @ source_fixed.T % 2).T)
            pieces[d] = _Subquotient(current.dim(d), rows, boundaries)

        def act(q: Monomial, d: int, vector: np.ndarray, module: FDModule = current) -> np.ndarray:
            return (module.act(q, d) @ vector % 2).astype(np.uint8)

        modules.append(
            _homology_module(
                seq.quotient_algebra, pieces, act, current.shift, f"Ext^{t}_R(k,{m.name})"
            )
        )
        if t < max_t:
            previous = injective_embed_stage(seq.algebra, current)
            current = previous.cokernel
    return modules


@dataclass
class SubquotientReport(BaseContainer):
    passed: bool
    zero_propagation: bool
    violations: List[List[int]] = field(default_factory=list)


@dataclass
class E2Page:
    """dims[(s, t, u)] of a first-quadrant E2 page with internal degree u."""

    dims: Dict[Tuple[int, int, int], int]
    max_s: int
    max_t: int
    min_u: int
    max_u: int
    construction: str
    note: str = ""
    abutment: Optional[ExtChart] = None
    subquotient: Optional[SubquotientReport] = None
    cross_checked: Optional[bool] = None

    def __post_init__(self) -> None:
        if self.construction not in CONSTRUCTIONS:
            raise ValueError(f"construction={self.construction} is not supported")

    def get(self, s: int, t: int, u: int) -> int:
        return self.dims.get((s, t, u), 0)

    @property
    def is_zero(self) -> bool:
        return not self.dims

    @property
    def first_quadrant(self) -> bool:
        return all(s >= 0 and t >= 0 for s, t, _ in self.dims)

    def total(self, n: int, u: int) -> int:
        return sum(self.get(s, n - s, u) for s in range(n + 1))

    def lines(self) -> List[str]:
        return [f"{s} {t} {u} {n}" for (s, t, u), n in sorted(self.dims.items())]

    def to_dict(self) -> Dict[str, Any]:
        data = {
            "construction": self.construction,
            "note": self.note,
            "max_s": self.max_s,
            "max_t": self.max_t,
            "min_u": self.min_u,
            "max_u": self.max_u,
            "classes": [[s, t, u, n] for (s, t, u), n in sorted(self.dims.items())],
        }
        if self.abutment is not None:
            data["abutment"] = self.abutment.to_dict()
        if self.subquotient is not None:
            data["subquotient"] = self.subquotient.to_dict()
        if self.cross_checked is not None:
            data["cross_checked"] = self.cross_checked
        return data


def subquotient_check(page: E2Page, abutment: ExtChart) -> SubquotientReport:
    """sum_{s+t=n} E2^{s,t,u} >= Ext^{n,u} wherever every E2 term of total
    degree n is in range."""
    max_n = min(page.max_s, page.max_t, abutment.max_s)
    lo, hi = max(page.min_u, abutment.min_t), min(page.max_u, abutment.max_t)
    violations = [
        [n, u, page.total(n, u), abutment.get(n, u)]
        for n in range(max_n + 1)
        for u in range(lo, hi + 1)
        if page.total(n, u) < abutment.get(n, u)
    ]
    zero_propagation = not page.is_zero or all(
        abutment.get(n, u) == 0 for n in range(max_n + 1) for u in range(lo, hi + 1)
    )
    if violations:
        logger.error(f"E2 page smaller than its abutment at {violations[0]}")
    return SubquotientReport(not violations and zero_propagation, zero_propagation, violations)


def _assemble(
    outer: Callable[[FDModule], ExtChart],
    inner: List[Optional[FDModule]],
) -> Dict[Tuple[int, int, int], int]:
    charts = map_degrees(lambda module: outer(module) if module is not None else None, inner)
    dims = {}
    for t, chart in enumerate(charts):
        if chart is None:
            continue
        for (s, u), n in chart.dims.items():
            dims[(s, t, u)] = n
    return dims


def _finish(page: E2Page, abutment: ExtChart) -> E2Page:
    page.abutment = abutment
    page.subquotient = subquotient_check(page, abutment)
    logger.info(
        f"E2 ({page.construction}) {page.note}: {sum(page.dims.values())} classes, "
        f"subquotient check {'passed' if page.subquotient.passed else 'FAILED'}"
    )
    return page


def ce_e2_algebras(
    seq: NormalSequence,
    l: FDModule,
    m: FDModule,
    max_s: int,
    max_t: int,
    max_u: int,
    min_u: int = 0,
) -> E2Page:
    """Ext^s_{S//R}(L, Ext^t_R(k, M)) => Ext^{s+t}_S(L, M)."""
    if l.algebra is not seq.quotient_algebra:
        raise ValueError(f"{l.name} is not a module over {seq.quotient.name}")
    if m.algebra is not seq.algebra:
        raise ValueError(f"{m.name} is not a module over {seq.ambient.name}")
    inner = inner_ext_by_lifts(seq, m, max_t, max_u)
    q_alg = seq.quotient_algebra
    dims = _assemble(lambda n: ext(q_alg, l, n, max_s, max_u, min_u), inner)
    page = E2Page(dims, max_s, max_t, min_u, max_u, "algebras", f"{l.name}, {m.name}")
    abutment = ext(seq.algebra, seq.restrict(l), m, min(max_s, max_t), max_u, min_u)
    return _finish(page, abutment)


def _stray_coefficients(seq: NormalSequence, comodule: Comodule) -> List[Monomial]:
    """Coefficients of the coaction lying in S_* but outside (S//R)_*."""
    return sorted(
        {
            c
            for entries in comodule.coaction.values()
            for terms in entries
            for c, _ in terms
            if seq.ambient.contains(c) and not seq.quotient.contains(c)
        },
        key=basis_key,
    )


def _dual_pair(
    seq: NormalSequence, over_quotient: Comodule, over_ambient: Comodule
) -> Tuple[FDModule, FDModule]:
    stray = _stray_coefficients(seq, over_quotient)
    if stray:
        raise ValueError(
            f"{over_quotient.name} does not coact through {seq.quotient.name}: "
            f"{format_monomial(stray[0])}"
        )
    q_star = dualize_comodule(
        project_comodule(over_quotient, seq.quotient), algebra=seq.quotient_algebra
    )
    a_star = dualize_comodule(project_comodule(over_ambient, seq.ambient), algebra=seq.algebra)
    return q_star, a_star


def ce_e2_comodule_first(
    seq: NormalSequence,
    m: Comodule,
    n: Comodule,
    max_s: int,
    max_t: int,
    max_u: int,
    min_u: int = 0,
) -> E2Page:
    """Coext^s_{K\\H}(M, Cotor^t_K(k, N)) => Coext_H(M, N), computed as
    Ext^s_{S//R}(Tor^R_t(k, N*), M*) => Ext_S(N*, M*).

    When every coefficient of the coaction on N lies in K\\H the page is also
    computed as Ext^s_{S//R}(Tor^R_t(k, k) (x) N*, M*); ``cross_checked``
    records whether both agree.
    """
    m_star, n_star = _dual_pair(seq, m, n)
    q_alg = seq.quotient_algebra
    bound = max(max_u + m_star.space.max_degree, 0)
    inner = inner_tor(seq, n_star, max_t, bound)
    dims = _assemble(lambda h: ext(q_alg, h, m_star, max_s, max_u, min_u), inner)
    page = E2Page(dims, max_s, max_t, min_u, max_u, "comodule-first", f"{m.name}, {n.name}")
    if not _stray_coefficients(seq, n):
        k_module = trivial_module(seq.algebra)
        n_quotient = dualize_comodule(project_comodule(n, seq.quotient), algebra=q_alg)
        tor_k = inner_tor(seq, k_module, max_t, bound)
        factored = [
            tensor_modules(h, n_quotient, name=f"Tor_{t}(k,k)*{n.name}") if h is not None else None
            for t, h in enumerate(tor_k)
        ]
        other = _assemble(lambda h: ext(q_alg, h, m_star, max_s, max_u, min_u), factored)
        page.cross_checked = other == dims
        if not page.cross_checked:
            logger.error("the trivial-coaction form of the E2 page disagrees")
    abutment = ext(seq.algebra, n_star, seq.restrict(m_star), min(max_s, max_t), max_u, min_u)
    return _finish(page, abutment)


def ce_e2_comodule_second(
    seq: NormalSequence,
    m: Comodule,
    n: Comodule,
    max_s: int,
    max_t: int,
    max_u: int,
    min_u: int = 0,
) -> E2Page:
    """For an H-comodule M and a K\\H-comodule N, the page
    Ext^s_{S//R}(N*, Ext^t_R(k, M*)) => Ext_S(N*, M*) = Coext_H(M, N).

    M must be coherent: its dual is finite, so it has an injective
    resolution by finitely generated free S-modules.
    """
    if not m.complete:
        raise CoherenceError(f"{m.name or 'M'} is a window of an infinite comodule")
    n_star, m_star = _dual_pair(seq, n, m)
    q_alg = seq.quotient_algebra
    inner = inner_ext_by_injectives(seq, m_star, max_t)
    dims = _assemble(lambda e: ext(q_alg, n_star, e, max_s, max_u, min_u), inner)
    page = E2Page(dims, max_s, max_t, min_u, max_u, "comodule-second", f"{m.name}, {n.name}")
    abutment = ext(seq.algebra, seq.restrict(n_star), m_star, min(max_s, max_t), max_u, min_u)
    return _finish(page, abutment)
