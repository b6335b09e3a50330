"""Graded comodules over spans of A_*, polynomial comodule algebras given by a
coaction on generators, the H_*(Y_s) family with its splitting, doubling and
the comodule/module duality."""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from logging import getLogger
from typing import Any, Dict, FrozenSet, List, Optional, Sequence, Set, Tuple, Union

import numpy as np
from serdescontainer import BaseContainer

from .algebra import DEFAULT_MAX_DIMENSION, FDHopfAlgebra, FDModule, double_monomial_actions
from .errors import CheckFailure, ParseError, WindowError
from .graded import GradedSpace, WindowLike, dualize, nullspace, rank, window_max
from .milnor import (
    UNIT,
    Monomial,
    _tensor_mul,
    antipode,
    basis_key,
    canonical,
    format_monomial,
    frobenius,
    generator,
    mono_degree,
    parse_monomial,
    split_sum,
    toggle,
)
from .parallel import map_degrees
from .subquot import (
    FULL,
    MonomialSpan,
    QuotientHopf,
    convolve,
    cotensor_differential,
    p_profile,
)

logger = getLogger(__name__)

CoactionTerms = FrozenSet[Tuple[Monomial, int]]


@dataclass(frozen=True, eq=False)
class Comodule:
    """A graded comodule over ``coalgebra`` with monomial coefficients.

    ``coaction[d][i]`` lists the terms of the coaction on the i-th basis
    vector of degree d as (coefficient, target index) pairs, the target lying
    in degree ``d - |coefficient|``. A left coaction reads c | m', a right one
    m' | c. ``complete`` is False when the space is a window of an infinite
    comodule.
    """

    space: GradedSpace
    coaction: Dict[int, Tuple[CoactionTerms, ...]]
    coalgebra: MonomialSpan = FULL
    side: str = "left"
    complete: bool = True
    name: str = ""

    def __post_init__(self) -> None:
        if self.side not in ("left", "right"):
            raise ValueError(f"side={self.side} is not supported")
        for d, terms in self.coaction.items():
            if len(terms) != self.space.dim(d):
                raise ValueError(
                    f"coaction in degree {d} has {len(terms)} entries, "
                    f"space has dim {self.space.dim(d)}"
                )

    def terms(self, degree: int, index: int) -> CoactionTerms:
        return self.coaction[degree][index]

    def format_coaction(self, degree: int, index: int) -> str:
        def key(term: Tuple[Monomial, int]) -> tuple:
            coef, target = term
            return (basis_key(coef), target)

        parts = []
        for coef, target in sorted(self.terms(degree, index), key=key):
            label = self.space.basis(degree - mono_degree(coef))[target]
            coef_text = format_monomial(coef)
            parts.append(f"{coef_text}|{label}" if self.side == "left" else f"{label}|{coef_text}")
        return " + ".join(parts) if parts else "0"


def trivial_comodule(
    coalgebra: MonomialSpan = FULL, side: str = "left", name: str = "F2"
) -> Comodule:
    space = GradedSpace({0: ("1",)}, 0)
    return Comodule(space, {0: (frozenset({(UNIT, 0)}),)}, coalgebra, side, True, name)


def regular_comodule(
    span: MonomialSpan, max_degree: Optional[int] = None, side: str = "left"
) -> Comodule:
    """``span`` coacting on itself through its (projected) coproduct."""
    top = span.max_computable_degree(max_degree)
    coaction = {}
    for d in range(top + 1):
        entries = []
        for m in span.basis(d):
            terms = set()
            for a, b in span.coproduct(m):
                if side == "left":
                    terms.add((a, span.index(mono_degree(b))[b]))
                else:
                    terms.add((b, span.index(mono_degree(a))[a]))
            entries.append(frozenset(terms))
        if entries:
            coaction[d] = tuple(entries)
    complete = span.is_finite and top >= span.top_degree
    return Comodule(span.space(top), coaction, span, side, complete, span.name)


def project_comodule(comodule: Comodule, coalgebra: MonomialSpan) -> Comodule:
    """Induced coaction over a quotient coalgebra: coefficients outside it are
    dropped."""
    coaction = {
        d: tuple(
            frozenset((c, j) for c, j in terms if coalgebra.contains(c)) for terms in entries
        )
        for d, entries in comodule.coaction.items()
    }
    return Comodule(
        comodule.space, coaction, coalgebra, comodule.side, comodule.complete, comodule.name
    )


@dataclass
class AxiomReport(BaseContainer):
    passed: bool
    max_degree: int
    check: Optional[str] = None
    degree: Optional[int] = None
    witness: Optional[str] = None


def _degree_failure(comodule: Comodule, d: int) -> Optional[Tuple[str, str]]:
    coalgebra = comodule.coalgebra
    for i, terms in enumerate(comodule.coaction.get(d, ())):
        label = comodule.space.basis(d)[i]
        if {t for t in terms if t[0] == UNIT} != {(UNIT, i)}:
            return "counit", label
        for c, _ in terms:
            if not coalgebra.contains(c):
                return "coefficients", f"{label}: {format_monomial(c)}"
        lhs: Set[tuple] = set()
        rhs: Set[tuple] = set()
        for c, j in terms:
            for c1, c2 in coalgebra.coproduct(c):
                toggle(lhs, (c1, c2, j))
            for c2, k in comodule.terms(d - mono_degree(c), j):
                if comodule.side == "left":
                    toggle(rhs, (c, c2, k))
                else:
                    toggle(rhs, (c2, c, k))
        if lhs != rhs:
            c1, c2, j = sorted(lhs ^ rhs, key=lambda x: (basis_key(x[0]), basis_key(x[1])))[0]
            return "coassociativity", f"{label}: {format_monomial(c1)}|{format_monomial(c2)}|#{j}"
    return None


def check_comodule_axioms(
    c: Union[Comodule, ComodAlgebraPresentation], window: WindowLike
) -> AxiomReport:
    """Counit and coassociativity in every degree up to the window."""
    max_degree = window_max(window)
    comodule = c.comodule(max_degree) if isinstance(c, ComodAlgebraPresentation) else c
    max_degree = min(max_degree, comodule.space.max_degree)
    failures = map_degrees(
        lambda d: _degree_failure(comodule, d), range(max_degree + 1)
    )
    for d, failure in enumerate(failures):
        if failure is not None:
            check, witness = failure
            logger.error(f"{comodule.name}: {check} fails in degree {d} at {witness}")
            return AxiomReport(False, max_degree, check, d, witness)
    return AxiomReport(True, max_degree)


YMonomial = Tuple[int, ...]

_FACTOR_PATTERN = re.compile(r"^([A-Za-z_]\w*?)(?:\^(\d+))?$")


@dataclass(frozen=True, eq=False)
class ComodAlgebraPresentation:
    """Polynomial algebra on named generators with a coaction on each
    generator, extended multiplicatively.

    Polynomial monomials are exponent tuples over the generator positions.
    When ``conjugate`` is set the stored coefficients are conjugates and the
    antipode is applied to them when the comodule is built.
    """

    generators: Tuple[Tuple[str, int], ...]
    coaction: Dict[str, FrozenSet[Tuple[Monomial, YMonomial]]]
    conjugate: bool = False
    name: str = ""
    # memo of ``coact``; the only state written after construction
    _cache: Dict[YMonomial, FrozenSet[Tuple[Monomial, YMonomial]]] = field(
        default_factory=dict, compare=False, repr=False
    )

    def __post_init__(self) -> None:
        for name, degree in self.generators:
            if degree <= 0:
                raise ValueError(f"generator {name} must have positive degree")
            for coef, target in self.coaction.get(name, ()):
                if mono_degree(coef) + self.degree(target) != degree:
                    raise ValueError(f"coaction on {name} is not homogeneous")

    @property
    def names(self) -> List[str]:
        return [name for name, _ in self.generators]

    def generator_monomial(self, name: str) -> YMonomial:
        return generator(self.names.index(name) + 1)

    def degree(self, y: YMonomial) -> int:
        return sum(e * self.generators[k][1] for k, e in enumerate(y))

    def format_y(self, y: YMonomial) -> str:
        factors = []
        for k, e in enumerate(y):
            if e:
                name = self.generators[k][0]
                factors.append(name if e == 1 else f"{name}^{e}")
        return " ".join(factors) if factors else "1"

    def parse_y(self, text: str) -> YMonomial:
        text = text.strip()
        if text == "1":
            return UNIT
        exps = [0] * len(self.generators)
        for factor in text.split():
            match = _FACTOR_PATTERN.match(factor)
            if match is None or match.group(1) not in self.names:
                raise ParseError(f"unknown factor {factor!r} in {text!r}")
            exps[self.names.index(match.group(1))] += int(match.group(2) or 1)
        return canonical(exps)

    def _format_terms(self, terms: FrozenSet[Tuple[Monomial, YMonomial]]) -> str:
        ordered = sorted(terms, key=lambda t: (basis_key(t[0]), basis_key(t[1])))
        return " + ".join(f"{format_monomial(c)}|{self.format_y(y)}" for c, y in ordered)

    def coaction_text(self, name: str) -> str:
        """The stored coaction on a generator, ordered by the coefficient.
        With ``conjugate`` set these are the conjugate coefficients."""
        return self._format_terms(self.coaction[name])

    def computed_coaction_text(self, name: str) -> str:
        """The coaction the comodule actually carries on a generator."""
        return self._format_terms(self._generator_terms(self.names.index(name)))

    def monomials(self, degree: int) -> List[YMonomial]:
        found: List[YMonomial] = []

        def fill(k: int, remaining: int, exps: List[int]) -> None:
            if k == len(self.generators):
                if remaining == 0:
                    found.append(canonical(exps))
                return
            step = self.generators[k][1]
            for e in range(remaining // step + 1):
                exps.append(e)
                fill(k + 1, remaining - e * step, exps)
                exps.pop()

        fill(0, degree, [])
        return sorted(found, key=lambda y: (len(y), y))

    def _generator_terms(self, k: int) -> FrozenSet[Tuple[Monomial, YMonomial]]:
        name = self.generators[k][0]
        stored = self.coaction.get(name, frozenset({(UNIT, generator(k + 1))}))
        if not self.conjugate:
            return stored
        terms: Set[Tuple[Monomial, YMonomial]] = set()
        for coef, y in stored:
            for c in antipode(coef).support:
                toggle(terms, (c, y))
        return frozenset(terms)

    def coact(self, y: YMonomial) -> FrozenSet[Tuple[Monomial, YMonomial]]:
        """Coaction on a polynomial monomial: odd part times the square of the
        half."""
        if y in self._cache:
            return self._cache[y]
        result = frozenset({(UNIT, UNIT)})
        for k, e in enumerate(y):
            if e % 2:
                result = _tensor_mul(result, self._generator_terms(k))
        half = canonical(e // 2 for e in y)
        if half:
            squared = frozenset((frobenius(c), frobenius(h)) for c, h in self.coact(half))
            result = _tensor_mul(result, squared)
        self._cache[y] = result
        return result

    def comodule(self, window: WindowLike) -> Comodule:
        max_degree = window_max(window)
        bases = {d: self.monomials(d) for d in range(max_degree + 1)}
        index = {d: {y: i for i, y in enumerate(ys)} for d, ys in bases.items()}
        coaction = {}
        for d, ys in bases.items():
            if ys:
                coaction[d] = tuple(
                    frozenset(
                        (c, index[self.degree(h)][h]) for c, h in self.coact(y)
                    )
                    for y in ys
                )
        labels = {d: tuple(self.format_y(y) for y in ys) for d, ys in bases.items() if ys}
        return Comodule(
            GradedSpace(labels, max_degree), coaction, FULL, "left", False, self.name
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            "generators": [{"name": n, "degree": d} for n, d in self.generators],
            "coaction": {n: self.coaction_text(n) for n in self.names if n in self.coaction},
            "conjugate": self.conjugate,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any], name: str = "") -> ComodAlgebraPresentation:
        generators = tuple((g["name"], int(g["degree"])) for g in data["generators"])
        shell = cls(generators, {}, name=name)
        coaction = {}
        for gen_name, text in data.get("coaction", {}).items():
            if gen_name not in shell.names:
                raise ParseError(f"coaction given for unknown generator {gen_name}")
            terms: Set[Tuple[Monomial, YMonomial]] = set()
            for part in split_sum(text):
                if "|" not in part:
                    raise ParseError(f"expected 'a|m' terms, got {part!r}")
                coef_text, y_text = part.split("|", 1)
                toggle(terms, (parse_monomial(coef_text), shell.parse_y(y_text)))
            coaction[gen_name] = frozenset(terms)
        return cls(generators, coaction, bool(data.get("conjugate", False)), name)


def build_Ys(s: int) -> ComodAlgebraPresentation:
    """H_*(Y_s) = F2[y_1, ..., y_(2^s - 1)], |y_k| = 4k, with

        y_(2^r - 1) -> sum_k z_k^4 | y_(2^(r-k) - 1)^(2^k)

    stored as written (y_0 = z_0 = 1); every other generator is primitive.
    """
    if s < 1:
        raise ValueError(f"s must be positive: {s}")
    count = 2**s - 1
    generators = tuple((f"y{k}", 4 * k) for k in range(1, count + 1))
    coaction = {}
    for r in range(1, s + 1):
        terms = set()
        for k in range(r + 1):
            coef = frobenius(generator(k), 2)
            target = generator(2 ** (r - k) - 1, 2**k)
            terms.add((coef, target))
        coaction[f"y{2**r - 1}"] = frozenset(terms)
    for k in range(1, count + 1):
        coaction.setdefault(f"y{k}", frozenset({(UNIT, generator(k))}))
    return ComodAlgebraPresentation(generators, coaction, True, f"H_*(Y_{s})")


def msp_level(window: WindowLike) -> int:
    """Smallest s with H_*(Y_s) -> H_*(MSp) an isomorphism through the
    window, i.e. 2^(s+2) - 4 >= window."""
    max_degree = window_max(window)
    s = 1
    while 2 ** (s + 2) - 4 < max_degree:
        s += 1
    return s


def build_msp(window: WindowLike) -> ComodAlgebraPresentation:
    s = msp_level(window)
    logger.debug(f"H_*(MSp) through degree {window_max(window)} from H_*(Y_{s})")
    p = build_Ys(s)
    return ComodAlgebraPresentation(p.generators, p.coaction, True, "H_*(MSp)")


def _sub_comodule(
    comodule: Comodule, kept: Dict[int, List[int]], closed: bool, name: str
) -> Comodule:
    """Restriction (``closed``) or projection of ``comodule`` to the basis
    vectors in ``kept``."""
    positions = {d: {i: k for k, i in enumerate(idx)} for d, idx in kept.items()}
    coaction = {}
    for d, idx in kept.items():
        if not idx:
            continue
        entries = []
        for i in idx:
            terms = set()
            for c, j in comodule.terms(d, i):
                target = positions.get(d - mono_degree(c), {}).get(j)
                if target is not None:
                    terms.add((c, target))
                elif closed:
                    raise ValueError("not a subcomodule")
            entries.append(frozenset(terms))
        coaction[d] = tuple(entries)
    labels = {
        d: tuple(comodule.space.basis(d)[i] for i in idx) for d, idx in kept.items() if idx
    }
    return Comodule(
        GradedSpace(labels, comodule.space.max_degree),
        coaction,
        comodule.coalgebra,
        comodule.side,
        comodule.complete,
        name,
    )


@dataclass
class IdealQuotient:
    ideal: Comodule
    quotient: Comodule


def ideal_and_quotient(
    p: ComodAlgebraPresentation,
    gens: Sequence[str],
    window: WindowLike,
    coalgebra: Optional[MonomialSpan] = None,
) -> IdealQuotient:
    """The ideal generated by ``gens`` and the quotient comodule algebra.

    The ideal must be a subcomodule for the coaction induced over
    ``coalgebra`` (A_* by default); CheckFailure names the offending term.
    """
    unknown = set(gens) - set(p.names)
    if unknown:
        raise ValueError(f"unknown generators {sorted(unknown)}")
    max_degree = window_max(window)
    comodule = p.comodule(max_degree)
    if coalgebra is not None:
        comodule = project_comodule(comodule, coalgebra)
    positions = [p.names.index(g) for g in gens]
    in_ideal = {
        d: [any(k < len(y) and y[k] for k in positions) for y in p.monomials(d)]
        for d in range(max_degree + 1)
    }
    for d in range(max_degree + 1):
        for i, member in enumerate(in_ideal[d]):
            if not member:
                continue
            for c, j in sorted(comodule.terms(d, i), key=lambda t: basis_key(t[0])):
                if not in_ideal[d - mono_degree(c)][j]:
                    label = comodule.space.basis(d)[i]
                    target = comodule.space.basis(d - mono_degree(c))[j]
                    witness = f"{label} -> {format_monomial(c)}|{target}"
                    logger.error(f"ideal {tuple(gens)} is not a subcomodule: {witness}")
                    raise CheckFailure(
                        f"ideal {tuple(gens)} is not a subcomodule over "
                        f"{comodule.coalgebra.name}",
                        d,
                        witness,
                    )
    ideal_idx = {d: [i for i, m in enumerate(flags) if m] for d, flags in in_ideal.items()}
    rest_idx = {d: [i for i, m in enumerate(flags) if not m] for d, flags in in_ideal.items()}
    ideal = _sub_comodule(comodule, ideal_idx, True, f"({', '.join(gens)})")
    quotient = _sub_comodule(comodule, rest_idx, False, f"{p.name}/({', '.join(gens)})")
    return IdealQuotient(ideal, quotient)


def j_generators(s: int) -> List[str]:
    """Names of the generators of J_s = (y_1, y_3, ..., y_(2^s - 1))."""
    return [f"y{2**r - 1}" for r in range(1, s + 1)]


@dataclass
class SplittingReport(BaseContainer):
    s: int
    max_degree: int
    passed: bool
    dims_h: List[int]
    dims_sub: List[int]
    dims_quotient: List[int]
    degree: Optional[int] = None
    reason: Optional[str] = None


def splitting_check(s: int, window: WindowLike) -> SplittingReport:
    """H_*(Y_s) -> A_* (x) H_*(Y_s) -> A_* []_C H_*(Y_s)/J_s, C = A_*//P(s)^(2)_*,
    must be a degree-wise isomorphism."""
    max_degree = window_max(window)
    p = build_Ys(s)
    sub = p_profile(s, 2)
    c = QuotientHopf(FULL, sub)
    h = p.comodule(max_degree)
    quotient = ideal_and_quotient(p, j_generators(s), max_degree, coalgebra=c).quotient
    dims_h, dims_sub, dims_q = h.space.dims, sub.dims(max_degree), quotient.space.dims
    report = SplittingReport(s, max_degree, True, dims_h, dims_sub, dims_q)

    def fail(degree: int, reason: str) -> SplittingReport:
        logger.error(f"splitting of H_*(Y_{s}) fails in degree {degree}: {reason}")
        report.passed, report.degree, report.reason = False, degree, reason
        return report

    for d, entries in quotient.coaction.items():
        for i, terms in enumerate(entries):
            if terms != frozenset({(UNIT, i)}):
                return fail(d, f"{quotient.space.basis(d)[i]} is not C-primitive")
    series = convolve(dims_sub, dims_q, max_degree)
    if series != dims_h:
        degree = next(d for d in range(max_degree + 1) if series[d] != dims_h[d])
        return fail(degree, f"dims {dims_h[degree]} != {series[degree]} from P(s)^(2) (x) H/J")

    q_monomials = {
        d: {y: i for i, y in enumerate(ys)}
        for d, ys in ((d, [p.parse_y(label) for label in quotient.space.basis(d)]) for d in range(max_degree + 1))
    }
    h_monomials = {d: p.monomials(d) for d in range(max_degree + 1)}
    a_star = regular_comodule(FULL, max_degree, side="right")
    a_over_c = project_comodule(a_star, c)
    for d in range(max_degree + 1):
        pairs, delta = cotensor_differential(a_over_c, c, quotient, d)
        column_of = {pair: k for k, pair in enumerate(pairs)}
        image = np.zeros((len(pairs), h.space.dim(d)), dtype=np.uint8)
        for i in range(h.space.dim(d)):
            for coef, j in h.terms(d, i):
                e = d - mono_degree(coef)
                y = h_monomials[e][j]
                if y not in q_monomials[e]:
                    continue
                a = FULL.index(mono_degree(coef))[coef]
                image[column_of[(mono_degree(coef), a, e, q_monomials[e][y])], i] ^= 1
        if rank(image) != h.space.dim(d):
            return fail(d, "the composite is not injective")
        if delta.size and (delta @ image % 2).any():
            return fail(d, "the image leaves the cotensor product")
        if len(nullspace(delta, ncols=len(pairs))) != h.space.dim(d):
            return fail(d, "the cotensor product has the wrong dimension")
    logger.info(f"splitting of H_*(Y_{s}) holds through degree {max_degree}")
    return report


def double_comodule(m: Comodule, e: int = 1) -> Comodule:
    """Degrees times 2^e, coefficients raised to the 2^e-th power, over the
    doubled coalgebra."""
    if e == 0:
        return m
    labels = {d << e: names for d, names in m.space.labels.items()}
    coaction = {
        d << e: tuple(frozenset((frobenius(c, e), j) for c, j in terms) for terms in entries)
        for d, entries in m.coaction.items()
    }
    space = GradedSpace(labels, m.space.max_degree << e)
    name = f"{m.name}_({e})" if m.name else ""
    return Comodule(space, coaction, m.coalgebra.double(e), m.side, m.complete, name)


def double_module(
    m: FDModule, e: int = 1, algebra: Optional[FDHopfAlgebra] = None
) -> FDModule:
    """Regrade a module over H to one over the doubled algebra: Sq(2^e R) acts
    as Sq(R) did. Pass ``algebra`` to share one doubled algebra between
    modules."""
    if e == 0:
        return m
    labels = {d << e: names for d, names in m.space.labels.items()}
    space = GradedSpace(labels, m.space.max_degree << e)
    name = f"{m.name}_({e})" if m.name else ""
    return FDModule(
        algebra or m.algebra.double(e),
        space,
        double_monomial_actions(m.actions, e),
        m.shift << e,
        name,
    )


def dualize_comodule(
    m: Comodule,
    window: Optional[WindowLike] = None,
    algebra: Optional[FDHopfAlgebra] = None,
    max_dimension: int = DEFAULT_MAX_DIMENSION,
) -> FDModule:
    """Degree-wise dual of a left comodule as a module over the dual algebra.

    Sq(R) sends x_j* in degree e to the sum of the x_i* in degree e + |R|
    whose coaction contains z^R | x_j; degrees are kept, so the action raises
    degree. Coefficients outside ``algebra`` (when given) are dropped.
    """
    if m.side != "left":
        raise ValueError("only left comodules are dualized")
    max_degree = m.space.max_degree if window is None else window_max(window)
    if max_degree > m.space.max_degree:
        raise WindowError(
            f"window {max_degree} exceeds the populated range {m.space.max_degree}"
        )
    if algebra is None:
        algebra = FDHopfAlgebra(m.coalgebra, max_degree, max_dimension=max_dimension)
    blocks: Dict[Tuple[Monomial, int], np.ndarray] = {}
    for d in range(max_degree + 1):
        for i, terms in enumerate(m.coaction.get(d, ())):
            for c, j in terms:
                if c == UNIT or not algebra.contains(c):
                    continue
                source = d - mono_degree(c)
                key = (c, source)
                if key not in blocks:
                    blocks[key] = np.zeros((m.space.dim(d), m.space.dim(source)), dtype=np.uint8)
                blocks[key][i, j] ^= 1
    actions = {key: matrix for key, matrix in blocks.items() if matrix.any()}
    space = dualize(m.space, max_degree)
    return FDModule(algebra, space, actions, 0, f"{m.name}*" if m.name else "")


def dualize_module(m: FDModule) -> Comodule:
    """Inverse of ``dualize_comodule``: a left comodule over the span of the
    acting algebra."""
    top = m.space.max_degree
    entries: Dict[int, List[Set[Tuple[Monomial, int]]]] = {
        d: [{(UNIT, i)} for i in range(m.dim(d))] for d in range(top + 1)
    }
    for (t, source), matrix in m.actions.items():
        target = source + mono_degree(t)
        for i, j in zip(*np.nonzero(matrix)):
            entries[target][int(i)].add((t, int(j)))
    coaction = {
        d: tuple(frozenset(terms) for terms in rows) for d, rows in entries.items() if rows
    }
    return Comodule(
        dualize(m.space),
        coaction,
        m.algebra.span,
        "left",
        m.algebra.complete,
        m.name[:-1] if m.name.endswith("*") else f"{m.name}*",
    )
