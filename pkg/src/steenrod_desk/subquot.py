"""SubHopf algebras of A_* cut out by profiles, their quotient Hopf algebras,
finite staircase quotients, cotensor products and Milnor-Moore freeness
checks.

Every span is a set of monomials described by exponent rules: the exponent of
z_i must be a multiple of 2^lower(i) and smaller than 2^upper(i). A cap of
``None`` stands for infinity, so ``lower(i) = None`` forces the exponent to
zero and ``upper(i) = None`` leaves it unbounded.
"""
from __future__ import annotations

import re
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from functools import lru_cache
from logging import getLogger
from typing import (
    TYPE_CHECKING,
    Any,
    Dict,
    FrozenSet,
    Iterator,
    List,
    Optional,
    Sequence,
    Tuple,
    Union,
)

import numpy as np
from serdescontainer import BaseContainer

from .errors import NotHopfError, ParseError, WindowError
from .graded import GradedSpace, WindowLike, combination_label, nullspace, rank, window_max
from .milnor import (
    UNIT,
    Monomial,
    TensorTerms,
    coproduct,
    format_monomial,
    frobenius,
    generator_degree,
    mono_degree,
    mono_mul,
    monomials_of_degree,
)

if TYPE_CHECKING:
    from .comodule import Comodule

logger = getLogger(__name__)

Cap = Optional[int]


def _cap_to_json(cap: Cap) -> Union[int, str]:
    return "inf" if cap is None else cap


def _cap_from_json(value: Union[int, str, None]) -> Cap:
    if value is None or value == "inf":
        return None
    if isinstance(value, str) and value.isdigit():
        value = int(value)
    if not isinstance(value, int) or value < 0:
        raise ParseError(f"invalid profile cap {value!r}")
    return value


def convolve(a: Sequence[int], b: Sequence[int], max_degree: int) -> List[int]:
    """Coefficients of the product of two Poincare series up to
    ``max_degree``."""
    return [
        sum(a[i] * b[d - i] for i in range(d + 1) if i < len(a) and d - i < len(b))
        for d in range(max_degree + 1)
    ]


class MonomialSpan(ABC):
    """A graded set of monomials of A_* used as a (sub or quotient)
    coalgebra with monomial basis."""

    @abstractmethod
    def contains(self, m: Monomial) -> bool:
        pass

    @property
    @abstractmethod
    def is_finite(self) -> bool:
        pass

    @property
    @abstractmethod
    def top_degree(self) -> Optional[int]:
        """Top degree of a finite span, None otherwise."""

    @abstractmethod
    def double(self, e: int = 1) -> MonomialSpan:
        """Image under m -> m^(2^e)."""

    @property
    def name(self) -> str:
        return repr(self)

    def basis(self, degree: int) -> Tuple[Monomial, ...]:
        return _span_basis(self, degree)

    def dims(self, max_degree: int) -> List[int]:
        return [len(self.basis(d)) for d in range(max_degree + 1)]

    def monomials(self, max_degree: int) -> Iterator[Monomial]:
        for d in range(max_degree + 1):
            yield from self.basis(d)

    def index(self, degree: int) -> Dict[Monomial, int]:
        return _span_index(self, degree)

    def space(self, max_degree: int) -> GradedSpace:
        labels = {
            d: tuple(format_monomial(m) for m in self.basis(d))
            for d in range(max_degree + 1)
            if self.basis(d)
        }
        return GradedSpace(labels, max_degree)

    def coproduct(self, m: Monomial) -> TensorTerms:
        """psi(m) with every term outside ``self`` (in either factor) dropped."""
        return _projected_coproduct(self, m)

    def max_computable_degree(self, max_degree: Optional[int] = None) -> int:
        if max_degree is not None:
            return max_degree
        if not self.is_finite:
            raise WindowError(f"{self.name} is infinite: a max degree is required")
        return self.top_degree

    def __str__(self) -> str:
        return self.name


@lru_cache(maxsize=None)
def _span_basis(span: MonomialSpan, degree: int) -> Tuple[Monomial, ...]:
    return tuple(m for m in monomials_of_degree(degree) if span.contains(m))


@lru_cache(maxsize=None)
def _span_index(span: MonomialSpan, degree: int) -> Dict[Monomial, int]:
    return {m: i for i, m in enumerate(span.basis(degree))}


@lru_cache(maxsize=None)
def _projected_coproduct(span: MonomialSpan, m: Monomial) -> TensorTerms:
    return frozenset(
        (a, b) for a, b in coproduct(m) if span.contains(a) and span.contains(b)
    )


class CappedSpan(MonomialSpan):
    """Span given by the ``lower``/``upper`` exponent caps."""

    @abstractmethod
    def lower(self, i: int) -> Cap:
        pass

    @abstractmethod
    def upper(self, i: int) -> Cap:
        pass

    @property
    @abstractmethod
    def explicit_length(self) -> int:
        """Beyond this index the caps are those of index ``explicit_length + 1``."""

    def contains(self, m: Monomial) -> bool:
        for i, e in enumerate(m, 1):
            if not e:
                continue
            lo = self.lower(i)
            if lo is None or e % (1 << lo):
                return False
            up = self.upper(i)
            if up is not None and e >= (1 << up):
                return False
        return True

    def _allows(self, i: int) -> bool:
        lo, up = self.lower(i), self.upper(i)
        return lo is not None and (up is None or up > lo)

    @property
    def is_finite(self) -> bool:
        if self._allows(self.explicit_length + 1):
            return False
        return all(
            self.upper(i) is not None or self.lower(i) is None
            for i in range(1, self.explicit_length + 1)
        )

    @property
    def top_degree(self) -> Optional[int]:
        if not self.is_finite:
            return None
        top = 0
        for i in range(1, self.explicit_length + 1):
            if self._allows(i):
                top += ((1 << self.upper(i)) - (1 << self.lower(i))) * generator_degree(i)
        return top

    def numerator(self) -> Profile:
        caps = tuple(self.lower(i) for i in range(1, self.explicit_length + 1))
        return Profile(caps, self.lower(self.explicit_length + 1))

    def double(self, e: int = 1) -> CappedSpan:
        return self if e == 0 else DoubledSpan(self, e)


@dataclass(frozen=True)
class Profile(CappedSpan):
    """B_h: monomials whose z_i-exponent is a multiple of 2^h(i).

    Attributes:
        caps (tuple of int or None): h(1), h(2), ... up to the last index that
            differs from ``tail``; None means infinity.
        tail (int or None): h(i) for every later index.
        label (str): Display name, e.g. "P(2)^(1)".
    """

    caps: Tuple[Cap, ...] = ()
    tail: Cap = 0
    label: str = field(default="", compare=False)

    def __post_init__(self) -> None:
        caps = list(self.caps)
        for cap in caps + [self.tail]:
            if cap is not None and cap < 0:
                raise ValueError(f"negative profile cap in {self.caps}")
        while caps and caps[-1] == self.tail:
            caps.pop()
        object.__setattr__(self, "caps", tuple(caps))

    def lower(self, i: int) -> Cap:
        return self.caps[i - 1] if i <= len(self.caps) else self.tail

    def upper(self, i: int) -> Cap:
        return None

    @property
    def explicit_length(self) -> int:
        return len(self.caps)

    @property
    def name(self) -> str:
        if self.label:
            return self.label
        caps = ",".join(str(_cap_to_json(c)) for c in self.caps)
        return f"Profile([{caps}], tail={_cap_to_json(self.tail)})"

    def to_dict(self) -> Dict[str, Any]:
        return {
            "caps": [_cap_to_json(c) for c in self.caps],
            "tail": _cap_to_json(self.tail),
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any], label: str = "") -> Profile:
        caps = tuple(_cap_from_json(c) for c in data.get("caps", []))
        return cls(caps, _cap_from_json(data.get("tail", "inf")), label=label)


@dataclass(frozen=True)
class QuotientHopf(CappedSpan):
    """numerator // denominator: numerator monomials with z_i-exponent below
    2^h_den(i)."""

    numerator_profile: Profile
    denominator: Profile
    label: str = field(default="", compare=False)

    def lower(self, i: int) -> Cap:
        return self.numerator_profile.lower(i)

    def upper(self, i: int) -> Cap:
        return self.denominator.lower(i)

    @property
    def explicit_length(self) -> int:
        return max(
            self.numerator_profile.explicit_length, self.denominator.explicit_length
        )

    def numerator(self) -> Profile:
        return self.numerator_profile

    @property
    def name(self) -> str:
        return self.label or f"{self.numerator_profile.name}//{self.denominator.name}"


@dataclass(frozen=True)
class StaircaseQuotient(CappedSpan):
    """P(n)^(s)_* / (z1^(2^(s+t)), z2^(2^(s+t-1)), ..., zt^(2^(s+1)),
    z(t+1)^(2^s), ..., zn^(2^s))."""

    n: int
    s: int
    t: int
    label: str = field(default="", compare=False)

    def __post_init__(self) -> None:
        if self.n < 0 or self.s < 0 or self.t < 0:
            raise ValueError(f"invalid staircase parameters {(self.n, self.s, self.t)}")

    def lower(self, i: int) -> Cap:
        return self.s if i <= self.n else None

    def upper(self, i: int) -> Cap:
        return max(self.s, self.s + self.t + 1 - i) if i <= self.n else 0

    @property
    def explicit_length(self) -> int:
        return self.n

    @property
    def name(self) -> str:
        return self.label or f"P({self.n})^({self.s})[t={self.t}]"

    @property
    def total_dimension(self) -> int:
        """Product of the exponent counts 2^(cap - s) over the generators."""
        total = 1
        for i in range(1, self.n + 1):
            total *= 1 << (self.upper(i) - self.s)
        return total


@dataclass(frozen=True)
class DoubledSpan(CappedSpan):
    """Image of ``base`` under m -> m^(2^e)."""

    base: CappedSpan
    e: int = 1

    def lower(self, i: int) -> Cap:
        lo = self.base.lower(i)
        return None if lo is None else lo + self.e

    def upper(self, i: int) -> Cap:
        up = self.base.upper(i)
        return None if up is None else up + self.e

    @property
    def explicit_length(self) -> int:
        return self.base.explicit_length

    def double(self, e: int = 1) -> CappedSpan:
        return self if e == 0 else DoubledSpan(self.base, self.e + e)

    @property
    def name(self) -> str:
        return f"{self.base.name}_({self.e})"


@dataclass(frozen=True)
class FiniteSpan(MonomialSpan):
    """An explicit finite set of monomials."""

    members: FrozenSet[Monomial]
    label: str = field(default="", compare=False)

    def contains(self, m: Monomial) -> bool:
        return m in self.members

    @property
    def is_finite(self) -> bool:
        return True

    @property
    def top_degree(self) -> Optional[int]:
        return max((mono_degree(m) for m in self.members), default=0)

    @property
    def name(self) -> str:
        return self.label or f"span({len(self.members)} monomials)"

    def double(self, e: int = 1) -> FiniteSpan:
        members = frozenset(frobenius(m, e) for m in self.members)
        return FiniteSpan(members, f"{self.name}_({e})" if e else self.label)


FULL = Profile((), 0, label="A")
TRIVIAL = Profile((), None, label="F2")


def p_profile(n: int, s: int = 0) -> Profile:
    label = f"P({n})" if s == 0 else f"P({n})^({s})"
    return Profile((s,) * n, None, label=label)


def frobenius_profile(s: int) -> Profile:
    return Profile((), s, label="A" if s == 0 else f"A^({s})")


def steenrod_quotient(n: int) -> StaircaseQuotient:
    """The dual of A(n): exponents of z_i below 2^(n+2-i)."""
    return StaircaseQuotient(n + 1, 0, n + 1, label=f"A({n})")


def exterior_quotient(n: int) -> QuotientHopf:
    """The dual of E(n) = E[Q0, ..., Qn]."""
    return QuotientHopf(p_profile(n + 1), p_profile(n + 1, 1), label=f"E({n})")


E_QUOTIENT = QuotientHopf(FULL, frobenius_profile(1), label="E")

_PRESETS = [
    (re.compile(r"^A$"), lambda: FULL),
    (re.compile(r"^F2$"), lambda: TRIVIAL),
    (re.compile(r"^E$"), lambda: E_QUOTIENT),
    (re.compile(r"^A\^\((\d+)\)$"), lambda s: frobenius_profile(int(s))),
    (re.compile(r"^P\((\d+)\)$"), lambda n: p_profile(int(n))),
    (re.compile(r"^P\((\d+)\)\^\((\d+)\)$"), lambda n, s: p_profile(int(n), int(s))),
    (re.compile(r"^A\((\d+)\)$"), lambda n: steenrod_quotient(int(n))),
    (re.compile(r"^E\((\d+)\)$"), lambda n: exterior_quotient(int(n))),
    (
        re.compile(r"^S\((\d+),(\d+),(\d+)\)$"),
        lambda n, s, t: StaircaseQuotient(int(n), int(s), int(t)),
    ),
]


def preset(text: str) -> MonomialSpan:
    """Named spans: A, F2, E, A^(s), P(n), P(n)^(s), A(n), E(n), S(n,s,t) and
    X//Y for profiles X, Y."""
    text = text.replace(" ", "")
    if "//" in text:
        num_text, den_text = text.split("//", 1)
        num, den = preset(num_text), preset(den_text)
        if not isinstance(num, Profile) or not isinstance(den, Profile):
            raise ParseError(f"{text!r}: both sides of // must be profiles")
        return QuotientHopf(num, den, label=text)
    for pattern, build in _PRESETS:
        match = pattern.match(text)
        if match:
            return build(*match.groups())
    raise ParseError(f"unknown span preset {text!r}")


@dataclass
class ClosureReport(BaseContainer):
    passed: bool
    max_degree: int
    degree: Optional[int] = None
    witness: Optional[str] = None


def check_subhopf(
    span: MonomialSpan, window: WindowLike, ambient: Optional[MonomialSpan] = None
) -> ClosureReport:
    """psi(span) within span (x) span, with psi projected to ``ambient`` when
    given."""
    max_degree = window_max(window)
    for d in range(max_degree + 1):
        for m in span.basis(d):
            terms = coproduct(m) if ambient is None else ambient.coproduct(m)
            for a, b in sorted(terms):
                if not (span.contains(a) and span.contains(b)):
                    witness = f"{format_monomial(m)} -> {format_monomial(a)}|{format_monomial(b)}"
                    logger.debug(f"{span.name} not closed: {witness}")
                    return ClosureReport(False, max_degree, d, witness)
    return ClosureReport(True, max_degree)


def is_subhopf(p: MonomialSpan, window: WindowLike) -> bool:
    return check_subhopf(p, window).passed


def check_hopf_quotient(
    span: MonomialSpan, window: WindowLike, ambient: Optional[MonomialSpan] = None
) -> ClosureReport:
    """The monomials of ``ambient`` outside ``span`` must span a coideal: no
    term of their coproduct has both factors in ``span``."""
    max_degree = window_max(window)
    if ambient is None:
        if not isinstance(span, CappedSpan):
            raise ValueError(f"{span.name}: an ambient span is required")
        ambient = span.numerator()
        numerator_report = check_subhopf(ambient, max_degree)
        if not numerator_report.passed:
            return numerator_report
    for d in range(max_degree + 1):
        for m in span.basis(d):
            if not ambient.contains(m):
                return ClosureReport(False, max_degree, d, f"{format_monomial(m)} not in {ambient.name}")
        for m in ambient.basis(d):
            if span.contains(m):
                continue
            for a, b in sorted(ambient.coproduct(m)):
                if span.contains(a) and span.contains(b):
                    witness = f"{format_monomial(m)} -> {format_monomial(a)}|{format_monomial(b)}"
                    return ClosureReport(False, max_degree, d, witness)
    return ClosureReport(True, max_degree)


def subalgebra_basis(p: MonomialSpan, window: WindowLike) -> GradedSpace:
    return p.space(window_max(window))


def quotient_basis(q: QuotientHopf, window: WindowLike) -> GradedSpace:
    max_degree = window_max(window)
    report = check_subhopf(q.denominator, max_degree)
    if not report.passed:
        raise NotHopfError(
            f"denominator {q.denominator.name} is not a subHopf algebra",
            report.degree,
            report.witness,
        )
    return q.space(max_degree)


def _check_coaction_over(comodule: Comodule, c: MonomialSpan, max_degree: int) -> None:
    for m in c.monomials(max_degree):
        if not comodule.coalgebra.contains(m):
            raise NotHopfError(
                f"coaction over {comodule.coalgebra.name} does not induce one over "
                f"{c.name}",
                mono_degree(m),
                format_monomial(m),
            )


def cotensor_differential(
    m: Comodule, c: MonomialSpan, n: Comodule, degree: int
) -> Tuple[List[Tuple[int, int, int, int]], np.ndarray]:
    """Matrix of rho (x) 1 + 1 (x) lambda on (M (x) N)_degree, with only
    positive-degree coalgebra factors kept.

    Returns:
        (pairs, matrix): ``pairs[k] = (i, a, j, b)`` names the source basis
            vector m_(i,a) (x) n_(j,b); columns of ``matrix`` follow ``pairs``.
    """
    if m.side != "right" or n.side != "left":
        raise ValueError("cotensor needs a right comodule and a left comodule")
    pairs = [
        (i, a, degree - i, b)
        for i in range(degree + 1)
        for a in range(m.space.dim(i))
        for b in range(n.space.dim(degree - i))
    ]
    targets: Dict[Tuple[int, int, Monomial, int, int], int] = {}
    entries: List[Tuple[int, int]] = []

    def hit(key: Tuple[int, int, Monomial, int, int], column: int) -> None:
        row = targets.setdefault(key, len(targets))
        entries.append((row, column))

    for column, (i, a, j, b) in enumerate(pairs):
        for coef, target in m.terms(i, a):
            if coef != UNIT and c.contains(coef):
                hit((i - mono_degree(coef), target, coef, j, b), column)
        for coef, target in n.terms(j, b):
            if coef != UNIT and c.contains(coef):
                hit((i, a, coef, j - mono_degree(coef), target), column)
    matrix = np.zeros((len(targets), len(pairs)), dtype=np.uint8)
    for row, column in entries:
        matrix[row, column] ^= 1
    return pairs, matrix


def cotensor_kernels(
    m: Comodule, c: MonomialSpan, n: Comodule, window: WindowLike
) -> Dict[int, Tuple[List[Tuple[int, int, int, int]], np.ndarray]]:
    max_degree = window_max(window)
    _check_coaction_over(m, c, max_degree)
    _check_coaction_over(n, c, max_degree)
    kernels = {}
    for d in range(max_degree + 1):
        pairs, matrix = cotensor_differential(m, c, n, d)
        kernels[d] = (pairs, nullspace(matrix, ncols=len(pairs)))
    return kernels


def cotensor(
    m: Comodule, c: MonomialSpan, n: Comodule, window: WindowLike
) -> GradedSpace:
    """M []_C N as the kernel of rho (x) 1 - 1 (x) lambda, degree by degree."""
    max_degree = window_max(window)
    labels = {}
    for d, (pairs, rows) in cotensor_kernels(m, c, n, max_degree).items():
        names = [
            f"{m.space.basis(i)[a]}|{n.space.basis(j)[b]}" for i, a, j, b in pairs
        ]
        if len(rows):
            labels[d] = tuple(combination_label(names, row) for row in rows)
    logger.debug(f"cotensor over {c.name}: dims {[len(labels.get(d, ())) for d in range(max_degree + 1)]}")
    return GradedSpace(labels, max_degree)


@dataclass
class FreenessReport(BaseContainer):
    """Outcome of a Milnor-Moore freeness check of ``ambient`` over ``sub``."""

    sub: str
    ambient: str
    quotient: str
    max_degree: int
    passed: bool
    dims_ambient: List[int]
    dims_sub: List[int]
    dims_quotient: List[int]
    degree: Optional[int] = None
    reason: Optional[str] = None


def verify_freeness(
    sub: MonomialSpan,
    amb: MonomialSpan,
    window: WindowLike,
    quotient: Optional[MonomialSpan] = None,
) -> FreenessReport:
    """Check dims(amb) = dims(sub) * dims(amb//sub) and that products of sub
    monomials with quotient monomials form a basis of amb."""
    max_degree = window_max(window)
    if quotient is None:
        if not isinstance(sub, Profile) or not isinstance(amb, Profile):
            raise ValueError("a quotient span is required unless both spans are profiles")
        quotient = QuotientHopf(amb, sub)
    for span in (sub, amb):
        if isinstance(span, Profile):
            closure = check_subhopf(span, max_degree)
            if not closure.passed:
                raise NotHopfError(
                    f"{span.name} is not a subHopf algebra", closure.degree, closure.witness
                )
    dims_amb, dims_sub, dims_q = (
        amb.dims(max_degree),
        sub.dims(max_degree),
        quotient.dims(max_degree),
    )
    report = FreenessReport(
        sub.name, amb.name, quotient.name, max_degree, True, dims_amb, dims_sub, dims_q
    )

    def fail(degree: int, reason: str) -> FreenessReport:
        logger.info(f"{amb.name} over {sub.name} fails in degree {degree}: {reason}")
        report.passed, report.degree, report.reason = False, degree, reason
        return report

    for m in sub.monomials(max_degree):
        if not amb.contains(m):
            return fail(mono_degree(m), f"{format_monomial(m)} is not in {amb.name}")
    series = convolve(dims_sub, dims_q, max_degree)
    for d in range(max_degree + 1):
        if series[d] != dims_amb[d]:
            return fail(d, f"convolution gives {series[d]}, ambient has {dims_amb[d]}")
        index = amb.index(d)
        rows = []
        for i in range(d + 1):
            for a in sub.basis(i):
                for q in quotient.basis(d - i):
                    row = np.zeros(len(index), dtype=np.uint8)
                    product = mono_mul(a, q)
                    if product in index:
                        row[index[product]] = 1
                    rows.append(row)
        if rows and rank(np.array(rows)) != dims_amb[d]:
            return fail(d, "products of sub and quotient bases are not a basis")
    return report
