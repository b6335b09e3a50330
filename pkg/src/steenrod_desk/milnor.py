"""The dual Steenrod algebra A_* = F2[z1, z2, ...] and the Steenrod algebra A
in the Milnor basis.

A monomial z1^e1 z2^e2 ... zk^ek is keyed by its exponent tuple (e1, ..., ek)
with trailing zeros stripped; the same tuple (r1, ..., rk) names the dual
Milnor basis element Sq(r1, ..., rk). Linear combinations are frozensets of
tuples, added by symmetric difference.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache
from logging import getLogger
from typing import (
    Callable,
    Dict,
    FrozenSet,
    Iterable,
    List,
    Optional,
    Set,
    Tuple,
    TypeVar,
)

from .errors import ParseError, WindowError

logger = getLogger(__name__)

Monomial = Tuple[int, ...]
TensorTerms = FrozenSet[Tuple[Monomial, Monomial]]

UNIT: Monomial = ()

T = TypeVar("T")


def canonical(exponents: Iterable[int]) -> Monomial:
    exps = list(exponents)
    if any(e < 0 for e in exps):
        raise ValueError(f"negative exponent in {exps}")
    while exps and exps[-1] == 0:
        exps.pop()
    return tuple(exps)


def generator(index: int, power: int = 1) -> Monomial:
    """z_index^power; z_0 is the unit."""
    if index == 0 or power == 0:
        return UNIT
    return tuple([0] * (index - 1) + [power])


def generator_degree(index: int) -> int:
    return 2**index - 1


def mono_degree(m: Monomial) -> int:
    return sum(e * generator_degree(i) for i, e in enumerate(m, 1))


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if len(a) < len(b):
        a, b = b, a
    return tuple(x + y for x, y in zip(a, b + (0,) * (len(a) - len(b))))


def frobenius(m: Monomial, e: int = 1) -> Monomial:
    """The 2^e-th power of a monomial."""
    return tuple(x << e for x in m)


def basis_key(m: Monomial) -> Tuple[int, int, Monomial]:
    return (mono_degree(m), len(m), m)


def toggle(terms: Set[T], item: T) -> None:
    if item in terms:
        terms.remove(item)
    else:
        terms.add(item)


@lru_cache(maxsize=None)
def monomials_of_degree(degree: int) -> Tuple[Monomial, ...]:
    """Every monomial of the given degree, sorted by ``basis_key``."""
    if degree < 0:
        return ()
    top = 1
    while generator_degree(top + 1) <= degree:
        top += 1

    found: List[Monomial] = []

    def fill(index: int, remaining: int, exps: List[int]) -> None:
        if index == 0:
            if remaining == 0:
                found.append(canonical(exps))
            return
        step = generator_degree(index)
        for e in range(remaining // step + 1):
            exps[index - 1] = e
            fill(index - 1, remaining - e * step, exps)
        exps[index - 1] = 0

    fill(top, degree, [0] * top)
    return tuple(sorted(found, key=basis_key))


def _poly_mul(x: Iterable[Monomial], y: Iterable[Monomial]) -> FrozenSet[Monomial]:
    y = list(y)
    result: Set[Monomial] = set()
    for a in x:
        for b in y:
            toggle(result, mono_mul(a, b))
    return frozenset(result)


def _tensor_mul(x: TensorTerms, y: TensorTerms) -> TensorTerms:
    y = list(y)
    result: Set[Tuple[Monomial, Monomial]] = set()
    for a1, b1 in x:
        for a2, b2 in y:
            toggle(result, (mono_mul(a1, a2), mono_mul(b1, b2)))
    return frozenset(result)


@lru_cache(maxsize=None)
def _generator_coproduct(n: int) -> TensorTerms:
    return frozenset((generator(n - i, 2**i), generator(i)) for i in range(n + 1))


@lru_cache(maxsize=None)
def coproduct(m: Monomial) -> TensorTerms:
    """psi(z_n) = sum_i z_{n-i}^{2^i} | z_i, extended multiplicatively."""
    result: TensorTerms = frozenset({(UNIT, UNIT)})
    if not m:
        return result
    for i, e in enumerate(m, 1):
        if e % 2:
            result = _tensor_mul(result, _generator_coproduct(i))
    half = canonical(e // 2 for e in m)
    if half:
        squared = frozenset((frobenius(a), frobenius(b)) for a, b in coproduct(half))
        result = _tensor_mul(result, squared)
    return result


@lru_cache(maxsize=None)
def _generator_antipode(n: int) -> FrozenSet[Monomial]:
    if n == 0:
        return frozenset({UNIT})
    result: Set[Monomial] = set()
    for i in range(n):
        for x in _poly_mul([generator(n - i, 2**i)], _generator_antipode(i)):
            toggle(result, x)
    return frozenset(result)


@lru_cache(maxsize=None)
def _antipode_support(m: Monomial) -> FrozenSet[Monomial]:
    result: FrozenSet[Monomial] = frozenset({UNIT})
    if not m:
        return result
    for i, e in enumerate(m, 1):
        if e % 2:
            result = _poly_mul(result, _generator_antipode(i))
    half = canonical(e // 2 for e in m)
    if half:
        result = _poly_mul(result, (frobenius(x) for x in _antipode_support(half)))
    return result


def format_monomial(m: Monomial, symbol: str = "z") -> str:
    if not m:
        return "1"
    factors = []
    for i, e in enumerate(m, 1):
        if e == 1:
            factors.append(f"{symbol}{i}")
        elif e:
            factors.append(f"{symbol}{i}^{e}")
    return " ".join(factors)


def parse_monomial(text: str, symbol: str = "z") -> Monomial:
    text = text.strip()
    if text == "1":
        return UNIT
    pattern = re.compile(rf"^{re.escape(symbol)}(\d+)(?:\^(\d+))?$")
    exps: Dict[int, int] = {}
    for factor in text.split():
        match = pattern.match(factor)
        if match is None or int(match.group(1)) == 0:
            raise ParseError(f"malformed factor {factor!r} in {text!r}")
        index = int(match.group(1))
        exps[index] = exps.get(index, 0) + int(match.group(2) or 1)
    if not exps:
        raise ParseError(f"empty monomial in {text!r}")
    return canonical(exps.get(i, 0) for i in range(1, max(exps) + 1))


def format_sum(terms: Iterable[str]) -> str:
    terms = list(terms)
    return " + ".join(terms) if terms else "0"


def split_sum(text: str) -> List[str]:
    text = text.strip()
    if not text:
        raise ParseError("empty element")
    if text == "0":
        return []
    parts = [part.strip() for part in text.split("+")]
    if any(not part for part in parts):
        raise ParseError(f"dangling '+' in {text!r}")
    return parts


def _xor_all(items: Iterable[T]) -> FrozenSet[T]:
    result: Set[T] = set()
    for item in items:
        toggle(result, item)
    return frozenset(result)


@dataclass(frozen=True)
class DualElement:
    """An element of A_*: a set of monomials."""

    support: FrozenSet[Monomial] = field(default_factory=frozenset)

    @classmethod
    def of(cls, *monomials: Monomial) -> DualElement:
        return cls(_xor_all(canonical(m) for m in monomials))

    @classmethod
    def parse(cls, text: str) -> DualElement:
        return cls(_xor_all(parse_monomial(part) for part in split_sum(text)))

    def __add__(self, other: DualElement) -> DualElement:
        return DualElement(self.support ^ other.support)

    def __mul__(self, other: DualElement) -> DualElement:
        return mul(self, other)

    def __bool__(self) -> bool:
        return bool(self.support)

    def terms(self) -> List[Monomial]:
        return sorted(self.support, key=basis_key)

    def degree(self) -> Optional[int]:
        degrees = {mono_degree(m) for m in self.support}
        if len(degrees) > 1:
            raise ValueError(f"{self} is not homogeneous")
        return degrees.pop() if degrees else None

    def square(self) -> DualElement:
        return DualElement(frozenset(frobenius(m) for m in self.support))

    def __str__(self) -> str:
        return format_sum(format_monomial(m) for m in self.terms())


def mul(a: DualElement, b: DualElement) -> DualElement:
    return DualElement(_poly_mul(a.support, b.support))


def antipode(m: Monomial) -> DualElement:
    return DualElement(_antipode_support(canonical(m)))


def coproduct_element(x: DualElement) -> TensorTerms:
    return _xor_all(pair for m in x.support for pair in coproduct(m))


def format_tensor(
    terms: Iterable[Tuple[Monomial, Monomial]],
    sort_by: str = "right",
    left: Callable[[Monomial], str] = format_monomial,
    right: Callable[[Monomial], str] = format_monomial,
    right_key: Callable[[Monomial], tuple] = basis_key,
) -> str:
    """Render ``a|b`` terms, ordered by the right (or left) factor."""
    if sort_by == "right":
        key = lambda t: (right_key(t[1]), basis_key(t[0]))
    elif sort_by == "left":
        key = lambda t: (basis_key(t[0]), right_key(t[1]))
    else:
        raise ValueError(f"sort_by={sort_by} is not supported")
    return format_sum(f"{left(a)}|{right(b)}" for a, b in sorted(terms, key=key))


def _format_milnor(r: Monomial) -> str:
    return f"Sq({','.join(str(x) for x in r) if r else '0'})"


_SQ_PATTERN = re.compile(r"^Sq\((\d+(?:,\d+)*)\)$")


def _parse_milnor(text: str) -> Monomial:
    match = _SQ_PATTERN.match(text.replace(" ", ""))
    if match is None:
        raise ParseError(f"malformed Milnor basis element {text!r}")
    return canonical(int(x) for x in match.group(1).split(","))


@dataclass(frozen=True)
class SqElement:
    """An element of A: a set of Milnor basis tuples."""

    support: FrozenSet[Monomial] = field(default_factory=frozenset)

    @classmethod
    def of(cls, *tuples: Iterable[int]) -> SqElement:
        return cls(_xor_all(canonical(r) for r in tuples))

    @classmethod
    def parse(cls, text: str) -> SqElement:
        return cls(_xor_all(_parse_milnor(part) for part in split_sum(text)))

    def __add__(self, other: SqElement) -> SqElement:
        return SqElement(self.support ^ other.support)

    def __bool__(self) -> bool:
        return bool(self.support)

    def terms(self) -> List[Monomial]:
        return sorted(self.support, key=basis_key)

    def degree(self) -> Optional[int]:
        degrees = {mono_degree(r) for r in self.support}
        if len(degrees) > 1:
            raise ValueError(f"{self} is not homogeneous")
        return degrees.pop() if degrees else None

    def __str__(self) -> str:
        return format_sum(_format_milnor(r) for r in self.terms())


@lru_cache(maxsize=None)
def product_table(degree: int) -> Dict[Tuple[Monomial, Monomial], FrozenSet[Monomial]]:
    """Sq(R) Sq(S) for all |R| + |S| = degree, read off the coproducts of the
    degree-``degree`` monomials through the pairing <Sq(R), z^R> = 1."""
    table: Dict[Tuple[Monomial, Monomial], Set[Monomial]] = {}
    for t in monomials_of_degree(degree):
        for pair in coproduct(t):
            table.setdefault(pair, set()).add(t)
    logger.debug(f"built product table in degree {degree}: {len(table)} pairs")
    return {pair: frozenset(ts) for pair, ts in table.items()}


def milnor_product(r: Monomial, s: Monomial) -> FrozenSet[Monomial]:
    return product_table(mono_degree(r) + mono_degree(s)).get((r, s), frozenset())


def sq_mul(a: SqElement, b: SqElement, max_degree: int) -> SqElement:
    """Product in A; every term must stay within ``max_degree``."""
    result: Set[Monomial] = set()
    for r in a.support:
        for s in b.support:
            degree = mono_degree(r) + mono_degree(s)
            if degree > max_degree:
                raise WindowError(
                    f"{_format_milnor(r)}*{_format_milnor(s)} has degree {degree} "
                    f"> window {max_degree}"
                )
            for t in milnor_product(r, s):
                toggle(result, t)
    return SqElement(frozenset(result))


def halve(a: SqElement) -> SqElement:
    """Verschiebung: Sq(R) -> Sq(R/2) when every entry of R is even, else 0."""
    return SqElement(
        _xor_all(
            tuple(x // 2 for x in r) for r in a.support if all(x % 2 == 0 for x in r)
        )
    )
