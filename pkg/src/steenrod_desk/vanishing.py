"""Windowed vanishing scenarios.

Each scenario is a chain of finite checks run on a ladder of degree windows:
cotensor shapes, Milnor-Moore freeness, regrading under doubling and socle
scans of finite-window Steenrod-type algebras. A socle scan over generators
of degree at most ``guard`` only sees the classes it can reach in degrees up
to ``max - guard``; larger windows with wider guards give the evidence its
weight.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from logging import getLogger
from typing import Any, Callable, Dict, List, Optional, Set, Tuple

import tqdm
from serdescontainer import BaseContainer

from .algebra import FDHopfAlgebra
from .cobar import CobarComplex, cobar_regrade_check
from .comodule import Comodule, double_comodule, regular_comodule, trivial_comodule
from .config import ScenarioConfig
from .errors import CheckFailure, WindowError
from .graded import DegreeWindow
from .homalg import ExtChart, socle_scan
from .milnor import Monomial, frobenius, generator, mono_degree
from .subquot import (
    E_QUOTIENT,
    FULL,
    MonomialSpan,
    QuotientHopf,
    cotensor,
    exterior_quotient,
    frobenius_profile,
    p_profile,
    verify_freeness,
)

logger = getLogger(__name__)


@dataclass
class CheckResult(BaseContainer):
    name: str
    anchor: str
    passed: bool
    degree: Optional[int] = None
    detail: Optional[str] = None


@dataclass
class WindowReport:
    max_degree: int
    guard: int
    checks: List[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "max": self.max_degree,
            "guard": self.guard,
            "passed": self.passed,
            "checks": [c.to_dict() for c in self.checks],
        }


@dataclass
class ScenarioReport:
    scenario: str
    n: Optional[int]
    windows: List[WindowReport] = field(default_factory=list)
    aborted: Optional[str] = None

    @property
    def passed(self) -> bool:
        return self.aborted is None and all(w.passed for w in self.windows)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "scenario": self.scenario,
            "n": self.n,
            "passed": self.passed,
            "aborted": self.aborted,
            "windows": [w.to_dict() for w in self.windows],
        }

    def table(self) -> List[Dict[str, Any]]:
        """Rows for tabulate, one per check."""
        return [
            {
                "window": f"({w.max_degree},{w.guard})",
                "check": c.name,
                "result": "pass" if c.passed else "FAIL",
                "degree": "" if c.degree is None else c.degree,
                "anchor": c.anchor,
            }
            for w in self.windows
            for c in w.checks
        ]


@dataclass
class VanishingReport(BaseContainer):
    """Zero-support comparison of a cobar chart with its doubled copy."""

    e: int
    passed: bool
    support: List[List[int]] = field(default_factory=list)
    doubled_support: List[List[int]] = field(default_factory=list)


def _support(chart: ExtChart) -> Set[Tuple[int, int]]:
    return {key for key, value in chart.dims.items() if value}


def double_vanishing_check(
    c: MonomialSpan, m: Comodule, n: Comodule, e: int, max_s: int, max_t: int
) -> VanishingReport:
    """Coext_C(M, N) vanishes exactly where Coext over the doubled coalgebra
    of the doubled comodules vanishes, once t is scaled by 2^e."""
    chart = CobarComplex(c, m, n).chart(max_s, max_t)
    doubled = CobarComplex(c.double(e), double_comodule(m, e), double_comodule(n, e)).chart(
        max_s, max_t << e, chart.min_t << e
    )
    support = _support(chart)
    doubled_support = _support(doubled)
    passed = doubled_support == {(s, t << e) for s, t in support}
    if not passed:
        logger.error(f"{c.name}: doubling by 2^{e} moves the zero support")
    return VanishingReport(
        e,
        passed,
        [list(k) for k in sorted(support)],
        [list(k) for k in sorted(doubled_support)],
    )


Check = Tuple[str, str, Callable[[], CheckResult]]


def _primitives(e: int, guard: int) -> List[Monomial]:
    """z_k^(2^e) duals, i.e. the Milnor primitives scaled by 2^e, of degree
    at most ``guard``."""
    gens = []
    k = 1
    while (((1 << k) - 1) << e) <= guard:
        gens.append(frobenius(generator(k), e))
        k += 1
    return gens


def _column_generators(index: int, guard: int) -> List[Monomial]:
    """Sq(0, ..., 0, 2^j) in position ``index`` with degree at most ``guard``."""
    gens = []
    j = 0
    while (((1 << index) - 1) << j) <= guard:
        gens.append(generator(index, 1 << j))
        j += 1
    return gens


def _cotensor_shape(
    m: Comodule, c: MonomialSpan, expected: MonomialSpan, window: DegreeWindow
) -> Tuple[bool, Optional[int], Optional[str]]:
    actual = cotensor(m, c, trivial_comodule(c), window.max_degree).dims
    target = expected.dims(window.max_degree)
    for d, (a, b) in enumerate(zip(actual, target)):
        if a != b:
            return False, d, f"cotensor has dim {a}, {expected.name} has {b}"
    return True, None, None


def _freeness(
    sub: MonomialSpan,
    amb: MonomialSpan,
    window: DegreeWindow,
    quotient: Optional[MonomialSpan] = None,
) -> Tuple[bool, Optional[int], Optional[str]]:
    report = verify_freeness(sub, amb, window.max_degree, quotient=quotient)
    return report.passed, report.degree, report.reason


def _socle(
    span: MonomialSpan, generators: List[Monomial], window: DegreeWindow
) -> Tuple[bool, Optional[int], Optional[str]]:
    if not generators:
        raise WindowError(f"guard {window.guard} admits no socle generators")
    algebra = FDHopfAlgebra(span, max_degree=window.max_degree)
    report = socle_scan(algebra, generators, window)
    for d, dim in enumerate(report.dims):
        if dim:
            return False, d, f"socle of {algebra.name} over {report.generators} has dim {dim}"
    return True, None, None


class VanishingScenario:
    """A scenario id, its window ladder and the checks run on every window.

    Args:
        config (ScenarioConfig): Scenario id, ``n`` and windows.
    """

    def __init__(self, config: ScenarioConfig) -> None:
        self.config = config
        self.scenario = config.scenario
        self.n = config.n
        if self.scenario in ("YN_MSP", "YN_YNEXT") and (self.n is None or self.n < 1):
            raise WindowError(f"{self.scenario} needs a positive n, got {self.n}")
        self.windows = []
        for w in config.windows:
            window = w.window()
            if window.guard < 1:
                raise WindowError(f"{self.scenario}: guard must be positive, got {window.guard}")
            self.windows.append(window)

    @property
    def label(self) -> str:
        return self.scenario if self.n is None else f"{self.scenario}(n={self.n})"

    def checks(self, window: DegreeWindow) -> List[Check]:
        return getattr(self, f"_checks_{self.scenario.lower()}")(window)

    def _checks_h_bp(self, window: DegreeWindow) -> List[Check]:
        a_right = regular_comodule(FULL, window.max_degree, side="right")
        return [
            (
                "cotensor A_* []_E F2",
                "A_* []_{A_*//A_*^(1)} F2 = F2[z_i^2] = H_*(BP)",
                lambda: _cotensor_shape(a_right, E_QUOTIENT, frobenius_profile(1), window),
            ),
            (
                "socle over Q_k",
                "the primitives Q_k have no common annihilator in A: Hom_E(F2, A) = 0",
                lambda: _socle(FULL, _primitives(0, window.guard), window),
            ),
        ]

    def _checks_msp_bp(self, window: DegreeWindow) -> List[Check]:
        e1 = exterior_quotient(1)
        return [
            (
                "A over A^(1)",
                "A_* is free over A_*^(1)",
                lambda: _freeness(frobenius_profile(1), FULL, window),
            ),
            (
                "A^(1) over A^(2)",
                "A_*^(1) is free over A_*^(2)",
                lambda: _freeness(frobenius_profile(2), frobenius_profile(1), window),
            ),
            (
                "socle over doubled Q_k",
                "the doubled primitives have no common annihilator in A_(1)",
                lambda: _socle(frobenius_profile(1), _primitives(1, window.guard), window),
            ),
            (
                "cofree collapse under doubling",
                "Coext^s_C(C, F2) = 0 for s > 0, and doubling keeps the zero support",
                lambda: self._cofree_collapse(e1, window),
            ),
        ]

    def _checks_yn_msp(self, window: DegreeWindow) -> List[Check]:
        n = self.n
        sub = p_profile(n, 2)
        c = QuotientHopf(FULL, sub)
        a_right = regular_comodule(FULL, window.max_degree, side="right")
        return [
            (
                f"cotensor A_* []_(A//P({n})^(2)) F2",
                f"A_* []_{{A_*//P({n})_*^(2)}} F2 = P({n})_*^(2)",
                lambda: _cotensor_shape(a_right, c, sub, window),
            ),
            (
                f"A//P({n})^(2) over A^(2)//P({n})^(2)",
                f"A_*//P({n})_*^(2) is free over A_*^(2)//P({n})_*^(2)",
                lambda: _freeness(
                    QuotientHopf(frobenius_profile(2), sub),
                    c,
                    window,
                    quotient=QuotientHopf(FULL, frobenius_profile(2)),
                ),
            ),
            (
                "socle over quadrupled Q_k",
                "the quadrupled primitives have no common annihilator in A_(2)",
                lambda: _socle(frobenius_profile(2), _primitives(2, window.guard), window),
            ),
        ]

    def _checks_yn_ynext(self, window: DegreeWindow) -> List[Check]:
        n = self.n
        step = QuotientHopf(p_profile(n + 1), p_profile(n))
        return [
            (
                f"regrade P({n + 1})//P({n})",
                f"Coext^(s,4t) over the doubled P({n + 1})_*//P({n})_* "
                "is Coext^(s,t) over the undoubled one",
                lambda: self._regrade(step, window),
            ),
            (
                f"P({n + 1}) over P({n})",
                f"P({n + 1})_* is free over P({n})_*",
                lambda: _freeness(p_profile(n), p_profile(n + 1), window),
            ),
            (
                f"socle over Sq(0,..,2^j) in P({n + 1})",
                f"the duals of z_{n + 1}^(2^j) have no common annihilator in P({n + 1})",
                lambda: _socle(p_profile(n + 1), _column_generators(n + 1, window.guard), window),
            ),
        ]

    @staticmethod
    def _regrade(
        c: MonomialSpan, window: DegreeWindow
    ) -> Tuple[bool, Optional[int], Optional[str]]:
        report = cobar_regrade_check(c, 2, 4, window.max_degree >> 2)
        if report.passed:
            return True, None, None
        s, t, expected, actual = report.mismatches[0]
        return False, t, f"(s,t)=({s},{t}): expected {expected}, got {actual}"

    @staticmethod
    def _cofree_collapse(
        c: MonomialSpan, window: DegreeWindow
    ) -> Tuple[bool, Optional[int], Optional[str]]:
        m = regular_comodule(c)
        max_t = min(window.asserted_max, 8)
        report = double_vanishing_check(c, m, trivial_comodule(c), 1, 3, max_t)
        if not report.passed:
            return False, None, f"zero support moves: {report.support} vs {report.doubled_support}"
        positive = [st for st in report.support if st[0] > 0]
        if positive:
            s, t = positive[0]
            return False, t, f"class in s={s}"
        return True, None, None

    def run_window(self, window: DegreeWindow) -> WindowReport:
        report = WindowReport(window.max_degree, window.guard)
        for name, anchor, run in self.checks(window):
            try:
                passed, degree, detail = run()
            except CheckFailure as e:
                passed, degree, detail = False, e.degree, f"{e}: {e.witness}"
            report.checks.append(CheckResult(name, anchor, passed, degree, detail))
            logger.info(
                f"{self.label} ({window.max_degree},{window.guard}) {name}: "
                f"{'pass' if passed else 'FAIL'}"
            )
            if not passed:
                break
        return report


def run_vanishing_chain(config: ScenarioConfig) -> ScenarioReport:
    """Run every check on every window; the first failing check stops the
    scenario and its anchor is reported."""
    scenario = VanishingScenario(config)
    report = ScenarioReport(scenario.scenario, scenario.n)
    for window in tqdm.tqdm(scenario.windows, desc=scenario.label, leave=False):
        window_report = scenario.run_window(window)
        report.windows.append(window_report)
        if not window_report.passed:
            failed = window_report.checks[-1]
            report.aborted = failed.anchor
            logger.error(
                f"{scenario.label} aborted at ({window.max_degree},{window.guard}) "
                f"in degree {failed.degree}: {failed.anchor}"
            )
            break
    return report
