import argparse
import json
import logging
import sys
from logging import getLogger
from pathlib import Path
from typing import List, Optional

from tabulate import tabulate

from .algebra import FDHopfAlgebra, FDModule, regular_module, trivial_module
from .chart import EMPTY, FORMATS, emit_chart
from .cobar import balance_check, cobar_coext
from .comodule import Comodule, build_Ys, regular_comodule, splitting_check, trivial_comodule
from .config import PresentationConfig, ProfileConfig, ScenarioConfig
from .errors import CheckFailure, SteenrodDeskError
from .graded import DegreeWindow
from .homalg import ExtChart, build_An, coext, ext, minimal_resolution, poincare_check
from .milnor import (
    DualElement,
    SqElement,
    _format_milnor,
    antipode,
    coproduct_element,
    format_monomial,
    format_tensor,
    sq_mul,
)
from .spectral import (
    CONSTRUCTIONS,
    NormalSequence,
    ce_e2_algebras,
    ce_e2_comodule_first,
    ce_e2_comodule_second,
)
from .subquot import FULL, MonomialSpan, QuotientHopf, cotensor, preset
from .vanishing import run_vanishing_chain

logging.basicConfig(
    level=logging.INFO, format="%(asctime)s - %(levelname)s - %(name)s: %(message)s"
)
logger = getLogger(__file__)

MODULE_KINDS = ("F2", "regular")

ADAMS_HELP = "charts use the Adams convention: t-s horizontally, s vertically"


def add_argument_common(parser: argparse.ArgumentParser):
    parser.add_argument("--verbose", action="store_true", help="Log at DEBUG level")


def _add_range(parser: argparse.ArgumentParser):
    parser.add_argument("--max-s", type=int, required=True, help="Largest homological degree")
    parser.add_argument("--max-t", type=int, required=True, help="Largest internal degree")
    parser.add_argument("--min-t", type=int, help="Smallest internal degree")


def _add_span(parser: argparse.ArgumentParser, default: Optional[str] = None):
    parser.add_argument(
        "--span",
        type=str,
        required=default is None,
        default=default,
        help="Named span: A, E, A^(s), P(n), P(n)^(s), A(n), E(n), S(n,s,t) or X//Y",
    )


def add_argument_basis(parser: argparse.ArgumentParser):
    parser.set_defaults(handler=basis)
    _add_span(parser, default="A")
    parser.add_argument("--max-degree", type=int, required=True, help="Top degree")
    parser.add_argument("--milnor", action="store_true", help="Print Sq(R) names")


def add_argument_mul(parser: argparse.ArgumentParser):
    parser.set_defaults(handler=mul)
    parser.add_argument("left", type=str, help='e.g. "z1^2 + z2" or "Sq(2)"')
    parser.add_argument("right", type=str, help='e.g. "z1" or "Sq(1)"')


def add_argument_coprod(parser: argparse.ArgumentParser):
    parser.set_defaults(handler=coprod)
    parser.add_argument("element", type=str, help='e.g. "z2" or "Sq(0,1)"')


def add_argument_antipode(parser: argparse.ArgumentParser):
    parser.set_defaults(handler=antipode_)
    parser.add_argument("element", type=str, help='e.g. "z2" or "Sq(2)"')


def add_argument_profile_basis(parser: argparse.ArgumentParser):
    parser.set_defaults(handler=profile_basis)
    parser.add_argument("--profile", type=Path, help="Profile file (JSON or YAML)")
    parser.add_argument("--caps", type=str, nargs="*", default=[], help='e.g. 1 1 inf')
    parser.add_argument("--tail", type=str, default="inf", help="Cap of later generators")
    parser.add_argument("--max-degree", type=int, required=True, help="Top degree")


def add_argument_cotensor(parser: argparse.ArgumentParser):
    parser.set_defaults(handler=cotensor_)
    _add_span(parser)
    parser.add_argument("--max-degree", type=int, required=True, help="Top degree")


def add_argument_resolve(parser: argparse.ArgumentParser):
    parser.set_defaults(handler=resolve)
    _add_span(parser)
    parser.add_argument("--module", type=str, choices=MODULE_KINDS, default="F2")
    parser.add_argument("--max-s", type=int, required=True, help="Last stage")
    parser.add_argument("--max-t", type=int, required=True, help="Largest internal degree")
    parser.add_argument("--dump", type=Path, help="Write the resolution as JSON")


def add_argument_ext(parser: argparse.ArgumentParser):
    parser.set_defaults(handler=ext_)
    _add_span(parser)
    parser.add_argument("--source", type=str, choices=MODULE_KINDS, default="F2")
    parser.add_argument("--target", type=str, choices=MODULE_KINDS, default="F2")
    _add_range(parser)


def add_argument_coext(parser: argparse.ArgumentParser):
    parser.set_defaults(handler=coext_)
    _add_span(parser)
    parser.add_argument("--source", type=str, choices=MODULE_KINDS, default="F2")
    parser.add_argument("--target", type=str, choices=MODULE_KINDS, default="F2")
    _add_range(parser)
    parser.add_argument("--cobar", action="store_true", help="Use the cobar complex")
    parser.add_argument(
        "--balance", action="store_true", help="Compare both codepaths, exit 1 on mismatch"
    )


def add_argument_chart(parser: argparse.ArgumentParser):
    parser.set_defaults(handler=chart)
    _add_span(parser)
    parser.add_argument("--source", type=str, choices=MODULE_KINDS, default="F2")
    parser.add_argument("--target", type=str, choices=MODULE_KINDS, default="F2")
    _add_range(parser)
    parser.add_argument("--coext", action="store_true", help="Chart Coext over the span")
    parser.add_argument("--format", type=str, choices=FORMATS, default="ascii")
    parser.add_argument("--out", type=Path, help="Output path (stdout by default)")


def add_argument_ce2(parser: argparse.ArgumentParser):
    parser.set_defaults(handler=ce2)
    parser.add_argument("--sub", type=str, required=True, help='e.g. "E(1)"')
    parser.add_argument("--ambient", type=str, required=True, help='e.g. "A(1)"')
    parser.add_argument("--construction", type=str, choices=CONSTRUCTIONS, required=True)
    parser.add_argument("--target", type=str, choices=MODULE_KINDS, default="F2")
    parser.add_argument("--max-s", type=int, required=True)
    parser.add_argument("--max-t", type=int, required=True)
    parser.add_argument("--max-u", type=int, required=True)
    parser.add_argument("--min-u", type=int, default=0)
    parser.add_argument("--json", action="store_true", help="Print the page as JSON")


def add_argument_vanish(parser: argparse.ArgumentParser):
    parser.set_defaults(handler=vanish)
    parser.add_argument("--scenario", type=Path, required=True, help="Scenario file")
    parser.add_argument("--json", action="store_true", help="Print the report as JSON")


def add_argument_ys(parser: argparse.ArgumentParser):
    parser.set_defaults(handler=ys)
    parser.add_argument("--s", type=int, help="Build H_*(Y_s)")
    parser.add_argument("--presentation", type=Path, help="Presentation file instead of --s")
    parser.add_argument("--element", type=str, help="Generator to show, e.g. y3")
    parser.add_argument(
        "--coaction", action="store_true", help="Print the coaction as stored in the presentation"
    )
    parser.add_argument(
        "--computed", action="store_true", help="Print the coaction the comodule carries"
    )
    parser.add_argument("--split", action="store_true", help="Run the splitting check")
    parser.add_argument("--max-degree", type=int, help="Window of the splitting check")


def add_argument_pd_check(parser: argparse.ArgumentParser):
    parser.set_defaults(handler=pd_check)
    parser.add_argument("--n", type=int, required=True, help="Check A(n)")


def parse_args() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="steenrod-desk", epilog=ADAMS_HELP)
    subparsers = parser.add_subparsers()

    name_and_fn_pairs = [
        ("basis", add_argument_basis),
        ("mul", add_argument_mul),
        ("coprod", add_argument_coprod),
        ("antipode", add_argument_antipode),
        ("profile-basis", add_argument_profile_basis),
        ("cotensor", add_argument_cotensor),
        ("resolve", add_argument_resolve),
        ("ext", add_argument_ext),
        ("coext", add_argument_coext),
        ("chart", add_argument_chart),
        ("ce2", add_argument_ce2),
        ("vanish", add_argument_vanish),
        ("ys", add_argument_ys),
        ("pd-check", add_argument_pd_check),
    ]
    for name, add_arument_fn in name_and_fn_pairs:
        sub_parser = subparsers.add_parser(name, help=f"see `{name} -h`", epilog=ADAMS_HELP)
        add_arument_fn(sub_parser)
        add_argument_common(sub_parser)

    return parser


def _is_milnor(text: str) -> bool:
    return text.strip().startswith("Sq")


def _finite_algebra(text: str) -> FDHopfAlgebra:
    return FDHopfAlgebra(preset(text))


def _module(algebra: FDHopfAlgebra, kind: str) -> FDModule:
    return regular_module(algebra) if kind == "regular" else trivial_module(algebra)


def _comodule(span: MonomialSpan, kind: str) -> Comodule:
    return regular_comodule(span) if kind == "regular" else trivial_comodule(span)


def _print_chart(chart: ExtChart) -> None:
    print(chart.to_text() if not chart.is_zero else EMPTY)


def basis(args: argparse.Namespace) -> int:
    span = preset(args.span)
    name = _format_milnor if args.milnor else format_monomial
    table = [
        {"degree": d, "dim": len(span.basis(d)), "basis": ", ".join(name(m) for m in span.basis(d))}
        for d in range(args.max_degree + 1)
    ]
    print(tabulate(table, headers="keys"))
    return 0


def mul(args: argparse.Namespace) -> int:
    if _is_milnor(args.left) or _is_milnor(args.right):
        a, b = SqElement.parse(args.left), SqElement.parse(args.right)
        print(sq_mul(a, b, (a.degree() or 0) + (b.degree() or 0)))
    else:
        print(DualElement.parse(args.left) * DualElement.parse(args.right))
    return 0


def coprod(args: argparse.Namespace) -> int:
    if _is_milnor(args.element):
        x = SqElement.parse(args.element)
        algebra = FDHopfAlgebra(FULL, max_degree=x.degree() or 0)
        terms = set()
        for t in x.support:
            terms ^= set(algebra.coproduct(t))
        print(format_tensor(terms, left=_format_milnor, right=_format_milnor))
    else:
        print(format_tensor(coproduct_element(DualElement.parse(args.element))))
    return 0


def antipode_(args: argparse.Namespace) -> int:
    if _is_milnor(args.element):
        x = SqElement.parse(args.element)
        algebra = FDHopfAlgebra(FULL, max_degree=x.degree() or 0)
        support = frozenset()
        for t in x.support:
            support ^= algebra.antipode(t)
        print(SqElement(support))
    else:
        result = DualElement()
        for m in DualElement.parse(args.element).support:
            result = result + antipode(m)
        print(result)
    return 0


def profile_basis(args: argparse.Namespace) -> int:
    if args.profile is not None:
        config = ProfileConfig.from_file(args.profile)
    else:
        config = ProfileConfig.from_dict({"caps": args.caps, "tail": args.tail})
    profile = config.to_profile()
    table = [
        {"degree": d, "dim": len(profile.basis(d)), "basis": ", ".join(format_monomial(m) for m in profile.basis(d))}
        for d in range(args.max_degree + 1)
    ]
    print(profile.name)
    print(tabulate(table, headers="keys"))
    return 0


def cotensor_(args: argparse.Namespace) -> int:
    c = preset(args.span)
    a_right = regular_comodule(FULL, args.max_degree, side="right")
    result = cotensor(a_right, c, trivial_comodule(c), args.max_degree)
    table = [{"degree": d, "dim": n} for d, n in enumerate(result.dims)]
    print(f"A_* []_{c.name} F2")
    print(tabulate(table, headers="keys"))
    if isinstance(c, QuotientHopf) and c.numerator() == FULL:
        expected = c.denominator.dims(args.max_degree)
        if expected != result.dims:
            logger.error(f"cotensor dims differ from {c.denominator.name}: {expected}")
            return 1
        print(f"matches {c.denominator.name}")
    return 0


def resolve(args: argparse.Namespace) -> int:
    algebra = _finite_algebra(args.span)
    res = minimal_resolution(algebra, _module(algebra, args.module), args.max_s, args.max_t)
    table = [
        {"s": s, "generators": len(stage.generator_degrees), "degrees": " ".join(map(str, stage.generator_degrees))}
        for s, stage in enumerate(res.stages)
    ]
    print(tabulate(table, headers="keys"))
    if args.dump is not None:
        with open(args.dump, "w", encoding="utf-8") as f:
            json.dump(res.to_dict(), f, indent=2)
        logger.info(f"wrote {args.dump}")
    return 0


def _ext_chart(args: argparse.Namespace) -> ExtChart:
    algebra = _finite_algebra(args.span)
    m, n = _module(algebra, args.source), _module(algebra, args.target)
    return ext(algebra, m, n, args.max_s, args.max_t, args.min_t)


def _coext_chart(args: argparse.Namespace, cobar: bool) -> ExtChart:
    c = preset(args.span)
    m, n = _comodule(c, args.source), _comodule(c, args.target)
    if cobar:
        return cobar_coext(m, n, c, args.max_s, args.max_t, args.min_t)
    return coext(m, n, c, args.max_s, args.max_t, args.min_t)


def ext_(args: argparse.Namespace) -> int:
    _print_chart(_ext_chart(args))
    return 0


def coext_(args: argparse.Namespace) -> int:
    if args.balance:
        c = preset(args.span)
        m, n = _comodule(c, args.source), _comodule(c, args.target)
        report = balance_check(m, n, c, args.max_s, args.max_t, args.min_t)
        print(f"balance over {report.coalgebra}: {'passed' if report.passed else 'FAILED'}")
        return 0 if report.passed else 1
    _print_chart(_coext_chart(args, args.cobar))
    return 0


def chart(args: argparse.Namespace) -> int:
    result = _coext_chart(args, False) if args.coext else _ext_chart(args)
    text = emit_chart(result, args.format)
    if args.out is None:
        print(text)
    else:
        with open(args.out, "w", encoding="utf-8") as f:
            f.write(text + "\n")
        logger.info(f"wrote {args.out}")
    return 0


def ce2(args: argparse.Namespace) -> int:
    seq = NormalSequence(preset(args.sub), preset(args.ambient)).verify()
    ranges = (args.max_s, args.max_t, args.max_u, args.min_u)
    if args.construction == "algebras":
        l = trivial_module(seq.quotient_algebra)
        page = ce_e2_algebras(seq, l, _module(seq.algebra, args.target), *ranges)
    elif args.construction == "comodule-first":
        m = trivial_comodule(seq.quotient)
        page = ce_e2_comodule_first(seq, m, _comodule(seq.ambient, args.target), *ranges)
    else:
        n = trivial_comodule(seq.quotient)
        page = ce_e2_comodule_second(seq, _comodule(seq.ambient, args.target), n, *ranges)
    if args.json:
        print(json.dumps(page.to_dict(), indent=2))
    else:
        print("\n".join(page.lines()) or EMPTY)
        print(f"subquotient check: {'passed' if page.subquotient.passed else 'FAILED'}")
    return 0 if page.subquotient.passed and page.cross_checked is not False else 1


def vanish(args: argparse.Namespace) -> int:
    config = ScenarioConfig.from_file(args.scenario)
    report = run_vanishing_chain(config)
    if args.json:
        print(json.dumps(report.to_dict(), indent=2))
    else:
        print(tabulate(report.table(), headers="keys"))
        print(f"{report.scenario}: {'passed' if report.passed else 'FAILED'}")
    return 0 if report.passed else 1


def ys(args: argparse.Namespace) -> int:
    if args.presentation is not None:
        presentation = PresentationConfig.from_file(args.presentation).to_presentation()
    elif args.s is not None:
        presentation = build_Ys(args.s)
    else:
        raise ValueError("either --s or --presentation is required")
    if args.split:
        if args.s is None or args.max_degree is None:
            raise ValueError("--split needs --s and --max-degree")
        report = splitting_check(args.s, DegreeWindow(args.max_degree))
        verdict = "passed" if report.passed else f"FAILED in degree {report.degree}: {report.reason}"
        print(f"splitting of {presentation.name} through degree {args.max_degree}: {verdict}")
        return 0 if report.passed else 1
    names = [args.element] if args.element else presentation.names
    for name in names:
        if name not in presentation.names:
            raise ValueError(f"{name} is not a generator of {presentation.name}")
    if args.coaction or args.computed:
        for name in names:
            if args.coaction:
                print(presentation.coaction_text(name))
            if args.computed:
                print(presentation.computed_coaction_text(name))
        return 0
    table = [
        {
            "generator": name,
            "degree": presentation.degree(presentation.generator_monomial(name)),
            "stored": presentation.coaction_text(name),
            "computed": presentation.computed_coaction_text(name),
        }
        for name in names
    ]
    print(tabulate(table, headers="keys"))
    return 0


def pd_check(args: argparse.Namespace) -> int:
    report = poincare_check(build_An(args.n))
    verdict = "pairing perfect" if report.passed else f"pairing degenerate in degree {report.degree}"
    print(f"{report.name}: dim {report.dimension}, pd {report.pd}, {verdict}")
    return 0 if report.passed else 1


def main(argv: Optional[List[str]] = None) -> int:
    parser = parse_args()
    args = parser.parse_args(argv)
    if not hasattr(args, "handler"):
        parser.print_help()
        return 0
    if args.verbose:
        logging.getLogger().setLevel(logging.DEBUG)
    try:
        return args.handler(args)
    except CheckFailure as e:
        logger.error(f"{e} (degree {e.degree}, witness {e.witness})")
        return 1
    except (SteenrodDeskError, ValueError) as e:
        logger.error(str(e))
        return 2


if __name__ == "__main__":
    sys.exit(main())
