"""
Command Runner

ADR Note: Every command registers itself in COMMANDS with a parser
configurator and a handler, optionally under aliases (`certB`, `sft-certC`)
that resolve to the same entry. The handler fills one Report; the runner owns
the budget, logging, timings and the mapping of toolkit exceptions to report
statuses and exit codes. Unknown commands and malformed flags are rejected
by argparse before any computation (exit code 2).
"""

import argparse
import logging
import sys
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..density import density_laws_check, natural_density, parse_lattice_set
from ..entropy import (
    FullShiftSource,
    ImageSource,
    SFTLanguageSource,
    banach_entropy_bracket,
    entropy_bound_comparison,
    entropy_sequence,
    open_image_equivalence_probe,
    window_injectivity_certificate,
)
from ..lattice.geometry import restrict
from ..lattice.types import Configuration, FiniteSet, Pattern, PeriodLattice
from ..linear import (
    LinearAssignment,
    kernel_preinjectivity,
    load_linear_rule_file,
    mdim_banach_bracket,
    mdim_sequence,
    preinjectivity_locus,
)
from ..linear.corpus import load_linear_example
from ..nuca import (
    Cylinder,
    RuleAssignment,
    SearchStatus,
    WindowMap,
    image_codes,
    image_open_probe,
    load_rule_file,
    preinjectivity_witness,
)
from ..nuca.corpus import load_example
from ..nuca.rule_file import parse_cells
from ..quasitiling import ab_covering_check, construct, tiling_to_payload, verify
from ..sft import (
    SFT,
    delta_irreducibility_check,
    language_report,
    language_rows,
    load_sft_example,
    load_sft_file,
    periodic_approximation_check,
    periodic_injectivity_certificate,
    periodic_points,
)
from ..sft.sft_file import parse_assignments
from ..utils.budget import EnumerationBudget
from ..utils.enumeration import decode_codes
from ..utils.errors import BudgetExceeded, DimensionMismatch, ParseError, PreconditionFailed
from ..utils.rational import parse_rational
from .config import ToolkitConfig, setup_logging
from .report import Report, ReportStatus, write_report

logger = logging.getLogger(__name__)

Handler = Callable[[argparse.Namespace, EnumerationBudget, Report], None]


@dataclass(frozen=True)
class Command:
    name: str
    help: str
    configure: Callable[[argparse.ArgumentParser], None]
    handler: Handler
    aliases: Tuple[str, ...] = ()


COMMANDS: Dict[str, Command] = {}
ALIASES: Dict[str, str] = {}


def command(
    name: str,
    help: str,
    configure: Callable[[argparse.ArgumentParser], None],
    aliases: Tuple[str, ...] = (),
):
    """Register a handler under a command name and its aliases"""
    def register(handler: Handler) -> Handler:
        COMMANDS[name] = Command(name, help, configure, handler, aliases)
        ALIASES.update((alias, name) for alias in aliases)
        return handler
    return register


def resolve_command(name: str) -> Command:
    return COMMANDS[ALIASES.get(name, name)]


# ----------------------------------------------------------------------------
# Argument helpers
# ----------------------------------------------------------------------------

def parse_window(text: str, d: int, flag: str = "--window") -> FiniteSet:
    """
    "a..b" (an interval, or the square [a,b]^2 in Z^2) or "a..b,c..d"
    """
    parts = [p.strip() for p in text.split(",")]
    ranges = []
    for i, part in enumerate(parts):
        low, sep, high = part.partition("..")
        try:
            if not sep:
                raise ValueError(part)
            ranges.append((int(low), int(high)))
        except ValueError:
            raise ParseError(f"{flag} expects ranges like -2..2, found {part!r}", 1, 1 + text.find(part), flag) from None
    if len(ranges) == 1:
        ranges = ranges * d
    if len(ranges) != d:
        raise ParseError(f"{flag} has {len(ranges)} ranges for Z^{d}", 1, 1, flag)
    if any(a > b for a, b in ranges):
        raise ParseError(f"{flag} has an empty range", 1, 1, flag)
    return FiniteSet.rect([a for a, _ in ranges], [b for _, b in ranges])


def parse_fraction(text: str, flag: str) -> Fraction:
    try:
        return parse_rational(text)
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"{flag} expects a rational like 1/10, found {text!r}", 1, 1, flag) from None


def _cells(text: str, d: Optional[int], flag: str) -> FiniteSet:
    cells = parse_cells(text, d, 1, 1, flag)
    if not cells:
        raise ParseError(f"{flag} needs at least one cell", 1, 1, flag)
    return FiniteSet.of(cells)


def _add_rules(parser: argparse.ArgumentParser, required: bool = True) -> None:
    group = parser.add_mutually_exclusive_group(required=required)
    group.add_argument("--rules", help="rule file (.nuca)")
    group.add_argument("--example", help="shipped example rule by name")


def _add_linear(parser: argparse.ArgumentParser) -> None:
    group = parser.add_mutually_exclusive_group(required=True)
    group.add_argument("--linear", help="linear rule file (.lnuca)")
    group.add_argument("--linear-example", help="shipped linear example by name")


def _add_sft(parser: argparse.ArgumentParser, required: bool = True) -> None:
    group = parser.add_mutually_exclusive_group(required=required)
    group.add_argument("--sft", help="SFT file (.sft)")
    group.add_argument("--sft-example", help="shipped SFT example by name")


def _add_cylinder(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--pinned", help="set expression S of pinned cells")
    parser.add_argument("--symbol", type=int, default=0, help="symbol p takes on S")


def _load_rules(args: argparse.Namespace) -> Optional[RuleAssignment]:
    if getattr(args, "rules", None):
        return load_rule_file(args.rules)
    if getattr(args, "example", None):
        nuca = load_example(args.example)
        if nuca is None:
            raise ParseError(f"unknown example {args.example!r}", 1, 1, "--example")
        return nuca
    return None


def _load_linear(args: argparse.Namespace) -> Optional[LinearAssignment]:
    if getattr(args, "linear", None):
        return load_linear_rule_file(args.linear)
    if getattr(args, "linear_example", None):
        nuca = load_linear_example(args.linear_example)
        if nuca is None:
            raise ParseError(f"unknown linear example {args.linear_example!r}", 1, 1, "--linear-example")
        return nuca
    return None


def _load_sft(args: argparse.Namespace, budget: EnumerationBudget) -> Optional[SFT]:
    if getattr(args, "sft", None):
        return load_sft_file(args.sft, budget)
    if getattr(args, "sft_example", None):
        sft = load_sft_example(args.sft_example)
        if sft is None:
            raise ParseError(f"unknown SFT example {args.sft_example!r}", 1, 1, "--sft-example")
        return sft
    return None


def _cylinder(args: argparse.Namespace, d: int, q: int) -> Optional[Cylinder]:
    if not args.pinned:
        return None
    if not 0 <= args.symbol < q:
        raise PreconditionFailed(f"--symbol {args.symbol} is not a symbol of the alphabet")
    return Cylinder(parse_lattice_set(args.pinned, d=d, source="--pinned"), args.symbol)


def _hull(F: FiniteSet) -> List[List[int]]:
    return [list(c) for c in F.hull()] if F else []


# ----------------------------------------------------------------------------
# NUCA commands
# ----------------------------------------------------------------------------

def _configure_simulate(parser: argparse.ArgumentParser) -> None:
    _add_rules(parser)
    parser.add_argument("--window", required=True, help="output window, e.g. -3..3")
    parser.add_argument("--background", type=int, default=0, help="constant background symbol")
    parser.add_argument("--cells", default="", help="finite overrides, e.g. '0:1 2:1'")
    parser.add_argument("--steps", type=int, default=1, help="number of applications of tau")


@command("simulate", "apply the NUCA to a configuration on a window", _configure_simulate)
def simulate(args: argparse.Namespace, budget: EnumerationBudget, report: Report) -> None:
    nuca = _load_rules(args)
    if args.steps < 1:
        raise PreconditionFailed("--steps must be positive")
    if not 0 <= args.background < nuca.q:
        raise PreconditionFailed(f"--background {args.background} is not a symbol of the alphabet")
    F = parse_window(args.window, nuca.d)
    overrides = parse_assignments(args.cells, nuca.d, nuca.q, 1, 1, "--cells") if args.cells.strip() else Pattern.empty(nuca.d)
    x = Configuration.constant(args.background, nuca.d).with_overrides(overrides)

    maps = [WindowMap(nuca, F)]
    for _ in range(args.steps - 1):
        maps.append(WindowMap(nuca, maps[-1].domain))
    budget.check_window(len(maps[-1].domain), "simulation input window")
    values = np.asarray([restrict(x, maps[-1].domain).values], dtype=np.uint8)
    for window in reversed(maps):
        values = window.apply(values)
    report.add("window", _hull(F))
    report.add("steps", args.steps)
    report.add("output", [int(v) for v in values[0]])


def _configure_image(parser: argparse.ArgumentParser) -> None:
    _add_rules(parser)
    _add_cylinder(parser)
    parser.add_argument("--window", required=True)
    parser.add_argument("--list", action="store_true", help="include every image pattern")
    parser.add_argument("--probe", help="cells E of the open-image probe inside the window")


@command("image", "exact image patterns on a window", _configure_image)
def image(args: argparse.Namespace, budget: EnumerationBudget, report: Report) -> None:
    nuca = _load_rules(args)
    F = parse_window(args.window, nuca.d)
    u = _cylinder(args, nuca.d, nuca.q)
    codes = image_codes(nuca, F, u, budget)
    report.add("window", _hull(F))
    report.add("image_count", int(codes.size))
    if args.list:
        report.add("patterns", decode_codes(codes, nuca.q, len(F)).tolist())
    if args.probe:
        E = _cells(args.probe, nuca.d, "--probe")
        accepted = image_open_probe(nuca, E, F, u, budget)
        report.verdict("open_probe", {
            "support": [list(c) for c in E.cells],
            "accepted": list(accepted.values) if accepted is not None else None,
        })


def _configure_preinj(parser: argparse.ArgumentParser) -> None:
    group = parser.add_mutually_exclusive_group(required=True)
    group.add_argument("--rules")
    group.add_argument("--example")
    group.add_argument("--linear")
    group.add_argument("--linear-example")
    _add_cylinder(parser)
    parser.add_argument("--bound", type=int, default=2, help="largest support searched")
    parser.add_argument("--radius", type=int, default=2, help="search box radius")


@command("preinj", "bounded pre-injectivity witness search", _configure_preinj)
def preinj(args: argparse.Namespace, budget: EnumerationBudget, report: Report) -> None:
    linear = _load_linear(args)
    if linear is not None:
        S = parse_lattice_set(args.pinned, d=linear.d, source="--pinned") if args.pinned else None
        result = kernel_preinjectivity(linear, S, args.bound, args.radius, budget)
        report.add("boxes_searched", result.boxes_searched)
        witness = result.witness.as_payload() if result.witness else None
    else:
        nuca = _load_rules(args)
        result = preinjectivity_witness(nuca, _cylinder(args, nuca.d, nuca.q), args.bound, args.radius, budget)
        report.add("supports_searched", result.supports_searched)
        witness = result.witness.as_payload() if result.witness else None
    report.add("support_bound", args.bound)
    report.add("search_radius", args.radius)
    report.verdict("search", result.status.value)
    if result.status == SearchStatus.FOUND:
        report.fail(witness, report.argv)
    elif result.status == SearchStatus.PARTIAL:
        report.status = ReportStatus.BUDGET_EXCEEDED
        report.error = {"message": "witness search stopped by the budget", "exhausted": result.exhausted}


def _configure_cert_window(parser: argparse.ArgumentParser) -> None:
    _add_rules(parser)
    _add_cylinder(parser)
    parser.add_argument("--window", required=True)
    parser.add_argument("--filler", type=int, default=0)
    parser.add_argument("--compare", type=int, default=0, metavar="N",
                        help="also compare window entropies with the pinned-density bound for n = 1..N")


@command("cert-window", "finite-window injectivity certificate on a cylinder", _configure_cert_window,
         aliases=("certB",))
def cert_window(args: argparse.Namespace, budget: EnumerationBudget, report: Report) -> None:
    nuca = _load_rules(args)
    u = _cylinder(args, nuca.d, nuca.q)
    F = parse_window(args.window, nuca.d)
    verdict = window_injectivity_certificate(nuca, u, F, args.filler, budget)
    report.add("window", _hull(F))
    report.add("free_cells", verdict.free_cells)
    report.add("expected", verdict.expected)
    report.add("image_count", verdict.image_count)
    report.verdict("certificate", verdict.status.value)
    if args.compare:
        comparison = entropy_bound_comparison(nuca, u, None, args.compare, args.filler, budget)
        report.verdict("bound_comparison", comparison)
    if verdict.passed:
        report.status = ReportStatus.PASS
    else:
        report.fail(verdict.witness.as_payload() if verdict.witness else None, report.argv)


# ----------------------------------------------------------------------------
# Entropy and mean dimension
# ----------------------------------------------------------------------------

def _configure_entropy(parser: argparse.ArgumentParser) -> None:
    group = parser.add_mutually_exclusive_group(required=True)
    group.add_argument("--rules")
    group.add_argument("--example")
    group.add_argument("--sft")
    group.add_argument("--sft-example")
    group.add_argument("--full-shift", type=int, metavar="Q")
    _add_cylinder(parser)
    parser.add_argument("--dim", type=int, default=1, help="dimension of --full-shift")
    parser.add_argument("--padding", type=int, default=1, help="padding of a Z^2 SFT language")
    parser.add_argument("--n-max", type=int, default=4)
    parser.add_argument("--bracket", type=int, nargs=2, metavar=("RADIUS", "TRANSLATES"))
    parser.add_argument("--open-image", action="store_true",
                        help="run the open-image equivalence probes (asymptotically constant NUCA)")


@command("entropy", "window entropies of an image, an SFT or a full shift", _configure_entropy)
def entropy(args: argparse.Namespace, budget: EnumerationBudget, report: Report) -> None:
    exact = True
    nuca = _load_rules(args)
    sft = _load_sft(args, budget)
    if nuca is not None:
        source = ImageSource(nuca, _cylinder(args, nuca.d, nuca.q))
    elif sft is not None:
        source = SFTLanguageSource(sft, args.padding)
        exact = sft.d == 1
    else:
        if args.full_shift < 1 or args.dim not in (1, 2):
            raise PreconditionFailed("--full-shift needs q >= 1 and --dim 1 or 2")
        source = FullShiftSource(args.full_shift, args.dim)
    result = entropy_sequence(source, None, args.n_max, budget)
    report.add("source", result.source)
    for window in result.windows:
        report.add(f"count[n={window.n}]", window.count, exact)
        report.add(f"entropy[n={window.n}]", window.value, exact)
    if result.truncated_at is not None:
        report.verdict("truncated_at", result.truncated_at)
        if not result.windows:
            report.status = ReportStatus.BUDGET_EXCEEDED
            report.error = {"message": result.truncation_reason}
    if args.bracket:
        bracket = banach_entropy_bracket(source, args.bracket[0], args.bracket[1], budget)
        report.add("bracket_low", bracket.low, exact=False)
        report.add("bracket_high", bracket.high, exact=False)
    if args.open_image:
        if nuca is None:
            raise PreconditionFailed("--open-image needs a NUCA")
        report.verdict("open_image", open_image_equivalence_probe(nuca, budget=budget))


def _configure_mdim(parser: argparse.ArgumentParser) -> None:
    _add_linear(parser)
    parser.add_argument("--n-max", type=int, default=4)
    parser.add_argument("--bracket", type=int, nargs=2, metavar=("RADIUS", "TRANSLATES"))


@command("mdim", "window rank ratios of a linear NUCA", _configure_mdim)
def mdim(args: argparse.Namespace, budget: EnumerationBudget, report: Report) -> None:
    nuca = _load_linear(args)
    result = mdim_sequence(nuca, None, args.n_max, budget)
    report.add("source", result.source)
    for window in result.windows:
        report.add(f"rank[n={window.n}]", window.rank)
        report.add(f"ratio[n={window.n}]", window.ratio)
    if result.truncated_at is not None:
        report.verdict("truncated_at", result.truncated_at)
        if not result.windows:
            report.status = ReportStatus.BUDGET_EXCEEDED
            report.error = {"message": result.truncation_reason}
    if args.bracket:
        bracket = mdim_banach_bracket(nuca, args.bracket[0], args.bracket[1], budget)
        report.add("bracket_low", bracket.low, exact=False)
        report.add("bracket_high", bracket.high, exact=False)


# ----------------------------------------------------------------------------
# Densities, loci and tilings
# ----------------------------------------------------------------------------

def _configure_density(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--set", required=True, dest="expression", help="set expression, e.g. coset(2,1)")
    parser.add_argument("--dim", type=int, default=None)
    parser.add_argument("--n-max", type=int, default=32)
    parser.add_argument("--other", help="second set for the density-law checks")


@command("density", "natural and Banach densities of a lattice set", _configure_density)
def density(args: argparse.Namespace, budget: EnumerationBudget, report: Report) -> None:
    S = parse_lattice_set(args.expression, d=args.dim, source="--set")
    result = natural_density(S, None, args.n_max, budget)
    report.add("expression", result.expression)
    report.add("upper_natural", result.upper_natural.value, result.upper_natural.exact)
    report.add("lower_natural", result.lower_natural.value, result.lower_natural.exact)
    report.add("upper_banach", [result.upper_banach.low, result.upper_banach.high], result.upper_banach.exact)
    report.add("lower_banach", [result.lower_banach.low, result.lower_banach.high], result.lower_banach.exact)
    report.add("window_ratios", result.window_ratios)
    report.verdict("method", result.method.value)
    if args.other:
        T = parse_lattice_set(args.other, d=S.d, source="--other")
        laws = density_laws_check(S, T, None, min(args.n_max, 16), budget)
        report.verdict("laws", laws.passed)
        if laws.passed:
            report.status = ReportStatus.PASS
        else:
            report.fail({"first_violation": laws.first_violation}, report.argv)


def _configure_locus(parser: argparse.ArgumentParser) -> None:
    _add_linear(parser)
    parser.add_argument("--region", required=True, help="working region, e.g. 0..299")
    parser.add_argument("--shapes", required=True, nargs="+", help="tile shapes, e.g. 0..29")
    parser.add_argument("--epsilon", default="1/10")
    parser.add_argument("--target", default="2/5", help="density the pinned set should stay below")


@command("locus", "pre-injectivity locus of a linear NUCA on a quasi-tiling", _configure_locus)
def locus(args: argparse.Namespace, budget: EnumerationBudget, report: Report) -> None:
    nuca = _load_linear(args)
    region = parse_window(args.region, nuca.d, "--region")
    shapes = [parse_window(s, nuca.d, "--shapes") for s in args.shapes]
    tiling = construct(shapes, parse_fraction(args.epsilon, "--epsilon"), nuca.memory, region, budget)
    certificate = preinjectivity_locus(nuca, tiling, parse_fraction(args.target, "--target"), budget)
    report.add("S", certificate.S.format())
    report.add("measured_density", certificate.measured_density)
    report.add("tiles", len(certificate.tiles))
    report.add("kernel_dims", [t.kernel_dim for t in certificate.tiles])
    report.verdict("achieved", certificate.achieved)
    report.verdict("all_injective", certificate.all_injective)
    report.verdict("skipped_tiles", certificate.skipped)
    report.verdict("warnings", certificate.warnings)
    if certificate.achieved and certificate.all_injective:
        report.status = ReportStatus.PASS


def _configure_tiling(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--dim", type=int, default=1)
    parser.add_argument("--region", required=True)
    parser.add_argument("--shapes", required=True, nargs="+")
    parser.add_argument("--memory", help="memory cells, default [-1,1]^d")
    parser.add_argument("--epsilon", default="1/10")
    parser.add_argument("--alpha", help="disjointness of verify, default epsilon")
    parser.add_argument("--beta", help="covering fraction, default 1 - epsilon")
    parser.add_argument("--interior", help="interior fraction per tile for the ab-covering check, default 1 - epsilon")
    parser.add_argument("--tolerance", help="allowed shortfall of the ab-covering ratio")
    parser.add_argument("--list", action="store_true", help="include the tiles in the report")


@command("tiling", "construct and verify a quasi-tiling", _configure_tiling)
def tiling(args: argparse.Namespace, budget: EnumerationBudget, report: Report) -> None:
    d = args.dim
    region = parse_window(args.region, d, "--region")
    shapes = [parse_window(s, d, "--shapes") for s in args.shapes]
    memory = _cells(args.memory, d, "--memory") if args.memory else FiniteSet.box(-1, 1, d)
    epsilon = parse_fraction(args.epsilon, "--epsilon")
    alpha = parse_fraction(args.alpha, "--alpha") if args.alpha else epsilon
    beta = parse_fraction(args.beta, "--beta") if args.beta else 1 - epsilon
    result = construct(shapes, epsilon, memory, region, budget)
    checked = verify(result, alpha, beta)
    report.add("tiles", len(result.tiles))
    report.add("covering", result.covering)
    report.add("interior_covering", result.interior_covering)
    report.add("shapes_used", result.shapes_used)
    report.verdict("verify", {c.name: c.passed for c in checked.clauses})
    if args.list:
        report.verdict("tiling", tiling_to_payload(result))
    if not checked.passed:
        failing = [c for c in checked.clauses if not c.passed]
        report.fail({"clauses": failing}, report.argv)
        return
    tolerance = parse_fraction(args.tolerance, "--tolerance") if args.tolerance else None
    interior_fraction = parse_fraction(args.interior, "--interior") if args.interior else 1 - epsilon
    covering = ab_covering_check(result, interior_fraction, beta, tolerance)
    report.add("ab_covering", covering.clauses[0].measured)
    report.verdict("ab_covering", covering.passed)
    if covering.passed:
        report.status = ReportStatus.PASS
    else:
        report.fail({"clauses": covering.clauses}, report.argv)


# ----------------------------------------------------------------------------
# Subshifts of finite type
# ----------------------------------------------------------------------------

def _configure_sft_lang(parser: argparse.ArgumentParser) -> None:
    _add_sft(parser)
    parser.add_argument("--window", required=True)
    parser.add_argument("--padding", type=int, default=1)
    parser.add_argument("--list", action="store_true")


@command("sft-lang", "patterns of an SFT on a window", _configure_sft_lang)
def sft_lang(args: argparse.Namespace, budget: EnumerationBudget, report: Report) -> None:
    sft = _load_sft(args, budget)
    F = parse_window(args.window, sft.d)
    result = language_report(sft, F, args.padding, budget)
    report.add("window", _hull(F))
    report.add("count", result.count, result.exact)
    report.verdict("method", result.method)
    if result.padding is not None:
        report.verdict("padding", result.padding)
    if args.list:
        rows, exact = language_rows(sft, F, args.padding, budget)
        report.add("patterns", rows.tolist(), exact)


def _configure_sft_periodic(parser: argparse.ArgumentParser) -> None:
    _add_sft(parser)
    parser.add_argument("--period", type=int, help="periodic points of period N Z^d")
    parser.add_argument("--approx", type=int, nargs=3, metavar=("N0", "R", "N"),
                        help="periodic approximation check with k_n = (n*n0 - 2r)(n0 + 1)")
    parser.add_argument("--irreducible", metavar="GAP", help="gap window of the irreducibility check, e.g. -2..2")
    parser.add_argument("--radius", type=int, default=6)
    parser.add_argument("--padding", type=int, default=1)
    parser.add_argument("--list", action="store_true")


@command("sft-periodic", "periodic points, periodic approximation and irreducibility", _configure_sft_periodic)
def sft_periodic(args: argparse.Namespace, budget: EnumerationBudget, report: Report) -> None:
    sft = _load_sft(args, budget)
    if args.period is None and args.approx is None and args.irreducible is None:
        raise PreconditionFailed("give at least one of --period, --approx, --irreducible")
    failures = {}
    checks = 0
    if args.period is not None:
        points = periodic_points(sft, PeriodLattice.scalar(args.period, sft.d), budget)
        report.add("periodic_count", points.count)
        if args.list:
            report.add("periodic_points", points.rows.tolist())
    if args.approx is not None:
        n0, r, n = args.approx
        verdict = periodic_approximation_check(sft, n0, r, n, budget, padding=args.padding)
        checks += 1
        report.add("k", verdict.k)
        report.add("period", verdict.period)
        report.add("language_count", verdict.language_count, verdict.exact)
        report.add("periodic_restriction_count", verdict.periodic_count)
        report.verdict("periodic_approximation", verdict)
        if not verdict.equal:
            failures["periodic_approximation"] = {
                "language_count": verdict.language_count,
                "periodic_count": verdict.periodic_count,
            }
    if args.irreducible is not None:
        gap = parse_window(args.irreducible, sft.d, "--irreducible")
        verdict = delta_irreducibility_check(sft, gap, args.radius, args.padding, budget)
        checks += 1
        report.add("pattern_pairs", verdict.pattern_pairs, verdict.exact)
        report.verdict("irreducible", verdict.passed)
        if not verdict.passed:
            failures["irreducibility"] = verdict.failing
    if failures:
        report.fail(failures, report.argv)
    elif checks:
        report.status = ReportStatus.PASS


def _configure_sft_cert(parser: argparse.ArgumentParser) -> None:
    _add_sft(parser)
    _add_rules(parser)
    _add_cylinder(parser)
    parser.add_argument("--n", type=int, required=True)
    parser.add_argument("--n0", type=int, required=True)
    parser.add_argument("--r", type=int, required=True)
    parser.add_argument("--padding", type=int, default=1)


@command("sft-cert-periodic", "injectivity on periodic points and the counting chain", _configure_sft_cert,
         aliases=("sft-certC",))
def sft_cert_periodic(args: argparse.Namespace, budget: EnumerationBudget, report: Report) -> None:
    sft = _load_sft(args, budget)
    ca = _load_rules(args)
    u = _cylinder(args, sft.d, sft.q) or Cylinder.full_shift(sft.d)
    result = periodic_injectivity_certificate(ca, sft, u, args.n, args.n0, args.r, args.padding, budget)
    report.add("k", result.k)
    report.add("period", result.period)
    report.add("image_window_count", result.image_window_count, result.exact)
    report.add("periodic_count", result.periodic_count)
    report.add("periodic_image_count", result.periodic_image_count)
    report.add("language_count", result.language_count, result.exact)
    report.add("lower_bound", result.lower_bound, result.exact)
    report.verdict("injective", result.passed)
    report.verdict("chain_holds", result.chain_holds)
    if result.notes:
        report.verdict("notes", result.notes)
    if not result.passed:
        report.fail(result.witness, report.argv)
    elif result.chain_holds:
        report.status = ReportStatus.PASS


# ----------------------------------------------------------------------------
# Entry points
# ----------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output", "-o", help="write the JSON report here (atomically)")
    common.add_argument("--json", action="store_true", help="print the JSON report instead of the summary")
    common.add_argument("--max-patterns", type=int)
    common.add_argument("--max-support", type=int)
    common.add_argument("--max-window", type=int)
    common.add_argument("--time-limit", type=float)
    common.add_argument("--threads", type=int)
    common.add_argument("--seed", type=int)
    common.add_argument("--log-level")

    parser = argparse.ArgumentParser(prog="python -m src.cli", description="Exact finite-window analysis of NUCA")
    subparsers = parser.add_subparsers(dest="command", required=True, metavar="command")
    for entry in COMMANDS.values():
        sub = subparsers.add_parser(entry.name, aliases=list(entry.aliases), help=entry.help, parents=[common])
        entry.configure(sub)
    return parser


def _config(parser: argparse.ArgumentParser, args: argparse.Namespace, base: Optional[ToolkitConfig]) -> ToolkitConfig:
    try:
        return (base or ToolkitConfig.from_env()).with_overrides(
            max_patterns=args.max_patterns,
            max_support=args.max_support,
            max_window=args.max_window,
            time_limit=args.time_limit,
            threads=args.threads,
            seed=args.seed,
            log_level=args.log_level,
        )
    except ValueError as e:
        # pydantic's ValidationError is a ValueError; so is a malformed NUCA_* value
        parser.error(f"invalid budget or setting: {e}")
        raise


def run(argv: Sequence[str], config: Optional[ToolkitConfig] = None) -> Report:
    """
    Parse argv, run one command and return its report

    The report is also written to --output when given. argparse errors exit
    with status 2 before anything runs.
    """
    argv = list(argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    config = _config(parser, args, config)
    setup_logging(config)
    budget = config.budget().restart()
    entry = resolve_command(args.command)
    report = Report(command=entry.name, argv=argv, seed=config.seed)
    started = time.perf_counter()
    try:
        entry.handler(args, budget, report)
    except ParseError as e:
        report.status = ReportStatus.PARSE_ERROR
        report.error = {"message": str(e), "line": e.line, "column": e.column, "source": e.source}
    except BudgetExceeded as e:
        report.status = ReportStatus.BUDGET_EXCEEDED
        report.error = {"message": str(e), "exhausted": e.exhausted, "limit": e.limit}
    except (PreconditionFailed, DimensionMismatch, ValueError) as e:
        report.status = ReportStatus.PRECONDITION_FAILED
        report.error = {"message": str(e)}
    except FileNotFoundError as e:
        report.status = ReportStatus.PARSE_ERROR
        report.error = {"message": f"cannot read {e.filename}"}
    report.timings["total_seconds"] = round(time.perf_counter() - started, 6)
    if report.error:
        logger.warning(f"{entry.name}: {report.status.value}: {report.error.get('message')}")
    else:
        logger.info(f"{entry.name}: {report.status.value}")
    if args.output:
        write_report(report, args.output)
    return report


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    report = run(argv)
    print(report.to_json() if "--json" in argv else report.summary())
    return report.exit_code
