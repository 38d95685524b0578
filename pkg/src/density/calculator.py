"""
Density Calculator

ADR Note: Three regimes, tried in order.

1. No half-space atom: the set is periodic modulo a Banach-null set. The
   skeleton (null atoms replaced by the empty set) is counted on one period
   box [0, N)^d and every density equals that rational.
2. A lone half-space or its complement: Banach (0, 1), natural 1/2 under
   centered boxes.
3. Otherwise: Banach brackets are propagated bottom-up through the tree and
   natural densities are tail estimates labeled non-exact.
"""

import logging
import math
from fractions import Fraction
from typing import List, Optional, Tuple

import numpy as np

from ..lattice.types import BoxFolner, FiniteSet
from ..utils.budget import DEFAULT_BUDGET, EnumerationBudget
from ..utils.errors import BudgetExceeded
from .lattice_set import (
    Complement,
    CosetAtom,
    Difference,
    FiniteAtom,
    HalfSpaceAtom,
    Intersection,
    LatticeSet,
    PowerAtom,
    Translated,
    Union,
    Universe,
)
from .types import Bracket, DensityMethod, DensityReport, DensityValue, LawCheck, LawsVerdict

logger = logging.getLogger(__name__)

ZERO = Fraction(0)
ONE = Fraction(1)

# (lower Banach, upper Banach)
Brackets = Tuple[Bracket, Bracket]


def window_count(S: LatticeSet, F: FiniteSet) -> int:
    """|S ∩ F| by exact membership"""
    if not F:
        return 0
    return int(S.contains_many(F.as_array()).sum())


def window_ratios(S: LatticeSet, folner: BoxFolner, n_max: int) -> List[Fraction]:
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    ratios = []
    for n in range(1, n_max + 1):
        F = folner.window(n)
        ratios.append(Fraction(window_count(S, F), len(F)))
    return ratios


def periodic_density(S: LatticeSet, budget: EnumerationBudget = DEFAULT_BUDGET) -> Fraction:
    """
    Exact density of a half-space-free set

    Raises:
        BudgetExceeded: the period box has more than max_patterns cells
    """
    if S.has_half_spaces():
        raise ValueError("periodic_density needs a half-space-free set")
    N = S.period()
    budget.check_rows(N ** S.d, f"period box [0,{N})^{S.d}")
    box = FiniteSet.box(0, N - 1, S.d)
    return Fraction(int(S.skeleton_many(box.as_array()).sum()), N ** S.d)


def _is_lone_half_space(S: LatticeSet) -> bool:
    while isinstance(S, (Complement, Translated)):
        S = S.child
    return isinstance(S, HalfSpaceAtom)


def _complement(brackets: Brackets) -> Brackets:
    lower, upper = brackets
    return (
        Bracket(low=ONE - upper.high, high=ONE - upper.low),
        Bracket(low=ONE - lower.high, high=ONE - lower.low),
    )


def _union(a: Brackets, b: Brackets) -> Brackets:
    (la, ua), (lb, ub) = a, b
    upper = Bracket(low=max(ua.low, ub.low), high=min(ONE, ua.high + ub.high))
    lower_high = min(ONE, upper.high, la.high + ub.high, ua.high + lb.high)
    lower = Bracket(low=max(la.low, lb.low), high=lower_high)
    return _tighten(lower, upper)


def _tighten(lower: Bracket, upper: Bracket) -> Brackets:
    return (
        Bracket(low=lower.low, high=min(lower.high, upper.high)),
        Bracket(low=max(upper.low, lower.low), high=upper.high),
    )


def banach_brackets(S: LatticeSet, budget: EnumerationBudget = DEFAULT_BUDGET) -> Brackets:
    """(lower, upper) Banach density brackets of S"""
    if not S.has_half_spaces():
        try:
            value = Bracket.point(periodic_density(S, budget))
            return value, value
        except BudgetExceeded:
            logger.debug(f"period of {S.format()} too large, propagating brackets")
    if isinstance(S, HalfSpaceAtom):
        return Bracket.point(ZERO), Bracket.point(ONE)
    if isinstance(S, (FiniteAtom, PowerAtom)):
        return Bracket.point(ZERO), Bracket.point(ZERO)
    if isinstance(S, Universe):
        return Bracket.point(ONE), Bracket.point(ONE)
    if isinstance(S, CosetAtom):
        value = ZERO if S.index is None else Fraction(1, S.index)
        return Bracket.point(value), Bracket.point(value)
    if isinstance(S, Translated):
        return banach_brackets(S.child, budget)
    if isinstance(S, Complement):
        return _complement(banach_brackets(S.child, budget))
    if isinstance(S, Union):
        result = banach_brackets(S.parts[0], budget)
        for part in S.parts[1:]:
            result = _union(result, banach_brackets(part, budget))
        return result
    if isinstance(S, Intersection):
        result = _complement(banach_brackets(S.parts[0], budget))
        for part in S.parts[1:]:
            result = _union(result, _complement(banach_brackets(part, budget)))
        return _complement(result)
    if isinstance(S, Difference):
        return banach_brackets(Intersection((S.left, Complement(S.right))), budget)
    raise TypeError(f"unknown lattice set node {type(S).__name__}")


def _classify(S: LatticeSet, budget: EnumerationBudget) -> Tuple[DensityMethod, Optional[Fraction]]:
    if not S.has_half_spaces():
        try:
            return DensityMethod.PERIODIC, periodic_density(S, budget)
        except BudgetExceeded:
            return DensityMethod.BRACKET, None
    if _is_lone_half_space(S):
        return DensityMethod.HALF_SPACE, Fraction(1, 2)
    return DensityMethod.BRACKET, None


def banach_density(S: LatticeSet, budget: EnumerationBudget = DEFAULT_BUDGET) -> DensityReport:
    """
    Upper and lower Banach densities of S

    Closed forms are exact; every other set gets a bracket and
    no_closed_form=True.
    """
    method, _ = _classify(S, budget)
    lower, upper = banach_brackets(S, budget)
    no_closed_form = not (lower.exact and upper.exact)
    if no_closed_form:
        logger.warning(f"no closed form for the Banach densities of {S.format()}, reporting brackets")
    return DensityReport(
        expression=S.format(),
        d=S.d,
        method=method,
        upper_banach=upper,
        lower_banach=lower,
        no_closed_form=no_closed_form,
        period=S.period() if method == DensityMethod.PERIODIC else None,
    )


def natural_density(
    S: LatticeSet,
    folner: Optional[BoxFolner] = None,
    n_max: int = 32,
    budget: EnumerationBudget = DEFAULT_BUDGET,
) -> DensityReport:
    """
    Window ratios along a box sequence plus upper/lower natural densities

    ADR Note: Outside the closed-form regimes the natural densities are the
    max and min of the ratios over the last ceil(n_max/2) windows, labeled
    as estimates.
    """
    folner = folner or BoxFolner(S.d)
    if folner.d != S.d:
        raise ValueError(f"box sequence is in Z^{folner.d}, set is in Z^{S.d}")
    ratios = window_ratios(S, folner, n_max)
    method, exact_value = _classify(S, budget)
    if exact_value is not None:
        upper = lower = DensityValue(value=exact_value, exact=True)
    else:
        tail = ratios[-math.ceil(n_max / 2):]
        upper = DensityValue(value=max(tail), exact=False)
        lower = DensityValue(value=min(tail), exact=False)
        logger.info(f"natural density of {S.format()} estimated from windows {n_max - len(tail) + 1}..{n_max}")
    lower_banach, upper_banach = banach_brackets(S, budget)
    return DensityReport(
        expression=S.format(),
        d=S.d,
        method=method,
        window_ratios=ratios,
        upper_natural=upper,
        lower_natural=lower,
        upper_banach=upper_banach,
        lower_banach=lower_banach,
        no_closed_form=not (lower_banach.exact and upper_banach.exact),
        period=S.period() if method == DensityMethod.PERIODIC else None,
    )


def _record(checks: List[LawCheck], name: str, passed: bool, detail: str) -> None:
    checks.append(LawCheck(name=name, passed=bool(passed), detail=detail))


def density_laws_check(
    S: LatticeSet,
    T: LatticeSet,
    folner: Optional[BoxFolner] = None,
    n_max: int = 16,
    budget: EnumerationBudget = DEFAULT_BUDGET,
) -> LawsVerdict:
    """
    Complement identity, subadditivity and the density chain

    Checked on every window of the prefix and on the exact values (or
    bracket consistency) of S, T, their complements and S ∪ T.
    """
    folner = folner or BoxFolner(S.d)
    checks: List[LawCheck] = []
    union = Union((S, T))
    reports = {
        "S": natural_density(S, folner, n_max, budget),
        "T": natural_density(T, folner, n_max, budget),
        "~S": natural_density(Complement(S), folner, n_max, budget),
        "~T": natural_density(Complement(T), folner, n_max, budget),
        "S|T": natural_density(union, folner, n_max, budget),
    }

    for name in ("S", "T"):
        own, other = reports[name], reports["~" + name]
        for n, (a, b) in enumerate(zip(own.window_ratios, other.window_ratios), start=1):
            _record(checks, f"window complement {name} n={n}", a + b == ONE, f"{a} + {b}")
        if own.upper_natural.exact and other.lower_natural.exact:
            total = own.upper_natural.value + other.lower_natural.value
            _record(checks, f"natural complement {name}", total == ONE, f"upper + lower of complement = {total}")
        low = own.upper_banach.low + other.lower_banach.low
        high = own.upper_banach.high + other.lower_banach.high
        _record(checks, f"banach complement {name}", low <= ONE <= high, f"sum in [{low}, {high}]")

    s, t, u = reports["S"], reports["T"], reports["S|T"]
    for n, (a, b, c) in enumerate(zip(s.window_ratios, t.window_ratios, u.window_ratios), start=1):
        _record(checks, f"window subadditivity n={n}", c <= a + b, f"{c} <= {a} + {b}")
    if s.upper_natural.exact and t.upper_natural.exact and u.upper_natural.exact:
        bound = s.upper_natural.value + t.upper_natural.value
        _record(checks, "natural subadditivity", u.upper_natural.value <= bound, f"{u.upper_natural.value} <= {bound}")
    bound = s.upper_banach.high + t.upper_banach.high
    _record(checks, "banach subadditivity", u.upper_banach.low <= bound, f"{u.upper_banach.low} <= {bound}")

    for name, report in reports.items():
        for n, ratio in enumerate(report.window_ratios, start=1):
            _record(checks, f"window range {name} n={n}", ZERO <= ratio <= ONE, str(ratio))
        lower, upper = report.lower_natural, report.upper_natural
        chain = [report.lower_banach.low]
        if lower.exact:
            chain.append(lower.value)
        if upper.exact:
            chain.append(upper.value)
        chain.append(report.upper_banach.high)
        ordered = all(a <= b for a, b in zip(chain, chain[1:]))
        _record(
            checks,
            f"density chain {name}",
            ZERO <= chain[0] and chain[-1] <= ONE and ordered,
            " <= ".join(str(v) for v in chain),
        )

    failed = next((c for c in checks if not c.passed), None)
    if failed is not None:
        logger.warning(f"density law violated: {failed.name} ({failed.detail})")
    return LawsVerdict(
        passed=failed is None,
        checks=checks,
        first_violation=f"{failed.name}: {failed.detail}" if failed else None,
    )
