"""
SFT File Format (.sft)

ADR Note: Same line discipline as .nuca files. Grammar in
documentation/ADR-002-file-grammars.md:

    sft <name>
    dim <1|2>
    alphabet <q>
    radius <r>                      window Delta = [-r, r]^d
    forbid <cell>:<sym> ...         one forbidden pattern per line
    allow <s1> <s2> ...             one allowed Delta-window per line, cells
                                    in canonical order ("010" when q <= 10)

A file uses either forbid lines or allow lines. With neither, every window
is allowed. Dumping writes allow lines, so parse(dump(x)) == x.
"""

import logging
import re
from pathlib import Path
from typing import List, Optional, Union

import numpy as np

from ..lattice.types import Pattern
from ..nuca.rule_file import NumberedLines, parse_int
from ..utils.budget import DEFAULT_BUDGET, EnumerationBudget
from ..utils.enumeration import MAX_SYMBOLS, decode_codes
from ..utils.errors import ParseError
from .types import SFT

logger = logging.getLogger(__name__)

_ASSIGNMENT = re.compile(r"(\(\s*-?\d+\s*(?:,\s*-?\d+\s*)*\)|-?\d+)\s*:\s*(-?\d+)")


def parse_assignments(text: str, d: int, q: int, line: int, column: int, source: Optional[str]) -> Pattern:
    mapping = {}
    position = 0
    for match in _ASSIGNMENT.finditer(text):
        if text[position:match.start()].strip():
            raise ParseError(f"unexpected {text[position:match.start()].strip()!r}", line, column + position, source)
        position = match.end()
        cell = tuple(int(v) for v in re.findall(r"-?\d+", match.group(1)))
        if len(cell) != d:
            raise ParseError(f"cell {match.group(1)} is not in Z^{d}", line, column + match.start(), source)
        symbol = int(match.group(2))
        if not 0 <= symbol < q:
            raise ParseError(f"symbol {symbol} outside [0, {q})", line, column + match.start(2), source)
        if cell in mapping:
            raise ParseError(f"cell {match.group(1)} assigned twice", line, column + match.start(), source)
        mapping[cell] = symbol
    if text[position:].strip() or not mapping:
        raise ParseError("assignments look like '<cell>:<symbol> ...'", line, column + position, source)
    return Pattern.from_mapping(mapping, d=d)


def _parse_allowed(text: str, size: int, q: int, line: int, column: int, source: Optional[str]) -> List[int]:
    tokens = text.split()
    if len(tokens) == 1 and len(tokens[0]) == size and q <= 10:
        tokens = list(tokens[0])
    if len(tokens) != size:
        raise ParseError(f"allowed windows need {size} symbols, found {len(tokens)}", line, column, source)
    values = [parse_int(t, "symbol", line, column, source) for t in tokens]
    if any(not 0 <= v < q for v in values):
        raise ParseError(f"symbol outside [0, {q})", line, column, source)
    return values


def parse_sft_file(
    text: str,
    source: Optional[str] = None,
    budget: EnumerationBudget = DEFAULT_BUDGET,
) -> SFT:
    """
    Parse a .sft file

    Raises:
        ParseError: With line and column of the offending token
    """
    name = ""
    d: Optional[int] = None
    q: Optional[int] = None
    r: Optional[int] = None
    forbidden: List[Pattern] = []
    allowed: List[List[int]] = []

    for number, content in NumberedLines(text):
        keyword, _, rest = content.strip().partition(" ")
        rest = rest.strip()
        column = content.index(rest) + 1 if rest else len(content) + 1
        if keyword == "sft":
            name = rest
        elif keyword == "dim":
            d = parse_int(rest, "dim", number, column, source)
            if d not in (1, 2):
                raise ParseError(f"dim must be 1 or 2, found {d}", number, column, source)
        elif keyword == "alphabet":
            q = parse_int(rest, "alphabet", number, column, source)
            if not 1 <= q <= MAX_SYMBOLS:
                raise ParseError(f"alphabet size must lie in [1, {MAX_SYMBOLS}], found {q}", number, column, source)
        elif keyword == "radius":
            r = parse_int(rest, "radius", number, column, source)
            if r < 0:
                raise ParseError("radius must be nonnegative", number, column, source)
        elif keyword in ("forbid", "allow"):
            if d is None or q is None or r is None:
                raise ParseError("'dim', 'alphabet' and 'radius' must come before patterns", number, 1, source)
            if keyword == "forbid":
                if allowed:
                    raise ParseError("a file uses either forbid or allow lines", number, 1, source)
                forbidden.append(parse_assignments(rest, d, q, number, column, source))
            else:
                if forbidden:
                    raise ParseError("a file uses either forbid or allow lines", number, 1, source)
                allowed.append(_parse_allowed(rest, (2 * r + 1) ** d, q, number, column, source))
        else:
            raise ParseError(f"unknown directive {keyword!r}", number, 1, source)

    if d is None or q is None or r is None:
        raise ParseError("SFT file needs 'dim', 'alphabet' and 'radius'", 0, 0, source)
    try:
        if allowed:
            sft = SFT.from_allowed_rows(d, r, q, np.asarray(allowed, dtype=np.uint8), name)
        else:
            sft = SFT.from_forbidden(d, r, q, forbidden, name, budget)
    except ValueError as e:
        raise ParseError(str(e), 0, 0, source) from e
    logger.debug(f"parsed SFT file {source or '<input>'}: {len(sft.allowed)} allowed windows")
    return sft


def load_sft_file(path: Union[str, Path], budget: EnumerationBudget = DEFAULT_BUDGET) -> SFT:
    path = Path(path)
    return parse_sft_file(path.read_text(encoding="utf-8"), source=str(path), budget=budget)


def dump_sft_file(sft: SFT) -> str:
    lines = []
    if sft.name:
        lines.append(f"sft {sft.name}")
    lines += [f"dim {sft.d}", f"alphabet {sft.q}", f"radius {sft.r}"]
    rows = decode_codes(sft.allowed_array, sft.q, len(sft.window))
    for row in rows:
        lines.append("allow " + " ".join(str(int(v)) for v in row))
    if not sft.allowed:
        origin = "0" if sft.d == 1 else "(0,0)"
        lines += [f"forbid {origin}:{symbol}" for symbol in range(sft.q)]
    return "\n".join(lines) + "\n"
