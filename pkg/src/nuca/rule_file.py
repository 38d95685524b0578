"""
Rule File Format (.nuca)

ADR Note: Line-oriented, one directive per line, '#' starts a comment.
Grammar in documentation/ADR-002-file-grammars.md:

    nuca <name>
    dim <1|2>
    alphabet <q>
    memory <cell> <cell> ...
    rule <name> table <s0> <s1> ...         full table, inputs in lexicographic order
    rule <name> projection <cell>
    rule <name> constant <symbol>
    rule <name> linear <c1> <c2> ...        sum of c_j x(g + m_j) mod q
    rule <name> map                         explicit lines until `end`
      <in1> <in2> ... -> <out>
      * -> <out>                            every input not listed
    end
    default <name>
    region <set expression> -> <name>

Cells are integers in dimension 1 and "(a,b)" in dimension 2. Dumping writes
every rule as a full table, so parse(dump(x)) == x.
"""

import logging
import re
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

from ..density.parser import parse_lattice_set
from ..lattice.types import Cell, FiniteSet
from ..utils.enumeration import MAX_SYMBOLS
from ..utils.errors import ParseError
from .types import RuleAssignment, RuleTable

logger = logging.getLogger(__name__)

_CELL = re.compile(r"\(\s*-?\d+\s*(?:,\s*-?\d+\s*)*\)|-?\d+")


def format_cell(cell: Cell) -> str:
    return str(cell[0]) if len(cell) == 1 else "(" + ",".join(str(v) for v in cell) + ")"


def parse_cells(text: str, d: Optional[int], line: int, column: int, source: Optional[str]) -> List[Cell]:
    """Whitespace-separated cells: "-1 0 1" or "(0,-1) (0,0)" """
    cells = []
    position = 0
    for match in _CELL.finditer(text):
        gap = text[position:match.start()]
        if gap.strip():
            raise ParseError(f"unexpected {gap.strip()!r} in cell list", line, column + position, source)
        position = match.end()
        cell = tuple(int(v) for v in re.findall(r"-?\d+", match.group(0)))
        if d is not None and len(cell) != d:
            raise ParseError(f"cell {match.group(0)} is not in Z^{d}", line, column + match.start(), source)
        cells.append(cell)
    if text[position:].strip():
        raise ParseError(f"unexpected {text[position:].strip()!r} in cell list", line, column + position, source)
    return cells


class NumberedLines:
    """Numbered, comment-stripped, non-empty lines"""

    def __init__(self, text: str):
        self.items: List[Tuple[int, str]] = []
        for number, raw in enumerate(text.splitlines(), start=1):
            content = raw.split("#", 1)[0].rstrip()
            if content.strip():
                self.items.append((number, content))
        self.index = 0

    def __iter__(self):
        return self

    def __next__(self) -> Tuple[int, str]:
        if self.index >= len(self.items):
            raise StopIteration
        item = self.items[self.index]
        self.index += 1
        return item


def parse_int(value: str, keyword: str, line: int, column: int, source: Optional[str]) -> int:
    try:
        return int(value)
    except ValueError:
        raise ParseError(f"{keyword} expects an integer, found {value!r}", line, column, source) from None


def _symbols(tokens: Sequence[str], q: int, line: int, column: int, source: Optional[str]) -> List[int]:
    values = []
    for token in tokens:
        value = parse_int(token, "symbol", line, column, source)
        if not 0 <= value < q:
            raise ParseError(f"symbol {value} outside [0, {q})", line, column, source)
        values.append(value)
    return values


def _parse_map_block(
    lines: NumberedLines, name: str, memory: FiniteSet, q: int, start: int, source: Optional[str]
) -> RuleTable:
    size = len(memory)
    table: Dict[int, int] = {}
    fallback: Optional[int] = None
    for number, content in lines:
        stripped = content.strip()
        if stripped == "end":
            break
        if "->" not in stripped:
            raise ParseError("map lines look like '<inputs> -> <output>'", number, 1, source)
        left, right = (part.strip() for part in stripped.rsplit("->", 1))
        output = _symbols([right], q, number, content.index("->") + 3, source)[0]
        if left == "*":
            fallback = output
            continue
        tokens = left.split()
        if len(tokens) == 1 and len(tokens[0]) == size and q <= 10:
            tokens = list(tokens[0])
        if len(tokens) != size:
            raise ParseError(f"map input needs {size} symbols, found {len(tokens)}", number, 1, source)
        code = 0
        for value in _symbols(tokens, q, number, 1, source):
            code = code * q + value
        table[code] = output
    else:
        raise ParseError(f"rule {name}: missing 'end'", start, 1, source)
    missing = [c for c in range(q ** size) if c not in table]
    if missing and fallback is None:
        raise ParseError(f"rule {name}: {len(missing)} inputs have no output and there is no '* ->' line", start, 1, source)
    return RuleTable(memory, q, tuple(table.get(c, fallback) for c in range(q ** size)), name)


def parse_rule_file(text: str, source: Optional[str] = None) -> RuleAssignment:
    """
    Parse a .nuca rule file

    Raises:
        ParseError: With line and column of the offending token
    """
    lines = NumberedLines(text)
    name = ""
    d: Optional[int] = None
    q: Optional[int] = None
    memory: Optional[FiniteSet] = None
    rules: Dict[str, RuleTable] = {}
    default: Optional[str] = None
    regions: List[Tuple[int, str, str]] = []

    for number, content in lines:
        keyword, _, rest = content.strip().partition(" ")
        rest = rest.strip()
        column = content.index(rest) + 1 if rest else len(content) + 1
        if keyword == "nuca":
            name = rest
        elif keyword == "dim":
            d = parse_int(rest, "dim", number, column, source)
            if d not in (1, 2):
                raise ParseError(f"dim must be 1 or 2, found {d}", number, column, source)
        elif keyword == "alphabet":
            q = parse_int(rest, "alphabet", number, column, source)
            if not 1 <= q <= MAX_SYMBOLS:
                raise ParseError(f"alphabet size must lie in [1, {MAX_SYMBOLS}], found {q}", number, column, source)
        elif keyword == "memory":
            if d is None:
                raise ParseError("'dim' must come before 'memory'", number, 1, source)
            memory = FiniteSet(d, tuple(parse_cells(rest, d, number, column, source)))
            if not memory:
                raise ParseError("memory set must be nonempty", number, column, source)
        elif keyword == "rule":
            if memory is None or q is None:
                raise ParseError("'alphabet' and 'memory' must come before rules", number, 1, source)
            parts = rest.split(None, 2)
            if len(parts) < 2:
                raise ParseError("rule lines look like 'rule <name> <kind> ...'", number, column, source)
            rule_name, kind = parts[0], parts[1]
            arguments = parts[2] if len(parts) > 2 else ""
            if rule_name in rules:
                raise ParseError(f"rule {rule_name} defined twice", number, column, source)
            arg_column = content.index(arguments) + 1 if arguments else len(content) + 1
            try:
                if kind == "table":
                    values = _symbols(arguments.split(), q, number, arg_column, source)
                    rules[rule_name] = RuleTable(memory, q, tuple(values), rule_name)
                elif kind == "projection":
                    cells = parse_cells(arguments, d, number, arg_column, source)
                    if len(cells) != 1:
                        raise ParseError("projection takes one cell", number, arg_column, source)
                    rules[rule_name] = RuleTable.projection(memory, q, cells[0], rule_name)
                elif kind == "constant":
                    symbol = _symbols([arguments], q, number, arg_column, source)[0]
                    rules[rule_name] = RuleTable.constant(memory, q, symbol, rule_name)
                elif kind == "linear":
                    coefficients = [parse_int(t, "coefficient", number, arg_column, source) for t in arguments.split()]
                    rules[rule_name] = RuleTable.linear(memory, q, coefficients, rule_name)
                elif kind == "map":
                    rules[rule_name] = _parse_map_block(lines, rule_name, memory, q, number, source)
                else:
                    raise ParseError(f"unknown rule kind {kind!r}", number, column, source)
            except ValueError as e:
                raise ParseError(str(e), number, arg_column, source) from e
        elif keyword == "default":
            default = rest
        elif keyword == "region":
            if "->" not in rest:
                raise ParseError("region lines look like 'region <set> -> <rule>'", number, column, source)
            expression, rule_name = (part.strip() for part in rest.rsplit("->", 1))
            regions.append((number, expression, rule_name))
        else:
            raise ParseError(f"unknown directive {keyword!r}", number, 1, source)

    if d is None or q is None or memory is None:
        raise ParseError("rule file needs 'dim', 'alphabet' and 'memory'", 0, 0, source)
    if default is None:
        raise ParseError("rule file needs a 'default' rule", 0, 0, source)
    if default not in rules:
        raise ParseError(f"default rule {default!r} is not defined", 0, 0, source)

    parsed_regions = []
    for number, expression, rule_name in regions:
        if rule_name not in rules:
            raise ParseError(f"region refers to undefined rule {rule_name!r}", number, 1, source)
        region = parse_lattice_set(expression, d=d, line=number, column=8, source=source)
        parsed_regions.append((region, rules[rule_name]))

    nuca = RuleAssignment(q, d, memory, rules[default], tuple(parsed_regions), name)
    logger.debug(f"parsed rule file {source or '<input>'}: {len(parsed_regions)} regions, q={q}, |M|={len(memory)}")
    return nuca


def load_rule_file(path: Union[str, Path]) -> RuleAssignment:
    path = Path(path)
    return parse_rule_file(path.read_text(encoding="utf-8"), source=str(path))


def dump_rule_file(nuca: RuleAssignment) -> str:
    """Text form with every rule written as a full table"""
    lines = []
    if nuca.name:
        lines.append(f"nuca {nuca.name}")
    lines.append(f"dim {nuca.d}")
    lines.append(f"alphabet {nuca.q}")
    lines.append("memory " + " ".join(format_cell(c) for c in nuca.memory.cells))

    names: Dict[int, str] = {}
    for i, table in enumerate(nuca.tables):
        if id(table) in names:
            continue
        rule_name = table.name or f"rule{i}"
        while rule_name in names.values():
            rule_name = f"{rule_name}_{i}"
        names[id(table)] = rule_name
        lines.append(f"rule {rule_name} table " + " ".join(str(v) for v in table.table))
    lines.append(f"default {names[id(nuca.default)]}")
    for region, table in nuca.regions:
        lines.append(f"region {region.format()} -> {names[id(table)]}")
    return "\n".join(lines) + "\n"
