"""
Linear Rule File Format (.lnuca)

ADR Note: Same line discipline as .nuca files. Grammar in
documentation/ADR-002-file-grammars.md:

    lnuca <name>
    dim <1|2>
    field <prime q>
    components <k>                 vector dimension of the alphabet (default 1)
    memory <cell> <cell> ...
    rule <name> identity [<cell>]  x -> x(g + cell), cell defaulting to 0
    rule <name> zero
    rule <name> scalar <c1> ...    k = 1 only, one coefficient per memory cell
    rule <name> matrix             explicit blocks until `end`
      <cell>: <row> ; <row> ...    k x k matrix applied to x(g + cell)
    end
    default <name>
    region <set expression> -> <name>

Offsets missing from a matrix block have the zero matrix. Dumping writes
every rule as a matrix block with all offsets.
"""

import logging
from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union

import numpy as np

from ..density.parser import parse_lattice_set
from ..lattice.types import FiniteSet
from ..nuca.rule_file import NumberedLines, format_cell, parse_cells, parse_int
from ..utils.errors import ParseError
from .types import FieldSpec, LinearAssignment, LinearRule

logger = logging.getLogger(__name__)


def _parse_matrix_block(
    lines: NumberedLines, name: str, memory: FiniteSet, q: int, k: int, d: int, start: int, source: Optional[str]
) -> LinearRule:
    blocks: Dict[Tuple[int, ...], np.ndarray] = {}
    for number, content in lines:
        stripped = content.strip()
        if stripped == "end":
            break
        if ":" not in stripped:
            raise ParseError("matrix lines look like '<cell>: <row> ; <row>'", number, 1, source)
        left, right = stripped.split(":", 1)
        cells = parse_cells(left, d, number, 1, source)
        if len(cells) != 1:
            raise ParseError("one offset per matrix line", number, 1, source)
        column = content.index(":") + 2
        rows = [row.split() for row in right.split(";")]
        if len(rows) != k or any(len(row) != k for row in rows):
            raise ParseError(f"offset {left.strip()} needs a {k}x{k} matrix", number, column, source)
        if cells[0] in blocks:
            raise ParseError(f"offset {left.strip()} given twice", number, 1, source)
        blocks[cells[0]] = np.asarray(
            [[parse_int(v, "matrix entry", number, column, source) for v in row] for row in rows], dtype=np.int64
        )
    else:
        raise ParseError(f"rule {name}: missing 'end'", start, 1, source)
    try:
        return LinearRule.from_offsets(memory, q, k, blocks, name)
    except ValueError as e:
        raise ParseError(f"rule {name}: {e}", start, 1, source) from e


def parse_linear_rule_file(text: str, source: Optional[str] = None) -> LinearAssignment:
    """
    Parse a .lnuca file

    Raises:
        ParseError: With line and column of the offending token
    """
    lines = NumberedLines(text)
    name = ""
    d: Optional[int] = None
    q: Optional[int] = None
    k = 1
    memory: Optional[FiniteSet] = None
    rules: Dict[str, LinearRule] = {}
    default: Optional[str] = None
    regions: List[Tuple[int, str, str]] = []

    for number, content in lines:
        keyword, _, rest = content.strip().partition(" ")
        rest = rest.strip()
        column = content.index(rest) + 1 if rest else len(content) + 1
        if keyword == "lnuca":
            name = rest
        elif keyword == "dim":
            d = parse_int(rest, "dim", number, column, source)
            if d not in (1, 2):
                raise ParseError(f"dim must be 1 or 2, found {d}", number, column, source)
        elif keyword == "field":
            q = parse_int(rest, "field", number, column, source)
            try:
                FieldSpec(q)
            except ValueError as e:
                raise ParseError(str(e), number, column, source) from e
        elif keyword == "components":
            if rules:
                raise ParseError("'components' must come before rules", number, 1, source)
            k = parse_int(rest, "components", number, column, source)
            if k < 1:
                raise ParseError("components must be at least 1", number, column, source)
        elif keyword == "memory":
            if d is None:
                raise ParseError("'dim' must come before 'memory'", number, 1, source)
            memory = FiniteSet(d, tuple(parse_cells(rest, d, number, column, source)))
            if not memory:
                raise ParseError("memory set must be nonempty", number, column, source)
        elif keyword == "rule":
            if memory is None or q is None or d is None:
                raise ParseError("'field' and 'memory' must come before rules", number, 1, source)
            parts = rest.split(None, 2)
            if len(parts) < 2:
                raise ParseError("rule lines look like 'rule <name> <kind> ...'", number, column, source)
            rule_name, kind = parts[0], parts[1]
            arguments = parts[2] if len(parts) > 2 else ""
            if rule_name in rules:
                raise ParseError(f"rule {rule_name} defined twice", number, column, source)
            arg_column = content.index(arguments) + 1 if arguments else len(content) + 1
            try:
                if kind == "identity":
                    cells = parse_cells(arguments, d, number, arg_column, source)
                    if len(cells) > 1:
                        raise ParseError("identity takes at most one offset", number, arg_column, source)
                    rules[rule_name] = LinearRule.identity(memory, q, k, cells[0] if cells else None, rule_name)
                elif kind == "zero":
                    rules[rule_name] = LinearRule.zero(memory, q, k, rule_name)
                elif kind == "scalar":
                    if k != 1:
                        raise ParseError("scalar rules need components 1", number, arg_column, source)
                    coefficients = [parse_int(t, "coefficient", number, arg_column, source) for t in arguments.split()]
                    rules[rule_name] = LinearRule.scalar(memory, q, coefficients, rule_name)
                elif kind == "matrix":
                    rules[rule_name] = _parse_matrix_block(lines, rule_name, memory, q, k, d, number, source)
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
        raise ParseError("linear rule file needs 'dim', 'field' and 'memory'", 0, 0, source)
    if default is None or default not in rules:
        raise ParseError(f"default rule {default!r} is not defined", 0, 0, source)

    parsed_regions = []
    for number, expression, rule_name in regions:
        if rule_name not in rules:
            raise ParseError(f"region refers to undefined rule {rule_name!r}", number, 1, source)
        parsed_regions.append((parse_lattice_set(expression, d=d, line=number, column=8, source=source), rules[rule_name]))

    nuca = LinearAssignment(FieldSpec(q), k, d, memory, rules[default], tuple(parsed_regions), name)
    logger.debug(f"parsed linear rule file {source or '<input>'}: {len(parsed_regions)} regions, F_{q}^{k}")
    return nuca


def load_linear_rule_file(path: Union[str, Path]) -> LinearAssignment:
    path = Path(path)
    return parse_linear_rule_file(path.read_text(encoding="utf-8"), source=str(path))


def dump_linear_rule_file(nuca: LinearAssignment) -> str:
    """Text form with every rule written as a full matrix block"""
    lines = []
    if nuca.name:
        lines.append(f"lnuca {nuca.name}")
    lines.append(f"dim {nuca.d}")
    lines.append(f"field {nuca.q}")
    lines.append(f"components {nuca.k}")
    lines.append("memory " + " ".join(format_cell(c) for c in nuca.memory.cells))

    names: Dict[int, str] = {}
    for i, rule in enumerate(nuca.rules):
        if id(rule) in names:
            continue
        rule_name = rule.name or f"rule{i}"
        while rule_name in names.values():
            rule_name = f"{rule_name}_{i}"
        names[id(rule)] = rule_name
        lines.append(f"rule {rule_name} matrix")
        for j, m in enumerate(nuca.memory.cells):
            rows = " ; ".join(" ".join(str(v) for v in row) for row in rule.array[j].tolist())
            lines.append(f"  {format_cell(m)}: {rows}")
        lines.append("end")
    lines.append(f"default {names[id(nuca.default)]}")
    for region, rule in nuca.regions:
        lines.append(f"region {region.format()} -> {names[id(rule)]}")
    return "\n".join(lines) + "\n"
