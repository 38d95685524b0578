"""
Lattice Set Expression Parser

ADR Note: Recursive descent over the grammar in
documentation/ADR-002-file-grammars.md. The parser returns builders
(d -> LatticeSet) and instantiates them once the dimension is known, so
dimension-free atoms like `all` or `finite{}` take the dimension of the
rest of the expression.
"""

import re
from dataclasses import dataclass
from typing import Callable, List, Optional, Tuple

from ..lattice.types import FiniteSet
from ..utils.errors import DimensionMismatch, ParseError
from .lattice_set import (
    Complement,
    CosetAtom,
    Difference,
    FiniteAtom,
    HalfSpaceAtom,
    Intersection,
    LatticeSet,
    PowerAtom,
    Union,
    Universe,
)

_TOKEN = re.compile(r"\s*(?:(?P<int>-?\d+)|(?P<name>[a-z_]+)|(?P<op>>=|<=|>|<)|(?P<punct>[(){},;|]))")

Builder = Callable[[int], LatticeSet]


@dataclass(frozen=True)
class _Token:
    kind: str
    text: str
    position: int


def _tokenize(text: str, line: int, column: int, source: Optional[str]) -> List[_Token]:
    tokens = []
    position = 0
    stripped_end = len(text.rstrip())
    while position < stripped_end:
        match = _TOKEN.match(text, position)
        if match is None or match.end() == position:
            offset = len(text) - len(text[position:].lstrip())
            raise ParseError(f"unexpected character {text[offset]!r}", line, column + offset, source)
        kind = match.lastgroup
        tokens.append(_Token(kind, match.group(kind), match.start(kind)))
        position = match.end()
    return tokens


class _Parser:
    def __init__(self, text: str, d: Optional[int], line: int, column: int, source: Optional[str]):
        self.line = line
        self.column = column
        self.source = source
        self.tokens = _tokenize(text, line, column, source)
        self.index = 0
        self.d = d

    def error(self, message: str, token: Optional[_Token] = None) -> ParseError:
        if token is None:
            token = self.tokens[self.index] if self.index < len(self.tokens) else None
        offset = token.position if token is not None else (self.tokens[-1].position + 1 if self.tokens else 0)
        return ParseError(message, self.line, self.column + offset, self.source)

    def peek(self) -> Optional[_Token]:
        return self.tokens[self.index] if self.index < len(self.tokens) else None

    def next(self) -> _Token:
        token = self.peek()
        if token is None:
            raise self.error("unexpected end of expression")
        self.index += 1
        return token

    def expect(self, text: str) -> _Token:
        token = self.next()
        if token.text != text:
            raise self.error(f"expected {text!r}, found {token.text!r}", token)
        return token

    def accept(self, text: str) -> bool:
        token = self.peek()
        if token is not None and token.text == text:
            self.index += 1
            return True
        return False

    def integer(self) -> int:
        token = self.next()
        if token.kind != "int":
            raise self.error(f"expected an integer, found {token.text!r}", token)
        return int(token.text)

    def vector(self) -> Tuple[int, ...]:
        values = [self.integer()]
        while self.accept(","):
            values.append(self.integer())
        return tuple(values)

    def set_dimension(self, d: int, token: _Token) -> None:
        if d not in (1, 2):
            raise self.error(f"only Z^1 and Z^2 are supported, got a vector of length {d}", token)
        if self.d is None:
            self.d = d
        elif self.d != d:
            raise self.error(f"dimension mismatch: expected Z^{self.d}, found Z^{d}", token)

    def parse(self) -> Builder:
        builder = self.expression()
        if self.peek() is not None:
            raise self.error(f"unexpected trailing {self.peek().text!r}")
        return builder

    def expression(self) -> Builder:
        token = self.next()
        if token.kind != "name":
            raise self.error(f"expected a set expression, found {token.text!r}", token)
        handler = getattr(self, f"_parse_{token.text}", None)
        if handler is None:
            raise self.error(f"unknown set constructor {token.text!r}", token)
        return handler(token)

    def _parse_all(self, token: _Token) -> Builder:
        return lambda d: Universe(d)

    def _parse_empty(self, token: _Token) -> Builder:
        return lambda d: FiniteAtom(FiniteSet.empty(d))

    def _parse_finite(self, token: _Token) -> Builder:
        self.expect("{")
        cells: List[Tuple[int, ...]] = []
        if not self.accept("}"):
            while True:
                start = self.peek()
                if self.accept("("):
                    cell = self.vector()
                    self.expect(")")
                else:
                    cell = (self.integer(),)
                self.set_dimension(len(cell), start)
                cells.append(cell)
                if self.accept("}"):
                    break
                self.expect(",")
        return lambda d: FiniteAtom(FiniteSet(d, tuple(cells)))

    def _parse_interval(self, token: _Token) -> Builder:
        self.expect("(")
        a = self.integer()
        self.expect(",")
        b = self.integer()
        self.expect(")")
        self.set_dimension(1, token)
        return lambda d: FiniteAtom(FiniteSet.interval(a, b))

    def _parse_box(self, token: _Token) -> Builder:
        self.expect("(")
        ranges = []
        while True:
            lo = self.integer()
            self.expect(",")
            hi = self.integer()
            ranges.append((lo, hi))
            if self.accept(")"):
                break
            self.expect(";")
        self.set_dimension(len(ranges), token)
        lows = tuple(r[0] for r in ranges)
        highs = tuple(r[1] for r in ranges)
        return lambda d: FiniteAtom(FiniteSet.rect(lows, highs))

    def _parse_coset(self, token: _Token) -> Builder:
        self.expect("(")
        generators: List[Tuple[int, ...]] = []
        if self.peek() is not None and self.peek().text != "|":
            generators.append(self.vector())
            while self.accept(";"):
                generators.append(self.vector())
        if self.accept("|"):
            offset = self.vector()
            self.expect(")")
            for g in generators:
                self.set_dimension(len(g), token)
            self.set_dimension(len(offset), token)
            return lambda d: CosetAtom(tuple(generators), offset)
        self.expect(")")
        if len(generators) != 1 or len(generators[0]) != 2:
            raise self.error("coset(a,b) takes exactly two integers; use coset(g1;g2|offset) otherwise", token)
        self.set_dimension(1, token)
        a, b = generators[0]
        return lambda d: CosetAtom(((a,),), (b,))

    def _parse_halfspace(self, token: _Token) -> Builder:
        self.expect("(")
        normal = self.vector()
        self.expect(";")
        op = self.next()
        if op.kind != "op":
            raise self.error(f"expected one of >= <= > <, found {op.text!r}", op)
        self.expect(";")
        bound = self.integer()
        self.expect(")")
        self.set_dimension(len(normal), token)
        if not any(normal):
            raise self.error("half-space normal must be nonzero", token)
        if op.text in ("<=", "<"):
            normal = tuple(-v for v in normal)
            bound = -bound
        if op.text in (">", "<"):
            bound += 1
        return lambda d: HalfSpaceAtom(normal, bound)

    def _parse_powers(self, token: _Token) -> Builder:
        self.expect("(")
        k = self.integer()
        self.expect(")")
        if k < 2:
            raise self.error("powers(k) needs k >= 2", token)
        self.set_dimension(1, token)
        return lambda d: PowerAtom(k)

    def _operands(self) -> List[Builder]:
        self.expect("(")
        parts = [self.expression()]
        while self.accept(","):
            parts.append(self.expression())
        self.expect(")")
        return parts

    def _parse_union(self, token: _Token) -> Builder:
        parts = self._operands()
        return lambda d: Union(tuple(p(d) for p in parts))

    def _parse_intersect(self, token: _Token) -> Builder:
        parts = self._operands()
        return lambda d: Intersection(tuple(p(d) for p in parts))

    def _parse_complement(self, token: _Token) -> Builder:
        parts = self._operands()
        if len(parts) != 1:
            raise self.error("complement takes one operand", token)
        return lambda d: Complement(parts[0](d))

    def _parse_diff(self, token: _Token) -> Builder:
        parts = self._operands()
        if len(parts) != 2:
            raise self.error("diff takes two operands", token)
        return lambda d: Difference(parts[0](d), parts[1](d))

    def _parse_translate(self, token: _Token) -> Builder:
        self.expect("(")
        inner = self.expression()
        self.expect("|")
        g = self.vector()
        self.expect(")")
        self.set_dimension(len(g), token)
        return lambda d: inner(d).translate(g)


def parse_lattice_set(
    text: str,
    d: Optional[int] = None,
    line: int = 1,
    column: int = 1,
    source: Optional[str] = None,
) -> LatticeSet:
    """
    Parse a set expression

    Args:
        text: Expression, e.g. "union(coset(4,0),coset(6,0))"
        d: Lattice dimension; inferred from the expression when None
           (defaulting to 1 when nothing fixes it)
        line, column, source: Location used in ParseError messages

    Raises:
        ParseError: Syntax or dimension error
    """
    parser = _Parser(text, d, line, column, source)
    builder = parser.parse()
    try:
        return builder(parser.d or 1)
    except (DimensionMismatch, ValueError) as e:
        raise ParseError(str(e), line, column, source) from e


def format_expression(S: LatticeSet) -> str:
    """Canonical text of S; parse_lattice_set(format_expression(S)) == S"""
    return S.format()
