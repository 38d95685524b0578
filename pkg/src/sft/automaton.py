"""
Transfer Automaton of a One-Dimensional SFT

ADR Note: States are the words of length 2r (codes in [0, q^{2r})); an
allowed window w of length 2r+1 is the edge from w[:-1] to w[1:]. Paths and
words are in bijection, so word counts are path counts, computed with exact
Python integers (numpy object matrices). Trimming removes states that cannot
lie on a bi-infinite path; the trimmed graph's words of length L are exactly
the globally admissible ones.
"""

import logging
from functools import cached_property
from typing import Dict, FrozenSet, Iterator, List, Optional

import numpy as np

from ..nuca.types import RuleTable
from ..utils.budget import DEFAULT_BUDGET, EnumerationBudget
from ..utils.enumeration import decode_codes, unique_rows
from ..utils.errors import PreconditionFailed
from .types import SFT

logger = logging.getLogger(__name__)


def _power(matrix: np.ndarray, exponent: int) -> np.ndarray:
    """Exact matrix power on object (Python int) arrays"""
    result = np.identity(matrix.shape[0], dtype=object)
    base = matrix.astype(object)
    while exponent:
        if exponent & 1:
            result = result.dot(base)
        base = base.dot(base)
        exponent >>= 1
    return result


class TransferAutomaton:
    """De Bruijn graph of a one-dimensional SFT"""

    def __init__(self, sft: SFT):
        if sft.d != 1:
            raise PreconditionFailed("transfer automata are built for one-dimensional SFTs")
        self.sft = sft
        self.q = sft.q
        self.r = sft.r
        self.states = sft.q ** (2 * sft.r)
        codes = sft.allowed_array
        self.edge_source = codes // sft.q
        self.edge_target = codes % self.states
        self.edge_symbol = codes % sft.q

    @cached_property
    def adjacency(self) -> np.ndarray:
        """Edge multiplicities (object ints)"""
        matrix = np.zeros((self.states, self.states), dtype=object)
        for s, t in zip(self.edge_source.tolist(), self.edge_target.tolist()):
            matrix[s, t] += 1
        return matrix

    @cached_property
    def alive(self) -> np.ndarray:
        """States on some bi-infinite path"""
        alive = np.ones(self.states, dtype=bool)
        while True:
            live_edges = alive[self.edge_source] & alive[self.edge_target]
            has_out = np.zeros(self.states, dtype=bool)
            has_in = np.zeros(self.states, dtype=bool)
            has_out[self.edge_source[live_edges]] = True
            has_in[self.edge_target[live_edges]] = True
            trimmed = alive & has_out & has_in
            if (trimmed == alive).all():
                break
            alive = trimmed
        logger.debug(f"automaton of {self.sft.name or 'SFT'}: {int(alive.sum())} of {self.states} states alive")
        return alive

    @cached_property
    def trimmed(self) -> np.ndarray:
        matrix = self.adjacency.copy()
        dead = ~self.alive
        matrix[dead, :] = 0
        matrix[:, dead] = 0
        return matrix

    def state_words(self, states: Optional[np.ndarray] = None) -> np.ndarray:
        states = np.nonzero(self.alive)[0] if states is None else states
        return decode_codes(np.asarray(states, dtype=np.int64), self.q, 2 * self.r)

    def count_words(self, length: int) -> int:
        """Number of globally admissible words of the given length"""
        if length == 0:
            return 1 if self.alive.any() else 0
        if length < 2 * self.r:
            return int(unique_rows(self.state_words()[:, :length], self.q).shape[0])
        ones = np.asarray([1 if a else 0 for a in self.alive], dtype=object)
        return int(ones.dot(_power(self.trimmed, length - 2 * self.r)).dot(ones))

    def words(self, length: int, budget: EnumerationBudget = DEFAULT_BUDGET) -> np.ndarray:
        """Globally admissible words, lexicographically sorted"""
        if length < 2 * self.r:
            return unique_rows(self.state_words()[:, :length], self.q)
        budget.check_rows(self.count_words(length), f"words of length {length}")
        rows = self.state_words()
        states = np.nonzero(self.alive)[0].astype(np.int64)
        for _ in range(length - 2 * self.r):
            budget.check_deadline()
            rows, states, _ = self._extend(rows, states, self.alive)
        return unique_rows(rows, self.q) if rows.shape[0] else rows

    def _extend(self, rows: np.ndarray, states: np.ndarray, keep: np.ndarray):
        """
        Append one symbol along every edge ending in a `keep` state

        Returns:
            (extended rows, their new states, index of the row each came from)
        """
        windows = states[:, None] * self.q + np.arange(self.q, dtype=np.int64)[None, :]
        allowed = np.isin(windows, self.sft.allowed_array) & keep[windows % self.states]
        source, symbol = np.nonzero(allowed)
        extended = np.concatenate([rows[source], symbol.astype(np.uint8)[:, None]], axis=1)
        return extended, windows[source, symbol] % self.states, source

    def closed_walks(self, length: int) -> int:
        """trace(A^length): the number of points of period dividing `length`"""
        return int(np.trace(_power(self.adjacency, length)))

    def periodic_words(self, period: int, budget: EnumerationBudget = DEFAULT_BUDGET) -> np.ndarray:
        """
        One row x(0) .. x(period-1) per point of X with period dividing `period`

        Rows are sorted lexicographically. A row starts in the state
        x(0) .. x(2r-1) and must end in the same state after `period` edges.
        """
        if period < 1:
            raise PreconditionFailed("period must be positive")
        budget.check_rows(self.closed_walks(period), f"points of period {period}")
        everything = np.ones(self.states, dtype=bool)
        origin = np.arange(self.states, dtype=np.int64)
        rows = decode_codes(origin, self.q, 2 * self.r)
        states = origin
        for _ in range(period):
            budget.check_deadline()
            rows, states, source = self._extend(rows, states, everything)
            budget.check_rows(rows.shape[0], f"walks toward period {period}")
            origin = origin[source]
        words = rows[states == origin][:, :period]
        return unique_rows(words, self.q) if words.shape[0] else words

    def reachable(self, steps: int) -> np.ndarray:
        """Boolean matrix: a walk of exactly `steps` edges joins s to t"""
        step = (self.adjacency.astype(np.int64) > 0).astype(np.int64)
        result = np.identity(self.states, dtype=np.int64)
        while steps:
            if steps & 1:
                result = np.minimum(result @ step, 1)
            step = np.minimum(step @ step, 1)
            steps >>= 1
        return result.astype(bool)

    def walk(self, source: int, target: int, steps: int) -> Optional[List[int]]:
        """Symbols read along some walk of exactly `steps` edges, or None"""
        layers = [np.zeros(self.states, dtype=bool)]
        layers[0][source] = True
        for _ in range(steps):
            current = np.zeros(self.states, dtype=bool)
            current[self.edge_target[layers[-1][self.edge_source]]] = True
            layers.append(current)
        if not layers[-1][target]:
            return None
        symbols: List[int] = []
        state = target
        for i in range(steps, 0, -1):
            candidates = np.nonzero((self.edge_target == state) & layers[i - 1][self.edge_source])[0]
            edge = int(candidates[0])
            symbols.append(int(self.edge_symbol[edge]))
            state = int(self.edge_source[edge])
        return symbols[::-1]

    def periodic_restriction_count(self, length: int, period: int) -> int:
        """
        Words of the given length that occur in a point of X with period
        dividing `period`

        Requires length >= 2r and period >= length - 2r.
        """
        span = length - 2 * self.r
        if span < 0 or period < span:
            raise PreconditionFailed("periodic restriction counts need 2r <= length <= period + 2r")
        paths = _power(self.trimmed, span)
        back = self.reachable(period - span).T
        return int(sum(paths[s, t] for s, t in zip(*np.nonzero(back)) if paths[s, t]))

    def image_word_count(self, table: RuleTable, length: int) -> int:
        """
        Distinct words of length `length` in tau(X) for a sliding block code

        ADR Note: Subset construction on the graph whose edges (windows of
        radius R >= memory radius) are labeled by the rule's output; every
        label word corresponds to the set of states it can end in, and
        distinct label words are counted per reachable subset.
        """
        reach = max(abs(m[0]) for m in table.memory.cells)
        if reach > self.r:
            raise PreconditionFailed("re-describe the SFT on a window covering the rule's memory first")
        window = [m[0] + self.r for m in table.memory.cells]
        rows = decode_codes(self.sft.allowed_array, self.q, 2 * self.r + 1)
        labels = table.apply_many(rows[:, window]) if rows.shape[0] else np.zeros(0, dtype=np.uint8)
        live = self.alive[self.edge_source] & self.alive[self.edge_target]
        moves: Dict[int, Dict[int, List[int]]] = {}
        for s, t, a in zip(self.edge_source[live].tolist(), self.edge_target[live].tolist(), labels[live].tolist()):
            moves.setdefault(a, {}).setdefault(s, []).append(t)

        frontier: Dict[FrozenSet[int], int] = {frozenset(np.nonzero(self.alive)[0].tolist()): 1}
        for _ in range(length):
            nxt: Dict[FrozenSet[int], int] = {}
            for subset, count in frontier.items():
                for symbol, edges in moves.items():
                    targets = frozenset(t for s in subset for t in edges.get(s, ()))
                    if targets:
                        nxt[targets] = nxt.get(targets, 0) + count
            frontier = nxt
        return sum(frontier.values())

    def iter_words(self, length: int) -> Iterator[List[int]]:
        """Globally admissible words in lexicographic order, lazily"""
        if length < 2 * self.r:
            for row in self.words(length):
                yield [int(v) for v in row]
            return
        words = self.state_words()
        codes = np.nonzero(self.alive)[0]
        for word, state in zip(words, codes):
            yield from self._dfs([int(v) for v in word], int(state), length)

    def _dfs(self, prefix: List[int], state: int, length: int) -> Iterator[List[int]]:
        if len(prefix) == length:
            yield list(prefix)
            return
        for symbol in range(self.q):
            window = state * self.q + symbol
            target = window % self.states
            if self.alive[target] and window in self._allowed_set:
                prefix.append(symbol)
                yield from self._dfs(prefix, target, length)
                prefix.pop()

    @cached_property
    def _allowed_set(self) -> FrozenSet[int]:
        return frozenset(self.sft.allowed)
