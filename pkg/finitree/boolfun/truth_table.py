from typing import Callable, Iterable, Mapping, Optional

import numpy as np

from finitree.exceptions import UnknownVariable
from finitree.terms.term import Variable


class TruthTable:
    """
    Boolean function stored as its full table of 2^n values. Row index bit i
    is the value of `variables[i]`. Only meant for a handful of variables.
    """

    __slots__ = ("variables", "table", "_index")

    def __init__(self, variables: Iterable[Variable], table: np.ndarray):
        self.variables = tuple(variables)
        self.table = np.asarray(table, dtype=bool)
        self._index = {v: i for i, v in enumerate(self.variables)}
        if self.table.shape != (1 << len(self.variables),):
            raise ValueError(f"table of shape {self.table.shape} for {len(self.variables)} variables")

    # -- constructors

    @classmethod
    def _rows(cls, n: int) -> np.ndarray:
        return np.arange(1 << n, dtype=np.int64)

    @classmethod
    def top(cls, variables) -> "TruthTable":
        variables = tuple(variables)
        return cls(variables, np.ones(1 << len(variables), dtype=bool))

    @classmethod
    def bot(cls, variables) -> "TruthTable":
        variables = tuple(variables)
        return cls(variables, np.zeros(1 << len(variables), dtype=bool))

    @classmethod
    def var(cls, variables, x: Variable) -> "TruthTable":
        variables = tuple(variables)
        if x not in variables:
            raise UnknownVariable(f"variable {x.name} is not in the table")
        i = variables.index(x)
        return cls(variables, (cls._rows(len(variables)) >> i) & 1 == 1)

    @classmethod
    def conj_all(cls, variables, subset: Iterable[Variable]) -> "TruthTable":
        result = cls.top(variables)
        for x in subset:
            result = result & cls.var(variables, x)
        return result

    @classmethod
    def from_function(cls, variables, fn: Callable[[Mapping[Variable, bool]], bool]) -> "TruthTable":
        variables = tuple(variables)
        n = len(variables)
        values = np.zeros(1 << n, dtype=bool)
        for row in range(1 << n):
            assignment = {v: bool(row >> i & 1) for i, v in enumerate(variables)}
            values[row] = fn(assignment)
        return cls(variables, values)

    # -- helpers

    def _bit(self, x: Variable) -> int:
        if x not in self._index:
            raise UnknownVariable(f"variable {x.name} is not in the table")
        return 1 << self._index[x]

    def _same(self, other: "TruthTable") -> None:
        if other.variables != self.variables:
            raise ValueError("truth tables over different variables")

    # -- operations

    def __eq__(self, other):
        return (isinstance(other, TruthTable) and other.variables == self.variables
                and np.array_equal(other.table, self.table))

    def __hash__(self):
        return hash((self.variables, self.table.tobytes()))

    def __and__(self, other):
        self._same(other)
        return TruthTable(self.variables, self.table & other.table)

    def __or__(self, other):
        self._same(other)
        return TruthTable(self.variables, self.table | other.table)

    def __invert__(self):
        return TruthTable(self.variables, ~self.table)

    def implies(self, other):
        return ~self | other

    def iff(self, other):
        return (self & other) | (~self & ~other)

    def restrict(self, x: Variable, value: bool) -> "TruthTable":
        bit = self._bit(x)
        rows = self._rows(len(self.variables))
        source = rows | bit if value else rows & ~bit
        return TruthTable(self.variables, self.table[source])

    def rename(self, x: Variable, y: Variable) -> "TruthTable":
        """φ[y/x]: read the value of y where φ reads x."""
        bx, by = self._bit(x), self._bit(y)
        rows = self._rows(len(self.variables))
        source = np.where(rows & by, rows | bx, rows & ~bx)
        return TruthTable(self.variables, self.table[source])

    def exists(self, variables) -> "TruthTable":
        if isinstance(variables, Variable):
            variables = (variables,)
        result = self
        for x in variables:
            result = result.restrict(x, True) | result.restrict(x, False)
        return result

    def is_top(self) -> bool:
        return bool(self.table.all())

    def is_bot(self) -> bool:
        return not self.table.any()

    def is_pos(self) -> bool:
        return bool(self.table[-1])

    def pos_part(self, vi: Optional[Iterable[Variable]] = None) -> "TruthTable":
        vi = self.variables if vi is None else vi
        return self | TruthTable.conj_all(self.variables, vi)

    def entails(self, other: "TruthTable") -> bool:
        self._same(other)
        return not (self.table & ~other.table).any()

    def true_set(self, vi: Optional[Iterable[Variable]] = None) -> frozenset:
        vi = self.variables if vi is None else vi
        rows = self._rows(len(self.variables))
        return frozenset(x for x in vi if not (self.table & ((rows & self._bit(x)) == 0)).any())

    def false_set(self, vi: Optional[Iterable[Variable]] = None) -> frozenset:
        vi = self.variables if vi is None else vi
        rows = self._rows(len(self.variables))
        return frozenset(x for x in vi if not (self.table & ((rows & self._bit(x)) != 0)).any())

    def support(self) -> frozenset:
        return frozenset(x for x in self.variables if self.restrict(x, True) != self.restrict(x, False))

    def evaluate(self, assignment: Mapping[Variable, bool]) -> bool:
        row = 0
        for i, v in enumerate(self.variables):
            if v not in assignment:
                raise UnknownVariable(f"no value for {v.name}")
            if assignment[v]:
                row |= 1 << i
        return bool(self.table[row])

    def __repr__(self):
        names = ",".join(v.name for v in self.variables)
        bits = "".join("1" if b else "0" for b in self.table)
        return f"TruthTable([{names}] {bits})"
