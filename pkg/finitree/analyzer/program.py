from dataclasses import dataclass, field
from typing import Union

from finitree.terms.term import Functor, Term, Variable, VariableRegistry, format_term, vars_of


@dataclass(frozen=True)
class Call:
    """A predicate call (user predicate or builtin) or a clause head."""

    name: str
    args: tuple = ()

    @property
    def arity(self) -> int:
        return len(self.args)

    @property
    def indicator(self) -> str:
        return f"{self.name}/{self.arity}"

    def variables(self) -> frozenset:
        return frozenset().union(*(vars_of(a) for a in self.args)) if self.args else frozenset()

    def __str__(self):
        if not self.args:
            return self.name
        return f"{self.name}({', '.join(format_term(a) for a in self.args)})"


@dataclass(frozen=True)
class Unify:
    left: Term
    right: Term

    def variables(self) -> frozenset:
        return vars_of(self.left) | vars_of(self.right)

    def __str__(self):
        return f"{format_term(self.left)} = {format_term(self.right)}"


@dataclass(frozen=True)
class Unsupported:
    """A control construct outside the analyzed subset (cut, negation)."""

    text: str
    vars: frozenset = frozenset()

    def variables(self) -> frozenset:
        return self.vars

    def __str__(self):
        return self.text


Goal = Union[Call, Unify, Unsupported]


@dataclass(frozen=True)
class Clause:
    head: Call
    body: tuple = ()
    variables: tuple = ()
    line: int = 0

    def __str__(self):
        if not self.body:
            return f"{self.head}."
        return f"{self.head} :- {', '.join(str(g) for g in self.body)}."


@dataclass
class Program:
    """
    Clauses grouped by predicate, plus the variable registry the terms were
    built with. Formal parameters X1..Xn are created once per predicate.
    """

    clauses: list
    registry: VariableRegistry
    predicates: dict = field(default_factory=dict)
    formals: dict = field(default_factory=dict)

    def __post_init__(self):
        for clause in self.clauses:
            indicator = clause.head.indicator
            self.predicates.setdefault(indicator, []).append(clause)
            if indicator not in self.formals:
                self.formals[indicator] = tuple(
                    self.registry.new(f"X{i + 1}") for i in range(clause.head.arity)
                )

    def defines(self, indicator: str) -> bool:
        return indicator in self.predicates

    @property
    def signature(self) -> frozenset:
        """(name, rank) of every functor in the program, always with a constant and a compound."""
        found = set()

        def walk(t):
            if isinstance(t, Functor):
                found.add((t.name, t.rank))
                for a in t.args:
                    walk(a)

        for clause in self.clauses:
            for goal in (clause.head,) + tuple(clause.body):
                if isinstance(goal, Call):
                    for a in goal.args:
                        walk(a)
                elif isinstance(goal, Unify):
                    walk(goal.left)
                    walk(goal.right)
        if not any(rank == 0 for _, rank in found):
            found.add(("[]", 0))
        if not any(rank > 0 for _, rank in found):
            found.add((".", 2))
        return frozenset(found)

    def __str__(self):
        return "\n".join(str(c) for c in self.clauses)
