"""
Reduced ordered binary decision diagrams. Variable levels are variable ids,
so the order follows the registry. One manager per analysis; managers are not
synchronized.
"""
import sys
from typing import Iterable, Mapping, Optional

from finitree.boolfun.truth_table import TruthTable
from finitree.config import get_config
from finitree.exceptions import UnknownVariable
from finitree.logger import setup_logger
from finitree.terms.term import Variable

logger = setup_logger(__name__)
cfg = get_config()

NODE_BUDGET = cfg["boolfun"]["node_budget"]
LEAF_LEVEL = sys.maxsize


class Node:
    __slots__ = ("id", "level", "high", "low")

    def __init__(self, id: int, level: int, high: Optional["Node"], low: Optional["Node"]):
        self.id = id
        self.level = level
        self.high = high
        self.low = low

    def is_leaf(self) -> bool:
        return self.level == LEAF_LEVEL

    def __repr__(self):
        if self.is_leaf():
            return f"Leaf({self.id})"
        return f"Node({self.id}, level={self.level})"


class BddManager:
    """
    Owner of the unique table and the operation cache.

    Args:
        variables: initial universe; more variables can be registered later
        node_budget: size above which `widen` starts forgetting variables
    """

    def __init__(self, variables: Iterable[Variable] = (), node_budget: int = NODE_BUDGET):
        self.leaf0 = Node(0, LEAF_LEVEL, None, None)
        self.leaf1 = Node(1, LEAF_LEVEL, None, None)
        self.next_id = 2
        self.unique_table = {}
        self.operation_cache = {}
        self.universe = {}
        self.node_budget = node_budget
        self.last_use = {}
        self.tick = 0
        self.register(variables)

    # -- registry

    def register(self, variables: Iterable[Variable]) -> None:
        for v in variables:
            if v.id not in self.universe:
                self.universe[v.id] = v
                self._touch(v.id)

    def variables(self) -> tuple:
        return tuple(self.universe[i] for i in sorted(self.universe))

    def _check(self, x: Variable) -> int:
        if x.id not in self.universe or self.universe[x.id] is not x:
            raise UnknownVariable(f"variable {x.name} is not registered in this manager")
        return x.id

    def _touch(self, level: int) -> None:
        self.tick += 1
        self.last_use[level] = self.tick

    # -- constructors

    def top(self) -> "BoolFn":
        return BoolFn(self, self.leaf1)

    def bot(self) -> "BoolFn":
        return BoolFn(self, self.leaf0)

    def var(self, x: Variable) -> "BoolFn":
        level = self._check(x)
        self._touch(level)
        return BoolFn(self, self.find_or_make(level, self.leaf1, self.leaf0))

    def conj_all(self, variables: Iterable[Variable]) -> "BoolFn":
        """⋀V (top for the empty set)."""
        node = self.leaf1
        for x in sorted(variables, reverse=True):
            node = self.find_or_make(self._check(x), node, self.leaf0)
        return BoolFn(self, node)

    # -- node level algorithms

    def find_or_make(self, level: int, high: Node, low: Node) -> Node:
        if high is low:
            return high
        key = (level, high.id, low.id)
        node = self.unique_table.get(key)
        if node is None:
            node = Node(self.next_id, level, high, low)
            self.next_id += 1
            self.unique_table[key] = node
        return node

    def _branches(self, node: Node, level: int) -> tuple:
        if node.level == level:
            return node.high, node.low
        return node, node

    def apply_not(self, node: Node) -> Node:
        if node is self.leaf0:
            return self.leaf1
        if node is self.leaf1:
            return self.leaf0
        key = ("not", node.id)
        if key in self.operation_cache:
            return self.operation_cache[key]
        result = self.find_or_make(node.level, self.apply_not(node.high), self.apply_not(node.low))
        self.operation_cache[key] = result
        return result

    def apply_and(self, a: Node, b: Node) -> Node:
        if a is self.leaf0 or b is self.leaf0:
            return self.leaf0
        if a is self.leaf1:
            return b
        if b is self.leaf1 or a is b:
            return a
        if a.id > b.id:
            a, b = b, a
        key = ("and", a.id, b.id)
        if key in self.operation_cache:
            return self.operation_cache[key]
        level = min(a.level, b.level)
        a_high, a_low = self._branches(a, level)
        b_high, b_low = self._branches(b, level)
        result = self.find_or_make(level, self.apply_and(a_high, b_high), self.apply_and(a_low, b_low))
        self.operation_cache[key] = result
        return result

    def apply_or(self, a: Node, b: Node) -> Node:
        if a is self.leaf1 or b is self.leaf1:
            return self.leaf1
        if a is self.leaf0:
            return b
        if b is self.leaf0 or a is b:
            return a
        if a.id > b.id:
            a, b = b, a
        key = ("or", a.id, b.id)
        if key in self.operation_cache:
            return self.operation_cache[key]
        level = min(a.level, b.level)
        a_high, a_low = self._branches(a, level)
        b_high, b_low = self._branches(b, level)
        result = self.find_or_make(level, self.apply_or(a_high, b_high), self.apply_or(a_low, b_low))
        self.operation_cache[key] = result
        return result

    def restrict_node(self, node: Node, level: int, value: bool) -> Node:
        if node.level > level:
            return node
        if node.level == level:
            return node.high if value else node.low
        key = ("restrict", node.id, level, value)
        if key in self.operation_cache:
            return self.operation_cache[key]
        result = self.find_or_make(node.level,
                                   self.restrict_node(node.high, level, value),
                                   self.restrict_node(node.low, level, value))
        self.operation_cache[key] = result
        return result

    def exists_node(self, node: Node, levels: frozenset) -> Node:
        if node.is_leaf() or not levels or node.level > max(levels):
            return node
        key = ("exists", node.id, levels)
        if key in self.operation_cache:
            return self.operation_cache[key]
        high = self.exists_node(node.high, levels)
        low = self.exists_node(node.low, levels)
        if node.level in levels:
            result = self.apply_or(high, low)
        else:
            result = self.find_or_make(node.level, high, low)
        self.operation_cache[key] = result
        return result

    def support_levels(self, node: Node) -> set:
        levels = set()
        for n in self.node_list(node):
            if not n.is_leaf():
                levels.add(n.level)
        return levels

    def node_list(self, node: Node) -> list:
        seen = {}
        stack = [node]
        while stack:
            n = stack.pop()
            if n.id in seen:
                continue
            seen[n.id] = n
            if not n.is_leaf():
                stack.append(n.high)
                stack.append(n.low)
        return list(seen.values())

    # -- widening

    def widen(self, fn: "BoolFn", budget: Optional[int] = None) -> "BoolFn":
        """
        Forget least-recently-used variables until `fn` has at most `budget`
        nodes. The result is entailed by `fn`.
        """
        budget = self.node_budget if budget is None else budget
        while fn.node_count() > budget:
            support = self.support_levels(fn.node)
            level = min(support, key=lambda lv: self.last_use.get(lv, 0))
            logger.warning(
                f"node budget {budget} exceeded, quantifying out {self.universe[level].name}"
            )
            fn = BoolFn(self, self.exists_node(fn.node, frozenset((level,))))
        return fn


class BoolFn:
    """Immutable handle on a canonical Boolean function of a BddManager."""

    __slots__ = ("manager", "node")

    def __init__(self, manager: BddManager, node: Node):
        self.manager = manager
        self.node = node

    def _wrap(self, node: Node) -> "BoolFn":
        return BoolFn(self.manager, node)

    def _same(self, other: "BoolFn") -> None:
        if other.manager is not self.manager:
            raise ValueError("Boolean functions from different managers")

    def __eq__(self, other):
        return isinstance(other, BoolFn) and other.manager is self.manager and other.node is self.node

    def __hash__(self):
        return self.node.id

    def __and__(self, other: "BoolFn") -> "BoolFn":
        self._same(other)
        return self._wrap(self.manager.apply_and(self.node, other.node))

    def __or__(self, other: "BoolFn") -> "BoolFn":
        self._same(other)
        return self._wrap(self.manager.apply_or(self.node, other.node))

    def __invert__(self) -> "BoolFn":
        return self._wrap(self.manager.apply_not(self.node))

    def implies(self, other: "BoolFn") -> "BoolFn":
        return ~self | other

    def iff(self, other: "BoolFn") -> "BoolFn":
        return (self & other) | (~self & ~other)

    def is_top(self) -> bool:
        return self.node is self.manager.leaf1

    def is_bot(self) -> bool:
        return self.node is self.manager.leaf0

    def restrict(self, x: Variable, value: bool) -> "BoolFn":
        level = self.manager._check(x)
        self.manager._touch(level)
        return self._wrap(self.manager.restrict_node(self.node, level, bool(value)))

    def rename(self, x: Variable, y: Variable) -> "BoolFn":
        """φ[y/x]: every assignment reads y where φ read x."""
        if x is y:
            return self
        y_fn = self.manager.var(y)
        return (y_fn & self.restrict(x, True)) | (~y_fn & self.restrict(x, False))

    def exists(self, variables) -> "BoolFn":
        """Existential quantification of one variable or an iterable of them."""
        if isinstance(variables, Variable):
            variables = (variables,)
        levels = frozenset(self.manager._check(x) for x in variables)
        return self._wrap(self.manager.exists_node(self.node, levels))

    def evaluate(self, assignment: Mapping[Variable, bool]) -> bool:
        by_level = {x.id: bool(value) for x, value in assignment.items()}
        node = self.node
        while not node.is_leaf():
            if node.level not in by_level:
                raise UnknownVariable(
                    f"no value for {self.manager.universe[node.level].name}"
                )
            node = node.high if by_level[node.level] else node.low
        return node is self.manager.leaf1

    def is_pos(self) -> bool:
        """True under the everything-is-true assignment."""
        node = self.node
        while not node.is_leaf():
            node = node.high
        return node is self.manager.leaf1

    def pos_part(self, vi: Optional[Iterable[Variable]] = None) -> "BoolFn":
        """φ ∨ ⋀VI, the strongest positive function entailed by φ."""
        vi = self.manager.variables() if vi is None else vi
        return self | self.manager.conj_all(vi)

    def entails(self, other: "BoolFn") -> bool:
        self._same(other)
        return self.manager.apply_and(self.node, self.manager.apply_not(other.node)) is self.manager.leaf0

    def true_set(self, vi: Optional[Iterable[Variable]] = None) -> frozenset:
        """Variables x of VI with φ ⊨ x."""
        vi = self.manager.variables() if vi is None else vi
        leaf0 = self.manager.leaf0
        return frozenset(
            x for x in vi
            if self.manager.restrict_node(self.node, self.manager._check(x), False) is leaf0
        )

    def false_set(self, vi: Optional[Iterable[Variable]] = None) -> frozenset:
        """Variables x of VI with φ ⊨ ¬x."""
        vi = self.manager.variables() if vi is None else vi
        leaf0 = self.manager.leaf0
        return frozenset(
            x for x in vi
            if self.manager.restrict_node(self.node, self.manager._check(x), True) is leaf0
        )

    def support(self) -> frozenset:
        return frozenset(self.manager.universe[lv] for lv in self.manager.support_levels(self.node))

    def node_count(self) -> int:
        return len(self.manager.node_list(self.node))

    def cubes(self) -> list:
        """Paths to the 1-leaf as lists of (variable, value), high branches first."""
        result = []

        def walk(node, path):
            if node is self.manager.leaf1:
                result.append(list(path))
                return
            if node is self.manager.leaf0:
                return
            var = self.manager.universe[node.level]
            walk(node.high, path + [(var, True)])
            walk(node.low, path + [(var, False)])

        walk(self.node, [])
        return result

    def to_sop(self) -> str:
        """Sum-of-products text: '1', '0' or cubes like 'x & ~y | z'."""
        if self.is_top():
            return "1"
        if self.is_bot():
            return "0"
        terms = []
        for cube in self.cubes():
            literals = [v.name if value else f"~{v.name}" for v, value in cube]
            terms.append(" & ".join(literals) if literals else "1")
        return " | ".join(terms)

    def to_truth_table(self, vi: Optional[Iterable[Variable]] = None):
        vi = tuple(sorted(self.manager.variables() if vi is None else vi))
        return TruthTable.from_function(vi, self.evaluate)

    def __repr__(self):
        return f"BoolFn({self.to_sop()})"
