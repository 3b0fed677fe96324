import threading
import weakref
from collections import Counter
from typing import Iterable, Mapping, Union

from finitree.logger import setup_logger

logger = setup_logger(__name__)


class Variable:
    """
    A logic variable. Variables are interned by a VariableRegistry, so equality
    is identity and ordering follows the registry id.

    Attributes:
        id (int): unique id inside the registry (also the BDD variable level).
        name (str): printable name.
    """

    __slots__ = ("id", "name", "__weakref__")

    def __init__(self, id: int, name: str):
        self.id = id
        self.name = name

    def __hash__(self):
        return self.id

    def __lt__(self, other: "Variable"):
        return self.id < other.id

    def __repr__(self):
        return self.name


class Functor:
    """
    A compound term (or a constant when rank is 0). Instances are hash-consed:
    building the same name/args twice returns the same object.
    """

    __slots__ = ("name", "args", "_vars", "_mvars", "_size", "__weakref__")

    _table = weakref.WeakValueDictionary()
    _lock = threading.Lock()

    def __new__(cls, name: str, args: Iterable["Term"] = ()):
        args = tuple(args)
        key = (name, tuple(id(a) for a in args))
        with cls._lock:
            node = cls._table.get(key)
            if node is not None and node.args == args:
                return node
            node = super().__new__(cls)
            node.name = name
            node.args = args
            node._vars = None
            node._mvars = None
            node._size = None
            cls._table[key] = node
        return node

    @property
    def rank(self) -> int:
        return len(self.args)

    def __hash__(self):
        return id(self)

    def __eq__(self, other):
        return self is other

    def __repr__(self):
        return format_term(self)


Term = Union[Variable, Functor]


class VariableRegistry:
    """
    Interning table for variables. One registry is used per analysis; it is
    internally synchronized so terms can be built from several threads.
    """

    def __init__(self):
        self._lock = threading.Lock()
        self._by_name = {}
        self._by_id = []
        self._fresh_counter = 0

    def variable(self, name: str) -> Variable:
        """Return the variable called `name`, creating it on first use."""
        with self._lock:
            var = self._by_name.get(name)
            if var is None:
                var = Variable(len(self._by_id), name)
                self._by_name[name] = var
                self._by_id.append(var)
            return var

    def variables(self, *names: str) -> tuple:
        return tuple(self.variable(name) for name in names)

    def new(self, name: str) -> Variable:
        """A new variable printed as `name`, distinct from every other one (not interned)."""
        with self._lock:
            var = Variable(len(self._by_id), name)
            self._by_id.append(var)
            return var

    def fresh(self, prefix: str = "_G") -> Variable:
        """Create a variable whose name has never been used in this registry."""
        with self._lock:
            while True:
                self._fresh_counter += 1
                name = f"{prefix}{self._fresh_counter}"
                if name not in self._by_name:
                    break
            var = Variable(len(self._by_id), name)
            self._by_name[name] = var
            self._by_id.append(var)
            return var

    def __getitem__(self, id: int) -> Variable:
        return self._by_id[id]

    def __len__(self):
        return len(self._by_id)


def const(name: str) -> Functor:
    return Functor(name, ())


def is_var(t: Term) -> bool:
    return isinstance(t, Variable)


def mvars(t: Term) -> Counter:
    """Multiset of the variables occurring in t."""
    if isinstance(t, Variable):
        return Counter({t: 1})
    if t._mvars is None:
        counts = Counter()
        for arg in t.args:
            counts.update(mvars(arg))
        t._mvars = counts
    return Counter(t._mvars)


def vars_of(t: Term) -> frozenset:
    if isinstance(t, Variable):
        return frozenset((t,))
    if t._vars is None:
        t._vars = frozenset().union(*(vars_of(arg) for arg in t.args)) if t.args else frozenset()
    return t._vars


def term_vars(t: Term) -> tuple:
    """
    Set and multiset of the variables of a term.

    Args:
        t: the term

    Returns:
        (vars, counts): frozenset of variables and a Counter variable -> occurrences
    """
    return vars_of(t), mvars(t)


def occ_lin(y: Variable, t: Term) -> bool:
    """True when y occurs exactly once in t."""
    return mvars(t)[y] == 1


def nlvars(t: Term) -> frozenset:
    return frozenset(y for y, n in mvars(t).items() if n > 1)


def is_ground(t: Term) -> bool:
    return not vars_of(t)


def is_linear(t: Term) -> bool:
    return all(n == 1 for n in mvars(t).values())


def term_size(t: Term) -> int:
    """1 for variables, 1 + sum of the argument sizes for compounds (constants have size 1)."""
    if isinstance(t, Variable):
        return 1
    if t._size is None:
        t._size = 1 + sum(term_size(arg) for arg in t.args)
    return t._size


def apply_subst(t: Term, sigma: Mapping) -> Term:
    """
    Single simultaneous application of a substitution to a term. Domain
    variables are replaced exactly once, images are not revisited.

    Args:
        t: the term
        sigma: a mapping Variable -> Term (an RSubst or a plain dict)

    Returns:
        the term t·sigma
    """
    if isinstance(t, Variable):
        return sigma.get(t, t)
    if not t.args or not (vars_of(t) & sigma.keys()):
        return t
    return Functor(t.name, (apply_subst(arg, sigma) for arg in t.args))


def rename_term(t: Term, mapping: Mapping) -> Term:
    return apply_subst(t, mapping)


def format_term(t: Term) -> str:
    if isinstance(t, Variable):
        return t.name
    if not t.args:
        return t.name
    return f"{t.name}({', '.join(format_term(arg) for arg in t.args)})"
