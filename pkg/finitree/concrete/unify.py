from typing import Iterable, Optional

from finitree.exceptions import ClashFailure
from finitree.logger import setup_logger
from finitree.terms.rsubst import RSubst
from finitree.terms.term import Functor, Term, Variable, vars_of

logger = setup_logger(__name__)


class UnionFind:
    """
    Union-find over term nodes (variables and compound subterms). Each class
    remembers at most one compound node, its schema.
    """

    def __init__(self):
        self.representative = {}
        self.size = {}
        self.schema = {}

    def make(self, node):
        if node not in self.representative:
            self.representative[node] = node
            self.size[node] = 1
            self.schema[node] = None if isinstance(node, Variable) else node

    def find(self, node):
        self.make(node)
        root = node
        while self.representative[root] is not root:
            root = self.representative[root]
        # path compression
        while self.representative[node] is not root:
            self.representative[node], node = root, self.representative[node]
        return root

    def union(self, a, b) -> Optional[tuple]:
        """
        Merge the classes of a and b.

        Returns:
            the two schemas when both classes had one (the caller has to
            unify their arguments), None otherwise

        Raises:
            ClashFailure: the two schemas have different functors or ranks
        """
        ra, rb = self.find(a), self.find(b)
        if ra is rb:
            return None
        sa, sb = self.schema[ra], self.schema[rb]
        if sa is not None and sb is not None:
            if sa.name != sb.name or sa.rank != sb.rank:
                raise ClashFailure(
                    f"cannot unify {sa.name}/{sa.rank} with {sb.name}/{sb.rank}"
                )

        # smaller-to-larger merging
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.representative[rb] = ra
        self.size[ra] += self.size[rb]
        self.schema[ra] = sa if sa is not None else sb

        if sa is not None and sb is not None:
            return sa, sb
        return None


def rat_unify(eqs: Iterable, base: RSubst = RSubst()) -> RSubst:
    """
    Rational-tree unification: no occurs check, the only failure is a clash.

    Args:
        eqs: iterable of (s, t) term pairs
        base: a valid RSubst whose bindings are taken as further equations

    Returns:
        one canonical most general solution in rational solved form. Every
        class of unified variables is represented by its lowest-id variable,
        bound to the class schema when there is one; the other variables of
        the class are bound to the representative.

    Raises:
        ClashFailure
    """
    uf = UnionFind()
    pending = list(base.items()) + list(eqs)
    variables = set()
    for s, t in pending:
        variables |= vars_of(s) | vars_of(t)

    while pending:
        s, t = pending.pop()
        merged = uf.union(s, t)
        if merged is not None:
            sa, sb = merged
            pending.extend(zip(sa.args, sb.args))

    # one representative per class, the lowest-id variable
    rep = {}
    for var in sorted(variables):
        root = uf.find(var)
        rep.setdefault(root, var)

    mapping = {}
    for var in variables:
        root = uf.find(var)
        if rep[root] is not var:
            mapping[var] = rep[root]

    bindings = {}
    for root, var in rep.items():
        schema = uf.schema[root]
        if schema is not None:
            bindings[var] = _read_back(schema, uf, rep)
    for var, r in mapping.items():
        bindings[var] = r

    result = RSubst(bindings)
    logger.debug(f"rat_unify: {len(result)} bindings")
    return result


def _read_back(t: Term, uf: UnionFind, rep: dict) -> Term:
    # variables inside the schema are replaced by their class representatives
    if isinstance(t, Variable):
        return rep[uf.find(t)]
    if not t.args:
        return t
    return Functor(t.name, tuple(_read_back(arg, uf, rep) for arg in t.args))


def unify_bindings(sigma: RSubst, x: Variable, t: Term) -> RSubst:
    """mgs(σ ∪ {x = t})."""
    return rat_unify([(x, t)], base=sigma)
