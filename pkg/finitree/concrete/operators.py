from typing import Iterable

from finitree.logger import setup_logger
from finitree.terms.rsubst import RSubst
from finitree.terms.term import Variable, vars_of

logger = setup_logger(__name__)


class CoFiniteSet:
    """
    A co-finite set of variables, stored as its finite complement.

    Attributes:
        complement (frozenset): the variables NOT in the set
    """

    __slots__ = ("complement",)

    def __init__(self, complement: Iterable[Variable] = ()):
        self.complement = frozenset(complement)

    def __contains__(self, var: Variable) -> bool:
        return var not in self.complement

    def __eq__(self, other):
        return isinstance(other, CoFiniteSet) and self.complement == other.complement

    def __hash__(self):
        return hash(("cofinite", self.complement))

    def restrict(self, variables: Iterable[Variable]) -> frozenset:
        """The finite intersection with `variables`."""
        return frozenset(v for v in variables if v not in self.complement)

    def __repr__(self):
        names = ", ".join(v.name for v in sorted(self.complement))
        return f"Vars \\ {{{names}}}"


def occ(sigma: RSubst, v: Variable) -> frozenset:
    """
    Variables whose rational tree under σ contains the parameter variable v.

    occ_0 = {v} minus dom(σ), occ_n = {y : vars(yσ) meets occ_(n-1)}; the
    sequence is stable after #σ rounds.
    """
    dom = sigma.dom
    if v in dom:
        return frozenset()

    current = frozenset((v,))
    for _ in range(len(sigma)):
        nxt = {v}
        for y, t in sigma.items():
            if vars_of(t) & current:
                nxt.add(y)
        nxt = frozenset(nxt)
        if nxt == current:
            break
        current = nxt
    return current


def gvars(sigma: RSubst) -> frozenset:
    """Domain variables of σ whose rational tree is ground."""
    dom = sigma.dom
    reached = set()
    for v in sigma.vars - dom:
        reached |= occ(sigma, v)
    return frozenset(dom - reached)


def hvars(sigma: RSubst) -> CoFiniteSet:
    """
    Variables whose rational tree under σ is a finite tree.

    hvars_0 = Vars minus dom(σ); each round adds the domain variables whose
    image only mentions variables already known finite. Only domain variables
    can be missing, so the result is returned by its complement.
    """
    dom = sigma.dom
    finite = set()

    rounds = 0
    changed = True
    while changed:
        changed = False
        rounds += 1
        for y, t in sigma.items():
            if y in finite:
                continue
            if all(z not in dom or z in finite for z in vars_of(t)):
                finite.add(y)
                changed = True

    complement = dom - finite
    logger.debug(f"hvars: {rounds} rounds, {len(complement)} cyclic domain variables")
    return CoFiniteSet(complement)
