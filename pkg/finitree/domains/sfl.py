"""
Set-sharing with freeness and linearity (SFL), the parameter domain used for
finiteness analysis. Sharing groups are int bitsets indexed by variable id.
"""
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple

from finitree.base.domain_base import ParameterDomain
from finitree.logger import setup_logger
from finitree.terms.rsubst import check_binding
from finitree.terms.term import Term, Variable, is_var, mvars, vars_of
from finitree.utils.bitset import mask_of, members, sorted_groups, union_all

logger = setup_logger(__name__)


# -- operators on sharing sets ------------------------------------------------

def sh_rel(variables: Iterable[Variable], sh: frozenset) -> frozenset:
    """Groups meeting `variables`."""
    vmask = mask_of(variables)
    return frozenset(g for g in sh if g & vmask)


def sh_barrel(variables: Iterable[Variable], sh: frozenset) -> frozenset:
    """Groups not meeting `variables`."""
    vmask = mask_of(variables)
    return frozenset(g for g in sh if not g & vmask)


def sh_star(sh: Iterable[int]) -> frozenset:
    """Star-union: every union of one or more groups."""
    sh = frozenset(sh)
    result = set(sh)
    frontier = set(sh)
    while frontier:
        new = set()
        for a in frontier:
            for b in sh:
                u = a | b
                if u not in result:
                    new.add(u)
        result |= new
        frontier = new
    return frozenset(result)


def sh_bin(sh1: Iterable[int], sh2: Iterable[int]) -> frozenset:
    """Binary union: pairwise unions of a group from each side."""
    sh2 = tuple(sh2)
    return frozenset(a | b for a in sh1 for b in sh2)


def sh_cyclic(x: Variable, t: Term, sh: frozenset) -> frozenset:
    """Force the coupling of x with t: drop groups containing x but no other variable of t."""
    t_vars = vars_of(t)
    return sh_barrel(t_vars | {x}, sh) | sh_rel(t_vars - {x}, sh)


def sh_proj(sh: frozenset, x: Variable) -> frozenset:
    xmask = 1 << x.id
    kept = frozenset(g & ~xmask for g in sh if g != xmask)
    return (kept - {0}) | {xmask}


def sh_vars(sh: Iterable[int], universe: Iterable[Variable]) -> frozenset:
    return members(union_all(sh), universe)


# -- the domain ---------------------------------------------------------------

class SflPredicates(NamedTuple):
    ind: bool
    ground_s: bool
    ground_t: bool
    gfree_s: bool
    gfree_t: bool
    lin_s: bool
    lin_t: bool
    or_lin: bool
    share_lin: bool
    free_s: bool
    free_t: bool


class ShareQueries(NamedTuple):
    share_same_var: frozenset
    share_with_s: frozenset
    share_with_t: frozenset


@dataclass(frozen=True)
class SflElement(ParameterDomain):
    """
    An SFL element ⟨sh, f, l⟩ over the variables of interest `vi`.

    Attributes:
        vi (frozenset): variables of interest
        sh (frozenset): sharing groups as bitsets
        f (frozenset): definitely free variables
        l (frozenset): definitely linear variables
        bottom (bool): the empty description ⟨∅, VI, VI⟩
    """

    vi: frozenset
    sh: frozenset = field(default_factory=frozenset)
    f: frozenset = field(default_factory=frozenset)
    l: frozenset = field(default_factory=frozenset)
    bottom: bool = False

    def __post_init__(self):
        # free terms are linear, and so are variables outside every group
        if self.bottom:
            object.__setattr__(self, "sh", frozenset())
            object.__setattr__(self, "f", self.vi)
            object.__setattr__(self, "l", self.vi)
            return
        ground = self.vi - sh_vars(self.sh, self.vi)
        object.__setattr__(self, "l", frozenset(self.l) | ground | frozenset(self.f))

    @classmethod
    def top(cls, vi: Iterable[Variable]) -> "SflElement":
        """Description of the empty substitution: singleton groups, all free and linear."""
        vi = frozenset(vi)
        return cls(vi, frozenset(1 << v.id for v in vi), vi, vi)

    @classmethod
    def bot(cls, vi: Iterable[Variable]) -> "SflElement":
        return cls(frozenset(vi), bottom=True)

    @classmethod
    def from_groups(cls, vi, groups, f=(), l=()) -> "SflElement":
        """Build from groups given as iterables of variables."""
        sh = frozenset(mask_of(g) for g in groups) - {0}
        return cls(frozenset(vi), sh, frozenset(f), frozenset(l))

    @property
    def is_bottom(self) -> bool:
        return self.bottom

    def groups(self) -> list:
        return [sorted(members(g, self.vi)) for g in sorted_groups(self.sh)]

    def sh_vars(self) -> frozenset:
        return sh_vars(self.sh, self.vi)

    # -- predicates

    def _rel(self, t: Term) -> frozenset:
        return sh_rel(vars_of(t), self.sh)

    def ind(self, s: Term, t: Term) -> bool:
        return not (self._rel(s) & self._rel(t))

    def ground(self, t: Term) -> bool:
        return not (vars_of(t) & self.sh_vars())

    def occ_lin(self, y: Variable, t: Term) -> bool:
        if self.ground(y):
            return True
        if mvars(t)[y] != 1 or y not in self.l:
            return False
        return all(z is y or self.ind(y, z) for z in vars_of(t))

    def share_lin(self, s: Term, t: Term) -> bool:
        common = self._rel(s) & self._rel(t)
        s_vars, t_vars = vars_of(s), vars_of(t)
        for y in sh_vars(common, self.vi):
            if y in s_vars and not self.occ_lin(y, s):
                return False
            if y in t_vars and not self.occ_lin(y, t):
                return False
        return True

    def free(self, t: Term) -> bool:
        return is_var(t) and t in self.vi and t in self.f

    def gfree(self, t: Term) -> bool:
        return self.ground(t) or self.free(t)

    def lin(self, t: Term) -> bool:
        return all(self.occ_lin(y, t) for y in vars_of(t))

    def share_same_var(self, s: Term, t: Term) -> frozenset:
        return sh_vars(self._rel(s) & self._rel(t), self.vi)

    def share_with(self, t: Term) -> frozenset:
        return sh_vars(self._rel(t), self.vi)

    # -- operations

    def amgu(self, x: Variable, t: Term) -> "SflElement":
        return amgu_S(self, x, t)

    def proj(self, x: Variable) -> "SflElement":
        return proj_S(self, x)

    def merge(self, other: "SflElement") -> "SflElement":
        return sfl_merge(self, other)

    def leq(self, other: "SflElement") -> bool:
        """Order of the domain: fewer groups and more free/linear variables is more precise."""
        if self.bottom:
            return True
        if other.bottom:
            return False
        return self.sh <= other.sh and self.f >= other.f and self.l >= other.l

    def conjoin(self, other: "SflElement") -> "SflElement":
        """Independent conjunction of two descriptions over disjoint variables."""
        vi = self.vi | other.vi
        if self.bottom or other.bottom:
            return SflElement.bot(vi)
        return SflElement(vi, self.sh | other.sh, self.f | other.f, self.l | other.l)

    def restrict(self, keep: Iterable[Variable]) -> "SflElement":
        """Forget every variable outside `keep`."""
        keep = frozenset(keep) & self.vi
        if self.bottom:
            return SflElement.bot(keep)
        kmask = mask_of(keep)
        sh = frozenset(g & kmask for g in self.sh) - {0}
        return SflElement(keep, sh, self.f & keep, self.l & keep)

    def extend(self, new: Iterable[Variable]) -> "SflElement":
        """Add fresh, unbound variables."""
        new = frozenset(new) - self.vi
        if self.bottom:
            return SflElement.bot(self.vi | new)
        sh = self.sh | frozenset(1 << v.id for v in new)
        return SflElement(self.vi | new, sh, self.f | new, self.l | new)

    def havoc(self, touched: Iterable[Variable]) -> "SflElement":
        """Worst-case effect of an unknown goal over `touched`."""
        touched = frozenset(touched) & self.vi
        if self.bottom or not touched:
            return self
        rel = sh_rel(touched, self.sh)
        singles = frozenset(1 << v.id for v in touched)
        sh = sh_barrel(touched, self.sh) | sh_star(rel | singles)
        lost = sh_vars(rel, self.vi) | touched
        return SflElement(self.vi, sh, self.f - lost, self.l - lost)

    def __str__(self):
        if self.bottom:
            return "bottom"
        groups = ",".join("{" + ",".join(v.name for v in g) + "}" for g in self.groups())
        f = ",".join(v.name for v in sorted(self.f))
        l = ",".join(v.name for v in sorted(self.l))
        return f"sh={{{groups}}} f={{{f}}} l={{{l}}}"


def sfl_predicates(d: SflElement, s: Term, t: Term) -> SflPredicates:
    lin_s, lin_t = d.lin(s), d.lin(t)
    return SflPredicates(
        ind=d.ind(s, t),
        ground_s=d.ground(s),
        ground_t=d.ground(t),
        gfree_s=d.gfree(s),
        gfree_t=d.gfree(t),
        lin_s=lin_s,
        lin_t=lin_t,
        or_lin=lin_s or lin_t,
        share_lin=d.share_lin(s, t),
        free_s=d.free(s),
        free_t=d.free(t),
    )


def sfl_share_queries(d: SflElement, s: Term, t: Term) -> ShareQueries:
    return ShareQueries(d.share_same_var(s, t), d.share_with(s), d.share_with(t))


def amgu_S(d: SflElement, x: Variable, t: Term) -> SflElement:
    """
    Abstract effect of the binding x -> t on an SFL element.

    Args:
        d: the element (bottom is returned unchanged)
        x: binding lhs, a variable of interest
        t: binding rhs over the variables of interest

    Returns:
        SflElement
    """
    check_binding(x, t)
    if d.bottom:
        return d

    t_vars = vars_of(t)
    sh = d.sh
    sh_x = sh_rel((x,), sh)
    sh_t = sh_rel(t_vars, sh)
    sh_xt = sh_x & sh_t
    sh_minus = sh_barrel(t_vars | {x}, sh)

    free_x, free_t = d.free(x), d.free(t)
    lin_x, lin_t = d.lin(x), d.lin(t)

    if free_x or free_t:
        sh2 = sh_bin(sh_x, sh_t)
    elif lin_x and lin_t:
        star_xt = sh_star(sh_xt)
        sh2 = sh_bin(sh_x | sh_bin(sh_x, star_xt), sh_t | sh_bin(sh_t, star_xt))
    elif lin_x:
        sh2 = sh_bin(sh_star(sh_x), sh_t)
    elif lin_t:
        sh2 = sh_bin(sh_x, sh_star(sh_t))
    else:
        sh2 = sh_bin(sh_star(sh_x), sh_star(sh_t))

    new_sh = sh_cyclic(x, t, sh_minus | sh2)

    s_x = sh_vars(sh_x, d.vi)
    s_t = sh_vars(sh_t, d.vi)

    if free_x and free_t:
        f = d.f
    elif free_x:
        f = d.f - s_x
    elif free_t:
        f = d.f - s_t
    else:
        f = d.f - (s_x | s_t)

    if lin_x and lin_t:
        l2 = d.l - (s_x & s_t)
    elif lin_x:
        l2 = d.l - s_x
    elif lin_t:
        l2 = d.l - s_t
    else:
        l2 = d.l - (s_x | s_t)

    ground = d.vi - sh_vars(new_sh, d.vi)
    return SflElement(d.vi, new_sh, f, ground | f | l2)


def proj_S(d: SflElement, x: Variable) -> SflElement:
    if d.bottom:
        return d
    return SflElement(d.vi, sh_proj(d.sh, x), d.f | {x}, d.l | {x})


def sfl_merge(d1: SflElement, d2: SflElement) -> SflElement:
    """Least upper bound: union of groups, intersection of free and linear sets."""
    if d1.bottom:
        return d2
    if d2.bottom:
        return d1
    return SflElement(d1.vi | d2.vi, d1.sh | d2.sh, d1.f & d2.f, d1.l & d2.l)
