"""
The finiteness component H and the combined domain H x P.
"""
from dataclasses import dataclass
from typing import Iterable

from finitree.base.domain_base import ParameterDomain
from finitree.concrete.operators import hvars
from finitree.logger import setup_logger
from finitree.terms.rsubst import RSubst, check_binding
from finitree.terms.term import Term, Variable, vars_of

logger = setup_logger(__name__)

# h: the variables of interest definitely bound to finite trees
HSet = frozenset


@dataclass(frozen=True)
class HPState:
    h: HSet
    p: ParameterDomain

    def __str__(self):
        names = ",".join(v.name for v in sorted(self.h))
        return f"h={{{names}}} | {self.p}"


def alpha_H(sigma: RSubst, vi: Iterable[Variable]) -> HSet:
    return HSet(hvars(sigma).restrict(vi))


def hterm(h: HSet, t: Term) -> bool:
    """t is a finite tree whenever the variables in h are."""
    return vars_of(t) <= h


def amgu_H_case(state: HPState, x: Variable, t: Term) -> tuple:
    """
    Effect of x -> t on the finiteness component, together with the number
    (1 to 8) of the case that produced it. Cases are tried in order and the
    first one that applies wins.
    """
    check_binding(x, t)
    h, p = state.h, state.p
    hterm_x = x in h
    hterm_t = hterm(h, t)

    if hterm_x and p.ground(x):
        return 1, h | vars_of(t)
    if hterm_t and p.ground(t):
        return 2, h | {x}
    if hterm_x and hterm_t:
        or_lin = p.or_lin(x, t)
        if p.ind(x, t) and or_lin:
            return 3, h
        if p.gfree(x) and p.gfree(t):
            return 4, h
        if p.share_lin(x, t) and or_lin:
            return 5, h - p.share_same_var(x, t)
    if hterm_x and p.lin(x):
        return 6, h - p.share_with(x)
    if hterm_t and p.lin(t):
        return 7, h - p.share_with(t)
    return 8, h - (p.share_with(x) | p.share_with(t))


def amgu_H(state: HPState, x: Variable, t: Term) -> HSet:
    case, h = amgu_H_case(state, x, t)
    logger.debug(f"amgu_H {x.name} -> {t}: case {case}")
    return h


def amgu_H_coarse(state: HPState, x: Variable, t: Term) -> HSet:
    """Always the last case of the table."""
    p = state.p
    return state.h - (p.share_with(x) | p.share_with(t))


def amgu_HP(state: HPState, x: Variable, t: Term) -> HPState:
    return HPState(amgu_H(state, x, t), state.p.amgu(x, t))


def proj_HP(state: HPState, x: Variable) -> HPState:
    return HPState(state.h | {x}, state.p.proj(x))


def merge_HP(s1: HPState, s2: HPState) -> HPState:
    return HPState(s1.h & s2.h, s1.p.merge(s2.p))
