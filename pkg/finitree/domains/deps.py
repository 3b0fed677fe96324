"""
Finite-tree dependencies (arbitrary Boolean functions, FD) and groundness
dependencies (positive functions, GD), with the reductions between them and
the finiteness component.
"""
from typing import Iterable, Optional

from finitree.boolfun.bdd import BoolFn
from finitree.logger import setup_logger
from finitree.terms.rsubst import check_binding
from finitree.terms.term import Term, Variable, vars_of

logger = setup_logger(__name__)


def amgu_FD(phi: BoolFn, x: Variable, t: Term) -> BoolFn:
    check_binding(x, t)
    m = phi.manager
    t_vars = vars_of(t)
    if x in t_vars:
        return phi & ~m.var(x)
    return phi & m.var(x).iff(m.conj_all(t_vars))


def amgu_GD(psi: BoolFn, x: Variable, t: Term) -> BoolFn:
    check_binding(x, t)
    m = psi.manager
    return psi & m.var(x).iff(m.conj_all(vars_of(t) - {x}))


def fd_project(phi: BoolFn, x) -> BoolFn:
    return phi.exists(x)


def gd_project(psi: BoolFn, x) -> BoolFn:
    return psi.exists(x)


def fd_merge(phi1: BoolFn, phi2: BoolFn) -> BoolFn:
    return phi1 | phi2


def gd_merge(psi1: BoolFn, psi2: BoolFn) -> BoolFn:
    return psi1 | psi2


def _universe(phi: BoolFn, h: Iterable[Variable], vi: Optional[Iterable[Variable]]) -> frozenset:
    if vi is not None:
        return frozenset(vi)
    return phi.support() | frozenset(h)


def reduce_H_from_FD(h: frozenset, phi: BoolFn, vi: Optional[Iterable[Variable]] = None) -> frozenset:
    """h' = true(φ ∧ ⋀h)."""
    vi = _universe(phi, h, vi)
    return frozenset((phi & phi.manager.conj_all(h)).true_set(vi)) | frozenset(h)


def consistency_check(h: frozenset, phi: BoolFn) -> bool:
    """No variable assumed finite is known to be cyclic: h ∩ false(φ ∧ ⋀h) = ∅."""
    h = frozenset(h)
    conj = phi & phi.manager.conj_all(h)
    return not (h & conj.false_set(h))


def reduce_GD_from_FD(h: frozenset, phi: BoolFn, psi: BoolFn, vi: Iterable[Variable]) -> BoolFn:
    """ψ ∧ pos(∃(VI \\ h) . φ)"""
    vi = frozenset(vi)
    return psi & phi.exists(vi - frozenset(h)).pos_part(vi)


def reduce_FD_from_GD(h: frozenset, phi: BoolFn, psi: BoolFn, vi: Iterable[Variable]) -> BoolFn:
    """φ ∧ ∃(VI \\ h) . ψ"""
    vi = frozenset(vi)
    return phi & psi.exists(vi - frozenset(h))


def reduce_GD_from_true(phi: BoolFn, psi: BoolFn, vi: Optional[Iterable[Variable]] = None) -> BoolFn:
    """ψ ∧ ⋀true(φ): definitely finite-and-ground in every instance means ground."""
    vi = phi.support() if vi is None else vi
    return psi & psi.manager.conj_all(phi.true_set(vi))
