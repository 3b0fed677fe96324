from dataclasses import dataclass, replace
from typing import Iterable, Mapping

from finitree.boolfun.bdd import BddManager, BoolFn
from finitree.domains import deps
from finitree.domains.hp import HPState, amgu_H
from finitree.domains.sfl import SflElement, sh_barrel, sh_rel
from finitree.logger import setup_logger
from finitree.terms.rsubst import check_binding
from finitree.terms.term import Functor, Term, Variable, vars_of
from finitree.utils.bitset import mask_of, members, union_all

logger = setup_logger(__name__)

LAYERS = ("hp", "hp-fd", "hp-fd-gd")

# stands for any atomic value produced by a type-test or arithmetic builtin
ATOMIC = Functor("$atomic", ())


@dataclass(frozen=True)
class AnalysisState:
    """
    Element of H x SFL x Bfun x Pos over the variables of interest `vi`.

    Attributes:
        vi (frozenset): variables of interest
        h (frozenset): variables definitely bound to finite trees
        p (SflElement): sharing, freeness and linearity
        phi (BoolFn): finite-tree dependencies (top when the layer is off)
        psi (BoolFn): groundness dependencies (top when the layer is off)
        layers (str): one of 'hp', 'hp-fd', 'hp-fd-gd'
    """

    vi: frozenset
    h: frozenset
    p: SflElement
    phi: BoolFn
    psi: BoolFn
    layers: str = "hp-fd-gd"

    @property
    def fd(self) -> bool:
        return self.layers in ("hp-fd", "hp-fd-gd")

    @property
    def gd(self) -> bool:
        return self.layers == "hp-fd-gd"

    @property
    def manager(self) -> BddManager:
        return self.phi.manager

    # -- constructors

    @classmethod
    def top(cls, vi: Iterable[Variable], manager: BddManager, layers: str = "hp-fd-gd",
            initial_h: str = "all") -> "AnalysisState":
        """
        Description of the empty substitution over `vi`. With initial_h='none'
        the finiteness component starts empty instead of holding every variable.
        """
        if layers not in LAYERS:
            raise ValueError(f"unknown domain layers {layers!r}")
        vi = frozenset(vi)
        manager.register(vi)
        h = vi if initial_h == "all" else frozenset()
        return cls(vi, h, SflElement.top(vi), manager.top(), manager.top(), layers)

    @classmethod
    def unreachable(cls, vi: Iterable[Variable], manager: BddManager,
                    layers: str = "hp-fd-gd") -> "AnalysisState":
        vi = frozenset(vi)
        manager.register(vi)
        return cls(vi, vi, SflElement.bot(vi), manager.bot(), manager.bot(), layers)

    @property
    def is_unreachable(self) -> bool:
        return self.p.is_bottom or self.phi.is_bot() or self.psi.is_bot()

    def to_unreachable(self) -> "AnalysisState":
        return AnalysisState.unreachable(self.vi, self.manager, self.layers)

    # -- abstract unification

    def amgu(self, x: Variable, t: Term) -> "AnalysisState":
        """Abstract effect of the binding x -> t on every component."""
        check_binding(x, t)
        if self.is_unreachable:
            return self
        h = amgu_H(HPState(self.h, self.p), x, t)
        p = self.p.amgu(x, t)
        phi = deps.amgu_FD(self.phi, x, t) if self.fd else self.phi
        psi = deps.amgu_GD(self.psi, x, t) if self.gd else self.psi
        state = replace(self, h=h, p=p, phi=phi, psi=psi)
        return state.to_unreachable() if state.is_unreachable else state

    # -- projection, join, conjunction

    def project(self, x: Variable) -> "AnalysisState":
        """Forget what is known about x; x stays a variable of interest, now fresh."""
        if self.is_unreachable:
            return self
        return replace(self, h=self.h | {x}, p=self.p.proj(x),
                       phi=deps.fd_project(self.phi, x), psi=deps.gd_project(self.psi, x))

    def project_away(self, variables: Iterable[Variable]) -> "AnalysisState":
        """Project every variable in turn, then drop them from the variables of interest."""
        variables = [v for v in variables if v in self.vi]
        keep = self.vi - frozenset(variables)
        if self.is_unreachable:
            return AnalysisState.unreachable(keep, self.manager, self.layers)
        state = self
        for x in reversed(variables):
            state = state.project(x)
        return replace(state, vi=keep, h=state.h & keep, p=state.p.restrict(keep))

    def merge(self, other: "AnalysisState") -> "AnalysisState":
        if self.is_unreachable:
            return other
        if other.is_unreachable:
            return self
        return replace(self, h=self.h & other.h, p=self.p.merge(other.p),
                       phi=deps.fd_merge(self.phi, other.phi),
                       psi=deps.gd_merge(self.psi, other.psi))

    def conjoin(self, other: "AnalysisState") -> "AnalysisState":
        """Independent conjunction with a description over disjoint variables."""
        vi = self.vi | other.vi
        if self.is_unreachable or other.is_unreachable:
            return AnalysisState.unreachable(vi, self.manager, self.layers)
        return replace(self, vi=vi, h=self.h | other.h, p=self.p.conjoin(other.p),
                       phi=self.phi & other.phi, psi=self.psi & other.psi)

    def extend(self, variables: Iterable[Variable], initial_h: str = "all") -> "AnalysisState":
        """Add fresh unbound variables of interest."""
        new = frozenset(variables) - self.vi
        if not new:
            return self
        self.manager.register(new)
        if self.is_unreachable:
            return AnalysisState.unreachable(self.vi | new, self.manager, self.layers)
        h = self.h | new if initial_h == "all" else self.h
        return replace(self, vi=self.vi | new, h=h, p=self.p.extend(new))

    def rename(self, mapping: Mapping[Variable, Variable]) -> "AnalysisState":
        """
        Rename variables of interest. Targets must be distinct and must not be
        variables of interest themselves unless they are renamed too.
        """
        self.manager.register(mapping.values())

        def ren(v):
            return mapping.get(v, v)

        vi = frozenset(ren(v) for v in self.vi)
        if self.is_unreachable:
            return AnalysisState.unreachable(vi, self.manager, self.layers)
        groups = [[ren(v) for v in members(g, self.vi)] for g in self.p.sh]
        p = SflElement(vi, frozenset(mask_of(g) for g in groups),
                       frozenset(ren(v) for v in self.p.f), frozenset(ren(v) for v in self.p.l))
        phi, psi = self.phi, self.psi
        # fresh targets, so renaming one variable at a time cannot capture
        for src, dst in mapping.items():
            if src in self.vi and src is not dst:
                phi = phi.rename(src, dst)
                psi = psi.rename(src, dst)
        return replace(self, vi=vi, h=frozenset(ren(v) for v in self.h), p=p, phi=phi, psi=psi)

    # -- builtin effects

    def make_finite(self, variables: Iterable[Variable]) -> "AnalysisState":
        """The trees bound to `variables` are finite (acyclic_term and friends)."""
        if self.is_unreachable:
            return self
        return replace(self, h=self.h | (frozenset(variables) & self.vi))

    def make_ground(self, variables: Iterable[Variable]) -> "AnalysisState":
        """
        The trees bound to `variables` are ground, possibly infinite: sharing
        and groundness dependencies learn it, finiteness does not.
        """
        variables = frozenset(variables) & self.vi
        if self.is_unreachable or not variables:
            return self
        p = self.p
        if not p.is_bottom:
            sh = sh_barrel(variables, p.sh)
            p = SflElement(p.vi, sh, p.f & members(union_all(sh), p.vi), p.l | variables)
        psi = self.psi & self.manager.conj_all(variables) if self.gd else self.psi
        return replace(self, p=p, psi=psi)

    def make_atomic(self, variables: Iterable[Variable]) -> "AnalysisState":
        """The variables are bound to atomic values: finite and ground."""
        state = self
        for x in sorted(frozenset(variables) & self.vi):
            state = state.amgu(x, ATOMIC)
        return state

    def make_free(self, x: Variable) -> "AnalysisState":
        """var(X) succeeded."""
        if self.is_unreachable or x not in self.vi:
            return self
        if self.p.ground(x):
            return self.to_unreachable()
        p = SflElement(self.p.vi, self.p.sh, self.p.f | {x}, self.p.l | {x})
        return replace(self, h=self.h | {x}, p=p)

    def make_nonvar(self, x: Variable) -> "AnalysisState":
        if self.is_unreachable or x not in self.p.f:
            return self
        return replace(self, p=replace(self.p, f=self.p.f - {x}))

    def havoc(self, variables: Iterable[Variable]) -> "AnalysisState":
        """
        Worst case for a goal we know nothing about. Anything sharing with the
        touched variables may end up cyclic.
        """
        touched = frozenset(variables) & self.vi
        if self.is_unreachable or not touched:
            return self
        affected = touched | members(union_all(sh_rel(touched, self.p.sh)), self.vi)
        return replace(self, h=self.h - affected, p=self.p.havoc(touched),
                       phi=self.phi.exists(touched), psi=self.psi.exists(touched))

    # -- reductions

    def reduce(self) -> tuple:
        """
        Let the components refine each other.

        Returns:
            (state, fired): the reduced state and the names of the reductions
            that changed something
        """
        if self.is_unreachable or not self.fd:
            return self, []
        fired = []
        h, phi, psi = self.h, self.phi, self.psi

        if not deps.consistency_check(h, phi):
            logger.debug("reduce: finiteness contradicts dependencies, unreachable")
            return self.to_unreachable(), ["consistency"]

        new_h = deps.reduce_H_from_FD(h, phi, self.vi)
        if new_h != h:
            fired.append("reduce_H_from_FD")
            h = new_h

        if self.gd:
            new_psi = deps.reduce_GD_from_FD(h, phi, psi, self.vi)
            new_phi = deps.reduce_FD_from_GD(h, phi, psi, self.vi)
            if new_psi != psi:
                fired.append("reduce_GD_from_FD")
            if new_phi != phi:
                fired.append("reduce_FD_from_GD")
            phi, psi = new_phi, new_psi
            new_psi = deps.reduce_GD_from_true(phi, psi, self.vi)
            if new_psi != psi:
                fired.append("reduce_GD_from_true")
                psi = new_psi

        state = replace(self, h=h, phi=phi, psi=psi)
        if fired:
            logger.debug(f"reduce: {', '.join(fired)}")
        return (state.to_unreachable() if state.is_unreachable else state), fired

    # -- debug output

    def __str__(self):
        if self.is_unreachable:
            return "unreachable"
        names = ",".join(v.name for v in sorted(self.h))
        return f"h={{{names}}} | {self.p} | fd={self.phi.to_sop()} | gd={self.psi.to_sop()}"


def unify_terms(state: AnalysisState, s: Term, t: Term) -> AnalysisState:
    """
    Abstract s = t: decomposed into bindings the way rational unification
    does; a functor clash makes the state unreachable.
    """
    if state.is_unreachable or s is t:
        return state
    if isinstance(s, Variable):
        return state.amgu(s, t)
    if isinstance(t, Variable):
        return state.amgu(t, s)
    if s.name != t.name or s.rank != t.rank:
        logger.debug(f"unify_terms: clash {s.name}/{s.rank} vs {t.name}/{t.rank}")
        return state.to_unreachable()
    for a, b in zip(s.args, t.args):
        state = unify_terms(state, a, b)
    return state


def term_variables(terms: Iterable[Term]) -> frozenset:
    return frozenset().union(*(vars_of(t) for t in terms))
