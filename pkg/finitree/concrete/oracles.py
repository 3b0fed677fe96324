"""
Independent checks of the rational-tree meaning of a substitution, computed
on its dependency graph (edge y -> z iff z occurs in the binding of y) rather
than with the fixpoint operators.
"""
import math
from typing import Iterable, Optional

import networkx as nx

from finitree.concrete.operators import occ
from finitree.domains.sfl import SflElement
from finitree.logger import setup_logger
from finitree.terms.rsubst import RSubst
from finitree.terms.term import Functor, Term, Variable, VariableRegistry, mvars, rename_term
from finitree.utils.bitset import mask_of

logger = setup_logger(__name__)


def dependency_graph(sigma: RSubst, extra: Iterable[Variable] = ()) -> nx.DiGraph:
    """Edges y -> z weighted by the number of occurrences of z in yσ."""
    graph = nx.DiGraph()
    graph.add_nodes_from(sigma.vars)
    graph.add_nodes_from(extra)
    for y, t in sigma.items():
        for z, count in mvars(t).items():
            graph.add_edge(y, z, weight=count)
    return graph


def _cyclic_nodes(graph: nx.DiGraph) -> set:
    cyclic = set()
    for component in nx.strongly_connected_components(graph):
        if len(component) > 1:
            cyclic |= component
        else:
            (node,) = component
            if graph.has_edge(node, node):
                cyclic.add(node)
    return cyclic


def _reachable(graph: nx.DiGraph, x: Variable) -> set:
    return nx.descendants(graph, x) | {x}


def rt_finite(x: Variable, sigma: RSubst) -> bool:
    graph = dependency_graph(sigma, (x,))
    return not (_reachable(graph, x) & _cyclic_nodes(graph))


def rt_ground(x: Variable, sigma: RSubst) -> bool:
    graph = dependency_graph(sigma, (x,))
    return all(node in sigma for node in _reachable(graph, x))


def rt_free(x: Variable, sigma: RSubst) -> bool:
    """rt(x, σ) is a variable: the chain of variable bindings from x ends outside dom(σ)."""
    current = x
    while current in sigma:
        current = sigma[current]
        if not isinstance(current, Variable):
            return False
    return True


def occurrences(x: Variable, v: Variable, sigma: RSubst) -> float:
    """
    Number of occurrences of v in rt(x, σ); math.inf when v is reached
    through a cycle.
    """
    if v in sigma:
        return 0
    graph = dependency_graph(sigma, (x, v))
    reach_v = nx.ancestors(graph, v) | {v}
    relevant = _reachable(graph, x) & reach_v
    if relevant & _cyclic_nodes(graph):
        return math.inf

    counts = {}
    for node in reversed(list(nx.topological_sort(graph.subgraph(relevant)))):
        if node is v:
            counts[node] = 1
            continue
        total = 0
        for _, z, data in graph.out_edges(node, data=True):
            if z in relevant:
                total += data["weight"] * counts[z]
        counts[node] = total
    return counts.get(x, 0)


def rt_linear(x: Variable, sigma: RSubst) -> bool:
    graph = dependency_graph(sigma, (x,))
    for v in _reachable(graph, x):
        if v not in sigma and occurrences(x, v, sigma) > 1:
            return False
    return True


def rt_term(x: Variable, sigma: RSubst) -> Optional[Term]:
    """The finite tree rt(x, σ), or None when it is infinite."""
    if not rt_finite(x, sigma):
        return None
    return _unfold(x, sigma)


def _unfold(t: Term, sigma: RSubst) -> Term:
    if isinstance(t, Variable):
        return _unfold(sigma[t], sigma) if t in sigma else t
    if not t.args:
        return t
    return Functor(t.name, tuple(_unfold(arg, sigma) for arg in t.args))


def hval(sigma: RSubst, vi: Iterable[Variable]) -> dict:
    """Valuation mapping each variable of interest to the finiteness of its tree."""
    return {x: rt_finite(x, sigma) for x in vi}


def gval(sigma: RSubst, vi: Iterable[Variable]) -> dict:
    return {x: rt_ground(x, sigma) for x in vi}


def alpha_sfl(sigma: RSubst, vi: Iterable[Variable]) -> SflElement:
    """Most precise SFL description of a single substitution."""
    vi = frozenset(vi)
    sh = set()
    for v in (sigma.vars | vi) - sigma.dom:
        group = mask_of(occ(sigma, v) & vi)
        if group:
            sh.add(group)
    free = frozenset(x for x in vi if rt_free(x, sigma))
    linear = frozenset(x for x in vi if rt_linear(x, sigma))
    return SflElement(vi, frozenset(sh), free, linear)


def project_out(sigma: RSubst, x: Variable, registry: VariableRegistry) -> RSubst:
    """
    One member of the projection of σ away from x: x is renamed everywhere to
    a fresh variable, so x itself is left unbound.
    """
    fresh = registry.fresh("_P")
    renaming = {x: fresh}
    return RSubst(
        {renaming.get(y, y): rename_term(t, renaming) for y, t in sigma.items()}
    )
