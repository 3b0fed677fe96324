import networkx as nx

from finitree.analyzer.program import Call, Program
from finitree.logger import setup_logger

logger = setup_logger(__name__)


def call_graph(program: Program) -> nx.DiGraph:
    """Edge p -> q whenever a clause of p calls the user predicate q."""
    graph = nx.DiGraph()
    graph.add_nodes_from(program.predicates)
    for indicator, clauses in program.predicates.items():
        for clause in clauses:
            for goal in clause.body:
                if isinstance(goal, Call) and program.defines(goal.indicator):
                    graph.add_edge(indicator, goal.indicator)
    return graph


def scc_order(program: Program) -> list:
    """
    Strongly connected components of the call graph, callees before callers.

    Returns:
        list of sorted lists of predicate indicators
    """
    graph = call_graph(program)
    condensed = nx.condensation(graph)
    order = list(reversed(list(nx.topological_sort(condensed))))
    components = [sorted(condensed.nodes[n]["members"]) for n in order]
    logger.debug(f"call graph: {len(graph)} predicates, {len(components)} components")
    return components


def is_recursive(program: Program, component: list) -> bool:
    graph = call_graph(program)
    return len(component) > 1 or graph.has_edge(component[0], component[0])
