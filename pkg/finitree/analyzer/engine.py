"""
Bottom-up abstract fixpoint engine computing success patterns.

Predicates are processed one strongly connected component of the call graph
at a time, callees first. Inside a component the summaries are recomputed
round-robin until none of them changes.
"""
from dataclasses import dataclass, field, replace
from typing import Dict, Iterable, Optional, Union

from tqdm import tqdm

from finitree.analyzer.builtins import Transfer, builtin_table
from finitree.analyzer.callgraph import is_recursive, scc_order
from finitree.analyzer.parser import parse_goal
from finitree.analyzer.program import Call, Clause, Goal, Program, Unify, Unsupported
from finitree.boolfun.bdd import BddManager
from finitree.config import get_config
from finitree.domains.state import LAYERS, AnalysisState, unify_terms
from finitree.exceptions import IterationCapExceeded, UnknownPredicate
from finitree.logger import setup_logger
from finitree.terms.term import VariableRegistry

logger = setup_logger(__name__)
cfg = get_config()

MAX_ITERATIONS = cfg["analysis"]["max_iterations"]
DOMAIN = cfg["analysis"]["domain"]
STRICT = cfg["analysis"]["strict"]
INITIAL_H = cfg["analysis"]["initial_h"]
PROGRESS = cfg["global"]["progress"]


@dataclass(frozen=True)
class ProgramPoint:
    label: str
    state: AnalysisState


@dataclass
class Summary:
    """
    Success pattern of one predicate over its formal parameters.

    Attributes:
        indicator (str): name/arity
        formals (tuple): the formal parameters X1..Xn
        state (AnalysisState): reduced success pattern
        pre_reduction (AnalysisState): the same pattern before the reductions ran
        reductions_fired (tuple): names of the reductions that changed something
        iterations (int): number of updates the summary went through
    """

    indicator: str
    formals: tuple
    state: AnalysisState
    pre_reduction: AnalysisState
    reductions_fired: tuple = ()
    iterations: int = 0

    @property
    def name(self) -> str:
        return self.indicator.rsplit("/", 1)[0]

    @property
    def arity(self) -> int:
        return len(self.formals)

    def finite_params(self) -> list:
        """1-based positions of the formals definitely bound to finite trees."""
        return [i + 1 for i, x in enumerate(self.formals) if x in self.state.h]


@dataclass
class AnalysisResult:
    program: Program
    summaries: Dict[str, Summary]
    manager: BddManager
    layers: str
    initial_h: str
    builtins: Dict[str, Transfer]
    traces: dict = field(default_factory=dict)
    warnings: list = field(default_factory=list)
    history: list = field(default_factory=list)

    def summary(self, indicator: str) -> Summary:
        if indicator not in self.summaries:
            raise UnknownPredicate(f"unknown predicate {indicator}")
        return self.summaries[indicator]

    def trace(self, indicator: str, clause_index: int = 0) -> list:
        return self.traces[(indicator, clause_index)]


class GoalContext:
    """What goal evaluation needs besides the state: registry, builtins, call-site variables."""

    def __init__(self, registry: VariableRegistry, builtins: Dict[str, Transfer],
                 strict: bool = STRICT, warnings: Optional[list] = None):
        self.registry = registry
        self.builtins = builtins
        self.strict = strict
        self.warnings = [] if warnings is None else warnings
        self._call_vars = {}

    def warn(self, message: str) -> None:
        if message not in self.warnings:
            logger.warning(message)
            self.warnings.append(message)

    def call_variables(self, site, arity: int) -> tuple:
        """Fresh variables standing for the callee formals at one call site, reused across iterations."""
        fresh = self._call_vars.get(site)
        if fresh is None:
            fresh = tuple(self.registry.fresh("_A") for _ in range(arity))
            self._call_vars[site] = fresh
        return fresh


def apply_summary(state: AnalysisState, call: Call, summary: Summary, fresh: tuple) -> AnalysisState:
    """Rename the callee summary apart, conjoin, bind its formals to the actuals, drop the temporaries."""
    if state.is_unreachable:
        return state
    if summary.state.is_unreachable:
        return state.to_unreachable()
    callee = summary.state.rename(dict(zip(summary.formals, fresh)))
    state = state.conjoin(callee)
    for formal, actual in zip(fresh, call.args):
        state = unify_terms(state, formal, actual)
    return state.project_away(fresh)


def eval_goal(state: AnalysisState, goal: Goal, summaries: Dict[str, Summary],
              context: GoalContext, site=None) -> AnalysisState:
    """
    Abstract execution of one body goal.

    Args:
        state: the state before the goal
        goal: a unification, builtin call or user predicate call
        summaries: current success patterns of the user predicates
        context: registry, builtin table and strictness
        site: key identifying the call site (defaults to the goal itself)

    Returns:
        the state after the goal

    Raises:
        UnknownPredicate: in strict mode, for a call that is neither a builtin nor defined
    """
    if state.is_unreachable:
        return state
    if isinstance(goal, Unify):
        return unify_terms(state, goal.left, goal.right)
    if isinstance(goal, Unsupported):
        context.warn(f"unsupported goal {goal} treated as unknown")
        return state.havoc(goal.variables())

    indicator = goal.indicator
    if indicator in summaries:
        fresh = context.call_variables(goal if site is None else site, goal.arity)
        return apply_summary(state, goal, summaries[indicator], fresh)
    transfer = context.builtins.get(indicator)
    if transfer is not None:
        return transfer(state, goal.args)
    if context.strict:
        raise UnknownPredicate(f"unknown predicate {indicator}")
    context.warn(f"unknown predicate {indicator} treated as havoc")
    return state.havoc(goal.variables())


class Analyzer:
    """
    Runs the analysis of one program. One BDD manager is used for the whole
    run and every summary refers to it.
    """

    def __init__(self, program: Program, domain: str = DOMAIN, max_iterations: int = MAX_ITERATIONS,
                 strict: bool = STRICT, initial_h: str = INITIAL_H,
                 builtins: Optional[Dict[str, Transfer]] = None, manager: Optional[BddManager] = None):
        if domain not in LAYERS:
            raise ValueError(f"unknown domain {domain!r}, expected one of {', '.join(LAYERS)}")
        self.program = program
        self.layers = domain
        self.max_iterations = max_iterations
        self.initial_h = initial_h
        self.manager = BddManager() if manager is None else manager
        self.builtins = builtin_table(builtins)
        self.warnings = []
        self.context = GoalContext(program.registry, self.builtins, strict, self.warnings)
        self.traces = {}
        self.history = []
        self.summaries = {}
        for indicator, formals in program.formals.items():
            bottom = AnalysisState.unreachable(formals, self.manager, self.layers)
            self.summaries[indicator] = Summary(indicator, formals, bottom, bottom)

    def eval_clause(self, indicator: str, index: int, clause: Clause) -> AnalysisState:
        """Success pattern of one clause over the predicate formals."""
        formals = self.program.formals[indicator]
        state = AnalysisState.top(formals + clause.variables, self.manager, self.layers, self.initial_h)
        for formal, arg in zip(formals, clause.head.args):
            state = unify_terms(state, formal, arg)
        points = [ProgramPoint("head", state.project_away(formals))]
        for position, goal in enumerate(clause.body, 1):
            state = eval_goal(state, goal, self.summaries, self.context, (indicator, index, position))
            logger.debug(f"{indicator} clause {index} goal {position} {goal}: {state}")
            points.append(ProgramPoint(f"{position}: {goal}", state.project_away(formals)))
        self.traces[(indicator, index)] = points
        return state.project_away(clause.variables)

    def eval_predicate(self, indicator: str) -> AnalysisState:
        formals = self.program.formals[indicator]
        result = AnalysisState.unreachable(formals, self.manager, self.layers)
        for index, clause in enumerate(self.program.predicates[indicator]):
            result = result.merge(self.eval_clause(indicator, index, clause))
        return result

    def _widen(self, state: AnalysisState) -> AnalysisState:
        if state.is_unreachable:
            return state
        return replace(state, phi=self.manager.widen(state.phi), psi=self.manager.widen(state.psi))

    def update(self, indicator: str, iteration: int) -> bool:
        """Recompute one summary; True when it changed."""
        old = self.summaries[indicator]
        pre = self._widen(old.pre_reduction.merge(self.eval_predicate(indicator)))
        if old.iterations and pre == old.pre_reduction:
            return False
        state, fired = pre.reduce()
        self.summaries[indicator] = Summary(indicator, old.formals, state, pre, tuple(fired),
                                            old.iterations + 1)
        self.history.append((iteration, indicator, str(state)))
        logger.debug(f"{indicator} iteration {iteration}: {state}")
        return True

    def worst_case(self, indicator: str) -> Summary:
        formals = self.program.formals[indicator]
        top = AnalysisState.top(formals, self.manager, self.layers, self.initial_h).havoc(formals)
        return Summary(indicator, formals, top, top, (), self.summaries[indicator].iterations + 1)

    def solve_component(self, component: list) -> None:
        recursive = is_recursive(self.program, component)
        iteration = 0
        while True:
            iteration += 1
            if iteration > self.max_iterations:
                message = f"iteration cap {self.max_iterations} reached on {', '.join(component)}"
                if self.context.strict:
                    raise IterationCapExceeded(message)
                self.context.warn(f"{message}, falling back to the worst-case summary")
                for indicator in component:
                    self.summaries[indicator] = self.worst_case(indicator)
                return
            changed = False
            for indicator in component:
                changed = self.update(indicator, iteration) or changed
            if not (recursive and changed):
                logger.info(f"component {', '.join(component)} stable after {iteration} rounds")
                return

    def run(self) -> AnalysisResult:
        components = scc_order(self.program)
        for component in tqdm(components, desc="components", disable=not PROGRESS):
            self.solve_component(component)
        logger.info(f"analysis ({self.layers}) done: {len(self.summaries)} predicates")
        return AnalysisResult(self.program, dict(self.summaries), self.manager, self.layers,
                              self.initial_h, self.builtins, self.traces, self.warnings, self.history)


def analyze(program: Program, domain: str = DOMAIN, max_iterations: int = MAX_ITERATIONS,
            strict: bool = STRICT, initial_h: str = INITIAL_H,
            builtins: Optional[Dict[str, Transfer]] = None) -> AnalysisResult:
    """
    Compute the success pattern of every predicate of `program`.

    Args:
        program: the parsed program
        domain: layers to run, 'hp', 'hp-fd' or 'hp-fd-gd'
        max_iterations: rounds allowed per call-graph component
        strict: raise on unknown predicates and on the iteration cap instead of warning
        initial_h: 'all' or 'none', finiteness assumed for fresh clause variables
        builtins: extra or overriding builtin transfer functions

    Returns:
        AnalysisResult with one Summary per predicate
    """
    return Analyzer(program, domain, max_iterations, strict, initial_h, builtins).run()


def specialize_entry(result: AnalysisResult, goal: Union[Call, str]) -> AnalysisState:
    """
    Abstractly execute one query against the computed success patterns,
    starting from the state knowing nothing about the query variables.

    Raises:
        UnknownPredicate: the goal is neither a defined predicate nor a builtin
    """
    registry = result.program.registry
    if isinstance(goal, str):
        goal = parse_goal(goal, registry)
    if goal.indicator not in result.summaries and goal.indicator not in result.builtins:
        raise UnknownPredicate(f"unknown predicate {goal.indicator}")
    state = AnalysisState.top(sorted(goal.variables()), result.manager, result.layers, result.initial_h)
    context = GoalContext(registry, result.builtins, strict=True)
    return eval_goal(state, goal, result.summaries, context)


def entry_goal(result: AnalysisResult, indicator: str) -> Call:
    """The most general query for `indicator`, over new variables X1..Xn."""
    name, _, arity = indicator.rpartition("/")
    if not name or not arity.isdigit():
        raise UnknownPredicate(f"malformed predicate indicator {indicator!r}")
    registry = result.program.registry
    return Call(name, tuple(registry.new(f"X{i + 1}") for i in range(int(arity))))


def compare_domains(program: Program, max_iterations: int = MAX_ITERATIONS,
                    initial_h: str = INITIAL_H, layers: Iterable[str] = LAYERS) -> dict:
    """
    Number of definitely finite parameters per predicate under each layer setting.

    Returns:
        dict indicator -> {layers: count}
    """
    table = {indicator: {} for indicator in program.predicates}
    for domain in layers:
        result = analyze(program, domain, max_iterations, initial_h=initial_h)
        for indicator, summary in result.summaries.items():
            table[indicator][domain] = len(summary.finite_params())
    return table
