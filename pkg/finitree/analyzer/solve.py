"""
Depth-bounded SLD resolution over rational trees. It enumerates concrete
success substitutions of small programs so abstract summaries can be
checked against them.
"""
import random
import re
from typing import Optional

from finitree.analyzer.engine import entry_goal
from finitree.analyzer.program import Call, Program, Unify, Unsupported
from finitree.concrete.oracles import alpha_sfl, gval, hval, rt_finite, rt_free, rt_ground
from finitree.concrete.sampling import random_term, sample_downarrow
from finitree.concrete.unify import rat_unify
from finitree.config import get_config
from finitree.exceptions import AnalysisError, ClashFailure, UnknownPredicate
from finitree.logger import setup_logger
from finitree.terms.rsubst import RSubst
from finitree.terms.term import Functor, Term, Variable, rename_term, vars_of

logger = setup_logger(__name__)
cfg = get_config()

POOL_DEPTH = cfg["sampling"]["pool_depth"]
INSTANCES = cfg["report"]["self_check_instances"]

NUMBER = re.compile(r"-?\d+$")


def _deref(t: Term, sigma: RSubst) -> Term:
    while isinstance(t, Variable) and t in sigma:
        t = sigma[t]
    return t


def _unify(sigma: RSubst, pairs) -> Optional[RSubst]:
    try:
        return rat_unify(pairs, base=sigma)
    except ClashFailure:
        return None


def _constant_test(t: Term, sigma: RSubst, kind: str) -> bool:
    t = _deref(t, sigma)
    if not isinstance(t, Functor) or t.rank:
        return False
    numeric = bool(NUMBER.match(t.name))
    if kind == "atom":
        return not numeric
    if kind in ("integer", "number"):
        return numeric
    return True


def _builtin(call: Call, sigma: RSubst) -> Optional[RSubst]:
    """Concrete effect of a builtin: the new substitution, or None on failure."""
    args = call.args
    indicator = call.indicator
    if indicator == "=/2":
        return _unify(sigma, [args])
    if indicator == "true/0":
        return sigma
    if indicator == "fail/0":
        return None
    if indicator == "acyclic_term/1":
        return sigma if all(rt_finite(v, sigma) for v in vars_of(args[0])) else None
    if indicator == "unify_with_occurs_check/2":
        result = _unify(sigma, [args])
        if result is None:
            return None
        touched = vars_of(args[0]) | vars_of(args[1])
        return result if all(rt_finite(v, result) for v in touched) else None
    if indicator == "var/1":
        return sigma if isinstance(args[0], Variable) and rt_free(args[0], sigma) else None
    if indicator == "nonvar/1":
        return None if isinstance(args[0], Variable) and rt_free(args[0], sigma) else sigma
    if indicator == "ground/1":
        return sigma if all(rt_ground(v, sigma) for v in vars_of(args[0])) else None
    if indicator in ("atom/1", "atomic/1", "integer/1", "number/1"):
        return sigma if _constant_test(args[0], sigma, call.name) else None
    if indicator == "is/2":
        value = _deref(args[1], sigma)
        if isinstance(value, Functor) and not value.rank and NUMBER.match(value.name):
            return _unify(sigma, [(args[0], value)])
        raise AnalysisError(f"is/2 needs an evaluated number, got {value}")
    raise UnknownPredicate(f"unknown predicate {indicator}")


def solve(program: Program, goal: Call, depth: int = 6, max_answers: Optional[int] = None) -> list:
    """
    Enumerate success substitutions of `goal`.

    Args:
        program: the program
        goal: the query
        depth: maximum number of clause resolutions along one derivation
        max_answers: stop after this many answers

    Returns:
        list of RSubst, one per successful derivation found within the bound

    Raises:
        UnknownPredicate: a goal is neither defined nor a supported builtin
        AnalysisError: the program uses a construct the interpreter cannot run
    """
    registry = program.registry
    answers = []
    stack = [((goal,), RSubst(), 0)]
    while stack:
        goals, sigma, used = stack.pop()
        if not goals:
            answers.append(sigma)
            if max_answers is not None and len(answers) >= max_answers:
                break
            continue
        first, rest = goals[0], goals[1:]
        if isinstance(first, Unify):
            result = _unify(sigma, [(first.left, first.right)])
            if result is not None:
                stack.append((rest, result, used))
            continue
        if isinstance(first, Unsupported):
            raise AnalysisError(f"cannot execute {first}")
        if not program.defines(first.indicator):
            result = _builtin(first, sigma)
            if result is not None:
                stack.append((rest, result, used))
            continue
        if used >= depth:
            continue
        # reversed so the first clause is explored first
        for clause in reversed(program.predicates[first.indicator]):
            renaming = {v: registry.fresh("_R") for v in clause.variables}
            head = [rename_term(a, renaming) for a in clause.head.args]
            result = _unify(sigma, list(zip(head, first.args)))
            if result is None:
                continue
            body = tuple(_rename_goal(g, renaming) for g in clause.body)
            stack.append((body + rest, result, used + 1))
    logger.debug(f"solve {goal}: {len(answers)} answers within depth {depth}")
    return answers


def _rename_goal(goal, renaming):
    if isinstance(goal, Unify):
        return Unify(rename_term(goal.left, renaming), rename_term(goal.right, renaming))
    if isinstance(goal, Call):
        return Call(goal.name, tuple(rename_term(a, renaming) for a in goal.args))
    return goal


def check_summary(result, indicator: str, depth: int = 6, samples: Optional[int] = None,
                  rng: Optional[random.Random] = None) -> list:
    """
    Compare the success pattern of `indicator` with the concrete answers of
    its most general query found within `depth` resolutions.

    Args:
        result: AnalysisResult holding the summary
        indicator: name/arity of the predicate
        depth: resolution bound for the interpreter
        samples: check at most this many answers, drawn with `rng`
        rng: random stream used to draw the samples

    Returns:
        list of messages, one per answer the summary does not describe
    """
    summary = result.summary(indicator)
    goal = entry_goal(result, indicator)
    answers = solve(result.program, goal, depth)
    rng = rng or random.Random()
    if samples is not None and len(answers) > samples:
        answers = rng.sample(answers, samples)

    # further instances are drawn over the functors the program itself uses
    signature = tuple(sorted(result.program.signature))

    def pool(r, variables):
        return random_term(r, variables, POOL_DEPTH, signature)

    state = summary.state
    findings = []
    if answers and state.is_unreachable:
        return [f"{indicator}: summary unreachable but {len(answers)} answers found"]
    renamed = state.rename(dict(zip(summary.formals, goal.args))) if answers else None
    for sigma in answers:
        finite = hval(sigma, goal.args)
        ground = gval(sigma, goal.args)
        problems = []
        if not renamed.h <= {x for x, ok in finite.items() if ok}:
            problems.append("finiteness")
        if not renamed.phi.evaluate(finite):
            problems.append("finite-tree dependencies")
        if state.gd and not renamed.psi.evaluate(ground):
            problems.append("groundness dependencies")
        if not alpha_sfl(sigma, goal.args).leq(renamed.p):
            problems.append("sharing")
        # both dependency components stay true on every instance of an answer
        for tau in sample_downarrow(sigma, goal.args, INSTANCES, pool=pool, rng=rng):
            if not renamed.phi.evaluate(hval(tau, goal.args)):
                problems.append("finite-tree dependencies of an instance")
                break
            if state.gd and not renamed.psi.evaluate(gval(tau, goal.args)):
                problems.append("groundness dependencies of an instance")
                break
        if problems:
            findings.append(f"{indicator}: answer {sigma} violates {', '.join(problems)}")
    logger.info(f"checked {len(answers)} answers of {indicator}: {len(findings)} findings")
    return findings
