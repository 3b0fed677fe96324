"""
Abstract transfer functions for builtin predicates, keyed by name/arity.

Every transfer function takes the current AnalysisState and the argument
terms of the call and returns the successor state.
"""
from typing import Callable, Dict

from finitree.domains.state import AnalysisState, term_variables, unify_terms
from finitree.logger import setup_logger
from finitree.terms.term import Functor, Variable, vars_of

logger = setup_logger(__name__)

Transfer = Callable[[AnalysisState, tuple], AnalysisState]


def _reduced(state: AnalysisState) -> AnalysisState:
    state, fired = state.reduce()
    if fired:
        logger.debug(f"builtin reductions: {', '.join(fired)}")
    return state


def _unify(state, args):
    return unify_terms(state, args[0], args[1])


def _acyclic_term(state, args):
    return _reduced(state.make_finite(vars_of(args[0])))


def _unify_with_occurs_check(state, args):
    state = unify_terms(state, args[0], args[1])
    return _reduced(state.make_finite(term_variables(args)))


def _var(state, args):
    arg = args[0]
    if isinstance(arg, Variable):
        return state.make_free(arg)
    return state.to_unreachable()


def _nonvar(state, args):
    arg = args[0]
    if isinstance(arg, Variable):
        return state.make_nonvar(arg)
    return state


def _ground(state, args):
    return state.make_ground(vars_of(args[0]))


def _atomic(state, args):
    arg = args[0]
    if isinstance(arg, Functor):
        return state if arg.rank == 0 else state.to_unreachable()
    return state.make_atomic((arg,))


def _is(state, args):
    return state.make_atomic(term_variables(args))


def _true(state, args):
    return state


def _fail(state, args):
    return state.to_unreachable()


BUILTINS: Dict[str, Transfer] = {
    "=/2": _unify,
    "acyclic_term/1": _acyclic_term,
    "unify_with_occurs_check/2": _unify_with_occurs_check,
    "var/1": _var,
    "nonvar/1": _nonvar,
    "ground/1": _ground,
    "atom/1": _atomic,
    "atomic/1": _atomic,
    "integer/1": _atomic,
    "number/1": _atomic,
    "is/2": _is,
    "true/0": _true,
    "fail/0": _fail,
}


def builtin_table(extra: Dict[str, Transfer] = None) -> Dict[str, Transfer]:
    """The default builtins, optionally extended or overridden by `extra`."""
    table = dict(BUILTINS)
    if extra:
        table.update(extra)
    return table
