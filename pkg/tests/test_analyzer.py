import random
from dataclasses import replace

import pytest

from finitree.analyzer import engine
from finitree.analyzer.callgraph import is_recursive, scc_order
from finitree.analyzer.builtins import builtin_table
from finitree.analyzer.engine import GoalContext, analyze, compare_domains, entry_goal, eval_goal, specialize_entry
from finitree.analyzer.parser import parse_goal, parse_program
from finitree.analyzer.program import Call
from finitree.analyzer.report import build_report, from_json, render_text, to_json
from finitree.analyzer.solve import check_summary, solve
from finitree.domains.deps import consistency_check, reduce_H_from_FD
from finitree.domains.state import AnalysisState, unify_terms
from finitree.exceptions import IterationCapExceeded, UnknownPredicate
from finitree.terms import Functor, vars_of

SYNTHETIC = [
    "p(X) :- X = f(X).",
    "p(X, Y) :- X = f(Y).",
    "p(X, Y) :- X = f(Y, Y).",
    "p(X, Y) :- X = Y.",
    "p(X, Y) :- X = f(Z), Y = g(Z, Z).",
    "p(X) :- X = f(Y), Y = f(X).",
    "p(a). p(f(X)) :- p(X).",
    "p(X, Y) :- X = f(Y), acyclic_term(X).",
    "p(X, Y) :- unify_with_occurs_check(X, f(Y)).",
    "p(X) :- X = f(X), ground(X).",
    "p(X, Y) :- var(X), X = Y.",
    "p(X, Y) :- q(X), r(Y). q(a). q(b). r(f(Z)) :- r(Z). r(c).",
    "p(X, Y, Z) :- X = f(Y, Z), Y = Z.",
    "p(X, Y) :- X = f(X, Y). p(X, Y) :- Y = f(Y, X).",
    "even(zero). even(s(X)) :- odd(X). odd(s(X)) :- even(X).",
    "p(X, Y) :- X = [A|B], Y = [B|A].",
    "p(X, Y) :- X = a, atom(X), Y = f(X).",
    "p(X, Y) :- q(X, Y), q(Y, X). q(Z, f(Z)).",
    "p(X, Y, Z) :- X = f(Y), Y = g(Z, X).",
    "p(X, Y) :- X = Y, acyclic_term(Y), X = f(W, W).",
    "p(X) :- q(X, X). q(A, f(A)).",
    "p(X, Y) :- X = f(Y), nonvar(X).",
]


@pytest.fixture
def finiteness(load_program):
    return analyze(load_program("finiteness.pl"))


def test_call_graph_order():
    program = parse_program("a :- b. b :- c, b. c. d :- a.")
    components = scc_order(program)
    assert components.index(["c/0"]) < components.index(["b/0"]) < components.index(["a/0"])
    assert components[-1] == ["d/0"]
    assert is_recursive(program, ["b/0"]) and not is_recursive(program, ["a/0"])


def test_finiteness_recovered_after_acyclic_term(finiteness):
    p = finiteness.summary("p/2")
    x1, x2 = p.formals
    m = finiteness.manager
    assert p.state.phi == m.var(x1).implies(m.var(x2))
    assert p.finite_params() == [1, 2]

    q = finiteness.summary("q/2")
    y1, y2 = q.formals
    assert q.state.phi.entails(m.var(y1).implies(m.var(y2)))

    # the call to q loses the finiteness of both arguments
    after_q = finiteness.trace("r/2")[2].state
    assert after_q.h == frozenset()

    r = finiteness.summary("r/2")
    assert r.finite_params() == [1, 2]
    assert reduce_H_from_FD(frozenset({x1}), m.var(x1).implies(m.var(x2)), (x1, x2)) == {x1, x2}


def test_groundness_from_finite_tree_dependencies(load_program):
    result = analyze(load_program("groundness.pl"))
    q = result.summary("q/2")
    x, y = q.formals
    m = result.manager
    X, Y = m.var(x), m.var(y)
    assert q.state.phi == ~X & Y
    assert q.pre_reduction.psi == X | Y
    assert q.state.psi == Y
    assert q.reductions_fired


def test_groundness_after_merged_clauses(load_program):
    result = analyze(load_program("groundness_def.pl"))
    q = result.summary("q/2")
    x, y = q.formals
    m = result.manager
    X, Y = m.var(x), m.var(y)
    assert q.state.phi == X & Y
    assert q.pre_reduction.psi == X
    assert q.state.psi == X & Y

    p1, p2 = result.summary("p/2").formals
    assert result.summary("p/2").state.phi == m.var(p1).implies(m.var(p2))


def test_specialize_entry(finiteness):
    goal = parse_goal("r(A, B)", finiteness.program.registry)
    state = specialize_entry(finiteness, goal)
    assert state.h == goal.variables()

    state = specialize_entry(finiteness, "p(f(C), D)")
    assert not state.is_unreachable

    with pytest.raises(UnknownPredicate):
        specialize_entry(finiteness, "nope(X)")
    with pytest.raises(UnknownPredicate):
        finiteness.summary("nope/1")
    with pytest.raises(UnknownPredicate):
        entry_goal(finiteness, "nope")


def test_entry_report(finiteness):
    goal = entry_goal(finiteness, "r/2")
    entries = {"r/2": (goal.args, specialize_entry(finiteness, goal))}
    report = build_report(finiteness, entries)
    assert [p.name for p in report.predicates] == ["r"]
    assert report.predicates[0].finite_params == [1, 2]
    assert render_text(report).startswith("r/2: finite {X1,X2}\n")


def test_report_round_trip(finiteness):
    report = build_report(finiteness)
    assert [f"{p.name}/{p.arity}" for p in report.predicates] == ["p/2", "q/2", "r/2"]
    text = to_json(report)
    assert from_json(text) == report
    assert render_text(from_json(text)) == render_text(report)


def test_analysis_is_deterministic(program_path):
    source = program_path("lists.pl").read_text(encoding="utf-8")
    first = to_json(build_report(analyze(parse_program(source))))
    second = to_json(build_report(analyze(parse_program(source))))
    assert first == second


def test_recursive_predicates_converge(load_program):
    result = analyze(load_program("lists.pl"), strict=True)
    assert result.warnings == []
    assert result.summary("app/3").iterations >= 2
    assert result.summary("len/2").finite_params() == [1, 2]


def test_iteration_cap(load_program):
    program = load_program("lists.pl")
    with pytest.raises(IterationCapExceeded):
        analyze(program, max_iterations=1, strict=True)

    result = analyze(program, max_iterations=1)
    assert any("iteration cap" in w for w in result.warnings)
    assert result.summary("app/3").finite_params() == []


def test_domain_comparison(load_program):
    table = compare_domains(load_program("finiteness.pl"))
    counts = table["r/2"]
    assert set(counts) == {"hp", "hp-fd", "hp-fd-gd"}
    assert counts["hp"] < counts["hp-fd"] == counts["hp-fd-gd"] == 2


def test_unknown_domain(load_program):
    with pytest.raises(ValueError):
        analyze(load_program("finiteness.pl"), domain="sharing")


def test_unknown_predicates_and_control():
    program = parse_program("p(X, Y) :- X = f(Y, _), mark(X), !.")
    result = analyze(program)
    assert "unknown predicate mark/1 treated as havoc" in result.warnings
    assert "unsupported goal ! treated as unknown" in result.warnings
    # mark/1 may bind Y through X
    assert result.summary("p/2").finite_params() == []

    with pytest.raises(UnknownPredicate):
        analyze(parse_program("p(X) :- mark(X)."), strict=True)


def test_builtin_table_extension():
    program = parse_program("p(X, Y) :- X = f(X, Y), mark(X).")

    def mark(state, args):
        return state.make_finite(vars_of(args[0])).reduce()[0]

    result = analyze(program, builtins={"mark/1": mark})
    assert result.warnings == []
    # x is cyclic, so claiming it finite leaves no consistent success
    assert result.summary("p/2").state.is_unreachable


def test_unreachable_predicate():
    result = analyze(parse_program("p(X) :- f(X) = g(X)."))
    assert result.summary("p/1").state.is_unreachable
    assert solve(result.program, entry_goal(result, "p/1")) == []


def test_solve_enumerates_answers(load_program):
    program = load_program("lists.pl")
    result = analyze(program)
    goal = entry_goal(result, "app/3")
    answers = solve(program, goal, depth=3)
    assert len(answers) == 3
    assert len(solve(program, goal, depth=3, max_answers=2)) == 2


@pytest.mark.parametrize("source", SYNTHETIC)
def test_summaries_describe_concrete_answers(source):
    result = analyze(parse_program(source))
    for indicator in sorted(result.summaries):
        assert check_summary(result, indicator, depth=5, samples=40, rng=random.Random(7)) == []


def test_self_check_reports_unsound_summaries(load_program):
    result = analyze(load_program("finiteness.pl"))
    r = result.summary("r/2")
    # pretend the first argument can never be finite
    r.state = replace(r.state, phi=~result.manager.var(r.formals[0]))
    findings = check_summary(result, "r/2", depth=4)
    assert findings and "finite-tree dependencies" in findings[0]


def test_eval_goal_applies_summaries_and_builtins(finiteness):
    registry = finiteness.program.registry
    m = finiteness.manager
    a, b = registry.fresh("A"), registry.fresh("B")
    context = GoalContext(registry, builtin_table())
    state = AnalysisState.top((a, b), m)

    after = eval_goal(state, Call("p", (a, b)),
                      finiteness.summaries, context)
    assert after.vi == {a, b}
    assert after.phi == m.var(a).implies(m.var(b))

    unknown = unify_terms(state.havoc([b]), a, Functor("f", (b,)))
    assert a not in unknown.h
    # X = f(Y) is finite exactly when Y is, so acyclic_term(X) settles both
    checked = eval_goal(unknown, Call("acyclic_term", (a,)), finiteness.summaries, context)
    assert not checked.is_unreachable
    assert checked.h == {a, b}

    eval_goal(state, Call("mark", (a,)), finiteness.summaries, context)
    assert context.warnings == ["unknown predicate mark/1 treated as havoc"]


@pytest.mark.parametrize("name", ["finiteness.pl", "groundness.pl", "groundness_def.pl", "lists.pl"])
def test_finiteness_agrees_with_dependencies_after_every_goal(name, load_program, monkeypatch):
    seen = []
    eval_goal_unchecked = engine.eval_goal

    def checked_eval_goal(state, goal, summaries, context, site=None):
        after = eval_goal_unchecked(state, goal, summaries, context, site)
        if not after.phi.is_bot():
            assert consistency_check(after.h, after.phi), (goal, after)
            seen.append(goal)
        return after

    monkeypatch.setattr(engine, "eval_goal", checked_eval_goal)
    result = analyze(load_program(name))
    assert seen

    for points in result.traces.values():
        for point in points:
            if not point.state.phi.is_bot():
                assert consistency_check(point.state.h, point.state.phi), point.label


def test_self_check_samples_instances_of_answers():
    result = analyze(parse_program("p(X, Y) :- X = f(Y)."))
    p = result.summary("p/2")
    # true on the answer X = f(Y), false once Y is bound to a cyclic term
    p.state = replace(p.state, phi=result.manager.var(p.formals[0]))
    findings = []
    for seed in range(20):
        findings += check_summary(result, "p/2", depth=3, rng=random.Random(seed))
    assert findings
    assert all("finite-tree dependencies of an instance" in f for f in findings)
