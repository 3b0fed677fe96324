import pytest

from finitree.boolfun import BddManager, TruthTable
from finitree.exceptions import UnknownVariable


@pytest.fixture
def xyz(registry, manager):
    variables = registry.variables("x", "y", "z")
    manager.register(variables)
    return variables


def random_pair(rng, manager, variables, depth):
    """The same random formula built as a BDD and as a truth table."""
    if depth == 0 or rng.random() < 0.2:
        pick = rng.random()
        if pick < 0.1:
            return manager.top(), TruthTable.top(variables)
        if pick < 0.2:
            return manager.bot(), TruthTable.bot(variables)
        x = rng.choice(variables)
        return manager.var(x), TruthTable.var(variables, x)
    op = rng.choice(["and", "or", "not", "implies", "iff", "exists", "restrict", "rename"])
    fa, ta = random_pair(rng, manager, variables, depth - 1)
    if op == "not":
        return ~fa, ~ta
    if op == "exists":
        x = rng.choice(variables)
        return fa.exists(x), ta.exists(x)
    if op == "restrict":
        x, value = rng.choice(variables), rng.random() < 0.5
        return fa.restrict(x, value), ta.restrict(x, value)
    if op == "rename":
        x, y = rng.choice(variables), rng.choice(variables)
        return fa.rename(x, y), ta.rename(x, y)
    fb, tb = random_pair(rng, manager, variables, depth - 1)
    if op == "and":
        return fa & fb, ta & tb
    if op == "or":
        return fa | fb, ta | tb
    if op == "implies":
        return fa.implies(fb), ta.implies(tb)
    return fa.iff(fb), ta.iff(tb)


def test_examples(xyz, manager):
    x, y, z = xyz
    X, Y, Z = (manager.var(v) for v in xyz)
    assert ((X | Y) & X.iff(Z)).exists(z) == X | Y
    assert (X.implies(Y) & X).true_set() == {x, y}
    assert (~X & Y).false_set() == {x}
    assert (X | Y).true_set() == frozenset()
    assert X.implies(Y).is_pos() and not (~X).is_pos()
    assert (~X).pos_part() == ~X | (X & Y & Z)
    assert (X & Y).entails(X | Z)
    assert not (X | Z).entails(X & Y)
    assert (X & Y).rename(y, z) == X & Z


def test_canonical_form(xyz, manager):
    x, y, _ = xyz
    X, Y = manager.var(x), manager.var(y)
    # equal functions share one node
    assert (X & Y).node is (Y & X).node
    assert (X | ~X).is_top() and (X & ~X).is_bot()
    assert X.implies(Y).iff((~Y).implies(~X)).is_top()
    assert (X & Y).support() == {x, y}
    assert (X | (X & Y)).support() == {x}


def test_to_sop(xyz, manager):
    X, Y, _ = (manager.var(v) for v in xyz)
    assert manager.top().to_sop() == "1"
    assert manager.bot().to_sop() == "0"
    assert (X & Y).to_sop() == "x & y"
    assert (X & ~Y).to_sop() == "x & ~y"


def test_evaluate(xyz, manager):
    x, y, z = xyz
    fn = manager.var(x).implies(manager.var(y))
    assert fn.evaluate({x: True, y: True})
    assert not fn.evaluate({x: True, y: False})
    assert fn.evaluate({x: False, y: False, z: True})
    with pytest.raises(UnknownVariable):
        fn.evaluate({x: True})


def test_unregistered_variable(registry, manager):
    with pytest.raises(UnknownVariable):
        manager.var(registry.variable("w"))


def test_widen_respects_budget_and_weakens(registry):
    variables = registry.variables("a1", "a2", "a3", "a4", "a5", "a6")
    manager = BddManager(variables, node_budget=4)
    fn = manager.top()
    for first, second in zip(variables, variables[1:]):
        fn = fn & manager.var(first).iff(manager.var(second))
    assert fn.node_count() > 4
    widened = manager.widen(fn)
    assert widened.node_count() <= 4
    assert fn.entails(widened)
    assert manager.widen(manager.var(variables[0])) == manager.var(variables[0])


def test_bdd_matches_truth_tables(registry, rng):
    """Differential check of every operation, 10^4 random formulas over at most six variables."""
    pool = registry.variables("b1", "b2", "b3", "b4", "b5", "b6")
    manager = BddManager(pool)
    for _ in range(10_000):
        variables = pool[:rng.randint(1, len(pool))]
        fn, table = random_pair(rng, manager, variables, depth=4)
        assert fn.to_truth_table(variables) == table, fn
        assert fn.true_set(variables) == table.true_set()
        assert fn.false_set(variables) == table.false_set()
        assert fn.support() == table.support()
        assert fn.is_pos() == table.is_pos()
        assert fn.is_top() == table.is_top() and fn.is_bot() == table.is_bot()
        assert fn.pos_part(variables).to_truth_table(variables) == table.pos_part()

        other, other_table = random_pair(rng, manager, variables, depth=2)
        assert fn.entails(other) == table.entails(other_table)
