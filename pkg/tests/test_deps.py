import pytest

from finitree.concrete.oracles import gval, hval, rt_ground
from finitree.concrete.sampling import random_binding, sample_downarrow
from finitree.concrete.unify import unify_bindings
from finitree.domains.deps import (
    amgu_FD,
    amgu_GD,
    consistency_check,
    fd_merge,
    fd_project,
    gd_merge,
    gd_project,
    reduce_FD_from_GD,
    reduce_GD_from_FD,
    reduce_GD_from_true,
    reduce_H_from_FD,
)
from finitree.domains.state import AnalysisState, unify_terms
from finitree.exceptions import ClashFailure, IdentityBinding
from finitree.terms import Functor, RSubst, const

a = const("a")


def f(*args):
    return Functor("f", args)


@pytest.fixture
def xyz(registry, manager):
    variables = registry.variables("x", "y", "z")
    manager.register(variables)
    return variables


@pytest.fixture
def fns(xyz, manager):
    return tuple(manager.var(v) for v in xyz)


@pytest.fixture
def six(registry, manager):
    variables = registry.variables("u1", "u2", "u3", "u4", "u5", "u6")
    manager.register(variables)
    return variables


def test_amgu_FD(registry, manager, xyz, fns):
    x, y, z = xyz
    X, Y, Z = fns
    top = manager.top()
    assert amgu_FD(top, x, f(y, z)) == X.iff(Y & Z)
    assert amgu_FD(top, x, f(x)) == ~X

    # X = f(Y,_) followed by X = f(_,Y), anonymous variables projected
    w1, w2 = registry.new("_"), registry.new("_")
    manager.register([w1, w2])
    phi = fd_project(amgu_FD(top, x, f(y, w1)), w1)
    assert phi == X.implies(Y)
    phi = fd_project(amgu_FD(phi, x, f(w2, y)), w2)
    assert phi == X.implies(Y)


def test_amgu_GD(manager, xyz, fns):
    x, y, z = xyz
    X, Y, Z = fns
    top = manager.top()
    # a cyclic binding still ties groundness of x to z
    assert amgu_GD(top, x, f(x, z)) == X.iff(Z)
    assert gd_project(amgu_GD(X | Y, x, f(x, z)), z) == X | Y
    assert amgu_GD(top, x, a) == X


def test_project_and_merge(manager, xyz, fns):
    x, y, _ = xyz
    X, Y, _ = fns
    assert fd_project(X.iff(Y), y).is_top()
    assert gd_merge(X, Y) == X | Y
    assert fd_merge(X & Y, ~X) == X.implies(Y)


def test_reduce_H_from_FD(manager, xyz, fns):
    x, y, _ = xyz
    X, Y, _ = fns
    vi = (x, y)
    assert reduce_H_from_FD(frozenset({x}), X.implies(Y), vi) == {x, y}
    assert reduce_H_from_FD(frozenset(), manager.top(), vi) == frozenset()
    assert reduce_H_from_FD(frozenset(), Y, vi) == {y}


def test_consistency_check(manager, xyz, fns):
    x, _, _ = xyz
    X, Y, _ = fns
    assert not consistency_check(frozenset({x}), ~X)
    assert consistency_check(frozenset({x}), X.implies(Y))
    assert not consistency_check(frozenset({x}), manager.bot())


def test_reduce_between_dependencies(manager, xyz, fns):
    x, y, _ = xyz
    X, Y, _ = fns
    vi = (x, y)
    top = manager.top()
    assert reduce_GD_from_FD(frozenset(), X.implies(Y), top, vi).is_top()
    assert reduce_GD_from_FD(frozenset(vi), X & Y, top, vi) == X & Y

    assert reduce_FD_from_GD(frozenset(vi), top, X.implies(Y), vi) == X.implies(Y)
    assert reduce_FD_from_GD(frozenset(), X, X & Y, vi) == X
    assert reduce_FD_from_GD(frozenset({x}), top, X & Y, vi) == X


def test_reduce_GD_from_true(manager, fns):
    X, Y, _ = fns
    assert reduce_GD_from_true(~X & Y, X | Y) == Y
    assert reduce_GD_from_true(X & Y, X) == X & Y
    assert reduce_GD_from_true(manager.top(), X | Y) == X | Y


def test_reduce_H_from_FD_is_extensive_and_idempotent(manager, six, rng):
    fns = [manager.var(v) for v in six]
    for _ in range(500):
        phi = manager.top()
        for _ in range(rng.randint(1, 4)):
            left, right = rng.sample(fns, 2)
            phi = phi & (left.implies(right) if rng.random() < 0.7 else ~left)
        h = frozenset(v for v in six if rng.random() < 0.3)
        once = reduce_H_from_FD(h, phi, six)
        assert once >= h
        assert reduce_H_from_FD(once, phi, six) == once


def test_dependencies_hold_on_every_instance(manager, six, rng):
    """Bindings tracked concretely and abstractly, then checked on further instances."""
    for _ in range(1_000):
        sigma, phi, psi = RSubst(), manager.top(), manager.top()
        length = rng.randint(3, 5)
        while length:
            x, t = random_binding(rng, six)
            try:
                sigma = unify_bindings(sigma, x, t)
            except ClashFailure:
                continue
            length -= 1
            phi, psi = amgu_FD(phi, x, t), amgu_GD(psi, x, t)
            assert psi.is_pos()
        finite = phi.true_set(six)
        for tau in [sigma] + sample_downarrow(sigma, six, 5, rng=rng):
            assert phi.evaluate(hval(tau, six)), (sigma, tau)
            assert psi.evaluate(gval(tau, six)), (sigma, tau)
            assert all(rt_ground(x, tau) for x in finite)


def _random_reduced_state(rng, six, manager):
    state = AnalysisState.top(six, manager, initial_h=rng.choice(["all", "none"]))
    for _ in range(rng.randint(1, 4)):
        state = state.amgu(*random_binding(rng, six))
    if rng.random() < 0.3:
        state = state.make_finite(rng.sample(six, 2))
    fired = True
    while fired:
        state, fired = state.reduce()
    return state


def test_reductions_stay_idle_after_merge_and_projection(manager, six, rng):
    checked = 0
    for _ in range(1_000):
        first = _random_reduced_state(rng, six, manager)
        second = _random_reduced_state(rng, six, manager)
        if first.is_unreachable or second.is_unreachable:
            continue
        merged, fired = first.merge(second).reduce()
        assert fired == [], (first, second)
        projected, fired = first.project(rng.choice(six)).reduce()
        assert fired == [], first
        checked += 1
    assert checked > 100


def test_identity_binding_is_rejected(manager, xyz):
    x, y, _ = xyz
    top = manager.top()
    with pytest.raises(IdentityBinding):
        amgu_FD(top, x, x)
    with pytest.raises(IdentityBinding):
        amgu_GD(top, x, x)

    state = AnalysisState.top((x, y), manager)
    with pytest.raises(IdentityBinding):
        state.amgu(x, x)
    # X = X holds for every substitution
    assert unify_terms(state, x, x) is state
    assert unify_terms(state, f(x, y), f(x, y)) == state
