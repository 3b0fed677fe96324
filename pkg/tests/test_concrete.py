import math

import pytest

from finitree.concrete.operators import CoFiniteSet, gvars, hvars, occ
from finitree.concrete.oracles import (
    alpha_sfl,
    gval,
    hval,
    occurrences,
    project_out,
    rt_finite,
    rt_free,
    rt_ground,
    rt_linear,
    rt_term,
)
from finitree.concrete.sampling import random_rsubst, sample_downarrow
from finitree.concrete.unify import rat_unify, unify_bindings
from finitree.exceptions import ClashFailure
from finitree.terms import Functor, RSubst, check_rsubst, const, s_normalize

a = const("a")
b = const("b")


def f(*args):
    return Functor("f", args)


def g(*args):
    return Functor("g", args)


@pytest.fixture
def xyz(registry):
    return registry.variables("x", "y", "z")


@pytest.fixture
def six(registry):
    return registry.variables("u1", "u2", "u3", "u4", "u5", "u6")


def test_rat_unify_examples(xyz):
    x, y, _ = xyz
    assert rat_unify([(x, f(x))]) == RSubst({x: f(x)})
    with pytest.raises(ClashFailure):
        rat_unify([(f(a), g(a))])
    with pytest.raises(ClashFailure):
        rat_unify([(f(x), f(x, y))])
    assert rat_unify([(f(x, b), f(a, y))]) == RSubst({x: a, y: b})


def test_rat_unify_cyclic_terms(xyz):
    x, y, _ = xyz
    # no occurs check: both are the infinite tree f(f(...))
    sigma = rat_unify([(x, f(x)), (y, f(y)), (x, y)])
    assert not rt_finite(x, sigma) and not rt_finite(y, sigma)
    assert rt_ground(x, sigma)
    # classes are read back through their representative variable
    assert unify_bindings(RSubst({x: f(y)}), y, a) == RSubst({x: f(y), y: a})


def test_rat_unify_result_is_solved_form(registry, rng):
    variables = registry.variables("v1", "v2", "v3", "v4")
    for _ in range(300):
        s1 = random_rsubst(rng, variables, depth=2)
        s2 = random_rsubst(rng, variables, depth=2)
        try:
            tau = rat_unify(list(s2.items()), base=s1)
        except ClashFailure:
            continue
        assert check_rsubst(tau.items()) == tau


def test_occ_examples(xyz):
    x, y, _ = xyz
    assert occ(RSubst({x: f(y)}), y) == {x, y}
    assert occ(RSubst(), x) == {x}
    assert occ(RSubst({x: f(y)}), x) == frozenset()


def test_gvars_examples(xyz):
    x, y, z = xyz
    assert gvars(RSubst({x: f(y, z), y: g(z, x), z: f(a)})) == {x, y, z}
    assert gvars(RSubst()) == frozenset()
    assert gvars(RSubst({x: f(y)})) == frozenset()


def test_hvars_examples(registry):
    x1, x2, x3, x4, x5 = registry.variables("x1", "x2", "x3", "x4", "x5")
    sigma = RSubst({x1: f(x2), x2: g(x5, x5), x3: f(x4), x4: g(x3, x3)})
    finite = hvars(sigma)
    assert finite.complement == {x3, x4}
    assert x1 in finite and x2 in finite and x5 in finite
    assert finite.restrict((x1, x2, x3, x4, x5)) == {x1, x2, x5}
    assert hvars(RSubst()) == CoFiniteSet()
    assert hvars(RSubst({x1: f(x1)})).complement == {x1}

    assert rt_finite(x1, sigma) and not rt_finite(x3, sigma)
    assert rt_finite(x1, RSubst())


def test_rt_ground_examples(xyz):
    x, y, z = xyz
    assert rt_ground(x, RSubst({x: f(y, z), y: g(z, x), z: f(a)}))
    assert not rt_ground(y, RSubst({x: f(y)}))
    assert not rt_ground(x, RSubst({x: f(y)}))
    assert rt_ground(x, RSubst({x: a}))


def test_other_oracles(xyz):
    x, y, z = xyz
    sigma = RSubst({x: f(y, y), z: f(z)})
    assert rt_free(y, sigma) and not rt_free(x, sigma)
    assert rt_free(x, RSubst({x: y}))
    assert occurrences(x, y, sigma) == 2
    assert occurrences(z, y, sigma) == 0
    assert not rt_linear(x, sigma) and rt_linear(y, sigma)
    assert occurrences(x, y, RSubst({x: f(x, y)})) == math.inf
    assert rt_term(x, sigma) is f(y, y)
    assert rt_term(z, sigma) is None
    assert hval(sigma, (x, z)) == {x: True, z: False}
    assert gval(sigma, (x, z)) == {x: False, z: True}


def test_alpha_sfl(xyz):
    x, y, z = xyz
    d = alpha_sfl(RSubst({x: f(y, y)}), (x, y, z))
    assert d.groups() == [[z], [x, y]]
    assert d.f == {y, z}
    assert d.l == {y, z}


def test_project_out_forgets_the_variable(registry, xyz):
    x, y, _ = xyz
    sigma = RSubst({x: f(y), y: a})
    projected = project_out(sigma, x, registry)
    assert x not in projected.vars
    assert rt_ground(y, projected)


def test_hvars_matches_cycle_oracle(six, rng):
    """Finiteness operator against graph-cycle detection, 10^4 substitutions."""
    for _ in range(10_000):
        sigma = random_rsubst(rng, six, depth=3)
        finite = hvars(sigma)
        ground = gvars(sigma)
        for v in sigma.dom | frozenset(six):
            assert (v in finite) == rt_finite(v, sigma), (sigma, v)
        assert ground == {v for v in sigma.dom if rt_ground(v, sigma)}, sigma


def test_normalization_and_unification_order_keep_finiteness(six, rng):
    for _ in range(500):
        sigma = random_rsubst(rng, six, depth=2)
        assert hvars(s_normalize(sigma)).restrict(six) == hvars(sigma).restrict(six)
        assert gvars(s_normalize(sigma)) == gvars(sigma)

        eqs = list(sigma.items())
        forward = rat_unify(eqs)
        backward = rat_unify(list(reversed(eqs)))
        assert hvars(forward).restrict(six) == hvars(backward).restrict(six) == hvars(sigma).restrict(six)
        assert {v for v in six if rt_ground(v, forward)} == {v for v in six if rt_ground(v, sigma)}


def test_sample_downarrow_examples(xyz):
    x, y, _ = xyz
    samples = sample_downarrow(RSubst(), (x,), 1, pool=lambda r, vs: a, seed=3)
    assert len(samples) == 1 and rt_ground(x, samples[0])

    tau = rat_unify([(y, a)], base=RSubst({x: f(y)}))
    assert s_normalize(tau) == RSubst({x: f(a), y: a})
    assert gvars(tau) == {x, y}

    for tau in sample_downarrow(RSubst({x: f(x)}), (x, y), 20, seed=5):
        assert not rt_finite(x, tau)


def test_instantiation_is_permanent(six, rng):
    """Finiteness can only be lost and finite groundness only gained along further instantiation."""
    for _ in range(1_000):
        sigma = random_rsubst(rng, six, depth=2, max_bindings=3)
        chain = [sigma]
        for _ in range(3):
            chain += sample_downarrow(chain[-1], six, 1, rng=rng)
        for before, after in zip(chain, chain[1:]):
            h_before = hvars(before).restrict(six)
            h_after = hvars(after).restrict(six)
            assert h_after <= h_before
            ground_before = {v for v in six if rt_ground(v, before)} & h_before
            ground_after = {v for v in six if rt_ground(v, after)} & h_after
            assert ground_before <= ground_after
