import random
from typing import Callable, Iterable, Optional, Sequence

from tqdm import tqdm

from finitree.concrete.operators import hvars
from finitree.concrete.unify import rat_unify
from finitree.config import get_config
from finitree.exceptions import ClashFailure, TermError
from finitree.logger import setup_logger
from finitree.terms.rsubst import RSubst, check_rsubst
from finitree.terms.term import Functor, Term, Variable

logger = setup_logger(__name__)
cfg = get_config()

SEED = cfg["sampling"]["seed"]
POOL_DEPTH = cfg["sampling"]["pool_depth"]
MAX_ATTEMPTS = cfg["sampling"]["max_attempts"]
PROGRESS = cfg["global"]["progress"]

# (name, rank) pairs: at least one constant and one compound
SIGNATURE = (("a", 0), ("b", 0), ("f", 1), ("g", 2))


def random_term(rng: random.Random, variables: Sequence[Variable], depth: int,
                signature=SIGNATURE, var_weight: float = 0.5) -> Term:
    """Random term of depth at most `depth` over `variables` and `signature`."""
    leaves = [s for s in signature if s[1] == 0]
    compounds = [s for s in signature if s[1] > 0]
    if depth <= 0 or rng.random() < 0.3:
        if variables and rng.random() < var_weight:
            return rng.choice(variables)
        name, _ = rng.choice(leaves)
        return Functor(name, ())
    name, rank = rng.choice(compounds)
    return Functor(name, tuple(random_term(rng, variables, depth - 1, signature, var_weight)
                               for _ in range(rank)))


def random_binding(rng: random.Random, variables: Sequence[Variable], depth: int = 2,
                   signature=SIGNATURE) -> tuple:
    """Random binding (x, t) over `variables`; identities x -> x are redrawn."""
    while True:
        x = rng.choice(variables)
        t = random_term(rng, variables, depth, signature)
        if t is not x:
            return x, t


def random_rsubst(rng: random.Random, variables: Sequence[Variable], depth: int = 3,
                  max_bindings: Optional[int] = None, signature=SIGNATURE) -> RSubst:
    """
    Random substitution in rational solved form over `variables`. Candidates
    with circular variable chains or identities are redrawn.
    """
    variables = list(variables)
    if max_bindings is None:
        max_bindings = len(variables)
    while True:
        n = rng.randint(0, max_bindings)
        dom = rng.sample(variables, n)
        bindings = [(x, random_term(rng, variables, depth, signature)) for x in dom]
        try:
            return check_rsubst(bindings)
        except TermError:
            continue


def random_finite_rsubst(rng: random.Random, variables: Sequence[Variable], depth: int = 3,
                         max_bindings: Optional[int] = None) -> RSubst:
    """Random substitution whose every rational tree is finite."""
    while True:
        sigma = random_rsubst(rng, variables, depth, max_bindings)
        if not hvars(sigma).complement:
            return sigma


def sample_downarrow(sigma: RSubst, vi: Iterable[Variable], n: int,
                     pool: Optional[Callable[[random.Random, Sequence[Variable]], Term]] = None,
                     seed: Optional[int] = None, rng: Optional[random.Random] = None,
                     max_bindings: int = 2) -> list:
    """
    Random further instantiations of σ: each sample is the most general
    solution of σ together with a few random equations over vars(σ) ∪ VI.

    Args:
        sigma: the substitution to instantiate
        vi: variables of interest
        n: number of samples wanted
        pool: callable (rng, variables) -> term used for right-hand sides;
            defaults to random terms of depth `sampling.pool_depth`
        seed: seed for a private random stream (ignored when rng is given)
        rng: random stream to draw from
        max_bindings: at most that many extra equations per sample

    Returns:
        list of at most n RSubst (clashing draws are retried up to
        `sampling.max_attempts` times each)
    """
    if rng is None:
        rng = random.Random(SEED if seed is None else seed)
    if pool is None:
        def pool(r, vs):
            return random_term(r, vs, POOL_DEPTH)

    variables = sorted(sigma.vars | frozenset(vi))
    samples = []
    for _ in tqdm(range(n), disable=not PROGRESS, desc="sampling"):
        for _attempt in range(MAX_ATTEMPTS):
            k = rng.randint(1, max_bindings) if variables else 0
            eqs = [(rng.choice(variables), pool(rng, variables)) for _ in range(k)]
            try:
                samples.append(rat_unify(eqs, base=sigma))
                break
            except ClashFailure:
                logger.debug("sample_downarrow: clash, redrawing")
                continue
    return samples
