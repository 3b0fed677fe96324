from collections.abc import Mapping
from typing import Iterable, NamedTuple

from finitree.exceptions import CircularVariableChain, DuplicateDomainVar, IdentityBinding
from finitree.logger import setup_logger
from finitree.terms.term import Term, Variable, apply_subst, format_term, vars_of

logger = setup_logger(__name__)


class Binding(NamedTuple):
    lhs: Variable
    rhs: Term

    def __repr__(self):
        return f"{self.lhs.name} -> {format_term(self.rhs)}"


class RSubst(Mapping):
    """
    Immutable substitution in rational solved form. Build validated instances
    with `check_rsubst`; the constructor itself trusts its input.
    """

    __slots__ = ("_map", "_vars", "_hash")

    def __init__(self, bindings=()):
        if isinstance(bindings, Mapping):
            items = bindings.items()
        else:
            items = bindings
        self._map = dict(sorted(items, key=lambda b: b[0].id))
        self._vars = None
        self._hash = None

    def __getitem__(self, key):
        return self._map[key]

    def __iter__(self):
        return iter(self._map)

    def __len__(self):
        return len(self._map)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._map.items()))
        return self._hash

    @property
    def dom(self) -> frozenset:
        return frozenset(self._map)

    @property
    def vars(self) -> frozenset:
        """dom(σ) together with every variable occurring in a right-hand side."""
        if self._vars is None:
            rhs_vars = frozenset().union(*(vars_of(t) for t in self._map.values()))
            self._vars = self.dom | rhs_vars
        return self._vars

    def bindings(self) -> tuple:
        return tuple(Binding(x, t) for x, t in self._map.items())

    def apply(self, t: Term) -> Term:
        return apply_subst(t, self._map)

    def with_binding(self, x: Variable, t: Term) -> "RSubst":
        """Copy with x bound to t (x replaced if already bound). No validation."""
        new = dict(self._map)
        new[x] = t
        return RSubst(new)

    def __repr__(self):
        return "{" + ", ".join(repr(b) for b in self.bindings()) + "}"


def check_binding(x: Variable, t: Term) -> None:
    """Raises IdentityBinding for x -> x, which no abstract operator accepts."""
    if t is x:
        raise IdentityBinding(f"identity binding {x.name} -> {x.name}")


def check_rsubst(bindings: Iterable) -> RSubst:
    """
    Validate a set of bindings and wrap it as an RSubst.

    Args:
        bindings: iterable of Binding / (lhs, rhs) pairs, or a mapping

    Returns:
        RSubst

    Raises:
        DuplicateDomainVar: two bindings share the same lhs
        IdentityBinding: a binding x -> x
        CircularVariableChain: x1 -> x2, ..., xn -> x1 with n > 1
    """
    if isinstance(bindings, Mapping):
        bindings = bindings.items()

    seen = {}
    for lhs, rhs in bindings:
        if lhs in seen:
            raise DuplicateDomainVar(f"variable {lhs.name} bound twice")
        check_binding(lhs, rhs)
        seen[lhs] = rhs

    # variable-to-variable bindings form chains; follow each one
    for start, rhs in seen.items():
        if not isinstance(rhs, Variable):
            continue
        visited = {start}
        current = rhs
        while isinstance(current, Variable) and current in seen:
            if current in visited:
                raise CircularVariableChain(
                    f"circular variable chain through {start.name}"
                )
            visited.add(current)
            current = seen[current]

    return RSubst(seen)


def s_step(sigma: RSubst, x: Variable, y: Variable) -> RSubst:
    """
    One S-transformation step: with x -> t and y -> s in σ and x in vars(s),
    replace the binding of y by y -> s[x/t].
    """
    t = sigma[x]
    s = sigma[y]
    return sigma.with_binding(y, apply_subst(s, {x: t}))


def s_normalize(sigma: RSubst) -> RSubst:
    """
    Rewrite σ by S-steps into a strongly variable-idempotent substitution with
    the same domain, the same variables and the same rational-tree meaning.

    Domain variables are eliminated in id order: for each y, the current
    binding of y is substituted into every other binding mentioning y. After
    the pass each rhs mentions only non-domain variables and domain variables
    whose own binding mentions themselves.
    """
    current = sigma
    steps = 0
    for y in sorted(sigma.dom):
        for z in sorted(current.dom):
            if z is not y and y in vars_of(current[z]):
                current = s_step(current, y, z)
                steps += 1
    logger.debug(f"s_normalize: {steps} S-steps on {len(sigma)} bindings")
    return current


def is_variable_idempotent(sigma: Mapping) -> bool:
    """vars(yσσ) = vars(yσ) for every domain variable y (enough for every term)."""
    for y, t in sigma.items():
        if vars_of(apply_subst(t, sigma)) != vars_of(t):
            return False
    return True


def compose(tau: Mapping, sigma: Mapping) -> RSubst:
    """
    τ∘σ: the substitution mapping t to (t·σ)·τ. Identities are dropped; the
    result is not checked for solved form.
    """
    bindings = {}
    for x in sorted(set(sigma) | set(tau)):
        t = apply_subst(apply_subst(x, sigma), tau)
        if t is not x:
            bindings[x] = t
    return RSubst(bindings)


def power(sigma: Mapping, i: int) -> RSubst:
    """σ applied i times (σ^0 is the identity)."""
    result = RSubst()
    for _ in range(i):
        result = compose(sigma, result)
    return result
