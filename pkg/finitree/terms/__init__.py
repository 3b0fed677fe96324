from finitree.terms.term import (
    Functor,
    Term,
    Variable,
    VariableRegistry,
    apply_subst,
    const,
    format_term,
    is_ground,
    is_linear,
    is_var,
    mvars,
    nlvars,
    occ_lin,
    rename_term,
    term_size,
    term_vars,
    vars_of,
)
from finitree.terms.rsubst import (
    Binding,
    RSubst,
    check_binding,
    check_rsubst,
    is_variable_idempotent,
    s_normalize,
    s_step,
)
