"""
Report models for analysis results. The JSON form is produced from the
pydantic models and the text form is rendered from the same models, so a
report read back from JSON prints exactly like the original.
"""
from typing import Dict, List, Optional

from pydantic import BaseModel

from finitree.analyzer.engine import AnalysisResult, Summary
from finitree.domains.state import AnalysisState
from finitree.utils.bitset import members, sorted_groups


class Sharing(BaseModel):
    groups: List[List[str]]
    free: List[str]
    linear: List[str]


class PredicateReport(BaseModel):
    name: str
    arity: int
    finite_params: List[int]
    sharing: Sharing
    fd_formula: str
    gd_formula: str
    reductions_fired: List[str]


class Report(BaseModel):
    predicates: List[PredicateReport]
    warnings: List[str] = []


def _names(variables, formals: tuple) -> List[str]:
    position = {x: i for i, x in enumerate(formals)}
    return [x.name for x in sorted(variables, key=lambda v: position.get(v, v.id))]


def predicate_report(summary: Summary, state: Optional[AnalysisState] = None,
                     formals: Optional[tuple] = None) -> PredicateReport:
    """
    Describe one predicate. `state` overrides the summary success pattern
    with an entry state whose argument variables are `formals`.
    """
    state = summary.state if state is None else state
    formals = summary.formals if formals is None else formals
    p = state.p
    groups = [_names(members(group, formals), formals) for group in sorted_groups(p.sh)]
    groups = [g for g in groups if g]
    return PredicateReport(
        name=summary.name,
        arity=summary.arity,
        finite_params=[i + 1 for i, x in enumerate(formals) if x in state.h],
        sharing=Sharing(groups=sorted(groups, key=lambda g: (len(g), g)),
                        free=_names(p.f & frozenset(formals), formals),
                        linear=_names(p.l & frozenset(formals), formals)),
        fd_formula=state.phi.to_sop(),
        gd_formula=state.psi.to_sop(),
        reductions_fired=list(summary.reductions_fired),
    )


def build_report(result: AnalysisResult, entries: Optional[Dict[str, tuple]] = None) -> Report:
    """
    Args:
        result: the analysis result
        entries: when given, only these predicates are reported, each as (argument variables, entry state)

    Returns:
        the Report
    """
    if entries is None:
        predicates = [predicate_report(result.summaries[ind]) for ind in sorted(result.summaries)]
    else:
        predicates = [predicate_report(result.summaries[ind], state, args)
                      for ind, (args, state) in entries.items()]
    return Report(predicates=predicates, warnings=list(result.warnings))


def to_json(report: Report) -> str:
    return report.model_dump_json(indent=2)


def from_json(text: str) -> Report:
    return Report.model_validate_json(text)


def _braces(items) -> str:
    return "{" + ",".join(items) + "}"


def render_text(report: Report) -> str:
    lines = []
    for pred in report.predicates:
        finite = [f"X{i}" for i in pred.finite_params]
        lines.append(f"{pred.name}/{pred.arity}: finite {_braces(finite)}")
        groups = ", ".join(_braces(g) for g in pred.sharing.groups)
        lines.append(f"  sharing: {{{groups}}}")
        lines.append(f"  free: {_braces(pred.sharing.free)}  linear: {_braces(pred.sharing.linear)}")
        lines.append(f"  fd: {pred.fd_formula}")
        lines.append(f"  gd: {pred.gd_formula}")
        if pred.reductions_fired:
            lines.append(f"  reductions: {', '.join(pred.reductions_fired)}")
    for warning in report.warnings:
        lines.append(f"warning: {warning}")
    return "\n".join(lines) + "\n"


def render_comparison(table: dict) -> str:
    """Finite-parameter counts per predicate and layer setting."""
    layers = []
    for counts in table.values():
        for layer in counts:
            if layer not in layers:
                layers.append(layer)
    width = max([len("predicate")] + [len(ind) for ind in table])
    lines = ["  ".join(["predicate".ljust(width)] + [layer.rjust(8) for layer in layers])]
    for indicator in sorted(table):
        row = [indicator.ljust(width)] + [str(table[indicator].get(layer, "-")).rjust(8) for layer in layers]
        lines.append("  ".join(row))
    return "\n".join(lines) + "\n"
