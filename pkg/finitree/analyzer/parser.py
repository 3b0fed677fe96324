"""
PEG grammar for the analyzed Prolog subset and the visitor turning Arpeggio
parse trees into Program/Clause/Goal values.

Clauses end with `.`, bodies are `,`-separated goals, `=` is the only infix
operator and `%` starts a comment running to the end of the line. Lists are
accepted as sugar for `'.'/2` and `[]`. Cut and `\\+` parse but are kept as
unsupported goals.
"""
from typing import Optional as Opt

from arpeggio import EOF, NoMatch, Optional, PTNodeVisitor, ParserPython, ZeroOrMore, visit_parse_tree
from arpeggio import RegExMatch as _

from finitree.analyzer.program import Call, Clause, Program, Unify, Unsupported
from finitree.exceptions import PrologSyntaxError
from finitree.logger import setup_logger
from finitree.terms.term import Functor, VariableRegistry

logger = setup_logger(__name__)

NIL = "[]"
CONS = "."


def comment():      return _(r"%.*")
def variable():     return _(r"[A-Z_]\w*")
def name():         return _(r"[a-z]\w*|'[^']*'")
def number():       return _(r"-?\d+")
def arguments():    return "(", term, ZeroOrMore(",", term), ")"
def compound():     return name, arguments
def list_tail():    return "|", term
def plist():        return "[", Optional(term, ZeroOrMore(",", term), Optional(list_tail)), "]"
def term():         return [compound, plist, variable, number, name]
def equality():     return term, "=", term
def cut():          return _(r"!")
def negation():     return "\\+", goal
def goal():         return [negation, cut, equality, compound, name]
def body():         return goal, ZeroOrMore(",", goal)
def head():         return [compound, name]
def clause():       return head, Optional(":-", body), "."
def program():      return ZeroOrMore(clause), EOF


prolog_parser = ParserPython(program, comment)


class _Tail:
    __slots__ = ("term",)

    def __init__(self, term):
        self.term = term


def _structural(children) -> list:
    # punctuation terminals may or may not reach the visitor
    return [c for c in children if not isinstance(c, str)]


class ClauseVisitor(PTNodeVisitor):
    """
    Builds terms bottom-up. Variables are scoped per clause: the same name
    inside one clause is one Variable, across clauses it is not.
    """

    def __init__(self, registry: VariableRegistry, parser: ParserPython, **kwargs):
        super().__init__(**kwargs)
        self.registry = registry
        self.parser = parser
        self._scope = {}
        self._order = []

    def visit_variable(self, node, ch):
        text = str(node.value)
        if text == "_":
            var = self.registry.new("_")
            self._order.append(var)
            return var
        var = self._scope.get(text)
        if var is None:
            var = self.registry.new(text)
            self._scope[text] = var
            self._order.append(var)
        return var

    def visit_name(self, node, ch):
        text = str(node.value)
        if text.startswith("'"):
            text = text[1:-1]
        return Functor(text, ())

    def visit_number(self, node, ch):
        return Functor(str(node.value), ())

    def visit_arguments(self, node, ch):
        return tuple(_structural(ch))

    def visit_compound(self, node, ch):
        functor, args = _structural(ch)
        return Functor(functor.name, args)

    def visit_list_tail(self, node, ch):
        return _Tail(_structural(ch)[0])

    def visit_plist(self, node, ch):
        items = _structural(ch)
        tail = Functor(NIL, ())
        if items and isinstance(items[-1], _Tail):
            tail = items.pop().term
        for item in reversed(items):
            tail = Functor(CONS, (item, tail))
        return tail

    def visit_term(self, node, ch):
        return _structural(ch)[0]

    def visit_equality(self, node, ch):
        left, right = _structural(ch)
        return Unify(left, right)

    def visit_cut(self, node, ch):
        return Unsupported("!")

    def visit_negation(self, node, ch):
        inner = _structural(ch)[0]
        return Unsupported(f"\\+ {inner}", inner.variables())

    def visit_goal(self, node, ch):
        goal = _structural(ch)[0]
        if isinstance(goal, Functor):
            return Call(goal.name, goal.args)
        return goal

    def visit_body(self, node, ch):
        return tuple(_structural(ch))

    def visit_head(self, node, ch):
        functor = _structural(ch)[0]
        return Call(functor.name, functor.args)

    def visit_clause(self, node, ch):
        parts = _structural(ch)
        head = parts[0]
        goals = parts[1] if len(parts) > 1 else ()
        line, _col = self.parser.pos_to_linecol(node.position)
        clause = Clause(head, goals, tuple(self._order), line)
        self._scope = {}
        self._order = []
        return clause

    def visit_program(self, node, ch):
        return [c for c in ch if isinstance(c, Clause)]


def parse_program(text: str, registry: Opt[VariableRegistry] = None) -> Program:
    """
    Parse a program in the supported Prolog subset.

    Args:
        text: program source
        registry: registry the clause variables are created in (a new one by default)

    Returns:
        the parsed Program

    Raises:
        PrologSyntaxError: at the first position the grammar cannot continue from
    """
    registry = VariableRegistry() if registry is None else registry
    try:
        tree = prolog_parser.parse(text)
    except NoMatch as e:
        line, column = prolog_parser.pos_to_linecol(e.position)
        expected = sorted({r.name for r in getattr(e, "rules", None) or ()})
        message = f"expected {' or '.join(expected)}" if expected else "unexpected input"
        raise PrologSyntaxError(message, line, column) from None

    clauses = visit_parse_tree(tree, ClauseVisitor(registry, prolog_parser))
    if not isinstance(clauses, list):
        clauses = [clauses] if isinstance(clauses, Clause) else []
    logger.info(f"parsed {len(clauses)} clauses")
    return Program(clauses, registry)


def parse_goal(text: str, registry: VariableRegistry) -> Call:
    """Parse a single goal such as `r(X, Y)` (no trailing dot needed)."""
    source = text.strip()
    if not source.endswith("."):
        source += "."
    program = parse_program(f"'$goal' :- {source}", registry)
    body = program.clauses[0].body
    if len(body) != 1 or not isinstance(body[0], Call):
        raise PrologSyntaxError(f"not a single predicate goal: {text}")
    return body[0]
