from finitree.logger import setup_logger

logger = setup_logger(__name__)


class BasicError(Exception):
    def __init__(self, message="Value error"):
        self.message = message
        logger.debug(f"{self.__class__.__name__}: {self.message}")
        super().__init__(self.message)

    def _render_traceback_(self):
        pass


class TermError(BasicError):
    """A set of bindings is not a substitution in rational solved form."""


class DuplicateDomainVar(TermError):
    pass


class IdentityBinding(TermError):
    pass


class CircularVariableChain(TermError):
    pass


class ClashFailure(BasicError):
    """Distinct functors (or ranks) met during rational unification."""


class UnknownVariable(BasicError):
    pass


class AnalysisError(BasicError):
    pass


class PrologSyntaxError(AnalysisError):
    def __init__(self, message="Syntax error", line=None, column=None):
        self.line = line
        self.column = column
        where = f" at line {line}, column {column}" if line is not None else ""
        super().__init__(f"{message}{where}")


class UnknownPredicate(AnalysisError):
    pass


class IterationCapExceeded(AnalysisError):
    pass
