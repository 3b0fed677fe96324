from abc import ABC, abstractmethod

from finitree.terms.term import Term, Variable


class ParameterDomain(ABC):
    """
    Interface every parameter domain P of the H x P construction answers.
    Predicates may only say True when the property holds for every
    substitution the element describes; share queries may over-approximate.
    """

    @abstractmethod
    def ind(self, s: Term, t: Term) -> bool:
        pass

    @abstractmethod
    def share_lin(self, s: Term, t: Term) -> bool:
        pass

    @abstractmethod
    def ground(self, t: Term) -> bool:
        pass

    @abstractmethod
    def gfree(self, t: Term) -> bool:
        pass

    @abstractmethod
    def lin(self, t: Term) -> bool:
        pass

    def or_lin(self, s: Term, t: Term) -> bool:
        return self.lin(s) or self.lin(t)

    @abstractmethod
    def share_same_var(self, s: Term, t: Term) -> frozenset:
        pass

    @abstractmethod
    def share_with(self, t: Term) -> frozenset:
        pass

    @abstractmethod
    def amgu(self, x: Variable, t: Term) -> "ParameterDomain":
        pass

    @abstractmethod
    def proj(self, x: Variable) -> "ParameterDomain":
        pass

    @abstractmethod
    def merge(self, other: "ParameterDomain") -> "ParameterDomain":
        pass

    @property
    @abstractmethod
    def is_bottom(self) -> bool:
        pass
