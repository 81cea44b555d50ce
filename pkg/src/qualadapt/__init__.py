"""Qualitative constraint networks, distance-based revision and case adaptation."""

__version__ = "0.1.0"

from .algebra import Algebra, get_algebra
from .qcn import QCN, Parameter, ParamKind, QualVariable, Scenario, conjoin, satisfies, var
from .revision import RevisionResult, revise
from .adaptation import AdaptationProblem, AdaptedCase, adapt

__all__ = [
    "Algebra", "get_algebra", "QCN", "Parameter", "ParamKind", "QualVariable", "Scenario",
    "conjoin", "satisfies", "var", "RevisionResult", "revise", "AdaptationProblem",
    "AdaptedCase", "adapt",
]
