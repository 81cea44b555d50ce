"""Revision-based adaptation of a source case to a target case."""
from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

from .qcn import QCN, Constraint, QualVariable, Scenario, conjoin
from .revision import revise
from .solver import is_consistent
from .substitution import Substitution, SubstKind, apply_qcn, apply_variable, classify, decompose
from .substitution import parse_substitution
from .textformat import parse_qcn


class AdaptationError(ValueError):
    """The adaptation problem violates a precondition."""


@dataclass(frozen=True)
class AdaptationProblem:
    source: QCN
    target: QCN
    dk: QCN
    subst: Substitution

    def validate(self) -> None:
        algs = {self.source.algebra.name, self.target.algebra.name, self.dk.algebra.name}
        if len(algs) != 1:
            raise AdaptationError(f"source, target and domain knowledge mix algebras {sorted(algs)}")
        for name, q in (("source", self.source), ("target", self.target)):
            abstract = [v for v in q.variables if not v.is_concrete()]
            if abstract:
                raise AdaptationError(f"{name} has non-concrete variables: "
                                      + ", ".join(map(str, abstract)))
        if classify(self.subst) is not SubstKind.CONCRETE:
            raise AdaptationError(f"substitution {self.subst} is not concrete")
        olds = [a.old for a in self.subst.chain]
        if len(set(olds)) != len(olds):
            raise AdaptationError("substitution rewrites a parameter twice")
        source_params = {p for v in self.source.variables for p in v.params}
        missing = [p.name for p in olds if p not in source_params]
        if missing:
            raise AdaptationError("substituted parameters absent from the source: "
                                  + ", ".join(missing))
        if not is_consistent(conjoin(self.dk, self.source)):
            raise AdaptationError("domain knowledge and source are inconsistent")
        if not is_consistent(conjoin(self.dk, self.target)):
            raise AdaptationError("domain knowledge and target are inconsistent")


@dataclass
class AdaptedCase:
    scenarios: list[Scenario]
    distance: int
    chosen: Scenario | None
    psi: QCN = field(repr=False)
    mu: QCN = field(repr=False)
    alpha: Substitution = field(repr=False)
    rho: Substitution = field(repr=False)
    expanded: int = 0


def build_refinement_qcn(
    abstracted_vars: Iterable[QualVariable],
    rho: Substitution,
    algebra,
    duration_only: bool = False,
) -> QCN:
    """Tie every abstracted variable to its refinement with the identity relation.

    With ``duration_only`` the tie is equal duration (``?=``) instead of the
    full identity; only meaningful for algebras with a duration factor.
    """
    if duration_only:
        label = algebra.expand_shortcut("?" + algebra.factors[1].identity)
    else:
        label = frozenset((algebra.identity,))
    abstracted = set(abstracted_vars)
    refined = {v: apply_variable(rho, v) for v in abstracted}
    ties = [Constraint(v, label, w) for v, w in refined.items() if v != w]
    if not ties:
        return QCN(algebra)
    return QCN(algebra, abstracted | set(refined.values()), ties)


def adapt(
    problem: AdaptationProblem,
    *,
    max_nodes: int | None = None,
    duration_only: bool = False,
    validate: bool = True,
) -> AdaptedCase:
    if validate:
        problem.validate()
    dk, source, target = problem.dk, problem.source, problem.target
    used = {p.name for q in (dk, source, target) for v in q.variables for p in v.params}
    alpha, rho = decompose(problem.subst, avoid=used)

    abstracted, _ = apply_qcn(alpha, source)
    psi = conjoin(dk, abstracted)
    if not is_consistent(psi):
        raise AdaptationError("abstracted source is inconsistent with the domain knowledge")
    tie = build_refinement_qcn(abstracted.variables, rho, dk.algebra, duration_only)
    mu = conjoin(conjoin(dk, target), tie)
    if not is_consistent(mu):
        raise AdaptationError("target, domain knowledge and refinement ties are inconsistent")

    result = revise(psi, mu, max_nodes=max_nodes)
    chosen = result.scenarios[0] if result.scenarios else None
    return AdaptedCase(result.scenarios, result.distance, chosen, result.psi, result.mu,
                       alpha, rho, result.expanded)


def problem_from_files(
    source: str | Path,
    target: str | Path,
    dk: str | Path,
    subst: str,
    algebra: str | None = None,
) -> AdaptationProblem:
    """Read the three networks and the substitution, then validate the problem.

    Parse failures raise :class:`~qualadapt.textformat.ParseError` (or
    ``ValueError`` for the substitution); violated preconditions raise
    :class:`AdaptationError`.
    """
    nets = [parse_qcn(Path(p).read_text(), algebra) for p in (source, target, dk)]
    problem = AdaptationProblem(nets[0], nets[1], nets[2], parse_substitution(subst))
    problem.validate()
    return problem
