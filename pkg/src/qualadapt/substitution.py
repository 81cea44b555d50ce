"""Parameter substitutions and their abstraction/refinement factorisation."""
from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Iterable

from .qcn import QCN, Constraint, Parameter, ParamKind, QualVariable

log = logging.getLogger(__name__)


class SubstKind(Enum):
    CONCRETE = "concrete"
    ABSTRACTION = "abstraction"
    REFINEMENT = "refinement"
    MIXED = "mixed"


@dataclass(frozen=True)
class AtomicSubstitution:
    old: Parameter
    new: Parameter

    def __post_init__(self):
        if self.old == self.new:
            raise ValueError(f"trivial substitution {self.old}->{self.new}")

    @property
    def kind(self) -> SubstKind:
        match (self.old.is_abstract, self.new.is_abstract):
            case (False, False):
                return SubstKind.CONCRETE
            case (False, True):
                return SubstKind.ABSTRACTION
            case (True, False):
                return SubstKind.REFINEMENT
        return SubstKind.MIXED

    def __str__(self) -> str:
        return f"{self.old}->{self.new}"


@dataclass(frozen=True)
class Substitution:
    """A chain of atomic rewrites, applied left to right."""

    chain: tuple[AtomicSubstitution, ...] = ()

    @classmethod
    def of(cls, *pairs: tuple[str | Parameter, str | Parameter]) -> "Substitution":
        """``Substitution.of(("mushroom", "carrot"))``; strings are concrete."""
        as_param = lambda p: p if isinstance(p, Parameter) else Parameter(p)
        return cls(tuple(AtomicSubstitution(as_param(a), as_param(b)) for a, b in pairs))

    def then(self, other: "Substitution") -> "Substitution":
        return Substitution(self.chain + other.chain)

    def __call__(self, p: Parameter) -> Parameter:
        for atom in self.chain:
            if p == atom.old:
                p = atom.new
        return p

    def __len__(self) -> int:
        return len(self.chain)

    def __str__(self) -> str:
        return ",".join(str(a) for a in self.chain)

    def parameters(self) -> set[Parameter]:
        return {p for a in self.chain for p in (a.old, a.new)}


def parse_substitution(text: str, kinds: dict[str, ParamKind] | None = None) -> Substitution:
    """Parse ``"mushroom->carrot,a->b"``."""
    kinds = kinds or {}
    atoms = []
    for item in filter(None, (s.strip() for s in text.split(","))):
        old, sep, new = item.partition("->")
        old, new = old.strip(), new.strip()
        if not sep or not old or not new or not (old.isidentifier() and new.isidentifier()):
            raise ValueError(f"malformed substitution item {item!r}, expected 'p->q'")
        atoms.append(AtomicSubstitution(
            Parameter(old, kinds.get(old, ParamKind.CONCRETE)),
            Parameter(new, kinds.get(new, ParamKind.CONCRETE)),
        ))
    return Substitution(tuple(atoms))


def classify(s: Substitution) -> SubstKind:
    kinds = {a.kind for a in s.chain}
    if not kinds:
        return SubstKind.CONCRETE
    if len(kinds) == 1:
        return kinds.pop()
    return SubstKind.MIXED


def decompose(s: Substitution, avoid: Iterable[str] = ()) -> tuple[Substitution, Substitution]:
    """Split a concrete substitution into abstraction then refinement.

    Fresh placeholder parameters ``x1, x2, ...`` skip every name in ``avoid``
    and every name used by ``s``.  Each rewritten parameter is sent to its
    net image under the whole chain, so ``a->d,d->e`` yields ``a->x1->e``;
    parameters the chain maps back to themselves get no placeholder.
    """
    if classify(s) is not SubstKind.CONCRETE:
        raise ValueError(f"only concrete substitutions decompose, got {classify(s).value}")
    olds = [a.old for a in s.chain]
    if len(set(olds)) != len(olds):
        raise ValueError("substituted parameters must be pairwise distinct")
    taken = set(avoid) | {p.name for p in s.parameters()}
    alpha, rho = [], []
    counter = 0
    for p in olds:
        image = s(p)
        if image == p:
            continue
        counter += 1
        while f"x{counter}" in taken:
            counter += 1
        fresh = Parameter(f"x{counter}", ParamKind.PLACEHOLDER)
        alpha.append(AtomicSubstitution(p, fresh))
        rho.append(AtomicSubstitution(fresh, image))
    return Substitution(tuple(alpha)), Substitution(tuple(rho))


def apply(s: Substitution, target):
    """Rewrite a parameter, variable, constraint or network; labels are kept."""
    if isinstance(target, Parameter):
        return s(target)
    if isinstance(target, QualVariable):
        return apply_variable(s, target)
    if isinstance(target, Constraint):
        return Constraint(apply_variable(s, target.left), target.label,
                          apply_variable(s, target.right))
    if isinstance(target, QCN):
        return apply_qcn(s, target)[0]
    raise TypeError(f"cannot substitute into {type(target).__name__}")


def apply_variable(s: Substitution, v: QualVariable) -> QualVariable:
    if not s.chain or not v.params:
        return v
    return QualVariable(v.functor, tuple(s(p) for p in v.params))


def apply_qcn(s: Substitution, q: QCN) -> tuple[QCN, list[tuple[QualVariable, ...]]]:
    """Apply ``s`` to a network and report variables merged by it.

    Merged variables have their labels intersected; a merged pair whose label
    excludes the identity relation makes the result contradictory.
    """
    if not s.chain:
        return q, []
    image = {v: apply_variable(s, v) for v in q.variables}
    groups: dict[QualVariable, list[QualVariable]] = {}
    for v, w in image.items():
        groups.setdefault(w, []).append(v)
    collisions = [tuple(vs) for w, vs in groups.items() if len(vs) > 1]
    for vs in collisions:
        log.warning("substitution %s merges %s", s, ", ".join(map(str, vs)))
    out = QCN(
        q.algebra,
        image.values(),
        [Constraint(image[c.left], c.label, image[c.right]) for c in q.constraints()],
    )
    return out, collisions
