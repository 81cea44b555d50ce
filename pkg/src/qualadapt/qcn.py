"""Qualitative constraint networks over parametrised interval variables."""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from itertools import combinations, product
from typing import Iterable, Iterator, Union

from .algebra import Algebra, AlgebraError


class ParamKind(Enum):
    CONCRETE = "concrete"
    # universally quantified, grounded when networks are conjoined
    TEMPLATE = "template"
    # introduced by abstraction; behaves as an ordinary name
    PLACEHOLDER = "placeholder"


@dataclass(frozen=True)
class Parameter:
    name: str
    kind: ParamKind = ParamKind.CONCRETE

    @property
    def is_abstract(self) -> bool:
        return self.kind is not ParamKind.CONCRETE

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class QualVariable:
    """An interval such as ``cook(carrot)``; equality is structural."""

    functor: str
    params: tuple[Parameter, ...] = ()

    @property
    def sort_key(self) -> tuple:
        return (self.functor, tuple(p.name for p in self.params))

    def __lt__(self, other: "QualVariable") -> bool:
        return self.sort_key < other.sort_key

    def __str__(self) -> str:
        if not self.params:
            return self.functor
        return f"{self.functor}({','.join(p.name for p in self.params)})"

    def is_concrete(self) -> bool:
        return not any(p.is_abstract for p in self.params)


def var(functor: str, *params: Union[str, Parameter]) -> QualVariable:
    """Shorthand: ``var("cook", "carrot")``; strings become concrete parameters."""
    return QualVariable(
        functor, tuple(p if isinstance(p, Parameter) else Parameter(p) for p in params)
    )


@dataclass(frozen=True)
class Constraint:
    left: QualVariable
    label: frozenset[str]
    right: QualVariable


ConstraintLike = Union[Constraint, tuple]


class QCN:
    """A normalized network: every variable pair carries a label.

    Construction intersects repeated constraints on a pair, stores each pair
    once in canonical orientation (smaller variable first), and gives
    unconstrained pairs the full universe. An empty intersection does not
    raise; the network records the offending pair in ``conflict``.
    """

    __slots__ = ("algebra", "variables", "_labels", "conflict", "_hash")

    def __init__(
        self,
        algebra: Algebra,
        variables: Iterable[QualVariable] = (),
        constraints: Iterable[ConstraintLike] = (),
    ):
        constraints = [c if isinstance(c, Constraint) else Constraint(c[0], _as_label(c[1]), c[2])
                       for c in constraints]
        vs = set(variables)
        for c in constraints:
            vs.add(c.left)
            vs.add(c.right)
        ordered = tuple(sorted(vs))
        labels = {pair: algebra.full for pair in combinations(ordered, 2)}
        conflict = None
        for c in constraints:
            label = frozenset(c.label)
            unknown = label - algebra.full
            if unknown:
                raise AlgebraError(f"unknown {algebra.name} relations {sorted(unknown)}")
            if c.left == c.right:
                if algebra.identity not in label and conflict is None:
                    conflict = (c.left, c.right)
                continue
            u, v, label = _orient(algebra, c.left, c.right, label)
            labels[(u, v)] &= label
            if not labels[(u, v)] and conflict is None:
                conflict = (u, v)
        self._init(algebra, ordered, labels, conflict)

    def _init(self, algebra, variables, labels, conflict):
        self.algebra = algebra
        self.variables: tuple[QualVariable, ...] = variables
        self._labels: dict[tuple[QualVariable, QualVariable], frozenset[str]] = labels
        self.conflict = conflict
        self._hash = None

    @classmethod
    def _make(cls, algebra, variables, labels, conflict=None) -> "QCN":
        """Trusted constructor: ``labels`` already canonical and complete."""
        obj = cls.__new__(cls)
        obj._init(algebra, variables, labels, conflict)
        return obj

    # access

    def label(self, u: QualVariable, v: QualVariable) -> frozenset[str]:
        if u == v:
            return frozenset((self.algebra.identity,))
        if u < v:
            return self._labels[(u, v)]
        return self.algebra.converse_set(self._labels[(v, u)])

    def pairs(self) -> Iterator[tuple[QualVariable, QualVariable, frozenset[str]]]:
        """Every pair in canonical order, smaller variable first."""
        for (u, v), label in self._labels.items():
            yield u, v, label

    def constraints(self) -> list[Constraint]:
        """The pairs whose label is not the full universe."""
        full = self.algebra.full
        return [Constraint(u, lab, v) for u, v, lab in self.pairs() if lab != full]

    @property
    def contradictory(self) -> bool:
        return self.conflict is not None

    def is_scenario(self) -> bool:
        return all(len(lab) == 1 for lab in self._labels.values())

    def scenario_count(self) -> int:
        n = 1
        for lab in self._labels.values():
            n *= len(lab)
        return n

    # derived networks

    def extend(self, variables: Iterable[QualVariable]) -> "QCN":
        """Add variables, unconstrained against everything."""
        extra = set(variables) - set(self.variables)
        if not extra:
            return self
        ordered = tuple(sorted(set(self.variables) | extra))
        labels = {
            pair: self._labels.get(pair, self.algebra.full) for pair in combinations(ordered, 2)
        }
        return QCN._make(self.algebra, ordered, labels, self.conflict)

    def with_label(self, u: QualVariable, v: QualVariable, label: frozenset[str]) -> "QCN":
        """Replace (not intersect) the label of one pair."""
        u, v, label = _orient(self.algebra, u, v, label)
        labels = dict(self._labels)
        labels[(u, v)] = label
        conflict = self.conflict
        if not label and conflict is None:
            conflict = (u, v)
        return QCN._make(self.algebra, self.variables, labels, conflict)

    # value semantics

    def _key(self):
        return (self.algebra.name, self.variables, tuple(self._labels.values()), self.conflict)

    def __eq__(self, other) -> bool:
        if not isinstance(other, QCN):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self._key())
        return self._hash

    def __repr__(self) -> str:
        body = "; ".join(
            f"{u} {self.algebra.format_set(lab)} {v}" for u, v, lab in self.pairs()
            if lab != self.algebra.full
        )
        return f"{type(self).__name__}<{self.algebra.name}, {len(self.variables)} vars: {body}>"


class Scenario(QCN):
    """A complete, atomic network: exactly one basic relation per pair."""

    __slots__ = ()

    @classmethod
    def from_qcn(cls, q: QCN) -> "Scenario":
        if not q.is_scenario():
            raise ValueError("network has a non-singleton label")
        return cls._make(q.algebra, q.variables, q._labels, q.conflict)

    def relation(self, u: QualVariable, v: QualVariable) -> str:
        (r,) = self.label(u, v)
        return r


def _as_label(label) -> frozenset[str]:
    if isinstance(label, str):
        return frozenset((label,))
    return frozenset(label)


def _orient(algebra, u, v, label):
    if v < u:
        return v, u, algebra.converse_set(label)
    return u, v, label


def normalize(q: QCN) -> QCN:
    """Canonical form of ``q``: rebuilt from its own constraints.

    Networks are normalized on construction, so this is idempotent and
    structurally equal to ``q`` for anything built through :class:`QCN`.
    """
    out = QCN(q.algebra, q.variables, q.constraints())
    if q.conflict is not None and out.conflict is None:
        out.conflict = q.conflict
    return out


def _template_groundings(
    c: Constraint, concretes: list[Parameter], universe: set[QualVariable]
) -> Iterator[Constraint]:
    templates = []
    for p in c.left.params + c.right.params:
        if p.kind is ParamKind.TEMPLATE and p not in templates:
            templates.append(p)
    if not templates:
        return
    for choice in product(concretes, repeat=len(templates)):
        mapping = dict(zip(templates, choice))
        u = QualVariable(c.left.functor, tuple(mapping.get(p, p) for p in c.left.params))
        v = QualVariable(c.right.functor, tuple(mapping.get(p, p) for p in c.right.params))
        if u != v and u in universe and v in universe:
            yield Constraint(u, c.label, v)


def conjoin(q1: QCN, q2: QCN) -> QCN:
    """Conjunction, grounding template parameters over the concrete parameters present.

    A template constraint is grounded only when both grounded variables are
    already among the variables of ``q1`` or ``q2``.
    """
    if q1.algebra is not q2.algebra:
        raise ValueError(f"cannot conjoin {q1.algebra.name} with {q2.algebra.name}")
    universe = set(q1.variables) | set(q2.variables)
    concretes = sorted(
        {p for v in universe for p in v.params if p.kind is ParamKind.CONCRETE},
        key=lambda p: p.name,
    )
    base = q1.constraints() + q2.constraints()
    grounded = [g for c in base for g in _template_groundings(c, concretes, universe)]
    out = QCN(q1.algebra, universe, base + grounded)
    if out.conflict is None:
        out.conflict = q1.conflict or q2.conflict
    return out


def satisfies(s: QCN, q: QCN) -> bool:
    """True iff ``s`` is a scenario on the variables of ``q`` whose relations lie in ``q``'s labels."""
    if s.algebra is not q.algebra or s.variables != q.variables or not s.is_scenario():
        return False
    return all(lab <= q._labels[(u, v)] for u, v, lab in s.pairs())


def equivalent(q1: QCN, q2: QCN) -> bool:
    """Same set of consistent scenarios (brute force; small networks only)."""
    from .solver import enumerate_scenarios

    if q1.variables != q2.variables:
        return False
    return set(enumerate_scenarios(q1, only_consistent=True)) == set(
        enumerate_scenarios(q2, only_consistent=True)
    )
