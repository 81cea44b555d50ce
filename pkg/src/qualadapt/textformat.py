"""Line-oriented text format for networks and substitutions.

::

    algebra indu
    abstract x template          # or: placeholder; default template
    var cook(carrot)
    cook(rice) {?<} cook(carrot)
    cook(rice) {m?} serve

Variables named in constraints need no ``var`` line. Parameters not
declared ``abstract`` are concrete.
"""
from __future__ import annotations

import re

from .algebra import ALGEBRAS, AlgebraError, get_algebra
from .qcn import QCN, Constraint, Parameter, ParamKind, QualVariable

_NAME = r"[A-Za-z0-9_]+"
_VAR = rf"{_NAME}(?:\(\s*{_NAME}(?:\s*,\s*{_NAME})*\s*\))?"
_VAR_RE = re.compile(rf"^(?P<functor>{_NAME})(?:\((?P<params>[^()]*)\))?$")
_CONSTRAINT_RE = re.compile(
    rf"^\s*(?P<left>{_VAR})\s*\{{(?P<body>[^{{}}]*)\}}\s*(?P<right>{_VAR})\s*$"
)


class ParseError(ValueError):
    def __init__(self, message: str, line: int, column: int = 1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


def parse_variable(text: str, kinds: dict[str, ParamKind] | None = None) -> QualVariable:
    m = _VAR_RE.match(re.sub(r"\s+", "", text))
    if not m:
        raise ValueError(f"malformed variable {text!r}")
    kinds = kinds or {}
    names = m["params"].split(",") if m["params"] is not None else []
    return QualVariable(
        m["functor"],
        tuple(Parameter(n, kinds.get(n, ParamKind.CONCRETE)) for n in names),
    )


def parse_qcn(text: str, algebra: str | None = None) -> QCN:
    """Parse a network; ``algebra`` (if given) must match the file's declaration."""
    declared = None
    kinds: dict[str, ParamKind] = {}
    variables: list[QualVariable] = []
    constraints: list[Constraint] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        indent = len(line) - len(line.lstrip())
        words = line.split()
        head = words[0]
        if head == "algebra":
            if declared is not None:
                raise ParseError("algebra declared twice", lineno, indent + 1)
            if len(words) != 2 or words[1] not in ALGEBRAS:
                raise ParseError(f"unknown algebra {' '.join(words[1:])!r}", lineno,
                                 line.find(words[1]) + 1 if len(words) > 1 else indent + 1)
            declared = get_algebra(words[1])
            if algebra is not None and algebra != declared.name:
                raise ParseError(f"file declares {declared.name}, expected {algebra}", lineno,
                                 line.find(words[1]) + 1)
            continue
        if declared is None:
            raise ParseError("expected 'algebra allen|indu' before any content", lineno, indent + 1)
        if head == "abstract":
            if len(words) not in (2, 3) or not re.fullmatch(_NAME, words[1]):
                raise ParseError("expected 'abstract <name> [template|placeholder]'", lineno,
                                 indent + 1)
            kind = ParamKind.TEMPLATE
            if len(words) == 3:
                try:
                    kind = ParamKind(words[2])
                except ValueError:
                    raise ParseError(f"unknown parameter kind {words[2]!r}", lineno,
                                     line.find(words[2]) + 1) from None
                if kind is ParamKind.CONCRETE:
                    raise ParseError("abstract parameter cannot be concrete", lineno,
                                     line.find(words[2]) + 1)
            kinds[words[1]] = kind
            continue
        if head == "var":
            rest = line[line.find("var") + 3:]
            try:
                variables.append(parse_variable(rest, kinds))
            except ValueError as exc:
                raise ParseError(str(exc), lineno, line.find("var") + 5) from None
            continue
        m = _CONSTRAINT_RE.match(line)
        if not m:
            raise ParseError("malformed constraint, expected '<var> {<rel>, ...} <var>'",
                             lineno, _first_bad_column(line))
        label: set[str] = set()
        offset = m.start("body")
        for part in m["body"].split(","):
            token = part.strip()
            col = offset + (len(part) - len(part.lstrip())) + 1
            offset += len(part) + 1
            if not token:
                if m["body"].strip():
                    raise ParseError("empty relation token", lineno, col)
                continue
            if re.search(r"\s", token):
                gap = re.search(r"\s", token).start()
                raise ParseError(f"missing comma in {token!r}", lineno, col + gap)
            try:
                label |= declared.parse_relation(token)
            except AlgebraError as exc:
                raise ParseError(str(exc), lineno, col) from None
        left = parse_variable(m["left"], kinds)
        right = parse_variable(m["right"], kinds)
        if left == right:
            raise ParseError(f"constraint relates {left} to itself", lineno, indent + 1)
        constraints.append(Constraint(left, frozenset(label), right))
    if declared is None:
        raise ParseError("no algebra declared", 1)
    # a declared kind applies to every occurrence of the name
    variables = [_rekind(v, kinds) for v in variables]
    constraints = [Constraint(_rekind(c.left, kinds), c.label, _rekind(c.right, kinds))
                   for c in constraints]
    return QCN(declared, variables, constraints)


def _rekind(v: QualVariable, kinds: dict[str, ParamKind]) -> QualVariable:
    if not any(p.name in kinds and p.kind is not kinds[p.name] for p in v.params):
        return v
    return QualVariable(v.functor, tuple(Parameter(p.name, kinds.get(p.name, p.kind))
                                         for p in v.params))


def _first_bad_column(line: str) -> int:
    stripped = line.lstrip()
    m = re.match(rf"{_VAR}\s*", stripped)
    col = len(line) - len(stripped)
    if m:
        col += m.end()
    return col + 1


def format_constraint(algebra, u: QualVariable, label, v: QualVariable) -> str:
    return f"{u} {algebra.format_set(label)} {v}"


def format_qcn(q: QCN) -> str:
    """Render ``q`` so that ``parse_qcn(format_qcn(q)) == q``."""
    lines = [f"algebra {q.algebra.name}"]
    abstract = sorted({p for v in q.variables for p in v.params if p.is_abstract},
                      key=lambda p: p.name)
    lines += [f"abstract {p.name} {p.kind.value}" for p in abstract]
    lines += [f"var {v}" for v in q.variables]
    lines += [format_constraint(q.algebra, c.left, c.label, c.right) for c in q.constraints()]
    return "\n".join(lines) + "\n"


def format_scenario(s: QCN) -> str:
    """One ``A {r} B`` line per pair, canonical order."""
    return "\n".join(format_constraint(s.algebra, u, lab, v) for u, v, lab in s.pairs())
