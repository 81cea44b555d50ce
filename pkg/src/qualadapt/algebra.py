"""Relation algebras loaded from declarative catalog files.

A catalog is line oriented. Header lines come first::

    name <id>
    identity <relation>
    product <left-id> <right-id>      # optional

followed by bracketed sections ``[relations]``, ``[converse]``,
``[composition]`` and ``[neighbours]``. ``#`` starts a comment.

* ``[relations]`` lists the basic relations, whitespace separated, in
  canonical order.
* ``[converse]`` holds ``r conv(r)`` pairs; the reverse direction is implied.
* ``[composition]`` holds ``r1 r2 : r...`` rows, one per ordered pair.
* ``[neighbours]`` holds undirected edges ``r1 r2`` of the conceptual
  neighbourhood graph.

A ``product`` catalog only needs ``[relations]``: each token is a left
relation name immediately followed by a right relation name (``f<``,
``eq=``), and converse, composition and neighbourhood are derived from the
two factors, keeping only the listed (valid) pairs.
"""
from __future__ import annotations

from collections import deque
from functools import lru_cache
from importlib import resources
from itertools import product
from typing import Iterable

RelationSet = frozenset

SHORTCUT = "?"


class AlgebraError(ValueError):
    """Malformed catalog or unknown relation token."""


class Algebra:
    """An immutable catalog of basic relations with their operations."""

    def __init__(
        self,
        name: str,
        relations: Iterable[str],
        identity: str,
        converse: dict[str, str],
        composition: dict[tuple[str, str], frozenset[str]],
        edges: Iterable[tuple[str, str]],
        factors: tuple["Algebra", "Algebra"] | None = None,
        parts: dict[str, tuple[str, str]] | None = None,
    ):
        self.name = name
        self.relations: tuple[str, ...] = tuple(relations)
        self.identity = identity
        self.full: frozenset[str] = frozenset(self.relations)
        self.factors = factors
        self._parts = parts or {}
        self._index = {r: i for i, r in enumerate(self.relations)}
        self._converse = dict(converse)
        self._composition = dict(composition)
        self._neighbours: dict[str, set[str]] = {r: set() for r in self.relations}
        for a, b in edges:
            self._neighbours[a].add(b)
            self._neighbours[b].add(a)
        self._distance = self._all_pairs_distance()
        self._check()

    def __repr__(self) -> str:
        return f"Algebra({self.name!r}, {len(self.relations)} relations)"

    def __reduce__(self):
        return (get_algebra, (self.name,))

    def _check(self) -> None:
        if len(self._index) != len(self.relations):
            raise AlgebraError(f"{self.name}: duplicate relation names")
        if self.identity not in self._index:
            raise AlgebraError(f"{self.name}: identity {self.identity!r} is not a relation")
        for r in self.relations:
            if r not in self._converse:
                raise AlgebraError(f"{self.name}: no converse for {r!r}")
            if self._converse[self._converse[r]] != r:
                raise AlgebraError(f"{self.name}: converse is not an involution at {r!r}")
        for pair in product(self.relations, repeat=2):
            if pair not in self._composition:
                raise AlgebraError(f"{self.name}: missing composition entry {pair}")
        for r, row in self._distance.items():
            if len(row) != len(self.relations):
                raise AlgebraError(f"{self.name}: neighbourhood graph is disconnected at {r!r}")

    def _all_pairs_distance(self) -> dict[str, dict[str, int]]:
        table = {}
        for start in self.relations:
            seen = {start: 0}
            queue = deque([start])
            while queue:
                r = queue.popleft()
                for n in sorted(self._neighbours[r], key=self._index.__getitem__):
                    if n not in seen:
                        seen[n] = seen[r] + 1
                        queue.append(n)
            table[start] = seen
        return table

    # basic relations

    def index(self, r: str) -> int:
        return self._index[r]

    def sort(self, rels: Iterable[str]) -> list[str]:
        """Relations in catalog order."""
        return sorted(rels, key=self._index.__getitem__)

    def converse(self, r: str) -> str:
        return self._converse[r]

    def compose(self, r1: str, r2: str) -> frozenset[str]:
        return self._composition[(r1, r2)]

    def distance(self, r1: str, r2: str) -> int:
        """Shortest-path length between two relations in the neighbourhood graph."""
        return self._distance[r1][r2]

    def neighbours(self, r: str) -> frozenset[str]:
        return frozenset(self._neighbours[r])

    def parts(self, r: str) -> tuple[str, str]:
        """The (left, right) factor relations of a product relation."""
        return self._parts[r]

    # relation sets

    def converse_set(self, rels: frozenset[str]) -> frozenset[str]:
        return _converse_set(self, rels)

    def compose_sets(self, s1: frozenset[str], s2: frozenset[str]) -> frozenset[str]:
        """Union of the pairwise compositions; empty if either side is empty."""
        return _compose_sets(self, s1, s2)

    def min_distance(self, s1: frozenset[str], s2: frozenset[str]) -> int:
        """Smallest distance between a member of ``s1`` and a member of ``s2``."""
        return _min_distance(self, s1, s2)

    # tokens

    def expand_shortcut(self, token: str) -> frozenset[str]:
        """Expand ``r?`` / ``?s`` into the valid pairs of a product algebra."""
        if self.factors is None:
            raise AlgebraError(f"{self.name} has no shortcut notation: {token!r}")
        left, right = self.factors
        if token.endswith(SHORTCUT) and token[:-1] in left._index:
            keep = lambda a, s: a == token[:-1]
        elif token.startswith(SHORTCUT) and token[1:] in right._index:
            keep = lambda a, s: s == token[1:]
        else:
            raise AlgebraError(f"unknown {self.name} shortcut {token!r}")
        return frozenset(r for r in self.relations if keep(*self._parts[r]))

    def parse_relation(self, token: str) -> frozenset[str]:
        """A basic relation name or, for product algebras, a shortcut."""
        if token in self._index:
            return frozenset((token,))
        if self.factors is not None and SHORTCUT in token:
            return self.expand_shortcut(token)
        if self.factors is not None and self._split_token(token) is not None:
            raise AlgebraError(f"invalid {self.name} pair {token!r}")
        raise AlgebraError(f"unknown {self.name} relation {token!r}")

    def _split_token(self, token: str) -> tuple[str, str] | None:
        left, right = self.factors
        for cut in range(len(token) - 1, 0, -1):
            if token[:cut] in left._index and token[cut:] in right._index:
                return token[:cut], token[cut:]
        return None

    def format_set(self, rels: Iterable[str]) -> str:
        return "{" + ", ".join(self.sort(rels)) + "}"


@lru_cache(maxsize=None)
def _converse_set(algebra: Algebra, rels: frozenset[str]) -> frozenset[str]:
    return frozenset(algebra.converse(r) for r in rels)


@lru_cache(maxsize=1 << 16)
def _compose_sets(algebra: Algebra, s1: frozenset[str], s2: frozenset[str]) -> frozenset[str]:
    if s1 == algebra.full and s2 == algebra.full:
        return algebra.full
    out: set[str] = set()
    for a in s1:
        for b in s2:
            out |= algebra.compose(a, b)
            if len(out) == len(algebra.relations):
                return algebra.full
    return frozenset(out)


@lru_cache(maxsize=1 << 16)
def _min_distance(algebra: Algebra, s1: frozenset[str], s2: frozenset[str]) -> int:
    if s1 & s2:
        return 0
    return min(algebra.distance(a, b) for a in s1 for b in s2)


def product_algebra(
    name: str, left: Algebra, right: Algebra, relations: Iterable[str], identity: str
) -> Algebra:
    """Restrict ``left x right`` to the listed pairs.

    Two pairs are neighbours when one factor is unchanged and the other moves
    one step, or when both factors move one step at once. The diagonal moves
    keep pairs with a forced right part (``eq=``, ``d<`` and the like)
    connected to the rest of the graph.
    """
    tokens = list(relations)
    parts: dict[str, tuple[str, str]] = {}
    for tok in tokens:
        split = None
        for cut in range(len(tok) - 1, 0, -1):
            if tok[:cut] in left._index and tok[cut:] in right._index:
                split = (tok[:cut], tok[cut:])
                break
        if split is None:
            raise AlgebraError(f"{name}: cannot split {tok!r} into {left.name} x {right.name}")
        parts[tok] = split
    by_parts = {v: k for k, v in parts.items()}

    converse = {}
    for tok, (a, s) in parts.items():
        conv = (left.converse(a), right.converse(s))
        if conv not in by_parts:
            raise AlgebraError(f"{name}: converse of {tok!r} is not a listed pair")
        converse[tok] = by_parts[conv]

    composition = {}
    for t1, t2 in product(tokens, repeat=2):
        (a1, s1), (a2, s2) = parts[t1], parts[t2]
        composition[(t1, t2)] = frozenset(
            by_parts[p]
            for p in product(left.compose(a1, a2), right.compose(s1, s2))
            if p in by_parts
        )

    edges = []
    for t1, t2 in product(tokens, repeat=2):
        if t1 >= t2:
            continue
        (a1, s1), (a2, s2) = parts[t1], parts[t2]
        da, ds = left.distance(a1, a2), right.distance(s1, s2)
        if (da, ds) in ((0, 1), (1, 0), (1, 1)):
            edges.append((t1, t2))

    return Algebra(name, tokens, identity, converse, composition, edges, (left, right), parts)


def parse_catalog(text: str, resolve=None) -> Algebra:
    """Build an algebra from catalog text; ``resolve`` maps factor names to algebras."""
    resolve = resolve or get_algebra
    header: dict[str, list[str]] = {}
    sections: dict[str, list[list[str]]] = {}
    current = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            current = line[1:-1].strip()
            sections.setdefault(current, [])
        elif current is None:
            key, *rest = line.split()
            header[key] = rest
        else:
            sections[current].append(line.split())
    try:
        name = header["name"][0]
        identity = header["identity"][0]
    except (KeyError, IndexError):
        raise AlgebraError("catalog needs 'name' and 'identity' headers") from None
    relations = [tok for row in sections.get("relations", []) for tok in row]

    if "product" in header:
        left, right = (resolve(n) for n in header["product"])
        return product_algebra(name, left, right, relations, identity)

    converse = {}
    for row in sections.get("converse", []):
        if len(row) != 2:
            raise AlgebraError(f"{name}: bad converse row {row}")
        a, b = row
        converse[a] = b
        converse[b] = a
    composition = {}
    for row in sections.get("composition", []):
        if len(row) < 3 or row[2] != ":":
            raise AlgebraError(f"{name}: bad composition row {row}")
        composition[(row[0], row[1])] = frozenset(row[3:])
    known = set(relations)
    edges = [tuple(row) for row in sections.get("neighbours", [])]
    for row in list(converse.items()) + list(composition) + edges:
        for tok in row:
            if tok not in known:
                raise AlgebraError(f"{name}: unknown relation {tok!r}")
    for result in composition.values():
        if not result <= known:
            raise AlgebraError(f"{name}: unknown relation in {sorted(result)}")
    return Algebra(name, relations, identity, converse, composition, edges)


@lru_cache(maxsize=None)
def get_algebra(name: str) -> Algebra:
    """Load one of the embedded catalogs (``allen``, ``indu``, ``point``)."""
    try:
        text = resources.files("qualadapt.data").joinpath(f"{name}.txt").read_text()
    except FileNotFoundError:
        raise AlgebraError(f"unknown algebra {name!r}") from None
    return parse_catalog(text)


ALGEBRAS = ("allen", "indu")
