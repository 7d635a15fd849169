"""Chord diagrams: representation, validation, geometry and relabeling.

A diagram of size n pairs the endpoints 1..2n (labelled clockwise).  Chords
are always stored normalized a < b and the circle is cut between endpoints
2n and 1 for every linear scan, which turns the crossing predicate into a
pure label-order test.  All values here are immutable after construction.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .errors import (
    ChordNotInDiagramError,
    DiagramSyntaxError,
    DuplicateEndpointError,
    EmptyDiagramError,
    EmptySubdiagramError,
    InvalidLabelingError,
    JOutOfRangeError,
    LabelOutOfRangeError,
    SelfPairError,
    SharedEndpointError,
)


class Chord(NamedTuple("Chord", [("a", int), ("b", int)])):
    """A chord, kept normalized so that a < b."""

    __slots__ = ()

    def __new__(cls, a: int, b: int) -> "Chord":
        a, b = int(a), int(b)
        if a == b:
            raise SelfPairError(f"chord cannot pair endpoint {a} with itself")
        if a > b:
            a, b = b, a
        return super().__new__(cls, a, b)

    def __str__(self) -> str:
        return f"{self.a}-{self.b}"


class Block(NamedTuple):
    """len consecutive endpoints starting at `start`, wrapping modulo 2n."""

    start: int
    len: int


def block_endpoints(block: Block, n: int) -> tuple[int, ...]:
    """Labels covered by `block` on the circle with 2n endpoints, in order."""
    two_n = 2 * n
    return tuple((block.start - 1 + i) % two_n + 1 for i in range(block.len))


class ChordDiagram:
    """A perfect matching of the endpoints 1..2n.

    Internally a 0-based partner array (numpy int64); every public surface
    speaks 1-based labels.
    """

    __slots__ = ("_p0",)

    def __init__(self, partner0: np.ndarray):
        # trusted constructor; use new_diagram() for validated input
        self._p0 = partner0

    @property
    def n(self) -> int:
        return self._p0.shape[0] // 2

    @property
    def partners(self) -> np.ndarray:
        """1-based partner array: partners[i-1] is the endpoint paired with i."""
        return self._p0 + 1

    def partner_of(self, endpoint: int) -> int:
        two_n = self._p0.shape[0]
        if not 1 <= endpoint <= two_n:
            raise LabelOutOfRangeError(f"endpoint {endpoint} outside [1, {two_n}]")
        return int(self._p0[endpoint - 1]) + 1

    def chords(self) -> list[Chord]:
        """All chords sorted by smaller endpoint."""
        p0 = self._p0
        return [Chord(i + 1, int(p0[i]) + 1) for i in range(p0.shape[0]) if p0[i] > i]

    def __contains__(self, c: Chord) -> bool:
        two_n = self._p0.shape[0]
        if not (1 <= c.a <= two_n and 1 <= c.b <= two_n):
            return False
        return int(self._p0[c.a - 1]) == c.b - 1

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ChordDiagram):
            return NotImplemented
        return self._p0.shape == other._p0.shape and bool(np.all(self._p0 == other._p0))

    def __hash__(self) -> int:
        return hash(self._p0.tobytes())

    def __repr__(self) -> str:
        return f"ChordDiagram({serialize_diagram(self)!r})"

    def partner0(self) -> np.ndarray:
        """Read-only view of the 0-based partner array (kernel interchange)."""
        v = self._p0.view()
        v.setflags(write=False)
        return v


def _from_partner0(partner0: np.ndarray) -> ChordDiagram:
    """Wrap a trusted 0-based involution array without re-validating."""
    return ChordDiagram(np.asarray(partner0, dtype=np.int64))


def new_diagram(pairs: Iterable[Sequence[int]]) -> ChordDiagram:
    """Build a validated diagram from endpoint pairs.

    Raises DuplicateEndpointError, LabelOutOfRangeError, SelfPairError or
    EmptyDiagramError when the pairing is not a perfect matching of [2n].
    """
    pairs = list(pairs)
    if not pairs:
        raise EmptyDiagramError("a diagram needs at least one chord")
    two_n = 2 * len(pairs)
    p0 = np.full(two_n, -1, dtype=np.int64)
    for x, y in pairs:
        x, y = int(x), int(y)
        if x == y:
            raise SelfPairError(f"endpoint {x} paired with itself")
        for e in (x, y):
            if not 1 <= e <= two_n:
                raise LabelOutOfRangeError(f"endpoint {e} outside [1, {two_n}]")
        if p0[x - 1] != -1 or p0[y - 1] != -1:
            dup = x if p0[x - 1] != -1 else y
            raise DuplicateEndpointError(f"endpoint {dup} appears twice")
        p0[x - 1] = y - 1
        p0[y - 1] = x - 1
    # full coverage is implied: 2n endpoints, n disjoint pairs
    return ChordDiagram(p0)


def _require_chord(d: ChordDiagram, c: Chord) -> None:
    if c not in d:
        raise ChordNotInDiagramError(f"chord {c} not in diagram")


def chord_length(d: ChordDiagram, c: Chord) -> int:
    """min(b-a-1, 2n-b+a-1): the smaller of the two block lengths cut by c."""
    _require_chord(d, c)
    two_n = 2 * d.n
    inner = c.b - c.a - 1
    return min(inner, two_n - 2 - inner)


def blocks_of(d: ChordDiagram, c: Chord) -> tuple[Block, Block]:
    """The two maximal blocks strictly between the endpoints of c."""
    _require_chord(d, c)
    two_n = 2 * d.n
    inner = c.b - c.a - 1
    return (
        Block(start=c.a + 1, len=inner) if inner else Block(start=c.a + 1, len=0),
        Block(start=(c.b % two_n) + 1, len=two_n - 2 - inner),
    )


def crosses(c: Chord, c2: Chord) -> bool:
    """True iff the chords interleave; raises SharedEndpointError on overlap."""
    if c.a in (c2.a, c2.b) or c.b in (c2.a, c2.b):
        raise SharedEndpointError(f"chords {c} and {c2} share an endpoint")
    return (c.a < c2.a < c.b < c2.b) or (c2.a < c.a < c2.b < c.b)


@dataclass(frozen=True)
class Subdiagram:
    """A chord subset of a parent diagram, labels inherited from the parent."""

    parent_n: int
    chords: frozenset[Chord]

    def __post_init__(self) -> None:
        seen: set[int] = set()
        bound = 2 * self.parent_n
        for c in self.chords:
            for e in (c.a, c.b):
                if not 1 <= e <= bound:
                    raise LabelOutOfRangeError(f"endpoint {e} outside [1, {bound}]")
                if e in seen:
                    raise DuplicateEndpointError(f"endpoint {e} appears twice")
                seen.add(e)

    def sorted_chords(self) -> list[Chord]:
        return sorted(self.chords)


def subdiagram(d: ChordDiagram, chords: Iterable[Chord]) -> Subdiagram:
    """Subdiagram of d consisting of the given chords (validated against d)."""
    cs = frozenset(chords)
    for c in cs:
        _require_chord(d, c)
    return Subdiagram(parent_n=d.n, chords=cs)


def tau(s: Subdiagram) -> ChordDiagram:
    """Compacting relabel onto [2k]: the t-th smallest endpoint becomes t.

    Accepts any endpoint-disjoint chord set (growth-process prefixes are not
    subsets of a materialized parent).
    """
    if not s.chords:
        raise EmptySubdiagramError("tau of an empty chord set")
    endpoints = sorted(e for c in s.chords for e in (c.a, c.b))
    rank = {e: t + 1 for t, e in enumerate(endpoints)}
    return new_diagram([(rank[c.a], rank[c.b]) for c in s.chords])


def phi(d: ChordDiagram, r: Sequence[Chord], j: int) -> ChordDiagram:
    """Keep the first j chords of the labeling r, then tau-relabel.

    r lists the chords in label order (r[0] is label 1) and must be a
    bijection onto d's chords with the endpoint-1 chord labeled 1.
    """
    n = d.n
    if not 1 <= j <= n:
        raise JOutOfRangeError(f"j={j} outside [1, {n}]")
    if len(r) != n or len(set(r)) != n:
        raise InvalidLabelingError("labeling is not a bijection onto the chords")
    for c in r:
        if c not in d:
            raise InvalidLabelingError(f"labeled chord {c} not in diagram")
    if 1 not in (r[0].a, r[0].b):
        raise InvalidLabelingError("the chord containing endpoint 1 must be labeled 1")
    return tau(Subdiagram(parent_n=n, chords=frozenset(r[:j])))


# --- serialization -------------------------------------------------------
#
# Text: whitespace-separated "a-b" tokens, each label exactly once.
# JSON: {"n": <int>, "pairs": [[a, b], ...]} with pairs sorted by a.
# Both are byte-stable under serialize . parse.


def parse_diagram(text: str) -> ChordDiagram:
    text = text.strip()
    if not text:
        raise DiagramSyntaxError("empty diagram text")
    if text.startswith("{"):
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise DiagramSyntaxError(f"bad JSON: {exc}") from exc
        if not isinstance(obj, dict) or "pairs" not in obj:
            raise DiagramSyntaxError('JSON diagram needs a "pairs" field')
        pairs = obj["pairs"]
        if not isinstance(pairs, list) or not all(
            isinstance(p, list) and len(p) == 2 for p in pairs
        ):
            raise DiagramSyntaxError('"pairs" must be a list of [a, b] pairs')
        d = new_diagram(pairs)
        if "n" in obj and obj["n"] != d.n:
            raise DiagramSyntaxError(f'"n" field is {obj["n"]} but pairs give {d.n}')
        return d
    pairs = []
    for token in text.split():
        a, sep, b = token.partition("-")
        if not sep or not a.isdigit() or not b.isdigit():
            raise DiagramSyntaxError(f"bad chord token {token!r} (expected a-b)")
        pairs.append((int(a), int(b)))
    return new_diagram(pairs)


def serialize_diagram(d: ChordDiagram, format: str = "text") -> str:
    chords = d.chords()  # already sorted by smaller endpoint
    if format == "text":
        return " ".join(str(c) for c in chords)
    if format == "json":
        return json.dumps({"n": d.n, "pairs": [[c.a, c.b] for c in chords]})
    raise ValueError(f"unknown format {format!r}")
