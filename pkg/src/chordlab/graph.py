"""Undirected structure of a diagram: intersection graph, components,
monolithicity, k-core, length profile and block statistics."""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .diagram import Chord, ChordDiagram, Subdiagram, chord_length, crosses
from .errors import ChordNotInDiagramError, KOutOfRangeError


@dataclass(frozen=True)
class IntersectionGraph:
    """One vertex per chord (sorted by smaller endpoint), edges = crossings."""

    vertices: tuple[Chord, ...]
    adjacency: tuple[tuple[int, ...], ...]
    edge_count: int

    @property
    def n(self) -> int:
        return len(self.vertices)

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])


def intersection_graph(d: ChordDiagram) -> IntersectionGraph:
    """Sweep construction: closing a chord crosses exactly the still-open
    chords opened after it, O(n + m)."""
    verts = tuple(d.chords())
    eu, ev = _kernels.crossing_edges(d.partner0())
    adj: list[list[int]] = [[] for _ in verts]
    for u, v in zip(eu.tolist(), ev.tolist()):
        adj[u].append(v)
        adj[v].append(u)
    return IntersectionGraph(
        vertices=verts,
        adjacency=tuple(tuple(sorted(a)) for a in adj),
        edge_count=int(eu.shape[0]),
    )


def intersection_graph_bruteforce(d: ChordDiagram) -> IntersectionGraph:
    """O(n^2) all-pairs construction; kept as the oracle for the sweep."""
    verts = tuple(d.chords())
    adj: list[list[int]] = [[] for _ in verts]
    m = 0
    for i in range(len(verts)):
        for j in range(i + 1, len(verts)):
            if crosses(verts[i], verts[j]):
                adj[i].append(j)
                adj[j].append(i)
                m += 1
    return IntersectionGraph(
        vertices=verts,
        adjacency=tuple(tuple(sorted(a)) for a in adj),
        edge_count=m,
    )


def degree_of(d: ChordDiagram, c: Chord) -> int:
    """Number of chords crossing c; always <= chord_length(d, c)."""
    if c not in d:
        raise ChordNotInDiagramError(f"chord {c} not in diagram")
    p = d.partner0()
    two_n = p.shape[0]
    a, b = c.a - 1, c.b - 1
    inner = b - a - 1
    if inner <= two_n - 2 - inner:
        seg = p[a + 1 : b]
        return int(np.count_nonzero((seg < a) | (seg > b)))
    seg = np.concatenate((p[:a], p[b + 1 :]))
    return int(np.count_nonzero((seg > a) & (seg < b)))


def chord_of_endpoint1(d: ChordDiagram) -> Chord:
    return Chord(1, d.partner_of(1))


def degree_of_c1(d: ChordDiagram) -> int:
    return int(_kernels.deg_of_endpoint1(d.partner0()))


@dataclass(frozen=True)
class ComponentPartition:
    """Connected components as vertex-index blocks, ordered by smallest
    contained endpoint; root_index points at endpoint 1's component."""

    blocks: tuple[tuple[int, ...], ...]
    root_index: int


def components(g: IntersectionGraph) -> ComponentPartition:
    n = g.n
    label = [-1] * n
    blocks: list[list[int]] = []
    for s in range(n):
        if label[s] != -1:
            continue
        comp = [s]
        label[s] = len(blocks)
        queue = [s]
        while queue:
            v = queue.pop()
            for w in g.adjacency[v]:
                if label[w] == -1:
                    label[w] = len(blocks)
                    comp.append(w)
                    queue.append(w)
        blocks.append(sorted(comp))
    # vertices are sorted by smaller endpoint, so min vertex index gives the
    # smallest contained endpoint; scanning s ascending already yields that
    # order, and vertex 0 is the endpoint-1 chord.
    root = label[0]
    return ComponentPartition(blocks=tuple(tuple(b) for b in blocks), root_index=root)


def is_monolithic(d: ChordDiagram) -> bool:
    """Root component plus isolated simple chords, and no two simple chords
    on adjacent endpoint pairs (indices mod 2n, distinct chords)."""
    return bool(_kernels.monolithic_flag(d.partner0()))


def k_core(g: IntersectionGraph, k: int) -> list[int]:
    """Vertices of the maximal induced subgraph with min degree >= k.

    Round-based peeling: order-independence is by construction.
    """
    if k < 0:
        raise KOutOfRangeError(f"k={k} < 0")
    alive = [True] * g.n
    deg = [g.degree(v) for v in range(g.n)]
    frontier = [v for v in range(g.n) if deg[v] < k]
    while frontier:
        nxt: list[int] = []
        for v in frontier:
            if not alive[v]:
                continue
            alive[v] = False
            for w in g.adjacency[v]:
                if alive[w]:
                    deg[w] -= 1
                    if deg[w] == k - 1:
                        nxt.append(w)
        frontier = nxt
    return [v for v in range(g.n) if alive[v]]


def k_core_chords(d: ChordDiagram, k: int) -> Subdiagram:
    """Diagram-level k-core without materializing edges (peeling kernel)."""
    if k < 0:
        raise KOutOfRangeError(f"k={k} < 0")
    alive, _removed = _kernels.kcore_alive(d.partner0(), k)
    verts = d.chords()
    return Subdiagram(
        parent_n=d.n,
        chords=frozenset(c for c, a in zip(verts, alive) if a),
    )


def len_at_least(d: ChordDiagram, k: int) -> Subdiagram:
    if k < 0:
        raise KOutOfRangeError(f"k={k} < 0")
    return Subdiagram(
        parent_n=d.n,
        chords=frozenset(c for c in d.chords() if chord_length(d, c) >= k),
    )


@dataclass(frozen=True)
class LengthProfile:
    """counts[j] = number of chords of length exactly j, 0 <= j <= n-1."""

    counts: tuple[int, ...]

    @property
    def n(self) -> int:
        return sum(self.counts)

    def z(self, k: int) -> int:
        """Z_k: chords of length < k."""
        return sum(self.counts[:k])


def length_profile(d: ChordDiagram) -> LengthProfile:
    counts = _kernels.length_counts_upto(d.partner0(), d.n - 1)
    return LengthProfile(counts=tuple(int(x) for x in counts))


def count_full_blocks(d: ChordDiagram, k: int) -> int:
    """(start, chord set) pairs where the 2k endpoints from `start` are
    matched entirely among themselves; all 2n circular starts scanned."""
    n = d.n
    if not 1 <= k <= n:
        raise KOutOfRangeError(f"k={k} outside [1, {n}]")
    p = d.partner0()
    two_n = 2 * n
    width = 2 * k
    count = 0
    for start in range(two_n):
        ok = True
        for off in range(width):
            e = (start + off) % two_n
            q = int(p[e])
            rel = (q - start) % two_n
            if rel >= width:
                ok = False
                break
        if ok:
            count += 1
    return count


# ----------------------------------------------------------- exports


def graph_edge_text(g: IntersectionGraph) -> str:
    """One "u v" line per edge, vertices named by their chord "a-b"."""
    lines = []
    for u in range(g.n):
        for v in g.adjacency[u]:
            if v > u:
                lines.append(f"{g.vertices[u]} {g.vertices[v]}")
    return "\n".join(lines) + ("\n" if lines else "")


def graph_json(g: IntersectionGraph) -> str:
    edges = [[u, v] for u in range(g.n) for v in g.adjacency[u] if v > u]
    return json.dumps({"vertices": [str(c) for c in g.vertices], "edges": edges})
