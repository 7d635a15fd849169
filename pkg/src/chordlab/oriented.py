"""Coin-flip crossing orientations and strong-component structure.

An orientation assigns one bit per crossing: bit 1 on edge (u, v) means u
over-crosses v, giving the directed edge u -> v.  Edges are kept in the
canonical order (lexicographic by the chords' smaller endpoints) so a
serialized orientation replays exactly.
"""

from __future__ import annotations

import base64
import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

import numpy as np

from . import _kernels
from .diagram import Chord, ChordDiagram, new_diagram
from .errors import MOutOfRangeError, UnknownChordError


class OrientedDiagram:
    """A diagram plus one orientation bit per crossing edge."""

    __slots__ = ("base", "_eu", "_ev", "_bits")

    def __init__(self, base: ChordDiagram, eu: np.ndarray, ev: np.ndarray, bits: np.ndarray):
        self.base = base
        self._eu = eu
        self._ev = ev
        self._bits = bits

    @property
    def edge_count(self) -> int:
        return int(self._eu.shape[0])

    def edges(self) -> list[tuple[int, int]]:
        """Crossing edges as vertex-index pairs in canonical order."""
        return list(zip(self._eu.tolist(), self._ev.tolist()))

    def bits(self) -> np.ndarray:
        v = self._bits.view()
        v.setflags(write=False)
        return v

    def directed_edges(self) -> tuple[np.ndarray, np.ndarray]:
        """(src, dst) arrays; bit 1 orients u -> v, bit 0 orients v -> u."""
        b = self._bits.astype(bool)
        src = np.where(b, self._eu, self._ev)
        dst = np.where(b, self._ev, self._eu)
        return src, dst

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, OrientedDiagram):
            return NotImplemented
        return (
            self.base == other.base
            and np.array_equal(self._bits, other._bits)
            and np.array_equal(self._eu, other._eu)
            and np.array_equal(self._ev, other._ev)
        )


def _canonical_edges(d: ChordDiagram) -> tuple[np.ndarray, np.ndarray]:
    eu, ev = _kernels.crossing_edges(d.partner0())
    if eu.shape[0]:
        idx = np.lexsort((ev, eu))
        eu, ev = eu[idx], ev[idx]
    return eu, ev


def orient(d: ChordDiagram, rng: np.random.Generator) -> OrientedDiagram:
    """Independent fair bit per crossing, drawn in canonical edge order."""
    eu, ev = _canonical_edges(d)
    bits = rng.integers(0, 2, size=eu.shape[0], dtype=np.uint8)
    return OrientedDiagram(d, eu, ev, bits)


def orient_with_bits(d: ChordDiagram, bits: Iterable[int]) -> OrientedDiagram:
    """Deterministic orientation from explicit bits in canonical edge order."""
    eu, ev = _canonical_edges(d)
    arr = np.asarray(list(bits), dtype=np.uint8)
    if arr.shape[0] != eu.shape[0]:
        raise ValueError(f"need {eu.shape[0]} bits, got {arr.shape[0]}")
    return OrientedDiagram(d, eu, ev, arr)


@dataclass(frozen=True)
class SccDecomposition:
    """Strong components as vertex-index blocks in canonical order
    (by smallest contained endpoint)."""

    components: tuple[tuple[int, ...], ...]
    giant_index: int
    trivial_count: int

    def sizes(self) -> list[int]:
        return [len(c) for c in self.components]


def scc(od: OrientedDiagram) -> SccDecomposition:
    n = od.base.n
    src, dst = od.directed_edges()
    offs, targets = _kernels.build_csr(n, src, dst)
    labels, ncomp = _kernels.tarjan_scc(n, offs, targets)
    groups: list[list[int]] = [[] for _ in range(ncomp)]
    for v, c in enumerate(labels.tolist()):
        groups[c].append(v)
    # vertex indices follow smaller-endpoint order, so min(group) is the
    # component's smallest endpoint representative
    groups.sort(key=min)
    comps = tuple(tuple(sorted(grp)) for grp in groups)
    sizes = [len(c) for c in comps]
    giant = max(range(len(comps)), key=lambda i: (sizes[i], -i))
    trivial = sum(1 for s in sizes if s == 1)
    return SccDecomposition(components=comps, giant_index=giant, trivial_count=trivial)


def trivial_scc_count(od: OrientedDiagram) -> int:
    trivial, _nontrivial, _giant = _kernels.scc_stats(
        od.base.n, od._eu, od._ev, od._bits
    )
    return int(trivial)


def giant_scc_fraction(od: OrientedDiagram) -> Fraction:
    _trivial, _nontrivial, giant = _kernels.scc_stats(
        od.base.n, od._eu, od._ev, od._bits
    )
    return Fraction(int(giant), od.base.n)


def is_strongly_connected_on(od: OrientedDiagram, chords: Sequence[Chord]) -> bool:
    """Strong connectivity of the induced directed subgraph on `chords`."""
    verts = od.base.chords()
    index = {c: i for i, c in enumerate(verts)}
    sub = []
    for c in chords:
        if c not in index:
            raise UnknownChordError(f"chord {c} not in the oriented diagram")
        sub.append(index[c])
    if len(sub) <= 1:
        return True
    keep = np.zeros(len(verts), dtype=bool)
    keep[sub] = True
    remap = np.full(len(verts), -1, dtype=np.int64)
    remap[sub] = np.arange(len(sub))
    src, dst = od.directed_edges()
    mask = keep[src] & keep[dst]
    src, dst = remap[src[mask]], remap[dst[mask]]
    offs, targets = _kernels.build_csr(len(sub), src, dst)
    _labels, ncomp = _kernels.tarjan_scc(len(sub), offs, targets)
    return int(ncomp) == 1


def find_balanced_clique(d: ChordDiagram, m: int) -> Optional[list[Chord]]:
    """m chords with one endpoint in block I_t and the other in I_{t+m},
    t = 1..m, where I_t = [(t-1)r+1, tr], r = floor(n/m).  Such chords
    pairwise interleave, hence pairwise cross.  Per block pair the chord
    with the smallest I_t endpoint is chosen; None when any pair is empty.
    """
    n = d.n
    if not 1 <= m <= n:
        raise MOutOfRangeError(f"m={m} outside [1, {n}]")
    r = n // m
    p = d.partner0()
    out: list[Chord] = []
    for t in range(1, m + 1):
        lo = (t - 1) * r  # 0-based block start
        opp_lo = (t + m - 1) * r
        opp_hi = opp_lo + r  # exclusive
        found = None
        for e in range(lo, lo + r):
            q = int(p[e])
            if opp_lo <= q < opp_hi:
                found = Chord(e + 1, q + 1)
                break
        if found is None:
            return None
        out.append(found)
    return out


# ----------------------------------------------------------- serialization


def orientation_to_json(od: OrientedDiagram) -> str:
    packed = np.packbits(od._bits) if od.edge_count else np.empty(0, dtype=np.uint8)
    return json.dumps(
        {
            "pairs": [[c.a, c.b] for c in od.base.chords()],
            "bits": base64.b64encode(packed.tobytes()).decode("ascii"),
        }
    )


def orientation_from_json(text: str) -> OrientedDiagram:
    obj = json.loads(text)
    d = new_diagram(obj["pairs"])
    eu, ev = _canonical_edges(d)
    m = int(eu.shape[0])
    raw = base64.b64decode(obj["bits"])
    bits = np.unpackbits(np.frombuffer(raw, dtype=np.uint8))[:m].astype(np.uint8)
    if m and bits.shape[0] != m:
        raise ValueError(f"orientation needs {m} bits, got {bits.shape[0]}")
    return OrientedDiagram(d, eu, ev, bits)
