"""Random diagram generation: the uniform sampler and both growth models.

Randomness contract: every stream is a numpy PCG64 generator.  Replica
streams are derived from a 64-bit master seed with a splitmix64 finalizer,
which is a bijection, so distinct replicas can never collide for a fixed
master.  Each sampler consumes a fixed, documented draw schedule, making
results bit-for-bit reproducible from (seed, n) alone.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Literal, Optional, Sequence

import numpy as np

from . import _kernels
from .diagram import Chord, ChordDiagram, Subdiagram, _from_partner0, new_diagram
from .errors import ZeroSizeError

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15

#: Traces with more chords than this store replay choices instead of
#: materialized per-step snapshots.
SNAPSHOT_LIMIT = 10_000


def _splitmix64(z: int) -> int:
    z &= _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


@dataclass(frozen=True)
class Seed:
    """64-bit master seed; replica streams are pure functions of it."""

    master: int

    def __post_init__(self) -> None:
        if not 0 <= self.master <= _MASK64:
            raise ValueError(f"seed {self.master} outside 64-bit range")


def derive_seed(master: Seed | int, replica: int) -> Seed:
    """Stream seed for one replica: splitmix64(master + (replica+1)*golden).

    The golden-ratio increment is odd, so inputs are distinct per replica
    and the finalizer keeps them distinct.
    """
    if replica < 0:
        raise ValueError(f"replica index {replica} < 0")
    m = master.master if isinstance(master, Seed) else int(master)
    return Seed(_splitmix64((m + (replica + 1) * _GOLDEN) & _MASK64))


def rng_from_seed(seed: Seed | int) -> np.random.Generator:
    m = seed.master if isinstance(seed, Seed) else int(seed)
    return np.random.Generator(np.random.PCG64(m))


def replica_rng(master: Seed | int, replica: int) -> np.random.Generator:
    return rng_from_seed(derive_seed(master, replica))


def parse_seed(text: str) -> Seed:
    """CLI seeds: decimal or 0x-prefixed hex."""
    text = text.strip()
    value = int(text, 16) if text.lower().startswith("0x") else int(text)
    return Seed(value)


# ------------------------------------------------------- draw schedules


def uniform_draw_bounds(n: int) -> np.ndarray:
    """Exclusive bounds of the n pair draws: 2n-1, 2n-3, ..., 1."""
    return np.arange(2 * n - 1, 0, -2, dtype=np.int64)


def continuous_draw_bounds(n: int) -> np.ndarray:
    """Step k+1 chooses among C(2k+1, 2) = k(2k+1) gap pairs, k = 1..n-1."""
    k = np.arange(1, n, dtype=np.int64)
    return k * (2 * k + 1)


def discrete_draw_bounds(n: int) -> np.ndarray:
    """1 draw for endpoint 1's partner, then 2 per step over the unused set."""
    bounds = np.empty(2 * n - 1, dtype=np.int64)
    bounds[0] = 2 * n - 1
    for k in range(2, n + 1):
        m = 2 * n - 2 * k + 2
        bounds[2 * k - 3] = m
        bounds[2 * k - 2] = m - 1
    return bounds


# ------------------------------------------------------ uniform sampler


def sample_uniform(n: int, rng: np.random.Generator) -> ChordDiagram:
    """Uniform over all (2n-1)!! diagrams: repeatedly pair the smallest
    unused endpoint with a uniformly chosen other unused endpoint.

    Consumes exactly n pair draws (one vectorized integers() call).
    """
    if n < 1:
        raise ZeroSizeError(f"cannot sample a diagram with n={n}")
    draws = rng.integers(0, uniform_draw_bounds(n), dtype=np.int64)
    return _from_partner0(_kernels.sample_partner(2 * n, draws))


# ------------------------------------------------------- growth models


@dataclass(frozen=True)
class EvolutionTrace:
    """Chord-insertion history of one growth run.

    For the continuous model step k is a diagram on [2k] (the relabeled
    state); for the discrete model it is the chord set drawn so far on the
    fixed universe [2n].  chord_labeling lists the final diagram's chords
    in creation order, so labeling index 0 is the endpoint-1 chord.
    """

    model: Literal["continuous", "discrete"]
    n: int
    chord_labeling: tuple[Chord, ...]
    snapshots: Optional[tuple] = None
    choices: tuple[int, ...] = field(default=())

    def final(self) -> ChordDiagram:
        if self.model == "discrete":
            return new_diagram([(c.a, c.b) for c in self.chord_labeling])
        if self.snapshots is not None:
            return self.snapshots[-1]
        return self.step(self.n)  # type: ignore[return-value]

    def step(self, k: int):
        """State after k chords: ChordDiagram (continuous) or Subdiagram."""
        if not 1 <= k <= self.n:
            raise ValueError(f"step {k} outside [1, {self.n}]")
        if self.snapshots is not None:
            return self.snapshots[k - 1]
        if self.model == "discrete":
            return Subdiagram(parent_n=self.n, chords=frozenset(self.chord_labeling[:k]))
        order = _replay_continuous_order(self.choices[: k - 1])
        return _order_to_diagram(order)

    def steps(self) -> Iterator:
        for k in range(1, self.n + 1):
            yield self.step(k)

    def step_pairs(self, k: int) -> list[list[int]]:
        state = self.step(k)
        if isinstance(state, ChordDiagram):
            return [[c.a, c.b] for c in state.chords()]
        return [[c.a, c.b] for c in state.sorted_chords()]

    def to_jsonl(self) -> str:
        import json

        lines = []
        for k in range(1, self.n + 1):
            lines.append(
                json.dumps({"k": k, "model": self.model, "pairs": self.step_pairs(k)})
            )
        return "\n".join(lines) + "\n"


def _replay_continuous_order(choices: Sequence[int]) -> list[int]:
    order = [0, 0]
    for s, t in enumerate(choices):
        k = s + 1
        m = 2 * k
        i = 1
        tt = int(t)
        while tt >= m - i + 1:
            tt -= m - i + 1
            i += 1
        j = i + tt
        order.insert(i, k)
        order.insert(j + 1, k)
    return order


def _order_to_diagram(order: Sequence[int]) -> ChordDiagram:
    first: dict[int, int] = {}
    p0 = np.empty(len(order), dtype=np.int64)
    for pos, c in enumerate(order):
        if c in first:
            p0[pos] = first[c]
            p0[first[c]] = pos
        else:
            first[c] = pos
    return _from_partner0(p0)


def run_continuous(n: int, rng: np.random.Generator) -> EvolutionTrace:
    """Continuous growth: at each step one of the C(2k+1,2) gap pairs is
    drawn uniformly; the first-drawn endpoint of the first chord anchors
    label 1 (the law of the states is symmetric in this choice)."""
    if n < 1:
        raise ZeroSizeError(f"cannot evolve a diagram with n={n}")
    draws = (
        rng.integers(0, continuous_draw_bounds(n), dtype=np.int64)
        if n > 1
        else np.empty(0, dtype=np.int64)
    )
    order = [0, 0]
    snapshots: Optional[list[ChordDiagram]] = [] if n <= SNAPSHOT_LIMIT else None
    if snapshots is not None:
        snapshots.append(_order_to_diagram(order))
    for s in range(n - 1):
        k = s + 1
        m = 2 * k
        i = 1
        tt = int(draws[s])
        while tt >= m - i + 1:
            tt -= m - i + 1
            i += 1
        j = i + tt
        order.insert(i, k)
        order.insert(j + 1, k)
        if snapshots is not None:
            snapshots.append(_order_to_diagram(order))
    labeling = _labeling_from_order(order)
    return EvolutionTrace(
        model="continuous",
        n=n,
        chord_labeling=labeling,
        snapshots=tuple(snapshots) if snapshots is not None else None,
        choices=tuple(int(t) for t in draws),
    )


def _labeling_from_order(order: Sequence[int]) -> tuple[Chord, ...]:
    first: dict[int, int] = {}
    chords: dict[int, Chord] = {}
    for pos, c in enumerate(order):
        if c in first:
            chords[c] = Chord(first[c] + 1, pos + 1)
        else:
            first[c] = pos
    return tuple(chords[c] for c in sorted(chords))


def run_discrete(n: int, rng: np.random.Generator) -> EvolutionTrace:
    """Discrete growth on the fixed universe [2n]: endpoint 1 is paired
    first, then uniform unused pairs (two sequential draws without
    replacement per step, unordered)."""
    if n < 1:
        raise ZeroSizeError(f"cannot evolve a diagram with n={n}")
    draws = rng.integers(0, discrete_draw_bounds(n), dtype=np.int64)
    partner = np.empty(2 * n, dtype=np.int64)
    tree = np.empty(2 * n + 1, dtype=np.int64)
    _kernels._discrete_run(n, draws, partner, tree)
    # creation order: replay the selections to recover which chord came when
    unused = list(range(2 * n))
    labeling: list[Chord] = []
    y = unused[1 + draws[0]]
    labeling.append(Chord(1, y + 1))
    unused.remove(0)
    unused.remove(y)
    t = 1
    for _ in range(1, n):
        x = unused.pop(int(draws[t]))
        t += 1
        y = unused.pop(int(draws[t]))
        t += 1
        labeling.append(Chord(x + 1, y + 1))
    snapshots = None
    if n <= SNAPSHOT_LIMIT:
        snapshots = tuple(
            Subdiagram(parent_n=n, chords=frozenset(labeling[:k]))
            for k in range(1, n + 1)
        )
    return EvolutionTrace(
        model="discrete",
        n=n,
        chord_labeling=tuple(labeling),
        snapshots=snapshots,
        choices=tuple(int(t) for t in draws),
    )
