"""Exhaustive enumeration of all (2n-1)!! diagrams: the ground-truth engine.

Streams every diagram exactly once in the deterministic order given by
repeatedly pairing the smallest unused endpoint with each larger unused
endpoint in ascending order (so enumeration index == the sampler's
mixed-radix code).  Statistics here are deliberately written as plain
brute-force Python, independent of the fast kernels they back-stop,
except for the extremal values whose exactness is established separately
against exponential brute force.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterator, Optional

import numpy as np

from . import _kernels
from .diagram import Chord, ChordDiagram, _from_partner0
from .errors import EmptyConditionError, OutOfRangeError, SizeCapExceededError

#: Hard enumeration caps: (2*8-1)!! = 2,027,025 diagrams; oriented statistics
#: additionally pay a 2^crossings factor per diagram.
ENUM_MAX_N = 8
ORIENTED_MAX_N = 5
ORIENTED_MAX_CROSSINGS = 20


def enumerate_partners(n: int) -> Iterator[np.ndarray]:
    """Yields the internal 0-based partner buffer for every diagram.

    The buffer is reused between yields: copy it if you keep it.
    """
    if not 1 <= n <= ENUM_MAX_N:
        raise SizeCapExceededError(f"enumeration capped at n <= {ENUM_MAX_N}, got {n}")
    two_n = 2 * n
    p = np.full(two_n, -1, dtype=np.int64)

    def rec(start: int) -> Iterator[np.ndarray]:
        x = start
        while x < two_n and p[x] != -1:
            x += 1
        if x == two_n:
            yield p
            return
        for y in range(x + 1, two_n):
            if p[y] == -1:
                p[x] = y
                p[y] = x
                yield from rec(x + 1)
                p[x] = -1
                p[y] = -1

    yield from rec(0)


def enumerate_diagrams(n: int) -> Iterator[ChordDiagram]:
    for p in enumerate_partners(n):
        yield _from_partner0(p.copy())


# ------------------------------------------------ brute-force statistics


def _lengths(p: np.ndarray) -> list[int]:
    two_n = p.shape[0]
    out = []
    for e in range(two_n):
        b = int(p[e])
        if b > e:
            inner = b - e - 1
            out.append(min(inner, two_n - 2 - inner))
    return out


def _chord_list(p: np.ndarray) -> list[tuple[int, int]]:
    return [(e, int(p[e])) for e in range(p.shape[0]) if p[e] > e]


def _cross0(c1: tuple[int, int], c2: tuple[int, int]) -> bool:
    a, b = c1
    x, y = c2
    return (a < x < b < y) or (x < a < y < b)


def _crossing_pairs(p: np.ndarray) -> list[tuple[int, int]]:
    cs = _chord_list(p)
    return [
        (i, j)
        for i in range(len(cs))
        for j in range(i + 1, len(cs))
        if _cross0(cs[i], cs[j])
    ]


def _component_labels(p: np.ndarray) -> list[int]:
    cs = _chord_list(p)
    n = len(cs)
    label = list(range(n))

    def find(x: int) -> int:
        while label[x] != x:
            label[x] = label[label[x]]
            x = label[x]
        return x

    for i, j in _crossing_pairs(p):
        ri, rj = find(i), find(j)
        if ri != rj:
            label[rj] = ri
    return [find(i) for i in range(n)]


def _stat_components(p: np.ndarray) -> int:
    return len(set(_component_labels(p)))


def _stat_monolithic(p: np.ndarray) -> int:
    """Straight transcription of the monolithic definition (the independent
    reference the sweep kernel is tested against)."""
    two_n = p.shape[0]
    cs = _chord_list(p)
    # simple = endpoints adjacent modulo 2n
    simple = [b - a == 1 or (a == 0 and b == two_n - 1) for a, b in cs]
    # (ii) two distinct simple chords on consecutive endpoint pairs
    chord_at = {}
    for idx, (a, b) in enumerate(cs):
        chord_at[a] = idx
        chord_at[b] = idx
    for e in range(two_n):
        i1 = chord_at[e]
        if p[e] == (e + 1) % two_n:
            e2 = (e + 2) % two_n
            i2 = chord_at[e2]
            if p[e2] == (e2 + 1) % two_n and i2 != i1:
                return 0
    labels = _component_labels(p)
    root = labels[0]  # chord containing endpoint 1 is chord 0
    for idx in range(len(cs)):
        if labels[idx] != root and not simple[idx]:
            return 0
    return 1


def _stat_len_c1(p: np.ndarray) -> int:
    two_n = p.shape[0]
    b = int(p[0])
    inner = b - 1
    return min(inner, two_n - 2 - inner)


def _stat_deg_c1(p: np.ndarray) -> int:
    b = int(p[0])
    return sum(1 for e in range(1, b) if p[e] > b)


def _stat_X(p: np.ndarray) -> int:
    """Chords with both endpoints in the smaller block of the endpoint-1
    chord (ties broken toward the block right after endpoint 1)."""
    two_n = p.shape[0]
    b = int(p[0])
    inner = b - 1
    outer = two_n - 2 - inner
    if inner <= outer:
        lo, hi = 1, b  # exclusive hi
    else:
        lo, hi = b + 1, two_n
    return sum(1 for e in range(lo, hi) if lo <= p[e] < hi) // 2


def _stat_full_blocks(p: np.ndarray, k: int) -> int:
    two_n = p.shape[0]
    width = 2 * k
    count = 0
    for start in range(two_n):
        if all((int(p[(start + off) % two_n]) - start) % two_n < width for off in range(width)):
            count += 1
    return count


def _stat_indep_sets(p: np.ndarray, r: int) -> int:
    cs = _chord_list(p)
    count = 0
    for sub in itertools.combinations(range(len(cs)), r):
        if all(
            not _cross0(cs[i], cs[j]) for i, j in itertools.combinations(sub, 2)
        ):
            count += 1
    return count


def strong_components_bruteforce(nv: int, edges: list[tuple[int, int]]) -> list[int]:
    """Component labels via transitive closure (bitmask Warshall)."""
    reach = [1 << i for i in range(nv)]
    for u, v in edges:
        reach[u] |= 1 << v
    changed = True
    while changed:
        changed = False
        for u in range(nv):
            r = reach[u]
            acc = r
            for v in range(nv):
                if r >> v & 1:
                    acc |= reach[v]
            if acc != r:
                reach[u] = acc
                changed = True
    labels = [-1] * nv
    nxt = 0
    for u in range(nv):
        if labels[u] != -1:
            continue
        labels[u] = nxt
        for v in range(u + 1, nv):
            if reach[u] >> v & 1 and reach[v] >> u & 1:
                labels[v] = nxt
        nxt += 1
    return labels


def _oriented_trivial_scc_law(p: np.ndarray) -> dict[int, Fraction]:
    """Exact law of the single-chord strong-component count over all 2^cr
    fair orientations of this diagram."""
    pairs = _crossing_pairs(p)
    cr = len(pairs)
    if cr > ORIENTED_MAX_CROSSINGS:
        raise SizeCapExceededError(
            f"{cr} crossings exceeds oriented cap {ORIENTED_MAX_CROSSINGS}"
        )
    nv = p.shape[0] // 2
    w = Fraction(1, 2**cr)
    law: dict[int, Fraction] = {}
    for bits in range(2**cr):
        edges = [
            (u, v) if bits >> t & 1 else (v, u) for t, (u, v) in enumerate(pairs)
        ]
        labels = strong_components_bruteforce(nv, edges)
        sizes: dict[int, int] = {}
        for lab in labels:
            sizes[lab] = sizes.get(lab, 0) + 1
        trivial = sum(1 for s in sizes.values() if s == 1)
        law[trivial] = law.get(trivial, Fraction(0)) + w
    return law


# ------------------------------------------------------ statistic specs


@dataclass(frozen=True)
class StatisticSpec:
    """A named per-diagram statistic, e.g. L0, Z2, X4, omega, trivial_scc."""

    name: str
    param: Optional[int] = None

    def __str__(self) -> str:
        return self.name if self.param is None else f"{self.name}{self.param}"


_PARAMETRIC = {"L", "Z", "X", "full_blocks", "indep_sets"}
_PLAIN = {
    "count",
    "len_c1",
    "deg_c1",
    "components",
    "connected",
    "monolithic",
    "crossings",
    "simple_chords",
    "omega",
    "alpha",
    "alpha_nest",
    "trivial_scc",
}


def parse_statistic(text: str) -> StatisticSpec:
    text = text.strip()
    if text in _PLAIN:
        return StatisticSpec(text)
    m = re.fullmatch(r"([A-Za-z_]+?)_?(\d+)", text)
    if m and m.group(1) in _PARAMETRIC:
        return StatisticSpec(m.group(1), int(m.group(2)))
    raise OutOfRangeError(f"unknown statistic {text!r}")


def _resolve(spec: StatisticSpec, n: int) -> Callable[[np.ndarray], int]:
    name, q = spec.name, spec.param
    if name == "count":
        return lambda p: 1
    if name == "L":
        if q is None or not 0 <= q <= n - 1:
            raise OutOfRangeError(f"L needs 0 <= j <= n-1, got {q}")
        return lambda p: sum(1 for v in _lengths(p) if v == q)
    if name in ("Z",):
        if q is None or not 0 <= q <= n:
            raise OutOfRangeError(f"Z needs 0 <= k <= n, got {q}")
        return lambda p: sum(1 for v in _lengths(p) if v < q)
    if name == "X":
        return _stat_X
    if name == "len_c1":
        return _stat_len_c1
    if name == "deg_c1":
        return _stat_deg_c1
    if name == "components":
        return _stat_components
    if name == "connected":
        return lambda p: 1 if _stat_components(p) == 1 else 0
    if name == "monolithic":
        return _stat_monolithic
    if name == "crossings":
        return lambda p: len(_crossing_pairs(p))
    if name == "simple_chords":
        return lambda p: sum(1 for v in _lengths(p) if v == 0)
    if name == "full_blocks":
        if q is None or not 1 <= q <= n:
            raise OutOfRangeError(f"full_blocks needs 1 <= k <= n, got {q}")
        return lambda p: _stat_full_blocks(p, q)
    if name == "indep_sets":
        if q is None or not 1 <= q <= n:
            raise OutOfRangeError(f"indep_sets needs 1 <= r <= n, got {q}")
        return lambda p: _stat_indep_sets(p, q)
    if name == "omega":
        return lambda p: int(_kernels.omega_value(p))
    if name == "alpha":
        table = np.zeros((2 * n + 2, 2 * n + 1), dtype=np.int16)
        return lambda p: int(_kernels.alpha_dp_into(p, table, False)[0])
    if name == "alpha_nest":
        return lambda p: int(_kernels.nesting_value(p))
    raise OutOfRangeError(f"statistic {spec} is not scalar-resolvable here")


@dataclass(frozen=True)
class ExactDistribution:
    """Exact law of a statistic over all diagrams (optionally conditioned
    on the endpoint-1 chord)."""

    n: int
    statistic: str
    condition: Optional[str]
    support: dict = field(hash=False)

    def __post_init__(self) -> None:
        assert sum(self.support.values()) == 1

    def expectation(self) -> Fraction:
        return sum(
            (Fraction(v) * pr for v, pr in self.support.items()), Fraction(0)
        )

    def factorial_moment2(self) -> Fraction:
        """E[S (S - 1)]."""
        return sum(
            (Fraction(v * (v - 1)) * pr for v, pr in self.support.items()),
            Fraction(0),
        )

    def variance(self) -> Fraction:
        mean = self.expectation()
        second = sum(
            (Fraction(v * v) * pr for v, pr in self.support.items()), Fraction(0)
        )
        return second - mean * mean

    def as_float_dict(self) -> dict:
        return {v: float(pr) for v, pr in self.support.items()}


def exact_distribution(
    n: int,
    stat: str | StatisticSpec,
    condition: Optional[Chord] = None,
) -> ExactDistribution:
    """Exact rational law of `stat` over all size-n diagrams.

    `condition` pins the chord containing endpoint 1 (diagrams not matching
    are filtered out and the law renormalized).
    """
    spec = parse_statistic(stat) if isinstance(stat, str) else stat
    if spec.name == "trivial_scc":
        return _exact_oriented_distribution(n, spec, condition)
    fn = _resolve(spec, n)
    want = None
    if condition is not None:
        if 1 not in (condition.a, condition.b):
            raise EmptyConditionError(
                f"condition chord {condition} cannot be the endpoint-1 chord"
            )
        want = condition.b - 1  # 0-based partner of endpoint 0
    counts: dict[int, int] = {}
    total = 0
    for p in enumerate_partners(n):
        if want is not None and p[0] != want:
            continue
        total += 1
        v = int(fn(p))
        counts[v] = counts.get(v, 0) + 1
    if total == 0:
        raise EmptyConditionError(f"no size-{n} diagram satisfies the condition")
    support = {v: Fraction(c, total) for v, c in sorted(counts.items())}
    return ExactDistribution(
        n=n,
        statistic=str(spec),
        condition=str(condition) if condition else None,
        support=support,
    )


def _exact_oriented_distribution(
    n: int, spec: StatisticSpec, condition: Optional[Chord]
) -> ExactDistribution:
    if n > ORIENTED_MAX_N:
        raise SizeCapExceededError(
            f"oriented enumeration capped at n <= {ORIENTED_MAX_N}, got {n}"
        )
    want = None
    if condition is not None:
        if 1 not in (condition.a, condition.b):
            raise EmptyConditionError(
                f"condition chord {condition} cannot be the endpoint-1 chord"
            )
        want = condition.b - 1
    acc: dict[int, Fraction] = {}
    total = 0
    for p in enumerate_partners(n):
        if want is not None and p[0] != want:
            continue
        total += 1
        for v, w in _oriented_trivial_scc_law(p).items():
            acc[v] = acc.get(v, Fraction(0)) + w
    if total == 0:
        raise EmptyConditionError(f"no size-{n} diagram satisfies the condition")
    support = {v: pr / total for v, pr in sorted(acc.items())}
    return ExactDistribution(
        n=n, statistic=str(spec), condition=str(condition) if condition else None,
        support=support,
    )


def exact_expectation(
    n: int, stat: str | StatisticSpec, condition: Optional[Chord] = None
) -> Fraction:
    return exact_distribution(n, stat, condition).expectation()
