"""Exact clique, independence and nesting numbers with witnesses.

Cliques are r-crossings (after normalization a pairwise-crossing set always
reads x_1 < ... < x_r < y_1 < ... < y_r), independent sets are pairwise
non-crossing chord sets, nestings are chains under strict containment in
the fixed labeling.  Witnesses are the lexicographically smallest optima
by sorted chord list.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .diagram import Chord, ChordDiagram, crosses
from .errors import CostCapExceededError

#: The independence DP keeps a (2n+2) x (2n+1) int16 table; refuse beyond
#: this size unless the caller opts out (6000 chords = ~290 MB).
ALPHA_DP_MAX_N = 6000

#: When true, every returned witness is re-verified against its defining
#: property (enabled by the test suite).
VALIDATE_WITNESSES = False


@dataclass(frozen=True)
class ExtremalStats:
    omega: int
    alpha: int
    alpha_nest: int
    witnesses: dict[str, tuple[Chord, ...]]


def _pairs_from_flat(flat: np.ndarray) -> tuple[Chord, ...]:
    it = flat.tolist()
    return tuple(sorted(Chord(it[i], it[i + 1]) for i in range(0, len(it), 2)))


def _check_clique(wit: tuple[Chord, ...]) -> None:
    for i in range(len(wit)):
        for j in range(i + 1, len(wit)):
            assert crosses(wit[i], wit[j]), f"clique witness broken at {wit[i]},{wit[j]}"


def _check_independent(wit: tuple[Chord, ...]) -> None:
    for i in range(len(wit)):
        for j in range(i + 1, len(wit)):
            assert not crosses(wit[i], wit[j]), (
                f"independence witness broken at {wit[i]},{wit[j]}"
            )


def _check_nesting(wit: tuple[Chord, ...]) -> None:
    for prev, cur in zip(wit, wit[1:]):
        assert prev.a < cur.a < cur.b < prev.b, (
            f"nesting witness broken at {prev},{cur}"
        )


def clique_number(d: ChordDiagram) -> tuple[int, tuple[Chord, ...]]:
    """Maximum pairwise-crossing set: per-anchor longest increasing chain
    of closings among the chords crossing the anchor to its right,
    O(n^2 log n)."""
    p = d.partner0()
    omega = int(_kernels.omega_value(p))
    wit = _pairs_from_flat(_kernels.omega_witness(p, omega))
    if VALIDATE_WITNESSES:
        assert len(wit) == omega
        _check_clique(wit)
    return omega, wit


def independence_number(
    d: ChordDiagram, max_n: int | None = None
) -> tuple[int, tuple[Chord, ...]]:
    """Maximum pairwise non-crossing set via interval DP over the cut
    circle (cut position is immaterial: non-crossing is cut-invariant)."""
    cap = ALPHA_DP_MAX_N if max_n is None else max_n
    if d.n > cap:
        raise CostCapExceededError(
            f"independence DP needs a (2n)^2 table; n={d.n} exceeds cap {cap}"
        )
    two_n = 2 * d.n
    table = np.zeros((two_n + 2, two_n + 1), dtype=np.int16)
    alpha, flat = _kernels.alpha_dp_into(d.partner0(), table, True)
    wit = _pairs_from_flat(flat)
    if VALIDATE_WITNESSES:
        assert len(wit) == alpha
        _check_independent(wit)
    return int(alpha), wit


def nesting_number(d: ChordDiagram) -> tuple[int, tuple[Chord, ...]]:
    """Longest chain x_1 < ... < x_r < y_r < ... < y_1 in the fixed labels."""
    p = d.partner0()
    depth = int(_kernels.nesting_value(p))
    wit = _pairs_from_flat(_kernels.nesting_witness(p, depth))
    if VALIDATE_WITNESSES:
        assert len(wit) == depth
        _check_nesting(wit)
    return depth, wit


def extremal_stats(d: ChordDiagram, with_witnesses: bool = True) -> ExtremalStats:
    if with_witnesses:
        omega, cw = clique_number(d)
        alpha, iw = independence_number(d)
        nest, nw = nesting_number(d)
        return ExtremalStats(
            omega=omega,
            alpha=alpha,
            alpha_nest=nest,
            witnesses={"omega": cw, "alpha": iw, "alpha_nest": nw},
        )
    p = d.partner0()
    two_n = 2 * d.n
    if d.n > ALPHA_DP_MAX_N:
        raise CostCapExceededError(
            f"independence DP needs a (2n)^2 table; n={d.n} exceeds cap {ALPHA_DP_MAX_N}"
        )
    table = np.zeros((two_n + 2, two_n + 1), dtype=np.int16)
    alpha, _ = _kernels.alpha_dp_into(p, table, False)
    return ExtremalStats(
        omega=int(_kernels.omega_value(p)),
        alpha=int(alpha),
        alpha_nest=int(_kernels.nesting_value(p)),
        witnesses={},
    )
