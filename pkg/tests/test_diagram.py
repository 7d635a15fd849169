import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chordlab.diagram import (
    Chord,
    Subdiagram,
    block_endpoints,
    blocks_of,
    chord_length,
    crosses,
    new_diagram,
    parse_diagram,
    phi,
    serialize_diagram,
    subdiagram,
    tau,
)
from chordlab.enumeration import enumerate_diagrams
from chordlab.errors import (
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
from oracles import circular_crosses, random_diagram

FIG1 = [[1, 4], [2, 7], [3, 6], [5, 9], [8, 10]]


class TestNewDiagram:
    def test_figure1(self):
        d = new_diagram(FIG1)
        assert d.n == 5
        assert d.partner_of(5) == 9

    def test_smallest(self):
        assert new_diagram([[1, 2]]).n == 1

    def test_duplicate_endpoint(self):
        with pytest.raises(DuplicateEndpointError):
            new_diagram([[1, 3], [2, 3]])

    def test_self_pair(self):
        with pytest.raises(SelfPairError):
            new_diagram([[1, 1]])

    def test_label_out_of_range(self):
        with pytest.raises(LabelOutOfRangeError):
            new_diagram([[1, 5]])

    def test_empty(self):
        with pytest.raises(EmptyDiagramError):
            new_diagram([])

    def test_partner_involution(self):
        d = new_diagram(FIG1)
        for e in range(1, 11):
            assert d.partner_of(d.partner_of(e)) == e
            assert d.partner_of(e) != e


class TestChordLength:
    def test_paper_example(self):
        d = new_diagram(FIG1)
        assert chord_length(d, Chord(5, 9)) == 3

    def test_simple_chord(self):
        d = new_diagram([[1, 2], [3, 4], [5, 6], [7, 8], [9, 10]])
        assert chord_length(d, Chord(1, 2)) == 0

    def test_diameter(self):
        d = new_diagram([[1, 6], [2, 7], [3, 8], [4, 9], [5, 10]])
        assert chord_length(d, Chord(1, 6)) == 4

    def test_not_in_diagram(self):
        with pytest.raises(ChordNotInDiagramError):
            chord_length(new_diagram(FIG1), Chord(1, 2))

    def test_equals_min_block_length_exhaustive(self):
        # every chord of every diagram with n <= 6
        for n in range(1, 7):
            for d in enumerate_diagrams(n):
                for c in d.chords():
                    b1, b2 = blocks_of(d, c)
                    assert chord_length(d, c) == min(b1.len, b2.len)
                    assert b1.len + b2.len == 2 * n - 2


class TestBlocksOf:
    def test_paper_example(self):
        d = new_diagram(FIG1)
        b1, b2 = blocks_of(d, Chord(3, 6))
        assert set(block_endpoints(b1, d.n)) == {4, 5}
        assert set(block_endpoints(b2, d.n)) == {7, 8, 9, 10, 1, 2}

    def test_single_chord(self):
        d = new_diagram([[1, 2]])
        b1, b2 = blocks_of(d, Chord(1, 2))
        assert b1.len == 0 and b2.len == 0

    def test_diameter_symmetry(self):
        d = new_diagram([[1, 6], [2, 7], [3, 8], [4, 9], [5, 10]])
        b1, b2 = blocks_of(d, Chord(1, 6))
        assert b1.len == 4 and b2.len == 4


class TestCrosses:
    def test_figure1_edge(self):
        assert crosses(Chord(1, 4), Chord(2, 7))

    def test_nested(self):
        assert not crosses(Chord(2, 7), Chord(3, 6))

    def test_disjoint(self):
        assert not crosses(Chord(1, 2), Chord(3, 4))

    def test_shared_endpoint(self):
        with pytest.raises(SharedEndpointError):
            crosses(Chord(1, 4), Chord(4, 7))

    def test_symmetric_and_matches_circular_oracle(self):
        # all 3 pairings of every 4-endpoint subset, n <= 6
        for n in range(2, 7):
            for quad in itertools.combinations(range(1, 2 * n + 1), 4):
                a, b, c, d = quad
                for c1, c2 in (
                    (Chord(a, b), Chord(c, d)),
                    (Chord(a, c), Chord(b, d)),
                    (Chord(a, d), Chord(b, c)),
                ):
                    got = crosses(c1, c2)
                    assert got == crosses(c2, c1)
                    assert got == circular_crosses(c1, c2, n)


class TestTau:
    def test_paper_example(self):
        s = Subdiagram(5, frozenset([Chord(2, 8), Chord(3, 5), Chord(4, 9)]))
        assert tau(s).chords() == [Chord(1, 5), Chord(2, 4), Chord(3, 6)]

    def test_identity_on_compact(self):
        s = Subdiagram(1, frozenset([Chord(1, 2)]))
        assert tau(s).chords() == [Chord(1, 2)]

    def test_single_chord(self):
        s = Subdiagram(5, frozenset([Chord(3, 7)]))
        assert tau(s).chords() == [Chord(1, 2)]

    def test_empty(self):
        with pytest.raises(EmptySubdiagramError):
            tau(Subdiagram(3, frozenset()))

    def test_identity_for_full_diagrams(self):
        for n in range(1, 6):
            for d in enumerate_diagrams(n):
                assert tau(Subdiagram(n, frozenset(d.chords()))) == d

    def test_preserves_crossings_all_subdiagrams(self):
        for n in range(1, 6):
            for d in enumerate_diagrams(n):
                cs = d.chords()
                for r in range(1, n + 1):
                    for sub in itertools.combinations(cs, r):
                        t = tau(Subdiagram(n, frozenset(sub)))
                        tc = t.chords()
                        rank = {
                            e: i + 1
                            for i, e in enumerate(
                                sorted(x for ch in sub for x in (ch.a, ch.b))
                            )
                        }
                        mapped = {Chord(rank[ch.a], rank[ch.b]) for ch in sub}
                        assert mapped == set(tc)
                        for c1, c2 in itertools.combinations(sub, 2):
                            m1 = Chord(rank[c1.a], rank[c1.b])
                            m2 = Chord(rank[c2.a], rank[c2.b])
                            assert crosses(c1, c2) == crosses(m1, m2)


class TestPhi:
    def test_paper_example(self):
        d = new_diagram([[1, 5], [2, 14], [3, 8], [4, 9], [7, 12], [6, 13], [10, 11]])
        r = [
            Chord(1, 5), Chord(2, 14), Chord(3, 8), Chord(4, 9),
            Chord(7, 12), Chord(6, 13), Chord(10, 11),
        ]
        assert phi(d, r, 4).chords() == [
            Chord(1, 5), Chord(2, 8), Chord(3, 6), Chord(4, 7),
        ]

    def test_full_is_identity(self):
        d = new_diagram(FIG1)
        r = d.chords()
        assert phi(d, r, 5) == d

    def test_j_one(self):
        d = new_diagram(FIG1)
        assert phi(d, d.chords(), 1).chords() == [Chord(1, 2)]

    def test_j_out_of_range(self):
        d = new_diagram(FIG1)
        with pytest.raises(JOutOfRangeError):
            phi(d, d.chords(), 6)

    def test_bad_labeling(self):
        d = new_diagram(FIG1)
        r = d.chords()
        with pytest.raises(InvalidLabelingError):
            phi(d, r[:4] + [r[0]], 2)  # not a bijection
        with pytest.raises(InvalidLabelingError):
            phi(d, r[1:] + r[:1], 2)  # endpoint-1 chord not labeled 1


class TestSerialization:
    def test_figure1_text(self):
        d = parse_diagram("1-4 2-7 3-6 5-9 8-10")
        assert d == new_diagram(FIG1)
        assert serialize_diagram(d) == "1-4 2-7 3-6 5-9 8-10"

    def test_normalization(self):
        assert serialize_diagram(new_diagram([[2, 1]])) == "1-2"

    def test_self_pair_text(self):
        with pytest.raises(SelfPairError):
            parse_diagram("1-1")

    def test_syntax_error(self):
        with pytest.raises(DiagramSyntaxError):
            parse_diagram("1:2")
        with pytest.raises(DiagramSyntaxError):
            parse_diagram("")

    def test_json_roundtrip(self):
        d = new_diagram(FIG1)
        text = serialize_diagram(d, "json")
        assert parse_diagram(text) == d
        assert serialize_diagram(parse_diagram(text), "json") == text

    def test_json_n_mismatch(self):
        with pytest.raises(DiagramSyntaxError):
            parse_diagram('{"n": 4, "pairs": [[1, 2]]}')

    @settings(max_examples=60, deadline=None)
    @given(st.integers(0, 2**32 - 1), st.integers(1, 100))
    def test_roundtrip_random(self, seed, n):
        d = random_diagram(np.random.default_rng(seed), n)
        assert parse_diagram(serialize_diagram(d)) == d
        assert parse_diagram(serialize_diagram(d, "json")) == d

    def test_roundtrip_bulk(self):
        rng = np.random.default_rng(12345)
        for _ in range(1500):
            n = int(rng.integers(1, 101))
            d = random_diagram(rng, n)
            assert parse_diagram(serialize_diagram(d)) == d

    @pytest.mark.slow
    def test_roundtrip_bulk_full_scale(self):
        rng = np.random.default_rng(999)
        for _ in range(10_000):
            n = int(rng.integers(1, 101))
            d = random_diagram(rng, n)
            assert parse_diagram(serialize_diagram(d)) == d


class TestSubdiagram:
    def test_validates_against_parent(self):
        d = new_diagram(FIG1)
        s = subdiagram(d, [Chord(1, 4), Chord(3, 6)])
        assert s.parent_n == 5
        with pytest.raises(ChordNotInDiagramError):
            subdiagram(d, [Chord(1, 2)])

    def test_disjointness_enforced(self):
        with pytest.raises(DuplicateEndpointError):
            Subdiagram(5, frozenset([Chord(1, 4), Chord(4, 6)]))
        with pytest.raises(LabelOutOfRangeError):
            Subdiagram(2, frozenset([Chord(1, 7)]))
