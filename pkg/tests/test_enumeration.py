from fractions import Fraction

import numpy as np
import pytest

from chordlab import _kernels
from chordlab.diagram import Chord, _from_partner0
from chordlab.enumeration import (
    enumerate_diagrams,
    enumerate_partners,
    exact_distribution,
    exact_expectation,
    parse_statistic,
)
from chordlab.errors import EmptyConditionError, OutOfRangeError, SizeCapExceededError
from chordlab.formulas import (
    mean_block_sets,
    mean_independent_sets,
    mean_Lj,
    mean_Xk,
    num_diagrams,
)
from chordlab.graph import is_monolithic


class TestEnumeration:
    def test_counts(self):
        for n in range(1, 7):
            assert sum(1 for _ in enumerate_partners(n)) == num_diagrams(n)

    @pytest.mark.slow
    def test_counts_full_cap(self):
        for n in (7, 8):
            assert sum(1 for _ in enumerate_partners(n)) == num_diagrams(n)

    def test_cap(self):
        with pytest.raises(SizeCapExceededError):
            next(enumerate_partners(9))

    def test_order_matches_codes(self):
        # enumeration order is exactly the sampler's mixed-radix rank
        for n in (2, 3, 4):
            for i, p in enumerate(enumerate_partners(n)):
                assert int(_kernels.encode_pairing(p)) == i

    def test_all_distinct_and_valid(self):
        seen = set()
        for d in enumerate_diagrams(4):
            key = tuple(d.chords())
            assert key not in seen
            seen.add(key)
        assert len(seen) == 105


class TestExactLaws:
    def test_connected_n3(self):
        dist = exact_distribution(3, "connected")
        assert dist.support[1] == Fraction(4, 15)

    def test_component_count_n3(self):
        dist = exact_distribution(3, "components")
        assert sum(dist.support.values()) == 1
        assert dist.support[1] == Fraction(4, 15)

    def test_L0_mean_matches_formula(self):
        assert exact_expectation(3, "L0") == mean_Lj(3)

    def test_len_c1_law_n5(self):
        dist = exact_distribution(5, "len_c1")
        for k in range(4):
            assert dist.support[k] == Fraction(2, 9)
        assert dist.support[4] == Fraction(1, 9)

    def test_conditional_X(self):
        assert exact_expectation(6, "X4", condition=Chord(1, 6)) == mean_Xk(6, 4)

    def test_indep_sets(self):
        assert exact_expectation(3, "indep_sets2") == mean_independent_sets(3, 2)
        assert exact_expectation(3, "indep_sets3") == mean_independent_sets(3, 3)

    def test_full_blocks(self):
        assert exact_expectation(3, "full_blocks_1") == mean_block_sets(3, 1)

    def test_bad_condition(self):
        with pytest.raises(EmptyConditionError):
            exact_distribution(3, "L0", condition=Chord(2, 3))

    def test_parse_statistic(self):
        assert parse_statistic("L0").param == 0
        assert parse_statistic("full_blocks_2").name == "full_blocks"
        assert parse_statistic("alpha_nest").param is None
        with pytest.raises(OutOfRangeError):
            parse_statistic("bogus99x")


class TestRotationInvariance:
    def test_stats_invariant_under_rotation_by_two(self):
        # relabeling i -> i+2 mod 2n is a circle rotation: L_j, component
        # count, omega and alpha are preserved diagram by diagram
        from chordlab.enumeration import _resolve, StatisticSpec

        for n in range(2, 6):
            two_n = 2 * n
            fns = {
                "L0": _resolve(StatisticSpec("L", 0), n),
                "components": _resolve(StatisticSpec("components"), n),
                "omega": _resolve(StatisticSpec("omega"), n),
                "alpha": _resolve(StatisticSpec("alpha"), n),
            }
            for p in enumerate_partners(n):
                rot = np.empty_like(p)
                for e in range(two_n):
                    rot[(e + 2) % two_n] = (p[e] + 2) % two_n
                for fn in fns.values():
                    assert fn(p) == fn(rot)


class TestMonolithicAgainstIndependentDefinition:
    def test_matches_sweep_kernel(self):
        # the enum statistic transcribes the definition; the production path
        # is the compressed-stack sweep
        from chordlab.enumeration import _stat_monolithic

        for n in range(1, 7):
            for p in enumerate_partners(n):
                assert bool(_stat_monolithic(p)) == is_monolithic(_from_partner0(p.copy()))


class TestOrientedEnumeration:
    def test_trivial_scc_law_n2(self):
        dist = exact_distribution(2, "trivial_scc")
        # crossing diagram (1 of 3): always 2 trivial comps; the two
        # non-crossing diagrams: 2 isolated vertices
        assert dist.support == {2: Fraction(1)}

    def test_trivial_scc_law_n3_sums(self):
        dist = exact_distribution(3, "trivial_scc")
        assert sum(dist.support.values()) == 1
        # the 3-crossing triangle orientation can form a 3-cycle: 0 trivial
        assert 0 in dist.support

    def test_cap(self):
        with pytest.raises(SizeCapExceededError):
            exact_distribution(6, "trivial_scc")
