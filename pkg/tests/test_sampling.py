import numpy as np
import pytest

from chordlab import _kernels
from chordlab.diagram import Chord, ChordDiagram, phi, tau
from chordlab.errors import ZeroSizeError
from chordlab.sampling import (
    Seed,
    continuous_draw_bounds,
    derive_seed,
    discrete_draw_bounds,
    parse_seed,
    replica_rng,
    rng_from_seed,
    run_continuous,
    run_discrete,
    sample_uniform,
    uniform_draw_bounds,
)


class TestSeeds:
    def test_distinct_streams(self):
        s = Seed(123)
        assert derive_seed(s, 0) != derive_seed(s, 1)

    def test_deterministic(self):
        assert derive_seed(Seed(7), 42) == derive_seed(Seed(7), 42)

    def test_no_collisions_block(self):
        s = Seed(2**63 + 11)
        seen = {derive_seed(s, i).master for i in range(10_000)}
        assert len(seen) == 10_000

    def test_parse(self):
        assert parse_seed("0xff").master == 255
        assert parse_seed("17").master == 17

    def test_range(self):
        with pytest.raises(ValueError):
            Seed(-1)
        with pytest.raises(ValueError):
            Seed(2**64)

    def test_worker_split_consistency(self):
        # aggregating per-replica results is independent of how replicas are
        # grouped, because each replica owns its derived stream
        master = Seed(99)
        singles = [
            sample_uniform(20, replica_rng(master, r)) for r in range(40)
        ]
        grouped = []
        for lo in (0, 13, 29):
            hi = {0: 13, 13: 29, 29: 40}[lo]
            grouped.extend(sample_uniform(20, replica_rng(master, r)) for r in range(lo, hi))
        assert singles == grouped


class TestSampleUniform:
    def test_n1(self):
        d = sample_uniform(1, rng_from_seed(0))
        assert d.chords() == [Chord(1, 2)]

    def test_zero_size(self):
        with pytest.raises(ZeroSizeError):
            sample_uniform(0, rng_from_seed(0))

    def test_bitwise_reproducible(self):
        a = sample_uniform(300, rng_from_seed(5))
        b = sample_uniform(300, rng_from_seed(5))
        assert a == b

    def test_consumes_exactly_n_pair_draws(self):
        # replaying the documented schedule gives the same diagram and
        # leaves the generator in the same state
        n = 57
        r1 = rng_from_seed(11)
        d = sample_uniform(n, r1)
        r2 = rng_from_seed(11)
        draws = r2.integers(0, uniform_draw_bounds(n), dtype=np.int64)
        assert r1.bit_generator.state == r2.bit_generator.state
        manual = _kernels.sample_partner(2 * n, draws)
        assert ChordDiagram(manual) == d

    def test_crossing_probability_n2(self):
        rng = rng_from_seed(123)
        crossing = sum(
            1 for _ in range(30_000)
            if sample_uniform(2, rng).chords() == [Chord(1, 3), Chord(2, 4)]
        )
        assert abs(crossing / 30_000 - 1 / 3) < 0.01

    def test_uniform_n3(self):
        rng = rng_from_seed(321)
        bounds = uniform_draw_bounds(3)
        rows = np.empty((150_000, 3), dtype=np.int64)
        for i in range(rows.shape[0]):
            rows[i] = rng.integers(0, bounds, dtype=np.int64)
        codes = _kernels.batch_uniform_codes(6, rows)
        freq = np.bincount(codes, minlength=15) / rows.shape[0]
        assert np.abs(freq - 1 / 15).max() < 0.005


class TestContinuousModel:
    def test_n1(self):
        tr = run_continuous(1, rng_from_seed(0))
        assert tr.final().chords() == [Chord(1, 2)]

    def test_states_are_diagrams_on_2k(self):
        tr = run_continuous(8, rng_from_seed(3))
        for k, state in enumerate(tr.steps(), start=1):
            assert isinstance(state, ChordDiagram)
            assert state.n == k

    def test_prefix_extension_via_phi(self):
        # tau of the first j created chords reproduces step j
        for seed in range(20):
            tr = run_continuous(7, rng_from_seed(seed))
            final = tr.final()
            r = list(tr.chord_labeling)
            assert 1 in (r[0].a, r[0].b)
            for j in range(1, 8):
                assert phi(final, r, j) == tr.step(j)

    def test_uniform_n2(self):
        rng = rng_from_seed(77)
        bounds = continuous_draw_bounds(2)
        rows = rng.integers(0, bounds, size=(60_000, 1), dtype=np.int64)
        codes = _kernels.batch_continuous_final(2, rows)
        freq = np.bincount(codes, minlength=3) / rows.shape[0]
        assert np.abs(freq - 1 / 3).max() < 0.01

    def test_kernel_matches_python_trace(self):
        for seed in range(30):
            r1 = rng_from_seed(seed)
            tr = run_continuous(6, r1)
            r2 = rng_from_seed(seed)
            draws = r2.integers(0, continuous_draw_bounds(6), dtype=np.int64)
            code = _kernels.batch_continuous_final(6, draws[None, :])[0]
            assert int(_kernels.encode_pairing(tr.final().partner0())) == int(code)

    def test_zero_size(self):
        with pytest.raises(ZeroSizeError):
            run_continuous(0, rng_from_seed(0))


class TestDiscreteModel:
    def test_n1(self):
        tr = run_discrete(1, rng_from_seed(0))
        assert sorted(tr.step(1).chords) == [Chord(1, 2)]

    def test_first_partner_uniform(self):
        rng = rng_from_seed(17)
        counts = {2: 0, 3: 0, 4: 0}
        for _ in range(60_000):
            tr = run_discrete(2, rng)
            counts[tr.chord_labeling[0].b] += 1
        for v in counts.values():
            assert abs(v / 60_000 - 1 / 3) < 0.01

    def test_prefix_extension(self):
        tr = run_discrete(8, rng_from_seed(9))
        prev: frozenset = frozenset()
        for k in range(1, 9):
            cur = tr.step(k).chords
            assert len(cur) == k
            assert prev < cur
            prev = cur
        assert 1 in (tr.chord_labeling[0].a, tr.chord_labeling[0].b)

    def test_tau_of_final_uniform_n3(self):
        rng = rng_from_seed(13)
        bounds = discrete_draw_bounds(3)
        rows = rng.integers(0, bounds, size=(150_000, 5), dtype=np.int64)
        codes = _kernels.batch_discrete_final(3, rows)
        freq = np.bincount(codes, minlength=15) / rows.shape[0]
        assert np.abs(freq - 1 / 15).max() < 0.005

    def test_kernel_matches_python_trace(self):
        for seed in range(30):
            tr = run_discrete(6, rng_from_seed(seed))
            r2 = rng_from_seed(seed)
            draws = r2.integers(0, discrete_draw_bounds(6), dtype=np.int64)
            code = _kernels.batch_discrete_final(6, draws[None, :])[0]
            assert int(_kernels.encode_pairing(tr.final().partner0())) == int(code)

    def test_joint_kernel_matches_tau_of_steps(self):
        for seed in range(20):
            tr = run_discrete(5, rng_from_seed(seed))
            r2 = rng_from_seed(seed)
            draws = r2.integers(0, discrete_draw_bounds(5), dtype=np.int64)
            joint = _kernels.batch_discrete_joint(5, draws[None, :])[0]
            for k in range(1, 6):
                compact = tau(tr.step(k))
                assert int(_kernels.encode_pairing(compact.partner0())) == int(joint[k - 1])


class TestTraceSerialization:
    def test_jsonl_shape(self):
        tr = run_continuous(4, rng_from_seed(2))
        lines = tr.to_jsonl().strip().split("\n")
        assert len(lines) == 4
        import json

        for k, line in enumerate(lines, start=1):
            obj = json.loads(line)
            assert obj["k"] == k
            assert obj["model"] == "continuous"
            assert len(obj["pairs"]) == k

    def test_deltas_mode_above_snapshot_limit(self, monkeypatch):
        import chordlab.sampling as sampling

        monkeypatch.setattr(sampling, "SNAPSHOT_LIMIT", 5)
        tr = sampling.run_continuous(8, rng_from_seed(4))
        assert tr.snapshots is None
        assert tr.step(3).n == 3  # replayed from choices
        tr2 = sampling.run_discrete(8, rng_from_seed(4))
        assert tr2.snapshots is None
        assert len(tr2.step(5).chords) == 5


class TestSwitchingKernelAgainstTrace:
    def test_mono_flags_match_trace_states(self):
        # the incremental insertion kernel agrees step-by-step with the
        # python trace + the public monolithicity predicate
        from chordlab.graph import is_monolithic

        n = 25
        for seed in range(15):
            tr = run_continuous(n, rng_from_seed(seed))
            r2 = rng_from_seed(seed)
            draws = r2.integers(0, continuous_draw_bounds(n), dtype=np.int64)
            mono = _kernels.batch_switching(n, draws[None, :])[0]
            for k in range(1, n + 1):
                assert bool(mono[k]) == is_monolithic(tr.step(k)), (seed, k)
