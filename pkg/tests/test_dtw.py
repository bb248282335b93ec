import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cyclemine.dtw import DtwConfig, cycle_feature, dtw_distance, dtw_matrix
from cyclemine.errors import EmptySequence, WindowInfeasible
from cyclemine.segmentation import OnCycle

from oracles import dtw_brute_force

short_seq = st.lists(st.floats(-50, 50, allow_nan=False), min_size=1, max_size=6)


def cycle_of(values, cycle_id=0, channel="Q7_m3h"):
    values = np.asarray(values, dtype=float)
    return OnCycle(cycle_id=cycle_id, start=0, end=len(values) - 1,
                   timestamps=np.arange(len(values), dtype=np.int64) * 240,
                   data={channel: values}, dt=240.0)


class TestDtwDistance:
    def test_self_distance_zero(self):
        x = [0.0, 1.5, 2.0, -1.0]
        assert dtw_distance(x, x) == 0.0

    def test_hand_case(self):
        assert dtw_distance([0, 1, 2], [0, 2]) == 1.0

    @given(short_seq, short_seq)
    @settings(max_examples=100, deadline=None)
    def test_symmetric(self, x, y):
        assert dtw_distance(x, y) == pytest.approx(dtw_distance(y, x), abs=1e-12)

    @given(short_seq, short_seq, st.sampled_from(["absolute", "squared"]))
    @settings(max_examples=150, deadline=None)
    def test_matches_brute_force(self, x, y, local_cost):
        config = DtwConfig(local_cost=local_cost)
        assert dtw_distance(x, y, config) == dtw_brute_force(x, y, local_cost)

    def test_zero_iff_alignable_exactly(self):
        # repeated values align with zero cost despite different lengths
        assert dtw_distance([1, 1, 2], [1, 2, 2]) == 0.0
        assert dtw_distance([1, 2], [1, 3]) > 0.0

    @given(short_seq, short_seq, st.integers(0, 6))
    @settings(max_examples=100, deadline=None)
    def test_window_never_below_unconstrained(self, x, y, window):
        free = dtw_distance(x, y)
        if abs(len(x) - len(y)) > window:
            with pytest.raises(WindowInfeasible):
                dtw_distance(x, y, DtwConfig(window=window))
        else:
            banded = dtw_distance(x, y, DtwConfig(window=window))
            assert banded >= free - 1e-12

    def test_empty_rejected(self):
        with pytest.raises(EmptySequence):
            dtw_distance([], [1.0])

    def test_nonnegative(self):
        rng = np.random.default_rng(6)
        for _ in range(20):
            x = rng.normal(size=rng.integers(1, 10))
            y = rng.normal(size=rng.integers(1, 10))
            assert dtw_distance(x, y) >= 0.0


class TestDtwMatrix:
    def test_single_cycle(self):
        dist = dtw_matrix([cycle_of([1, 2, 3])], "Q7_m3h")
        assert dist.n == 1
        assert dist.condensed.size == 0

    def test_identical_cycles_zero_off_diagonal(self):
        cycles = [cycle_of([1, 2, 3], 0), cycle_of([1, 2, 3], 1)]
        dist = dtw_matrix(cycles, "Q7_m3h")
        assert dist.get(0, 1) == 0.0

    def test_shape_classes_separate(self):
        rng = np.random.default_rng(9)
        flat = [cycle_of(np.ones(30) + rng.normal(0, 0.01, 30), i) for i in range(2)]
        spike = [cycle_of(np.exp(-np.linspace(0, 5, 30)) + rng.normal(0, 0.01, 30), 2)]
        dist = dtw_matrix(flat + spike, "Q7_m3h")
        assert dist.get(0, 1) < dist.get(0, 2)
        assert dist.get(0, 1) < dist.get(1, 2)

    def test_worker_count_does_not_change_result(self):
        rng = np.random.default_rng(12)
        cycles = [cycle_of(rng.normal(size=rng.integers(5, 15)), i) for i in range(6)]
        serial = dtw_matrix(cycles, "Q7_m3h", workers=1)
        parallel = dtw_matrix(cycles, "Q7_m3h", workers=4)
        np.testing.assert_array_equal(serial.condensed, parallel.condensed)

    def test_sum_over_channels_policy(self):
        a = {"Q7_m3h": np.array([1.0, 2.0, 3.0]), "Q6a_KW": np.array([5.0, 5.0, 6.0])}
        b = {"Q7_m3h": np.array([1.0, 3.0, 3.0]), "Q6a_KW": np.array([5.0, 6.0, 6.0])}
        cycles = [
            OnCycle(0, 0, 2, np.arange(3, dtype=np.int64) * 240, a, 240.0),
            OnCycle(1, 0, 2, np.arange(3, dtype=np.int64) * 240, b, 240.0),
        ]
        config = DtwConfig(channel_policy="sum_over_channels")
        total = dtw_matrix(cycles, "Q7_m3h", config).get(0, 1)
        parts = sum(
            dtw_distance(cycle_feature(cycles[0], ch), cycle_feature(cycles[1], ch))
            for ch in ("Q6a_KW", "Q7_m3h"))
        assert total == pytest.approx(parts)

    def test_feature_is_z_scored(self):
        # scaling a cycle's channel must not change the matrix
        base = [cycle_of([1, 2, 3, 4], 0), cycle_of([2, 1, 1, 3], 1)]
        scaled = [cycle_of([10, 20, 30, 40], 0), cycle_of([2, 1, 1, 3], 1)]
        d1 = dtw_matrix(base, "Q7_m3h")
        d2 = dtw_matrix(scaled, "Q7_m3h")
        np.testing.assert_allclose(d1.condensed, d2.condensed, atol=1e-12)
