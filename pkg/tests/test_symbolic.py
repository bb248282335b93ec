import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from cyclemine.errors import AlphabetTooSmall, EmptyCycle, EmptySeries, TooManyFrames, UnknownChannel
from cyclemine.segmentation import OnCycle
from cyclemine.symbolic import (
    SaxConfig,
    SymbolSequence,
    assign_symbols,
    gaussian_breakpoints,
    paa,
    symbolize,
    zscore,
)

from oracles import inverse_normal_cdf, paa_weight_split

finite_series = st.lists(
    st.floats(min_value=-1e6, max_value=1e6, allow_nan=False), min_size=1, max_size=50)


def cycle_of(values, dt=240.0, channel="Q7_m3h", cycle_id=0):
    values = np.asarray(values, dtype=float)
    return OnCycle(cycle_id=cycle_id, start=0, end=len(values) - 1,
                   timestamps=np.arange(len(values), dtype=np.int64) * int(dt),
                   data={channel: values}, dt=dt)


class TestZscore:
    def test_constant_series_maps_to_zeros(self):
        np.testing.assert_array_equal(zscore([5, 5, 5]), [0, 0, 0])

    def test_three_point_hand_value(self):
        # mean 2, population deviation sqrt(2/3)
        np.testing.assert_allclose(zscore([1, 2, 3]), [-1.2247, 0.0, 1.2247], atol=1e-4)

    def test_empty_rejected(self):
        with pytest.raises(EmptySeries):
            zscore([])

    @given(finite_series)
    @settings(max_examples=100, deadline=None)
    def test_idempotent(self, series):
        once = zscore(series)
        np.testing.assert_allclose(zscore(once), once, atol=1e-9)

    @given(finite_series)
    @settings(max_examples=100, deadline=None)
    def test_mean_zero_std_one(self, series):
        x = np.asarray(series, dtype=float)
        z = zscore(x)
        sigma = np.std(x)
        if sigma <= 1e-12 * max(1.0, np.abs(x).max()):
            # spread at rounding-noise level counts as constant
            np.testing.assert_array_equal(z, np.zeros(len(x)))
        else:
            # subtracting a large offset loses bits, so scale the tolerance
            tol = 1e-9 * (1.0 + abs(np.mean(x)) / sigma)
            assert abs(z.mean()) < tol
            assert abs(z.std() - 1.0) < tol


class TestBreakpoints:
    def test_two_symbols(self):
        np.testing.assert_allclose(gaussian_breakpoints(2), [0.0], atol=1e-12)

    def test_four_symbols_vs_bisection_oracle(self):
        expected = [inverse_normal_cdf(q) for q in (0.25, 0.5, 0.75)]
        np.testing.assert_allclose(gaussian_breakpoints(4), expected, atol=1e-3)
        np.testing.assert_allclose(gaussian_breakpoints(4), [-0.6745, 0.0, 0.6745], atol=1e-3)

    def test_three_symbols_vs_bisection_oracle(self):
        expected = [inverse_normal_cdf(q) for q in (1 / 3, 2 / 3)]
        np.testing.assert_allclose(gaussian_breakpoints(3), expected, atol=1e-3)
        np.testing.assert_allclose(gaussian_breakpoints(3), [-0.4307, 0.4307], atol=1e-3)

    def test_sorted_and_correct_count(self):
        for a in range(2, 21):
            bps = gaussian_breakpoints(a)
            assert len(bps) == a - 1
            assert np.all(np.diff(bps) > 0)

    def test_alphabet_too_small(self):
        with pytest.raises(AlphabetTooSmall):
            gaussian_breakpoints(1)

    def test_equiprobable_bins(self):
        rng = np.random.default_rng(17)
        draws = rng.standard_normal(200_000)
        for a in (2, 5, 20):
            symbols = assign_symbols(draws, gaussian_breakpoints(a))
            freq = np.bincount(symbols, minlength=a) / draws.size
            np.testing.assert_allclose(freq, 1 / a, atol=0.01)


class TestPaa:
    def test_identity_frames(self):
        x = [3.0, 1.0, 4.0, 1.5]
        np.testing.assert_allclose(paa(x, 4), x)

    def test_exact_halves(self):
        np.testing.assert_allclose(paa([1, 1, 3, 3], 2), [1, 3])

    def test_weight_split_three_into_two(self):
        # frozen from the weight-split oracle: (1 + 0.5*2)/1.5 and (0.5*2 + 3)/1.5
        np.testing.assert_allclose(paa([1, 2, 3], 2), [4 / 3, 8 / 3], atol=1e-9)
        np.testing.assert_allclose(paa([1, 2, 3], 2), paa_weight_split([1, 2, 3], 2), atol=1e-12)

    @given(finite_series, st.integers(1, 50))
    @settings(max_examples=100, deadline=None)
    def test_matches_oracle(self, series, frame_count):
        if frame_count > len(series):
            with pytest.raises(TooManyFrames):
                paa(series, frame_count)
        else:
            np.testing.assert_allclose(paa(series, frame_count),
                                       paa_weight_split(series, frame_count),
                                       atol=1e-6, rtol=1e-9)

    def test_mean_preserved(self):
        rng = np.random.default_rng(2)
        x = rng.normal(size=30)
        assert paa(x, 5).mean() == pytest.approx(x.mean())


class TestSymbolize:
    def test_constant_cycle_alphabet_four(self):
        # zeros fall in the region whose left boundary is 0: symbol 2 of 4
        seq = symbolize(cycle_of([7.0] * 6), "Q7_m3h", SaxConfig(alphabet_size=4))
        np.testing.assert_array_equal(seq.symbols, [2] * 6)

    def test_binary_alphabet_signs(self):
        seq = symbolize(cycle_of([1, 2, 3, 4]), "Q7_m3h", SaxConfig(alphabet_size=2))
        np.testing.assert_array_equal(seq.symbols, [0, 0, 1, 1])

    def test_increasing_ramp_gives_nondecreasing_symbols(self):
        seq = symbolize(cycle_of(np.linspace(0, 10, 40)), "Q7_m3h", SaxConfig())
        assert np.all(np.diff(seq.symbols) >= 0)

    @given(st.lists(st.floats(-100, 100), min_size=4, max_size=40),
           st.floats(0.1, 50), st.floats(-1000, 1000))
    @settings(max_examples=60, deadline=None)
    def test_shift_scale_invariance(self, values, alpha, beta):
        x = np.asarray(values)
        # skip inputs where the affine map cancels the signal into rounding
        # noise, or a normalized value sits within float error of a boundary
        assume(np.std(x) > 1e-6 * (1.0 + np.abs(x).max() + abs(beta) / alpha))
        z = zscore(x)
        assume(np.abs(z[:, None] - gaussian_breakpoints(8)).min() > 1e-6)
        base = symbolize(cycle_of(values), "Q7_m3h", SaxConfig(alphabet_size=8))
        scaled = symbolize(cycle_of([alpha * v + beta for v in values]),
                           "Q7_m3h", SaxConfig(alphabet_size=8))
        np.testing.assert_array_equal(base.symbols, scaled.symbols)

    @given(st.integers(1, 60), st.integers(1, 6), st.integers(1, 3))
    @settings(max_examples=60, deadline=None)
    def test_output_length(self, ticks, chunk_ticks, q):
        rng = np.random.default_rng(ticks * 7 + chunk_ticks)
        dt = 240.0
        config = SaxConfig(chunk_period=chunk_ticks * dt, paa_segments_per_chunk=q)
        seq = symbolize(cycle_of(rng.normal(size=ticks), dt=dt), "Q7_m3h", config)
        assert len(seq) == int(np.ceil(ticks / chunk_ticks)) * q

    def test_per_sample_symbolization_when_period_equals_tick(self):
        # one symbol per tick at the default 4-minute period and rate
        values = np.sin(np.linspace(0, 6, 25))
        seq = symbolize(cycle_of(values), "Q7_m3h", SaxConfig())
        assert len(seq) == 25

    def test_chunk_averaging(self):
        # period twice the tick: halves average pairwise before symbol lookup
        values = [0.0, 0.0, 10.0, 10.0]
        seq = symbolize(cycle_of(values, dt=120.0), "Q7_m3h",
                        SaxConfig(chunk_period=240.0, alphabet_size=2))
        np.testing.assert_array_equal(seq.symbols, [0, 1])

    def test_unknown_channel(self):
        with pytest.raises(UnknownChannel):
            symbolize(cycle_of([1.0, 2.0]), "bogus", SaxConfig())

    def test_all_missing_cycle(self):
        with pytest.raises(EmptyCycle):
            symbolize(cycle_of([np.nan, np.nan]), "Q7_m3h", SaxConfig())

    def test_text_rendering(self):
        seq = SymbolSequence(cycle_id=0, symbols=np.array([0, 1, 25, 26]), alphabet_size=28)
        assert seq.to_text() == "abzA"
