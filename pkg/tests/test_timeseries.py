import numpy as np
import pytest

from cyclemine.errors import (
    DuplicateTimestamp,
    EmptyTable,
    IndexOutOfRange,
    MissingColumn,
    UnknownChannel,
    UnparsableTimestamp,
)
from cyclemine.timeseries import (
    ChannelSpec,
    TimeSeriesTable,
    default_chiller_schema,
    detect_gaps,
    ingest_csv,
    load_schema,
    save_schema,
)

LT = ChannelSpec("T_LTsu", "temperature_supply", "degC")


def write(tmp_path, text, name="data.csv"):
    path = tmp_path / name
    path.write_text(text)
    return path


class TestIngest:
    def test_three_rows_one_channel(self, tmp_path):
        path = write(tmp_path, "timestamp,T_LTsu\n0,1.0\n240,2.0\n480,3.0\n")
        table = ingest_csv(path, [LT], timestamp_format="epoch")
        assert len(table) == 3
        assert table.channel_names == ["T_LTsu"]
        np.testing.assert_array_equal(table.timestamps, [0, 240, 480])

    def test_empty_cell_becomes_missing_row_kept(self, tmp_path):
        path = write(tmp_path, "timestamp,T_LTsu\n0,1.0\n240,\n480,3.0\n")
        table = ingest_csv(path, [LT], timestamp_format="epoch")
        assert len(table) == 3
        assert np.isnan(table.column("T_LTsu")[1])

    def test_nan_cell_becomes_missing(self, tmp_path):
        path = write(tmp_path, "timestamp,T_LTsu\n0,NaN\n240,2.0\n")
        table = ingest_csv(path, [LT], timestamp_format="epoch")
        assert np.isnan(table.column("T_LTsu")[0])

    def test_unparsable_cell_becomes_missing(self, tmp_path):
        path = write(tmp_path, "timestamp,T_LTsu\n0,oops\n240,2.0\n")
        table = ingest_csv(path, [LT], timestamp_format="epoch")
        assert np.isnan(table.column("T_LTsu")[0])

    def test_rows_out_of_order_are_sorted(self, tmp_path):
        # expected ordering computed by sorting the fixture rows by stamp
        rows = [(960, 5.0), (0, 1.0), (480, 3.0), (240, 2.0), (720, 4.0)]
        body = "".join(f"{t},{v}\n" for t, v in rows)
        path = write(tmp_path, "timestamp,T_LTsu\n" + body)
        table = ingest_csv(path, [LT], timestamp_format="epoch")
        expected = sorted(rows)
        np.testing.assert_array_equal(table.timestamps, [t for t, _ in expected])
        np.testing.assert_array_equal(table.column("T_LTsu"), [v for _, v in expected])

    def test_missing_column(self, tmp_path):
        path = write(tmp_path, "timestamp,other\n0,1\n")
        with pytest.raises(MissingColumn):
            ingest_csv(path, [LT], timestamp_format="epoch")

    def test_duplicate_timestamp(self, tmp_path):
        path = write(tmp_path, "timestamp,T_LTsu\n0,1.0\n0,2.0\n")
        with pytest.raises(DuplicateTimestamp):
            ingest_csv(path, [LT], timestamp_format="epoch")

    def test_unparsable_timestamp(self, tmp_path):
        path = write(tmp_path, "timestamp,T_LTsu\nnope,1.0\n")
        with pytest.raises(UnparsableTimestamp) as err:
            ingest_csv(path, [LT], timestamp_format="epoch")
        assert err.value.line == 2

    def test_datetime_format(self, tmp_path):
        path = write(tmp_path,
                     "timestamp,T_LTsu\n2010-07-21 00:00:00,1.0\n2010-07-21 00:04:00,2.0\n")
        table = ingest_csv(path, [LT])
        assert table.dt == 240.0

    def test_round_trip_identity(self, tmp_path):
        rng = np.random.default_rng(3)
        schema = [LT, ChannelSpec("Q7_m3h", "flow", "m3/h")]
        values = rng.normal(size=(20, 2))
        values[4, 0] = np.nan
        table = TimeSeriesTable(np.arange(20) * 240, schema, values)
        path = tmp_path / "rt.csv"
        table.emit_csv(path, timestamp_format="epoch")
        back = ingest_csv(path, schema, timestamp_format="epoch")
        np.testing.assert_array_equal(back.timestamps, table.timestamps)
        np.testing.assert_array_equal(back.values, table.values)


class TestGaps:
    def make(self, minutes):
        stamps = np.asarray(minutes) * 60
        return TimeSeriesTable(stamps, [LT], np.ones((len(stamps), 1)))

    def test_no_gaps(self):
        report = detect_gaps(self.make([0, 4, 8, 12]), max_gap=8 * 60)
        assert report.gaps == []
        assert report.coverage_fraction == 1.0

    def test_single_gap(self):
        # spacings 4, 56, 4 minutes; only the 56-minute one exceeds 8
        report = detect_gaps(self.make([0, 4, 60, 64]), max_gap=8 * 60)
        assert report.gaps == [(1, 2, 56 * 60.0)]
        assert report.coverage_fraction == pytest.approx((64 - 56) / 64)

    def test_single_row(self):
        report = detect_gaps(self.make([0]), max_gap=480)
        assert report.gaps == []
        assert report.coverage_fraction == 1.0

    def test_empty_table_rejected(self):
        table = TimeSeriesTable(np.array([], dtype=np.int64), [LT], np.zeros((0, 1)))
        with pytest.raises(EmptyTable):
            detect_gaps(table, max_gap=480)

    def test_gap_durations_partition_span(self):
        rng = np.random.default_rng(11)
        stamps = np.cumsum(rng.integers(1, 40, size=50)) * 60
        table = TimeSeriesTable(stamps, [LT], np.ones((50, 1)))
        max_gap = 10 * 60
        report = detect_gaps(table, max_gap)
        spacings = np.diff(stamps)
        assert len(report.gaps) == int((spacings > max_gap).sum())
        span = stamps[-1] - stamps[0]
        gap_total = sum(g[2] for g in report.gaps)
        covered = report.coverage_fraction * span
        assert covered + gap_total == pytest.approx(span)


class TestSlice:
    def setup_method(self):
        schema = [LT, ChannelSpec("Q7_m3h", "flow", "m3/h")]
        self.table = TimeSeriesTable(np.arange(5) * 240, schema,
                                     np.arange(10.0).reshape(5, 2))

    def test_full_slice_is_identity(self):
        out = self.table.slice(0, 4)
        np.testing.assert_array_equal(out.values, self.table.values)
        np.testing.assert_array_equal(out.timestamps, self.table.timestamps)

    def test_single_cell(self):
        out = self.table.slice(2, 2, ["Q7_m3h"])
        assert out.values.shape == (1, 1)
        assert out.values[0, 0] == 5.0

    def test_window(self):
        out = self.table.slice(1, 3, ["T_LTsu"])
        np.testing.assert_array_equal(out.values[:, 0], [2.0, 4.0, 6.0])
        assert out.dt == self.table.dt

    def test_idempotent(self):
        once = self.table.slice(1, 3)
        twice = once.slice(0, len(once) - 1)
        np.testing.assert_array_equal(once.values, twice.values)

    def test_out_of_range(self):
        with pytest.raises(IndexOutOfRange):
            self.table.slice(0, 5)
        with pytest.raises(IndexOutOfRange):
            self.table.slice(3, 2)

    def test_unknown_channel(self):
        with pytest.raises(UnknownChannel):
            self.table.slice(0, 1, ["bogus"])


class TestSchema:
    def test_temperature_needs_temperature_unit(self):
        with pytest.raises(ValueError):
            ChannelSpec("T_x", "temperature_supply", "m3/h")

    def test_name_required(self):
        with pytest.raises(ValueError):
            ChannelSpec("", "flow", "m3/h")

    def test_save_load_round_trip(self, tmp_path):
        schema = default_chiller_schema()
        path = tmp_path / "schema.json"
        save_schema(path, schema)
        assert load_schema(path) == schema

    def test_duplicate_channel_names_rejected(self):
        with pytest.raises(ValueError):
            TimeSeriesTable(np.arange(2), [LT, LT], np.ones((2, 2)))

    def test_timestamps_must_increase(self):
        with pytest.raises(ValueError):
            TimeSeriesTable(np.array([0, 0]), [LT], np.ones((2, 1)))
