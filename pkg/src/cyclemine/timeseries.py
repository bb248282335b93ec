"""Multi-channel sensor time series: data model, CSV ingestion, gap detection.

Tables are immutable after construction. Timestamps are integer seconds
since the epoch; the nominal tick interval is inferred as the median
spacing. Missing values are NaN cells and are never interpolated here --
downstream code decides policy.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from datetime import datetime, timezone

import numpy as np

from .errors import (
    DuplicateTimestamp,
    EmptyTable,
    IndexOutOfRange,
    MissingColumn,
    UnknownChannel,
    UnparsableTimestamp,
)

TEMPERATURE_KINDS = ("temperature_supply", "temperature_return")
CHANNEL_KINDS = TEMPERATURE_KINDS + ("flow", "power", "energy_meter", "other")
_TEMPERATURE_UNITS = ("degC", "K", "degF")

DEFAULT_TIMESTAMP_FORMAT = "%Y-%m-%d %H:%M:%S"


@dataclass(frozen=True)
class ChannelSpec:
    name: str
    kind: str = "other"
    unit: str = ""

    def __post_init__(self):
        if not self.name:
            raise ValueError("channel name must be nonempty")
        if self.kind not in CHANNEL_KINDS:
            raise ValueError(f"unknown channel kind {self.kind!r}")
        if self.kind in TEMPERATURE_KINDS and self.unit not in _TEMPERATURE_UNITS:
            raise ValueError(
                f"temperature channel {self.name!r} needs a temperature unit, got {self.unit!r}"
            )


def load_schema(path) -> list[ChannelSpec]:
    """Read a JSON schema file: a list of {name, kind, unit} objects."""
    with open(path, encoding="utf-8") as fh:
        entries = json.load(fh)
    return [ChannelSpec(e["name"], e.get("kind", "other"), e.get("unit", "")) for e in entries]


def save_schema(path, channels: list[ChannelSpec]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(
            [{"name": c.name, "kind": c.kind, "unit": c.unit} for c in channels],
            fh,
            indent=2,
        )


class TimeSeriesTable:
    """Timestamped multi-channel value matrix, one row per instant.

    Timestamps must be strictly increasing. Values are float64 with NaN
    marking missing cells. Arrays are made read-only, so tables can be
    shared freely across threads.
    """

    def __init__(self, timestamps, channels: list[ChannelSpec], values):
        timestamps = np.asarray(timestamps, dtype=np.int64)
        values = np.asarray(values, dtype=np.float64)
        if values.ndim != 2:
            raise ValueError("values must be a 2-D matrix")
        if values.shape[0] != timestamps.shape[0]:
            raise ValueError("row count must match timestamp count")
        if values.shape[1] != len(channels):
            raise ValueError("column count must match channel count")
        names = [c.name for c in channels]
        if len(set(names)) != len(names):
            raise ValueError("channel names must be unique")
        if timestamps.size > 1 and np.any(np.diff(timestamps) <= 0):
            raise ValueError("timestamps must be strictly increasing")
        timestamps.setflags(write=False)
        values.setflags(write=False)
        self.timestamps = timestamps
        self.channels = list(channels)
        self.values = values
        self._index = {n: i for i, n in enumerate(names)}

    def __len__(self):
        return self.timestamps.shape[0]

    @property
    def channel_names(self) -> list[str]:
        return [c.name for c in self.channels]

    @property
    def dt(self) -> float:
        """Nominal tick interval in seconds (median spacing)."""
        if len(self) < 2:
            return 0.0
        return float(np.median(np.diff(self.timestamps)))

    def column(self, name: str) -> np.ndarray:
        if name not in self._index:
            raise UnknownChannel(name)
        return self.values[:, self._index[name]]

    def spec(self, name: str) -> ChannelSpec:
        if name not in self._index:
            raise UnknownChannel(name)
        return self.channels[self._index[name]]

    def slice(self, start: int, end: int, channels=None) -> "TimeSeriesTable":
        """Copy of rows start..end inclusive, optionally restricted to channels."""
        n = len(self)
        if not (0 <= start <= end < n):
            raise IndexOutOfRange(f"slice {start}..{end} outside 0..{n - 1}")
        if channels is None:
            channels = self.channel_names
        for name in channels:
            if name not in self._index:
                raise UnknownChannel(name)
        cols = [self._index[name] for name in channels]
        return TimeSeriesTable(
            self.timestamps[start : end + 1],
            [self.channels[c] for c in cols],
            self.values[start : end + 1][:, cols],
        )

    def emit_csv(self, path, timestamp_format: str = DEFAULT_TIMESTAMP_FORMAT) -> None:
        """Write the table back out in the canonical CSV layout."""
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["timestamp"] + self.channel_names)
            for ts, row in zip(self.timestamps, self.values):
                stamp = _format_timestamp(int(ts), timestamp_format)
                cells = ["" if np.isnan(v) else repr(float(v)) for v in row]
                writer.writerow([stamp] + cells)


@dataclass(frozen=True)
class GapReport:
    """Recording gaps: index pairs bracketing each gap plus total coverage."""

    gaps: list = field(default_factory=list)  # (start_index, end_index, seconds)
    coverage_fraction: float = 1.0


def _parse_timestamp(text: str, fmt: str) -> int:
    if fmt == "epoch":
        return int(text)
    dt = datetime.strptime(text, fmt)
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=timezone.utc)
    return int(dt.timestamp())


def _format_timestamp(seconds: int, fmt: str) -> str:
    if fmt == "epoch":
        return str(seconds)
    return datetime.fromtimestamp(seconds, tz=timezone.utc).strftime(fmt)


def ingest_csv(path, schema: list[ChannelSpec],
               timestamp_format: str = DEFAULT_TIMESTAMP_FORMAT) -> TimeSeriesTable:
    """Read the canonical CSV layout into a table.

    The header must contain a "timestamp" column and every schema channel.
    Rows are sorted by timestamp; duplicates are rejected; cells that do
    not parse as numbers become NaN.
    """
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise EmptyTable(f"{path}: empty file") from None
        header = [h.strip() for h in header]
        if "timestamp" not in header:
            raise MissingColumn("timestamp")
        ts_col = header.index("timestamp")
        col_of = {}
        for ch in schema:
            if ch.name not in header:
                raise MissingColumn(ch.name)
            col_of[ch.name] = header.index(ch.name)

        stamps, rows = [], []
        for lineno, record in enumerate(reader, start=2):
            if not record or all(not cell.strip() for cell in record):
                continue
            raw = record[ts_col].strip()
            try:
                instant = _parse_timestamp(raw, timestamp_format)
            except (ValueError, OverflowError):
                raise UnparsableTimestamp(lineno, raw) from None
            row = np.full(len(schema), np.nan)
            for j, ch in enumerate(schema):
                cell = record[col_of[ch.name]].strip() if col_of[ch.name] < len(record) else ""
                if cell and cell.lower() != "nan":
                    try:
                        row[j] = float(cell)
                    except ValueError:
                        pass  # unparsable cell stays missing
            stamps.append(instant)
            rows.append(row)

    if not stamps:
        raise EmptyTable(f"{path}: no data rows")
    order = np.argsort(np.asarray(stamps), kind="stable")
    stamps = np.asarray(stamps, dtype=np.int64)[order]
    dupes = np.flatnonzero(np.diff(stamps) == 0)
    if dupes.size:
        raise DuplicateTimestamp(int(stamps[dupes[0]]))
    return TimeSeriesTable(stamps, schema, np.asarray(rows)[order])


def detect_gaps(table: TimeSeriesTable, max_gap: float) -> GapReport:
    """Report every consecutive-timestamp spacing larger than max_gap seconds.

    Coverage is (observed span - total gap time) / observed span; a table
    with fewer than two rows has trivially full coverage.
    """
    if len(table) == 0:
        raise EmptyTable("cannot analyse an empty table")
    if len(table) == 1:
        return GapReport()
    spacings = np.diff(table.timestamps)
    gap_idx = np.flatnonzero(spacings > max_gap)
    gaps = [(int(i), int(i) + 1, float(spacings[i])) for i in gap_idx]
    span = float(table.timestamps[-1] - table.timestamps[0])
    gap_total = float(spacings[gap_idx].sum()) if gap_idx.size else 0.0
    return GapReport(gaps=gaps, coverage_fraction=(span - gap_total) / span)


def default_chiller_schema() -> list[ChannelSpec]:
    """Channel layout of the adsorption-chiller telemetry this tool targets."""
    temps = [
        ("T_HTsu", "temperature_supply"), ("T_HTre", "temperature_return"),
        ("T_MTsu", "temperature_supply"), ("T_MTre", "temperature_return"),
        ("T_LTsu", "temperature_supply"), ("T_LTre", "temperature_return"),
    ]
    flows = ["Q6a_m3h", "Q12_m3h", "Q7_m3h"]
    powers = ["Q6a_KW", "Q12_KW", "Q7_KW"]
    meters = ["E6", "E7", "E8"]
    schema = [ChannelSpec(n, k, "degC") for n, k in temps]
    schema += [ChannelSpec(n, "flow", "m3/h") for n in flows]
    schema += [ChannelSpec(n, "power", "kW") for n in powers]
    schema += [ChannelSpec(n, "energy_meter", "kWh") for n in meters]
    return schema
