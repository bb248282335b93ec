"""ON/OFF state detection with 2-means clustering and ON-cycle extraction.

The chiller's flow and power channels separate cleanly into an idle and
an operating mode, so a k=2 Lloyd clustering on standardized features
recovers the operational state per tick. Consecutive ON ticks form one
cycle; cycles are split at recording gaps and short runs are dropped.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateInit, EmptyInput, NoCompleteRows
from .timeseries import TimeSeriesTable


@dataclass(frozen=True)
class KMeansConfig:
    k: int = 2
    max_iterations: int = 100
    tolerance: float = 1e-8
    seed: int = 0
    feature_channels: tuple = ()

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        if self.tolerance < 0:
            raise ValueError("tolerance must be >= 0")


@dataclass(frozen=True)
class StateMask:
    """Per-timestamp operational flag aligned with a source table."""

    states: np.ndarray  # bool, True = ON
    table: TimeSeriesTable

    def __post_init__(self):
        if self.states.shape[0] != len(self.table):
            raise ValueError("mask length must equal table row count")


@dataclass(frozen=True)
class OnCycle:
    """One contiguous operational segment of the source table."""

    cycle_id: int
    start: int  # inclusive row index into source table
    end: int    # inclusive
    timestamps: np.ndarray
    data: dict = field(default_factory=dict)  # channel name -> value array
    dt: float = 0.0

    @property
    def tick_count(self) -> int:
        return self.end - self.start + 1

    def channel(self, name: str) -> np.ndarray:
        return self.data[name]


def _kmeans_pp_init(points, k, rng):
    """k-means++ seeding: spread initial centroids by squared distance."""
    n = points.shape[0]
    centroids = np.empty((k, points.shape[1]))
    first = rng.integers(n)
    centroids[0] = points[first]
    d2 = np.sum((points - centroids[0]) ** 2, axis=1)
    for c in range(1, k):
        total = d2.sum()
        if total <= 0:
            # remaining mass is zero: pick any point not yet chosen
            idx = rng.integers(n)
        else:
            idx = rng.choice(n, p=d2 / total)
        centroids[c] = points[idx]
        d2 = np.minimum(d2, np.sum((points - centroids[c]) ** 2, axis=1))
    return centroids


def kmeans(points, config: KMeansConfig, sse_log: list | None = None):
    """Lloyd's algorithm with k-means++ seeding, deterministic given the seed.

    Returns (assignments, centroids). Iterates until the largest centroid
    shift drops below the tolerance or max_iterations is hit. Ties in
    point-to-centroid distance resolve to the lower cluster index. When
    sse_log is a list, the within-cluster SSE after each assignment step
    is appended to it.
    """
    points = np.asarray(points, dtype=np.float64)
    if points.ndim == 1:
        points = points.reshape(-1, 1)
    if points.size == 0:
        raise EmptyInput("kmeans needs at least one point")
    n_distinct = np.unique(points, axis=0).shape[0]
    if n_distinct < config.k:
        raise DegenerateInit(f"{n_distinct} distinct points < k={config.k}")

    rng = np.random.default_rng(config.seed)
    centroids = _kmeans_pp_init(points, config.k, rng)
    assignments = np.zeros(points.shape[0], dtype=np.intp)
    for _ in range(config.max_iterations):
        dists = np.sum((points[:, None, :] - centroids[None, :, :]) ** 2, axis=2)
        assignments = np.argmin(dists, axis=1)  # argmin takes the lowest index on ties
        if sse_log is not None:
            sse_log.append(float(dists[np.arange(points.shape[0]), assignments].sum()))
        new_centroids = centroids.copy()
        for c in range(config.k):
            members = points[assignments == c]
            if members.shape[0]:
                new_centroids[c] = members.mean(axis=0)
        shift = np.max(np.linalg.norm(new_centroids - centroids, axis=1))
        centroids = new_centroids
        if shift < config.tolerance:
            break
    dists = np.sum((points[:, None, :] - centroids[None, :, :]) ** 2, axis=2)
    assignments = np.argmin(dists, axis=1)
    return assignments, centroids


def detect_states(table: TimeSeriesTable, config: KMeansConfig) -> StateMask:
    """Label each row ON or OFF by 2-means on standardized feature channels.

    Rows with a missing feature value are labeled OFF. The cluster whose
    centroid has the larger mean standardized value is ON (operation
    raises flows and powers above idle). If the feature values are too
    degenerate to split into two clusters, everything is OFF.
    """
    features = list(config.feature_channels)
    if not features:
        features = [c.name for c in table.channels if c.kind in ("flow", "power")]
    cols = np.column_stack([table.column(name) for name in features])
    complete = ~np.isnan(cols).any(axis=1)
    if not complete.any():
        raise NoCompleteRows("no row has complete feature values")

    x = cols[complete]
    mean = x.mean(axis=0)
    std = x.std(axis=0)
    std[std == 0] = 1.0
    z = (x - mean) / std

    states = np.zeros(len(table), dtype=bool)
    try:
        assignments, centroids = kmeans(z, config)
    except DegenerateInit:
        return StateMask(states=states, table=table)  # flat signal: never ON
    on_cluster = int(np.argmax(centroids.mean(axis=1)))
    states[np.flatnonzero(complete)] = assignments == on_cluster
    states.setflags(write=False)
    return StateMask(states=states, table=table)


def extract_cycles(mask: StateMask, min_length: int = 3,
                   split_gap: float | None = None) -> list[OnCycle]:
    """Turn maximal ON runs into cycles, numbered in time order.

    Runs shorter than min_length ticks are dropped; a run containing a
    timestamp gap larger than split_gap seconds is split at the gap.
    split_gap defaults to twice the nominal tick interval.
    """
    table = mask.table
    if split_gap is None:
        split_gap = 2 * table.dt
    states = np.asarray(mask.states, dtype=bool)

    # run boundaries of the ON mask
    padded = np.concatenate(([False], states, [False]))
    edges = np.flatnonzero(np.diff(padded.astype(np.int8)))
    runs = [(int(s), int(e) - 1) for s, e in zip(edges[::2], edges[1::2])]

    pieces = []
    for start, end in runs:
        s = start
        for i in range(start, end):
            if table.timestamps[i + 1] - table.timestamps[i] > split_gap:
                pieces.append((s, i))
                s = i + 1
        pieces.append((s, end))

    cycles = []
    for start, end in pieces:
        if end - start + 1 < min_length:
            continue
        data = {
            c.name: table.values[start : end + 1, j]
            for j, c in enumerate(table.channels)
        }
        cycles.append(OnCycle(
            cycle_id=len(cycles),
            start=start,
            end=end,
            timestamps=table.timestamps[start : end + 1],
            data=data,
            dt=table.dt,
        ))
    return cycles
