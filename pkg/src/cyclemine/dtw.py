"""Dynamic time warping distance between cycles, the comparison baseline.

Classic dynamic-programming recurrence over the full cost plane, with an
optional diagonal band constraint. Variable-length cycles are handled
natively; nothing is resampled.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import EmptySequence, WindowInfeasible
from .hcluster import DistanceMatrix
from .segmentation import OnCycle
from .symbolic import zscore

LOCAL_COSTS = ("absolute", "squared")
CHANNEL_POLICIES = ("single_channel", "sum_over_channels")


@dataclass(frozen=True)
class DtwConfig:
    window: int | None = None            # band radius in ticks, None = unconstrained
    channel_policy: str = "single_channel"
    local_cost: str = "absolute"

    def __post_init__(self):
        if self.window is not None and self.window < 0:
            raise ValueError("window must be >= 0")
        if self.channel_policy not in CHANNEL_POLICIES:
            raise ValueError(f"channel_policy must be one of {CHANNEL_POLICIES}")
        if self.local_cost not in LOCAL_COSTS:
            raise ValueError(f"local_cost must be one of {LOCAL_COSTS}")


def dtw_distance(x, y, config: DtwConfig = DtwConfig()) -> float:
    """Minimal cumulative cost over monotone alignments of x and y."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.size == 0 or y.size == 0:
        raise EmptySequence("both sequences must be nonempty")
    n, m = x.shape[0], y.shape[0]
    w = config.window
    if w is not None and abs(n - m) > w:
        raise WindowInfeasible(f"length difference {abs(n - m)} exceeds band radius {w}")

    prev = np.full(m + 1, np.inf)
    prev[0] = 0.0
    cur = np.empty(m + 1)
    for i in range(1, n + 1):
        cur[:] = np.inf
        if w is None:
            j_lo, j_hi = 1, m
        else:
            j_lo, j_hi = max(1, i - w), min(m, i + w)
        diff = np.abs(x[i - 1] - y[j_lo - 1 : j_hi])
        cost = diff if config.local_cost == "absolute" else diff ** 2
        for k, j in enumerate(range(j_lo, j_hi + 1)):
            cur[j] = cost[k] + min(prev[j], cur[j - 1], prev[j - 1])
        prev, cur = cur, prev
    return float(prev[m])


def cycle_feature(cycle: OnCycle, channel: str) -> np.ndarray:
    """Per-cycle z-scored channel series, missing ticks dropped."""
    raw = np.asarray(cycle.channel(channel), dtype=np.float64)
    raw = raw[~np.isnan(raw)]
    if raw.size == 0:
        raise EmptySequence(f"cycle {cycle.cycle_id} has no data on {channel!r}")
    return zscore(raw)


def dtw_matrix(cycles: list[OnCycle], channel: str,
               config: DtwConfig = DtwConfig(), workers: int = 1) -> DistanceMatrix:
    """All-pairs warping distances between cycles on z-scored channel data.

    Under sum_over_channels the distance is the sum of per-channel
    warping distances over every channel shared by all cycles. Results
    are identical for any worker count.
    """
    if not cycles:
        raise EmptySequence("need at least one cycle")
    if config.channel_policy == "single_channel":
        channels = [channel]
    else:
        channels = sorted(set.intersection(*(set(c.data) for c in cycles)))
    series = {
        ch: [cycle_feature(c, ch) for c in cycles] for ch in channels
    }
    n = len(cycles)
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]

    def pair_distance(pair):
        i, j = pair
        return sum(dtw_distance(series[ch][i], series[ch][j], config) for ch in channels)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            values = list(pool.map(pair_distance, pairs))
    else:
        values = [pair_distance(p) for p in pairs]
    return DistanceMatrix(n=n, condensed=np.asarray(values, dtype=np.float64))
