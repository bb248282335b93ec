"""Symbolic discretization of ON cycles.

Each cycle's channel data is z-score normalized, chunked into windows of
a fixed period, reduced with piecewise aggregate approximation, and each
frame mean mapped to a symbol via equiprobable standard-normal
breakpoints. A trailing chunk shorter than the period is kept and
aggregated over its actual length so short cycles lose no data.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.stats import norm

from .errors import (
    AlphabetTooSmall,
    EmptyCycle,
    EmptySeries,
    TooManyFrames,
    UnknownChannel,
)
from .segmentation import OnCycle

MAX_ALPHABET = 52  # printable symbol budget: a-z then A-Z


@dataclass(frozen=True)
class SaxConfig:
    chunk_period: float = 240.0       # seconds per chunk
    paa_segments_per_chunk: int = 1   # frames per chunk
    alphabet_size: int = 20
    word_length: int = 1

    def __post_init__(self):
        if self.chunk_period <= 0:
            raise ValueError("chunk_period must be positive")
        if self.paa_segments_per_chunk < 1:
            raise ValueError("paa_segments_per_chunk must be >= 1")
        if not (2 <= self.alphabet_size <= MAX_ALPHABET):
            raise AlphabetTooSmall(
                f"alphabet_size must be in 2..{MAX_ALPHABET}, got {self.alphabet_size}"
            )
        if self.word_length < 1:
            raise ValueError("word_length must be >= 1")


@dataclass(frozen=True)
class SymbolSequence:
    cycle_id: int
    symbols: np.ndarray  # int indices in [0, alphabet_size)
    alphabet_size: int

    def __post_init__(self):
        if self.symbols.size and (self.symbols.min() < 0 or self.symbols.max() >= self.alphabet_size):
            raise ValueError("symbol index out of alphabet range")

    def __len__(self):
        return int(self.symbols.shape[0])

    def to_text(self) -> str:
        """Letter rendering, 'a' = 0 then 'A' = 26; only for alphabets <= 52."""
        letters = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ"
        return "".join(letters[s] for s in self.symbols)


def zscore(series) -> np.ndarray:
    """Normalize to mean 0 and population standard deviation 1.

    A constant series (zero deviation) maps to all zeros. The deviation
    is compared against the series magnitude so that a constant reading
    at a large offset is not mistaken for signal by rounding noise.
    """
    x = np.asarray(series, dtype=np.float64)
    if x.size == 0:
        raise EmptySeries("cannot z-score an empty series")
    sigma = x.std()  # population std
    if sigma <= 1e-12 * max(1.0, float(np.abs(x).max())):
        return np.zeros_like(x)
    return (x - x.mean()) / sigma


def gaussian_breakpoints(alphabet_size: int) -> np.ndarray:
    """Breakpoints making the alphabet regions equiprobable under N(0,1)."""
    if alphabet_size < 2:
        raise AlphabetTooSmall("alphabet needs at least 2 symbols")
    q = np.arange(1, alphabet_size) / alphabet_size
    return norm.ppf(q)


def _frame_means(x: np.ndarray, frame_count: int) -> np.ndarray:
    """Means over equal-width frames; boundary samples are weight-split."""
    n = x.shape[0]
    out = np.empty(frame_count)
    width = n / frame_count
    for i in range(frame_count):
        lo = i * width
        hi = (i + 1) * width
        j0 = int(math.floor(lo))
        j1 = min(int(math.ceil(hi)), n)
        acc = 0.0
        for j in range(j0, j1):
            w = min(j + 1, hi) - max(j, lo)
            acc += w * x[j]
        out[i] = acc / width
    return out


def paa(series, frame_count: int) -> np.ndarray:
    """Piecewise aggregate approximation: frame means with weight-split edges."""
    x = np.asarray(series, dtype=np.float64)
    if x.size == 0:
        raise EmptySeries("cannot aggregate an empty series")
    if frame_count < 1 or frame_count > x.shape[0]:
        raise TooManyFrames(f"frame_count {frame_count} not in 1..{x.shape[0]}")
    return _frame_means(x, frame_count)


def assign_symbols(values, breakpoints) -> np.ndarray:
    """Map values to bin indices with left-closed intervals (v == breakpoint
    falls into the upper bin)."""
    return np.searchsorted(breakpoints, np.asarray(values), side="right")


def symbolize(cycle: OnCycle, channel: str, config: SaxConfig) -> SymbolSequence:
    """Full pipeline for one cycle channel: z-score, chunk, aggregate, map.

    Produces ceil(N * dt / P) * Q symbols where P is the chunk period and
    Q the frames per chunk; the final partial chunk is aggregated over
    its actual length.
    """
    if channel not in cycle.data:
        raise UnknownChannel(channel)
    raw = np.asarray(cycle.data[channel], dtype=np.float64)
    raw = raw[~np.isnan(raw)]
    if raw.size == 0:
        raise EmptyCycle(f"cycle {cycle.cycle_id} has no complete tick on {channel!r}")

    z = zscore(raw)
    dt = cycle.dt if cycle.dt > 0 else config.chunk_period
    ticks_per_chunk = config.chunk_period / dt
    if ticks_per_chunk < 1:
        ticks_per_chunk = 1.0
    n = z.shape[0]
    # chunk c covers tick indices [c*r, (c+1)*r); the chunk holding the
    # last tick closes the sequence (equals ceil(n/r) whenever r is integral)
    chunk_count = int(math.floor((n - 1) / ticks_per_chunk + 1e-9)) + 1

    frames = []
    for c in range(chunk_count):
        j0 = int(math.ceil(c * ticks_per_chunk - 1e-9))
        j1 = min(int(math.ceil((c + 1) * ticks_per_chunk - 1e-9)), n)
        chunk = z[j0:j1]
        frames.append(_frame_means(chunk, config.paa_segments_per_chunk))
    values = np.concatenate(frames)

    breakpoints = gaussian_breakpoints(config.alphabet_size)
    symbols = assign_symbols(values, breakpoints)
    return SymbolSequence(cycle_id=cycle.cycle_id, symbols=symbols,
                          alphabet_size=config.alphabet_size)
