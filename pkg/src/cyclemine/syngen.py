"""Deterministic synthetic chiller telemetry with known ground truth.

Produces labeled corpora for tests and demos: rectangular, ramping and
decaying operating cycles with configurable durations, target
efficiencies hit by construction, optional per-channel noise, and
injected recording gaps. Realism is a non-goal; separability and exact
ground truth are the point.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import InfeasibleTarget
from .metrics import KELVIN_OFFSET
from .timeseries import ChannelSpec, TimeSeriesTable, default_chiller_schema, save_schema

SHAPE_CLASSES = ("hold", "alternating", "decay")

# constant circuit temperatures held during operation (degC)
_ON_TEMPS = {"T_HTsu": 80.0, "T_HTre": 72.0, "T_MTsu": 30.0, "T_MTre": 34.0,
             "T_LTsu": 12.0, "T_LTre": 15.0}
_AMBIENT = 22.0
_DRIVING_KW = 10.0


@dataclass(frozen=True)
class CycleTemplate:
    shape_class: int                  # index into SHAPE_CLASSES
    duration_range: tuple             # (min_ticks, max_ticks) inclusive
    target_efficiency: float
    count: int = 1

    def __post_init__(self):
        if not (0 <= self.shape_class < len(SHAPE_CLASSES)):
            raise ValueError(f"shape_class must be in 0..{len(SHAPE_CLASSES) - 1}")
        lo, hi = self.duration_range
        if lo < 1 or hi < lo:
            raise ValueError("duration_range must satisfy 1 <= min <= max")
        if not (0 < self.target_efficiency < 1.5):
            raise InfeasibleTarget(
                f"target efficiency {self.target_efficiency} outside (0, 1.5)"
            )


@dataclass(frozen=True)
class ScenarioSpec:
    cycle_templates: tuple
    seed: int = 0
    day_count: int = 1
    dt: float = 240.0                 # seconds between ticks
    gap_spec: tuple = ()              # (start_tick, duration_ticks) removals
    noise_sigma: float = 0.0          # Gaussian noise on flow/power channels
    off_gap_range: tuple = (10, 30)   # idle ticks between cycles

    def __post_init__(self):
        if self.dt <= 0:
            raise ValueError("dt must be positive")
        if self.day_count < 1:
            raise ValueError("day_count must be >= 1")
        if self.noise_sigma < 0:
            raise ValueError("noise_sigma must be >= 0")


@dataclass(frozen=True)
class GroundTruth:
    mask: np.ndarray                  # True where the chiller runs, per row
    cycle_spans: list                 # (start_row, end_row) inclusive
    class_labels: list                # shape class per cycle
    target_efficiencies: list = field(default_factory=list)


def _shape(kind: int, n: int) -> np.ndarray:
    """Normalized waveform over the cycle, values in (0, 1].

    The three classes are chosen to stay separable after per-cycle
    z-scoring, which wipes out absolute levels: a flat hold, a square
    alternation between two hold levels, and a fast exponential decay.
    """
    if kind == 0:    # steady hold
        return np.ones(n)
    if kind == 1:    # alternating hold levels
        half = max(4, n // 12)
        return np.where((np.arange(n) // half) % 2 == 0, 1.0, 0.3)
    u = np.linspace(0.0, 1.0, n)
    return np.exp(-4.0 * u)  # decay


def _ideal_cop_at_on_temps() -> float:
    t_ht = _ON_TEMPS["T_HTsu"] + KELVIN_OFFSET
    t_mt = _ON_TEMPS["T_MTsu"] + KELVIN_OFFSET
    t_lt = _ON_TEMPS["T_LTre"] + KELVIN_OFFSET
    return (t_ht - t_mt) / t_ht * t_lt / (t_mt - t_lt)


def generate(spec: ScenarioSpec) -> tuple[TimeSeriesTable, GroundTruth]:
    """Build a telemetry table plus aligned ground truth, seed-deterministic.

    Cycles from all templates are shuffled and laid out with idle spacing
    over the scenario's day span. Temperatures and powers during a cycle
    are constant and chosen so the efficiency figures hit the template's
    target exactly when noise is zero. Gap entries delete whole rows, the
    way a communication outage drops records.
    """
    rng = np.random.default_rng(spec.seed)
    schema = default_chiller_schema()
    names = [c.name for c in schema]
    col = {n: i for i, n in enumerate(names)}

    ticks = int(spec.day_count * 86400 / spec.dt)
    values = np.zeros((ticks, len(schema)))
    for t_name in _ON_TEMPS:
        values[:, col[t_name]] = _AMBIENT
    mask = np.zeros(ticks, dtype=bool)
    cycle_idx = np.full(ticks, -1)

    plan = []
    for template in spec.cycle_templates:
        plan.extend([template] * template.count)
    order = rng.permutation(len(plan))
    plan = [plan[i] for i in order]

    ideal_cop = _ideal_cop_at_on_temps()
    cursor = int(rng.integers(*spec.off_gap_range))
    placed = []  # (template, start, end)
    for template in plan:
        lo, hi = template.duration_range
        duration = int(rng.integers(lo, hi + 1))
        if cursor + duration > ticks:
            raise ValueError("scenario day span too short for the requested cycles")
        start, end = cursor, cursor + duration - 1
        shape = _shape(template.shape_class, duration)

        sl = slice(start, end + 1)
        values[sl, col["Q7_m3h"]] = 2.0 + 4.0 * shape
        values[sl, col["Q6a_m3h"]] = 1.5 + 1.5 * shape
        values[sl, col["Q12_m3h"]] = 3.0 + 3.0 * shape
        cooling_kw = template.target_efficiency * ideal_cop * _DRIVING_KW
        values[sl, col["Q6a_KW"]] = _DRIVING_KW
        values[sl, col["Q7_KW"]] = cooling_kw
        values[sl, col["Q12_KW"]] = _DRIVING_KW + cooling_kw
        for t_name, temp in _ON_TEMPS.items():
            values[sl, col[t_name]] = temp

        mask[sl] = True
        cycle_idx[sl] = len(placed)
        placed.append((template, start, end))
        cursor = end + 1 + int(rng.integers(*spec.off_gap_range))

    if spec.noise_sigma > 0:
        noisy = [c.name for c in schema if c.kind in ("flow", "power")]
        for name in noisy:
            values[:, col[name]] += rng.normal(0.0, spec.noise_sigma, ticks)

    # cumulative energy meters from the driving/cooling powers
    hours = spec.dt / 3600.0
    values[:, col["E6"]] = np.cumsum(values[:, col["Q6a_KW"]]) * hours
    values[:, col["E7"]] = np.cumsum(values[:, col["Q12_KW"]]) * hours
    values[:, col["E8"]] = np.cumsum(values[:, col["Q7_KW"]]) * hours

    timestamps = np.arange(ticks, dtype=np.int64) * int(spec.dt)

    keep = np.ones(ticks, dtype=bool)
    for start, duration in spec.gap_spec:
        keep[start : start + duration] = False
    timestamps = timestamps[keep]
    values = values[keep]
    mask = mask[keep]
    cycle_idx = cycle_idx[keep]

    table = TimeSeriesTable(timestamps, schema, values)

    # recover per-cycle spans on the emitted rows; a deleted stretch inside
    # a cycle splits it, mirroring downstream gap splitting
    spans, labels, targets = [], [], []
    split_gap = 2 * spec.dt
    i = 0
    n = timestamps.shape[0]
    while i < n:
        if cycle_idx[i] < 0:
            i += 1
            continue
        j = i
        while (j + 1 < n and cycle_idx[j + 1] == cycle_idx[i]
               and timestamps[j + 1] - timestamps[j] <= split_gap):
            j += 1
        template, _, _ = placed[int(cycle_idx[i])]
        spans.append((i, j))
        labels.append(template.shape_class)
        targets.append(template.target_efficiency)
        i = j + 1

    truth = GroundTruth(mask=mask, cycle_spans=spans, class_labels=labels,
                        target_efficiencies=targets)
    return table, truth


def three_class_corpus(seed: int = 7, cycles_per_class: int = 5,
                       noise_sigma: float = 0.0,
                       duration_range: tuple = (60, 150)) -> ScenarioSpec:
    """Standard benchmark scenario: three shape classes at three
    efficiency levels, variable cycle durations."""
    templates = (
        CycleTemplate(0, duration_range, 0.60, count=cycles_per_class),
        CycleTemplate(1, duration_range, 0.40, count=cycles_per_class),
        CycleTemplate(2, duration_range, 0.20, count=cycles_per_class),
    )
    total = 3 * cycles_per_class
    days = max(1, int(np.ceil(total * (duration_range[1] + 40) * 240 / 86400)))
    return ScenarioSpec(cycle_templates=templates, seed=seed,
                        day_count=days, noise_sigma=noise_sigma)


def write_corpus(spec: ScenarioSpec, out_dir) -> dict:
    """Emit telemetry.csv, schema.json and truth.json into out_dir."""
    import os

    table, truth = generate(spec)
    os.makedirs(out_dir, exist_ok=True)
    csv_path = os.path.join(out_dir, "telemetry.csv")
    schema_path = os.path.join(out_dir, "schema.json")
    truth_path = os.path.join(out_dir, "truth.json")
    table.emit_csv(csv_path, timestamp_format="epoch")
    save_schema(schema_path, table.channels)
    with open(truth_path, "w", encoding="utf-8") as fh:
        json.dump({
            "mask": truth.mask.astype(int).tolist(),
            "cycle_spans": [list(s) for s in truth.cycle_spans],
            "class_labels": truth.class_labels,
            "target_efficiencies": truth.target_efficiencies,
        }, fh)
    return {"telemetry": csv_path, "schema": schema_path, "truth": truth_path}
