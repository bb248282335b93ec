"""Per-cycle coefficient-of-performance figures and efficiency banding.

The ideal figure comes from the three circuit temperatures (absolute
scale), the actual one from the ratio of cooling output to driving heat.
A cycle's efficiency is the ratio of the two, time-averaged over its
valid ticks, and mapped to a good/average/bad band.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    AllTicksDegenerate,
    DivisionDegenerate,
    MissingChannel,
    NonPhysicalTemperature,
    ZeroDrivingHeat,
)
from .segmentation import OnCycle

KELVIN_OFFSET = 273.15
MIN_TEMP_SPLIT = 0.01  # Kelvin; closer than this the ideal COP diverges

CONVENTIONS = ("inverted", "as_written")
REQUIRED_CHANNELS = ("T_HTsu", "T_MTsu", "T_LTre", "Q7_KW", "Q6a_KW")


@dataclass(frozen=True)
class EfficiencyBands:
    good_min: float = 0.50
    bad_max: float = 0.30

    def __post_init__(self):
        if not (0 <= self.bad_max < self.good_min <= 1):
            raise ValueError("bands need 0 <= bad_max < good_min <= 1")

    def band_of(self, efficiency: float) -> str:
        if efficiency >= self.good_min:
            return "good"
        if efficiency < self.bad_max:
            return "bad"
        return "average"


@dataclass(frozen=True)
class CycleEfficiency:
    cycle_id: int
    cop_carnot: float
    cop_therm: float
    efficiency: float
    band: str


def cop_carnot(t_ht_supply_k: float, t_mt_supply_k: float, t_lt_return_k: float) -> float:
    """Ideal coefficient of performance from the three circuit temperatures.

    All inputs in Kelvin: (T_hot - T_mid)/T_hot * T_low/(T_mid - T_low).
    """
    for t in (t_ht_supply_k, t_mt_supply_k, t_lt_return_k):
        if t <= 0:
            raise NonPhysicalTemperature(f"absolute temperature {t} K is not positive")
    if abs(t_mt_supply_k - t_lt_return_k) < MIN_TEMP_SPLIT:
        raise DivisionDegenerate(
            f"mid/low split {t_mt_supply_k - t_lt_return_k:.4f} K below {MIN_TEMP_SPLIT} K"
        )
    return ((t_ht_supply_k - t_mt_supply_k) / t_ht_supply_k
            * t_lt_return_k / (t_mt_supply_k - t_lt_return_k))


def cop_therm(cooling_kw: float, driving_kw: float) -> float:
    """Actual coefficient of performance: cooling output over driving heat."""
    if driving_kw <= 0:
        raise ZeroDrivingHeat(f"driving heat must be positive, got {driving_kw}")
    return cooling_kw / driving_kw


def cycle_efficiency(cycle: OnCycle, bands: EfficiencyBands = EfficiencyBands(),
                     convention: str = "inverted") -> CycleEfficiency:
    """Time-averaged performance figures and efficiency band for one cycle.

    Temperatures are read in Celsius and converted to Kelvin. Ticks with
    a degenerate temperature split or nonpositive driving heat are
    skipped; it is an error when no tick survives. Under the default
    "inverted" convention efficiency is actual/ideal, under "as_written"
    it is ideal/actual.
    """
    if convention not in CONVENTIONS:
        raise ValueError(f"convention must be one of {CONVENTIONS}")
    for name in REQUIRED_CHANNELS:
        if name not in cycle.data:
            raise MissingChannel(name)

    t_ht = np.asarray(cycle.channel("T_HTsu"), dtype=np.float64) + KELVIN_OFFSET
    t_mt = np.asarray(cycle.channel("T_MTsu"), dtype=np.float64) + KELVIN_OFFSET
    t_lt = np.asarray(cycle.channel("T_LTre"), dtype=np.float64) + KELVIN_OFFSET
    q_cool = np.asarray(cycle.channel("Q7_KW"), dtype=np.float64)
    q_drive = np.asarray(cycle.channel("Q6a_KW"), dtype=np.float64)

    carnot_vals, therm_vals = [], []
    for k in range(cycle.tick_count):
        row = (t_ht[k], t_mt[k], t_lt[k], q_cool[k], q_drive[k])
        if any(np.isnan(v) for v in row):
            continue
        try:
            carnot = cop_carnot(t_ht[k], t_mt[k], t_lt[k])
            therm = cop_therm(q_cool[k], q_drive[k])
        except (DivisionDegenerate, ZeroDrivingHeat, NonPhysicalTemperature):
            continue
        carnot_vals.append(carnot)
        therm_vals.append(therm)
    if not carnot_vals:
        raise AllTicksDegenerate(f"cycle {cycle.cycle_id} has no valid tick")

    carnot_avg = float(np.mean(carnot_vals))
    therm_avg = float(np.mean(therm_vals))
    if convention == "inverted":
        if carnot_avg == 0:
            raise AllTicksDegenerate("ideal performance averaged to zero")
        efficiency = therm_avg / carnot_avg
    else:
        if therm_avg == 0:
            raise AllTicksDegenerate("actual performance averaged to zero")
        efficiency = carnot_avg / therm_avg
    return CycleEfficiency(cycle_id=cycle.cycle_id, cop_carnot=carnot_avg,
                           cop_therm=therm_avg, efficiency=efficiency,
                           band=bands.band_of(efficiency))
