"""Physical system description: hourly data, component specs, decision variables, costs.

All records are frozen dataclasses validated on construction. Units follow the
usual sizing-study conventions: W/m² for irradiance, °C for temperatures, kW for
power and kWh for energy. With a one-hour time step, kW and kWh are
interchangeable per step.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

DOD_MIN = 0.20
DOD_MAX = 0.80


def _as_series(values, name: str) -> np.ndarray:
    arr = np.ascontiguousarray(values, dtype=np.float64)
    if arr.ndim != 1:
        raise ValueError(f"{name} must be one-dimensional, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite values")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class AnnualDataset:
    """Aligned hourly irradiance (W/m²), ambient temperature (°C) and load (kW)."""

    irradiance: np.ndarray
    ambient_temp: np.ndarray
    load: np.ndarray

    def __post_init__(self):
        irr = _as_series(self.irradiance, "irradiance")
        temp = _as_series(self.ambient_temp, "ambient_temp")
        load = _as_series(self.load, "load")
        if not (len(irr) == len(temp) == len(load)):
            raise ValueError(
                f"series lengths differ: irradiance={len(irr)}, "
                f"ambient_temp={len(temp)}, load={len(load)}"
            )
        if len(irr) == 0:
            raise ValueError("dataset is empty")
        if np.any(irr < 0):
            raise ValueError(f"negative irradiance at hour {int(np.argmax(irr < 0))}")
        if np.any(load < 0):
            raise ValueError(f"negative load at hour {int(np.argmax(load < 0))}")
        object.__setattr__(self, "irradiance", irr)
        object.__setattr__(self, "ambient_temp", temp)
        object.__setattr__(self, "load", load)

    def __len__(self) -> int:
        return len(self.load)

    @property
    def hours(self) -> int:
        return len(self.load)

    @property
    def total_load(self) -> float:
        return float(self.load.sum())

    @property
    def peak_load(self) -> float:
        return float(self.load.max())

    @property
    def mean_daily_load(self) -> float:
        return float(self.load.sum()) * 24.0 / len(self.load)

    def slice(self, start: int, stop: int) -> AnnualDataset:
        return AnnualDataset(
            self.irradiance[start:stop], self.ambient_temp[start:stop], self.load[start:stop]
        )


@dataclass(frozen=True)
class PVSpec:
    """One PV module. Defaults describe a generic 300 W crystalline panel."""

    rated_power_per_unit: float = 0.3
    derating: float = 0.85
    temp_coeff: float = -0.004
    noct: float = 45.0
    ref_irradiance: float = 1000.0
    ref_cell_temp: float = 25.0

    def __post_init__(self):
        if not self.rated_power_per_unit > 0:
            raise ValueError("rated_power_per_unit must be > 0")
        if not 0 < self.derating <= 1:
            raise ValueError("derating must lie in (0, 1]")
        if not self.ref_irradiance > 0:
            raise ValueError("ref_irradiance must be > 0")


@dataclass(frozen=True)
class BatterySpec:
    """One battery unit plus its lifetime model.

    Cycle life follows ``cycle_life_a * dod ** -cycle_life_b``. The defaults
    (600 cycles at full discharge, exponent 1.3, 8-year float life) are a
    representative deep-cycle lead-acid curve, not measured data.
    """

    capacity_per_unit: float = 2.4
    charge_eff: float = 0.9
    discharge_eff: float = 0.9
    max_charge_rate: float = 1.2
    max_discharge_rate: float = 1.2
    float_life: float = 8.0
    cycle_life_a: float = 600.0
    cycle_life_b: float = 1.3

    def __post_init__(self):
        if not self.capacity_per_unit > 0:
            raise ValueError("capacity_per_unit must be > 0")
        for name in ("charge_eff", "discharge_eff"):
            if not 0 < getattr(self, name) <= 1:
                raise ValueError(f"{name} must lie in (0, 1]")
        if self.max_charge_rate < 0 or self.max_discharge_rate < 0:
            raise ValueError("charge/discharge rates must be >= 0")
        if not self.float_life > 0:
            raise ValueError("float_life must be > 0")
        if not self.cycle_life_a > 0:
            raise ValueError("cycle_life_a must be > 0")
        if self.cycle_life_b < 0:
            raise ValueError("cycle_life_b must be >= 0")


@dataclass(frozen=True)
class Design:
    """A candidate system: PV module count, battery unit count, depth of discharge."""

    n_pv: int
    n_bes: int
    dod: float
    dod_bounds: tuple[float, float] = field(default=(DOD_MIN, DOD_MAX), compare=False, repr=False)

    def __post_init__(self):
        if int(self.n_pv) != self.n_pv or self.n_pv < 0:
            raise ValueError(f"n_pv must be a nonnegative integer, got {self.n_pv}")
        if int(self.n_bes) != self.n_bes or self.n_bes < 0:
            raise ValueError(f"n_bes must be a nonnegative integer, got {self.n_bes}")
        lo, hi = self.dod_bounds
        # tolerate the last ulp from grid arithmetic such as 0.2 + 6 * 0.1
        if not (lo - 1e-12 <= self.dod <= hi + 1e-12):
            raise ValueError(f"dod {self.dod} outside [{lo}, {hi}]")
        object.__setattr__(self, "n_pv", int(self.n_pv))
        object.__setattr__(self, "n_bes", int(self.n_bes))
        object.__setattr__(self, "dod", float(self.dod))


@dataclass(frozen=True)
class CostParams:
    """Capital, replacement and O&M inputs (USD).

    Defaults are order-of-magnitude figures for an off-grid system; they are
    configuration, not reference data.
    """

    pv_unit_cost: float = 250.0
    bes_unit_cost: float = 450.0
    converter_cost: float = 4000.0
    om_frac: float = 0.01
    discount_rate: float = 0.04
    project_life: float = 25.0
    bes_replacement_cost: float = 450.0

    def __post_init__(self):
        if not self.project_life > 0:
            raise ValueError("project_life must be > 0")
        if self.discount_rate < 0:
            raise ValueError("discount_rate must be >= 0")
        for name in ("pv_unit_cost", "bes_unit_cost", "converter_cost", "om_frac", "bes_replacement_cost"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0")


def cell_temperature(irradiance, ambient_temp, spec: PVSpec):
    """NOCT cell-temperature estimate."""
    return ambient_temp + irradiance * (spec.noct - 20.0) / 800.0


def pv_power(irradiance, ambient_temp, spec: PVSpec, n_pv=1):
    """PV array output in kW.

    ``n_pv * rated * derating * G/G_ref * (1 + temp_coeff * (T_cell - T_ref))``,
    floored at zero. Accepts scalars or arrays.
    """
    g = np.asarray(irradiance, dtype=np.float64)
    if np.any(g < 0):
        raise ValueError("irradiance must be >= 0")
    t_cell = cell_temperature(g, np.asarray(ambient_temp, dtype=np.float64), spec)
    per_unit = (
        spec.rated_power_per_unit
        * spec.derating
        * (g / spec.ref_irradiance)
        * (1.0 + spec.temp_coeff * (t_cell - spec.ref_cell_temp))
    )
    out = np.maximum(n_pv * per_unit, 0.0)
    if out.ndim == 0:
        return float(out)
    return out


def unit_pv_profile(dataset: AnnualDataset, spec: PVSpec) -> np.ndarray:
    """Hourly output of a single module; array output is this times ``n_pv``."""
    profile = pv_power(dataset.irradiance, dataset.ambient_temp, spec, 1)
    profile = np.ascontiguousarray(profile, dtype=np.float64)
    profile.setflags(write=False)
    return profile
