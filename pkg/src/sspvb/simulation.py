"""Chronological hour-by-hour energy balance of a PV/battery system.

Dispatch is load-following: PV serves the load first, surplus charges the
battery (the rest is dumped, there is no grid), shortfall is drawn from the
battery down to the depth-of-discharge floor, and whatever remains unserved is
counted as deficit. The battery starts full.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _backend
from .model import AnnualDataset, BatterySpec, Design, PVSpec, unit_pv_profile


@dataclass(frozen=True, eq=False)
class SimulationResult:
    """Hourly trajectories and horizon totals of one simulated design.

    ``soc`` is the state of charge at the end of each hour (kWh). ``charged``
    is energy entering storage and ``delivered`` energy supplied to the load
    by the battery, both per hour. ``discharge_throughput`` is energy drawn
    out of storage, i.e. ``delivered / discharge_eff`` summed.
    """

    soc: np.ndarray
    deficit: np.ndarray
    surplus_dumped: np.ndarray
    charged: np.ndarray
    delivered: np.ndarray
    pv_output: np.ndarray
    discharge_throughput: float
    served_energy: float
    total_load: float
    soc_min: float
    soc_max: float

    @property
    def hours(self) -> int:
        return len(self.deficit)

    @property
    def total_deficit(self) -> float:
        return self.total_load - self.served_energy


@dataclass(frozen=True)
class SimulationTotals:
    """Horizon totals only; what the optimizers need per evaluation."""

    total_deficit: float
    discharge_throughput: float
    total_load: float
    hours: int

    @property
    def served_energy(self) -> float:
        return self.total_load - self.total_deficit


def sequential_sum(values) -> float:
    """Left-to-right sum, the same order the dispatch kernel accumulates deficits in.

    With matching order, a design that serves nothing has total deficit
    exactly equal to total load.
    """
    if len(values) == 0:
        return 0.0
    return float(np.add.accumulate(np.asarray(values, dtype=np.float64))[-1])


def soc_bounds(design: Design, bat: BatterySpec) -> tuple[float, float]:
    """(soc_min, soc_max) in kWh for a design."""
    soc_max = design.n_bes * bat.capacity_per_unit
    soc_min = (1.0 - design.dod) * soc_max
    return soc_min, soc_max


def _kernel_args(design: Design, bat: BatterySpec):
    soc_min, soc_max = soc_bounds(design, bat)
    return (
        float(soc_max),
        float(soc_min),
        float(bat.charge_eff),
        float(bat.discharge_eff),
        float(design.n_bes * bat.max_charge_rate),
        float(design.n_bes * bat.max_discharge_rate),
    )


def simulate(design: Design, dataset: AnnualDataset, pv: PVSpec, bat: BatterySpec,
             *, pv_unit: np.ndarray | None = None, backend: str | None = None) -> SimulationResult:
    """Simulate one design over the whole dataset with a one-hour step.

    ``pv_unit`` may carry a precomputed single-module output profile to skip
    recomputing it; ``backend`` selects "cython" or "python" explicitly.
    """
    if pv_unit is None:
        pv_unit = unit_pv_profile(dataset, pv)
    load = dataset.load
    if len(pv_unit) != len(load):
        raise ValueError(f"PV profile length {len(pv_unit)} != load length {len(load)}")
    n = len(load)
    soc = np.empty(n)
    deficit = np.empty(n)
    dumped = np.empty(n)
    charged = np.empty(n)
    delivered = np.empty(n)
    kernel = _backend.get_kernel(backend)
    total_deficit, throughput = kernel.dispatch_trace(
        pv_unit, float(design.n_pv), load, *_kernel_args(design, bat),
        soc, deficit, dumped, charged, delivered,
    )
    total_load = sequential_sum(load)
    soc_min, soc_max = soc_bounds(design, bat)
    return SimulationResult(
        soc=soc,
        deficit=deficit,
        surplus_dumped=dumped,
        charged=charged,
        delivered=delivered,
        pv_output=design.n_pv * np.asarray(pv_unit),
        discharge_throughput=throughput,
        served_energy=total_load - total_deficit,
        total_load=total_load,
        soc_min=soc_min,
        soc_max=soc_max,
    )


def simulate_totals(design: Design, load: np.ndarray, pv_unit: np.ndarray, bat: BatterySpec,
                    *, total_load: float | None = None, backend: str | None = None) -> SimulationTotals:
    """Allocation-free variant of :func:`simulate` returning totals only."""
    kernel = _backend.get_kernel(backend)
    total_deficit, throughput = kernel.dispatch_totals(
        pv_unit, float(design.n_pv), load, *_kernel_args(design, bat)
    )
    if total_load is None:
        total_load = sequential_sum(load)
    return SimulationTotals(total_deficit, throughput, total_load, len(load))


def compute_llp(result) -> float:
    """Loss of load probability: unserved energy over demanded energy, as a fraction.

    Works on either a :class:`SimulationResult` or :class:`SimulationTotals`.
    Zero demand gives zero.
    """
    if result.total_load <= 0.0:
        return 0.0
    if isinstance(result, SimulationResult):
        unserved = sequential_sum(result.deficit)
    else:
        unserved = result.total_deficit
    return min(max(unserved / result.total_load, 0.0), 1.0)
