"""Annualized cost, battery lifetime under depth-of-discharge cycling, and cost of energy."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .model import BatterySpec, CostParams, Design

HOURS_PER_YEAR = 8760.0
COE_PENALTY = math.inf


@dataclass(frozen=True)
class CostBreakdown:
    annualized_capital: float
    annualized_replacement: float
    annual_om: float
    atc: float
    battery_life: float
    replacements: int


def crf(discount_rate: float, years: float) -> float:
    """Capital recovery factor ``i(1+i)^n / ((1+i)^n - 1)``; ``1/n`` at zero interest."""
    if not years > 0:
        raise ValueError("years must be > 0")
    if discount_rate < 0:
        raise ValueError("discount_rate must be >= 0")
    if discount_rate == 0:
        return 1.0 / years
    # expm1/log1p keep the denominator nonzero for vanishing rates
    log_growth = years * math.log1p(discount_rate)
    return discount_rate * math.exp(log_growth) / math.expm1(log_growth)


def battery_cycle_life(dod: float, spec: BatterySpec) -> float:
    """Cycles to end of life when cycled to ``dod``: ``a * dod ** -b``."""
    if not 0 < dod <= 1:
        raise ValueError(f"dod must lie in (0, 1], got {dod}")
    return spec.cycle_life_a * dod ** (-spec.cycle_life_b)


def battery_life_years(result, design: Design, spec: BatterySpec) -> float:
    """Battery service life in years, the shorter of float life and cycle life.

    Equivalent full cycles per year are discharge throughput over usable
    capacity (``n_bes * capacity * dod``). Throughput from a horizon shorter
    or longer than a year is scaled to one year first.
    """
    cycles = equivalent_cycles_per_year(result, design, spec)
    if cycles <= 0.0:
        return spec.float_life
    life = battery_cycle_life(design.dod, spec) / cycles
    return min(spec.float_life, life)


def equivalent_cycles_per_year(result, design: Design, spec: BatterySpec) -> float:
    usable = design.n_bes * spec.capacity_per_unit * design.dod
    throughput = result.discharge_throughput
    if usable <= 0.0 or throughput <= 0.0:
        return 0.0
    hours = result.hours
    return throughput * (HOURS_PER_YEAR / hours) / usable


def replacement_count(project_life: float, life: float) -> int:
    if not life > 0:
        raise ValueError("life must be > 0")
    ratio = project_life / life
    # guard against 20 / (20 / 3) landing a hair above 3
    nearest = round(ratio)
    if abs(ratio - nearest) < 1e-9:
        ratio = nearest
    return max(math.ceil(ratio) - 1, 0)


def annualized_total_cost(design: Design, life: float, costs: CostParams) -> CostBreakdown:
    """Annualized capital, battery replacements and O&M.

    Each replacement ``j`` happens at year ``j * life`` and is discounted to
    present value before everything is annualized over the project life.
    Leftover battery life at the end of the project earns no salvage credit.
    """
    capital = design.n_pv * costs.pv_unit_cost + design.n_bes * costs.bes_unit_cost + costs.converter_cost
    r = replacement_count(costs.project_life, life)
    i = costs.discount_rate
    pv_repl = 0.0
    for j in range(1, r + 1):
        pv_repl += design.n_bes * costs.bes_replacement_cost * (1.0 + i) ** (-j * life)
    factor = crf(i, costs.project_life)
    annualized_capital = capital * factor
    annualized_replacement = pv_repl * factor
    annual_om = costs.om_frac * capital
    return CostBreakdown(
        annualized_capital=annualized_capital,
        annualized_replacement=annualized_replacement,
        annual_om=annual_om,
        atc=annualized_capital + annualized_replacement + annual_om,
        battery_life=life,
        replacements=r,
    )


def compute_coe(atc: float, energy: float, penalty: float = COE_PENALTY) -> float:
    """Cost of energy in USD/kWh; ``penalty`` when no energy is delivered."""
    if energy < 0:
        raise ValueError(f"energy must be >= 0, got {energy}")
    if atc < 0:
        raise ValueError(f"atc must be >= 0, got {atc}")
    if energy == 0:
        return penalty
    return atc / energy


def annual_energy(energy: float, hours: int) -> float:
    """Scale energy over ``hours`` to a one-year equivalent."""
    return energy * (HOURS_PER_YEAR / hours)
