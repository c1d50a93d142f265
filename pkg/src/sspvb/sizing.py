"""PV/battery sizing as an optimization problem over (n_pv, n_bes, dod).

Objectives are (COE in USD/kWh, LLP as a fraction), both minimized. The DOD
sweep fixes the depth of discharge and minimizes COE subject to LLP <= epsilon
by handing a penalized single-objective version of the problem to either
optimizer.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .economics import (
    COE_PENALTY,
    CostBreakdown,
    annual_energy,
    annualized_total_cost,
    battery_life_years,
    compute_coe,
)
from .model import DOD_MAX, DOD_MIN, AnnualDataset, BatterySpec, CostParams, Design, PVSpec, unit_pv_profile
from .mopso import MopsoParams, run_mopso
from .nsga2 import Nsga2Params, run_nsga2
from .pareto import Solution
from .problems import Problem
from .simulation import SimulationTotals, compute_llp, sequential_sum, simulate_totals

BRUTE_FORCE_CAP = 100_000
# any infeasible design scores above every feasible COE
INFEASIBLE_OFFSET = 1.0e6
COE_ENERGY_BASES = ("served", "load")


@dataclass(frozen=True)
class SizingBounds:
    n_pv: tuple[int, int]
    n_bes: tuple[int, int]
    dod: tuple[float, float] = (DOD_MIN, DOD_MAX)
    dod_step: float = 0.0

    def __post_init__(self):
        for name in ("n_pv", "n_bes"):
            lo, hi = getattr(self, name)
            if lo < 0 or hi < lo or int(lo) != lo or int(hi) != hi:
                raise ValueError(f"{name} bounds must be nonnegative integers with low <= high")
        lo, hi = self.dod
        if not 0 < lo <= hi <= 1:
            raise ValueError("dod bounds must satisfy 0 < low <= high <= 1")
        if self.dod_step < 0:
            raise ValueError("dod_step must be >= 0")


def default_bounds(dataset: AnnualDataset, pv: PVSpec, battery: BatterySpec) -> SizingBounds:
    """Envelopes scaled from the data: 10x peak load of PV, 20 days of battery energy."""
    n_pv_max = math.ceil(10.0 * dataset.peak_load / pv.rated_power_per_unit)
    n_bes_max = math.ceil(20.0 * dataset.mean_daily_load / battery.capacity_per_unit)
    return SizingBounds(n_pv=(0, max(n_pv_max, 1)), n_bes=(0, max(n_bes_max, 1)))


@dataclass(frozen=True)
class Evaluation:
    """Everything computed for one design."""

    design: Design
    totals: SimulationTotals
    cost: CostBreakdown
    battery_life: float
    energy: float
    coe: float
    llp: float

    @property
    def objectives(self) -> np.ndarray:
        return np.array([self.coe, self.llp])


@dataclass(frozen=True)
class SweepRow:
    dod: float
    best_n_pv: int
    best_n_bes: int
    coe: float
    llp: float
    feasible: bool


class SizingProblem(Problem):
    """Two-objective sizing problem; decision vector is ``[n_pv, n_bes, dod]``."""

    def __init__(self, dataset: AnnualDataset, pv: PVSpec = PVSpec(), battery: BatterySpec = BatterySpec(),
                 costs: CostParams = CostParams(), bounds: SizingBounds | None = None,
                 coe_energy: str = "served", penalty: float = COE_PENALTY, backend: str | None = None):
        if coe_energy not in COE_ENERGY_BASES:
            raise ValueError(f"coe_energy must be one of {COE_ENERGY_BASES}")
        self.dataset = dataset
        self.pv = pv
        self.battery = battery
        self.costs = costs
        self.bounds = bounds if bounds is not None else default_bounds(dataset, pv, battery)
        self.coe_energy = coe_energy
        self.penalty = penalty
        self.backend = backend
        self.pv_unit = unit_pv_profile(dataset, pv)
        self.total_load = sequential_sum(dataset.load)
        b = self.bounds
        super().__init__(
            lower=[b.n_pv[0], b.n_bes[0], b.dod[0]],
            upper=[b.n_pv[1], b.n_bes[1], b.dod[1]],
            steps=[1.0, 1.0, b.dod_step],
            names=["n_pv", "n_bes", "dod"],
        )

    def decode(self, x) -> Design:
        x = self.repair(x)
        return Design(int(round(x[0])), int(round(x[1])), float(x[2]), dod_bounds=self.bounds.dod)

    def encode(self, design: Design) -> np.ndarray:
        return np.array([design.n_pv, design.n_bes, design.dod], dtype=np.float64)

    def evaluate_design(self, design: Design) -> Evaluation:
        totals = simulate_totals(design, self.dataset.load, self.pv_unit, self.battery,
                                 total_load=self.total_load, backend=self.backend)
        life = battery_life_years(totals, design, self.battery)
        cost = annualized_total_cost(design, life, self.costs)
        llp = compute_llp(totals)
        basis = totals.served_energy if self.coe_energy == "served" else totals.total_load
        energy = annual_energy(basis, totals.hours)
        coe = compute_coe(cost.atc, energy, self.penalty)
        return Evaluation(design, totals, cost, life, energy, coe, llp)

    def evaluate(self, x) -> np.ndarray:
        return self.evaluate_design(self.decode(x)).objectives


class ReliabilityConstrainedCost(Problem):
    """Minimize COE subject to LLP <= epsilon, optionally with DOD frozen.

    Scored as ``(coe, 0)`` when feasible and ``(OFFSET + llp - epsilon, 0)``
    otherwise, so the constant second objective reduces Pareto dominance to a
    scalar comparison and infeasible designs are ranked by their violation.
    """

    def __init__(self, base: SizingProblem, epsilon: float = 0.0, dod: float | None = None):
        if epsilon < 0:
            raise ValueError("epsilon must be >= 0")
        self.base = base
        self.epsilon = epsilon
        self.dod = dod
        lo, hi, steps = base.lower, base.upper, base.steps
        if dod is not None:
            blo, bhi = base.bounds.dod
            if not blo - 1e-12 <= dod <= bhi + 1e-12:
                raise ValueError(f"dod {dod} outside bounds {base.bounds.dod}")
            lo, hi, steps = lo[:2], hi[:2], steps[:2]
        super().__init__(lo, hi, steps, names=base.names[: len(lo)])

    def full_vector(self, x) -> np.ndarray:
        x = self.repair(x)
        if self.dod is None:
            return x
        return np.array([x[0], x[1], self.dod])

    def score(self, ev: Evaluation) -> float:
        if ev.llp <= self.epsilon:
            return ev.coe
        return INFEASIBLE_OFFSET + (ev.llp - self.epsilon)

    def evaluate(self, x) -> np.ndarray:
        ev = self.base.evaluate_design(self.base.decode(self.full_vector(x)))
        return np.array([self.score(ev), 0.0])


def solve_min_cost(problem: ReliabilityConstrainedCost, optimizer: str = "mopso", params=None) -> Evaluation:
    """Run one optimizer on the constrained problem and return the best design found."""
    if optimizer == "mopso":
        solutions = list(run_mopso(problem, params or MopsoParams()))
    elif optimizer == "nsga2":
        solutions = run_nsga2(problem, params or Nsga2Params())
    else:
        raise ValueError(f"unknown optimizer {optimizer!r}")
    best = min(solutions, key=lambda s: s.f[0])
    return problem.base.evaluate_design(problem.base.decode(problem.full_vector(best.x)))


def dod_sweep(problem: SizingProblem, dod_values, epsilon: float = 0.0, optimizer: str = "mopso",
              params=None) -> list[SweepRow]:
    """For each fixed DOD, the cheapest design meeting LLP <= epsilon."""
    rows = []
    for dod in dod_values:
        reduced = ReliabilityConstrainedCost(problem, epsilon, dod=float(dod))
        ev = solve_min_cost(reduced, optimizer, params)
        rows.append(SweepRow(
            dod=float(dod),
            best_n_pv=ev.design.n_pv,
            best_n_bes=ev.design.n_bes,
            coe=ev.coe,
            llp=ev.llp,
            feasible=ev.llp <= epsilon,
        ))
    return rows


def grid_values(low: float, high: float, step: float) -> list[float]:
    """Inclusive arithmetic grid, rounded to suppress accumulation noise."""
    if step <= 0:
        raise ValueError("step must be > 0")
    count = int(math.floor((high - low) / step + 1e-9)) + 1
    return [round(low + k * step, 12) for k in range(count)]


def brute_force_front(problem: SizingProblem, grid, cap: int = BRUTE_FORCE_CAP,
                      workers: int = 1) -> list[tuple[Design, np.ndarray]]:
    """Evaluate every point of ``grid`` (value lists for n_pv, n_bes, dod) and return the exact Pareto set.

    Designs with identical objective vectors are all kept, as none dominates another.
    """
    if isinstance(grid, dict):
        grid = [grid["n_pv"], grid["n_bes"], grid["dod"]]
    if len(grid) != 3:
        raise ValueError("grid needs value lists for n_pv, n_bes and dod")
    size = math.prod(len(v) for v in grid)
    if size > cap:
        raise ValueError(f"grid has {size} points, above the cap of {cap}")
    designs = [Design(int(a), int(b), float(c), dod_bounds=problem.bounds.dod)
               for a, b, c in itertools.product(*grid)]
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            evals = list(pool.map(problem.evaluate_design, designs))
    else:
        evals = [problem.evaluate_design(d) for d in designs]
    F = np.array([e.objectives for e in evals])
    mask = nondominated_mask_2d(F)
    return [(designs[k], F[k]) for k in np.flatnonzero(mask)]


def nondominated_mask_2d(F: np.ndarray) -> np.ndarray:
    """Exact non-dominated mask for two objectives in O(n log n); ties are all kept."""
    F = np.asarray(F, dtype=np.float64)
    order = np.lexsort((F[:, 1], F[:, 0]))
    mask = np.zeros(len(F), dtype=bool)
    best_prev = math.inf  # min f1 over strictly smaller f0
    k = 0
    while k < len(order):
        f0 = F[order[k], 0]
        j = k
        while j < len(order) and F[order[j], 0] == f0:
            j += 1
        group = order[k:j]
        group_min = F[group[0], 1]
        if group_min < best_prev:
            mask[group[F[group, 1] == group_min]] = True
        best_prev = min(best_prev, group_min)
        k = j
    return mask


def knee_point(solutions: list[Solution]) -> Solution:
    """Solution closest to the ideal point after min-max normalizing each objective.

    Non-finite objectives are ignored when computing the normalization range.
    """
    if not solutions:
        raise ValueError("no solutions")
    F = np.array([s.f for s in solutions], dtype=np.float64)
    finite = np.all(np.isfinite(F), axis=1)
    if not finite.any():
        return solutions[0]
    lo = F[finite].min(axis=0)
    hi = F[finite].max(axis=0)
    span = np.where(hi > lo, hi - lo, 1.0)
    d = np.sqrt((((F - lo) / span) ** 2).sum(axis=1))
    d[~finite] = np.inf
    return solutions[int(np.argmin(d))]


@dataclass
class FrontEntry:
    design: Design
    coe: float
    llp: float
    extra: dict = field(default_factory=dict)


def front_designs(problem: SizingProblem, solutions) -> list[FrontEntry]:
    """Decode optimizer output into designs, sorted by COE then LLP."""
    entries = [FrontEntry(problem.decode(s.x), float(s.f[0]), float(s.f[1])) for s in solutions]
    entries.sort(key=lambda e: (e.coe, e.llp, e.design.n_pv, e.design.n_bes, e.design.dod))
    return entries
