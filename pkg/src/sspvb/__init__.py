"""Sizing of standalone PV/battery systems with MOPSO and NSGA-II."""

from ._backend import BACKEND
from .config import RunConfig, load_config
from .data import DatasetError, generate_synthetic, ingest_dataset, load_bundled_year
from .economics import annualized_total_cost, battery_cycle_life, battery_life_years, compute_coe, crf
from .model import AnnualDataset, BatterySpec, CostParams, Design, PVSpec, pv_power
from .mopso import MopsoParams, run_mopso
from .nsga2 import Nsga2Params, run_nsga2
from .pareto import ParetoArchive, Solution, crowding_distance, dominates, hypervolume_2d, non_dominated_sort
from .simulation import compute_llp, simulate
from .sizing import SizingProblem, brute_force_front, dod_sweep, knee_point

__all__ = [
    "BACKEND",
    "AnnualDataset",
    "BatterySpec",
    "CostParams",
    "DatasetError",
    "Design",
    "MopsoParams",
    "Nsga2Params",
    "PVSpec",
    "ParetoArchive",
    "RunConfig",
    "SizingProblem",
    "Solution",
    "annualized_total_cost",
    "battery_cycle_life",
    "battery_life_years",
    "brute_force_front",
    "compute_coe",
    "compute_llp",
    "crf",
    "crowding_distance",
    "dod_sweep",
    "dominates",
    "generate_synthetic",
    "hypervolume_2d",
    "ingest_dataset",
    "knee_point",
    "load_bundled_year",
    "load_config",
    "non_dominated_sort",
    "pv_power",
    "run_mopso",
    "run_nsga2",
    "simulate",
]
