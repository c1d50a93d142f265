"""NSGA-II with simulated binary crossover and polynomial mutation."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .pareto import Solution, crowding_distance, non_dominated_sort
from .problems import Problem, evaluate_population


@dataclass(frozen=True)
class Nsga2Params:
    population: int = 100
    generations: int = 150
    crossover_prob: float = 0.9
    crossover_eta: float = 15.0
    mutation_prob: float | None = None  # None means 1 / n_var
    mutation_eta: float = 20.0
    seed: int = 0
    workers: int = 1

    def __post_init__(self):
        if self.population <= 0 or self.population % 2:
            raise ValueError("population must be even and > 0")
        if self.generations <= 0:
            raise ValueError("generations must be > 0")
        if not 0 <= self.crossover_prob <= 1:
            raise ValueError("crossover_prob must lie in [0, 1]")
        if self.mutation_prob is not None and not 0 <= self.mutation_prob <= 1:
            raise ValueError("mutation_prob must lie in [0, 1]")


def sbx_crossover(p1, p2, lo, hi, eta, rng):
    """Bounded simulated binary crossover of two parents; returns two children.

    Each variable is recombined with probability 0.5 (Deb and Agrawal's
    bounded variant), children are swapped with probability 0.5.
    """
    d = len(p1)
    u = rng.random(d)
    active = rng.random(d) < 0.5
    swap = rng.random(d) < 0.5
    c1, c2 = p1.copy(), p2.copy()
    for j in np.flatnonzero(active):
        y1, y2 = min(p1[j], p2[j]), max(p1[j], p2[j])
        if y2 - y1 < 1e-14:
            continue
        yl, yu = lo[j], hi[j]
        expo = 1.0 / (eta + 1.0)

        beta = 1.0 + 2.0 * (y1 - yl) / (y2 - y1)
        alpha = 2.0 - beta ** -(eta + 1.0)
        if u[j] <= 1.0 / alpha:
            betaq = (u[j] * alpha) ** expo
        else:
            betaq = (1.0 / (2.0 - u[j] * alpha)) ** expo
        a = 0.5 * ((y1 + y2) - betaq * (y2 - y1))

        beta = 1.0 + 2.0 * (yu - y2) / (y2 - y1)
        alpha = 2.0 - beta ** -(eta + 1.0)
        if u[j] <= 1.0 / alpha:
            betaq = (u[j] * alpha) ** expo
        else:
            betaq = (1.0 / (2.0 - u[j] * alpha)) ** expo
        b = 0.5 * ((y1 + y2) + betaq * (y2 - y1))

        a, b = min(max(a, yl), yu), min(max(b, yl), yu)
        if swap[j]:
            a, b = b, a
        c1[j], c2[j] = a, b
    return c1, c2


def polynomial_mutation(x, lo, hi, eta, prob, rng):
    """Bounded polynomial mutation applied per variable with probability ``prob``."""
    d = len(x)
    hit = rng.random(d) < prob
    u = rng.random(d)
    y = x.copy()
    expo = 1.0 / (eta + 1.0)
    for j in np.flatnonzero(hit):
        yl, yu = lo[j], hi[j]
        if yu <= yl:
            continue
        delta1 = (y[j] - yl) / (yu - yl)
        delta2 = (yu - y[j]) / (yu - yl)
        if u[j] < 0.5:
            val = 2.0 * u[j] + (1.0 - 2.0 * u[j]) * (1.0 - delta1) ** (eta + 1.0)
            deltaq = val ** expo - 1.0
        else:
            val = 2.0 * (1.0 - u[j]) + 2.0 * (u[j] - 0.5) * (1.0 - delta2) ** (eta + 1.0)
            deltaq = 1.0 - val ** expo
        y[j] = min(max(y[j] + deltaq * (yu - yl), yl), yu)
    return y


def rank_and_crowding(F: np.ndarray):
    """Per-individual front rank and crowding distance (within its own front)."""
    n = len(F)
    rank = np.empty(n, dtype=np.int64)
    crowd = np.empty(n)
    fronts = non_dominated_sort(F)
    for r, front in enumerate(fronts):
        rank[front] = r
        crowd[front] = crowding_distance(F[front])
    return rank, crowd, fronts


def _tournament(rank, crowd, rng) -> int:
    i, j = rng.integers(len(rank), size=2)
    if rank[i] != rank[j]:
        return int(i if rank[i] < rank[j] else j)
    if crowd[i] != crowd[j]:
        return int(i if crowd[i] > crowd[j] else j)
    return int(i if rng.random() < 0.5 else j)


def _survivors(F: np.ndarray, n: int) -> np.ndarray:
    fronts = non_dominated_sort(F)
    chosen = []
    for front in fronts:
        if len(chosen) + len(front) <= n:
            chosen.extend(front)
            if len(chosen) == n:
                break
            continue
        crowd = crowding_distance(F[front])
        order = np.argsort(-crowd, kind="stable")
        chosen.extend(np.asarray(front)[order[: n - len(chosen)]].tolist())
        break
    return np.asarray(chosen, dtype=np.int64)


def run_nsga2(problem: Problem, params: Nsga2Params = Nsga2Params(), callback=None) -> list[Solution]:
    """Optimize ``problem``; returns the final non-dominated set.

    Exact objective duplicates in the final set are collapsed to their first
    occurrence. ``callback(generation, X_repaired, F)`` sees the initial
    population (generation -1) and every surviving population.
    """
    rng = np.random.default_rng(params.seed)
    n, d = params.population, problem.n_var
    lo, hi = problem.lower, problem.upper
    pm = params.mutation_prob if params.mutation_prob is not None else 1.0 / d

    X = lo + rng.random((n, d)) * (hi - lo)
    Xr, F = evaluate_population(problem, X, params.workers)
    rank, crowd, _ = rank_and_crowding(F)
    if callback is not None:
        callback(-1, Xr, F)

    for gen in range(params.generations):
        children = np.empty((n, d))
        for k in range(0, n, 2):
            a = X[_tournament(rank, crowd, rng)]
            b = X[_tournament(rank, crowd, rng)]
            if rng.random() < params.crossover_prob:
                c1, c2 = sbx_crossover(a, b, lo, hi, params.crossover_eta, rng)
            else:
                c1, c2 = a.copy(), b.copy()
            children[k] = polynomial_mutation(c1, lo, hi, params.mutation_eta, pm, rng)
            children[k + 1] = polynomial_mutation(c2, lo, hi, params.mutation_eta, pm, rng)
        Cr, CF = evaluate_population(problem, children, params.workers)

        allX = np.vstack([X, children])
        allXr = np.vstack([Xr, Cr])
        allF = np.vstack([F, CF])
        keep = _survivors(allF, n)
        X, Xr, F = allX[keep], allXr[keep], allF[keep]
        rank, crowd, _ = rank_and_crowding(F)
        if callback is not None:
            callback(gen, Xr, F)

    best = non_dominated_sort(F)[0]
    result: list[Solution] = []
    seen = set()
    for k in best:
        key = F[k].tobytes()
        if key in seen:
            continue
        seen.add(key)
        result.append(Solution(Xr[k], F[k]))
    return result
