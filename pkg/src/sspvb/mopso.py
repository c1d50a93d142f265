"""Multi-objective particle swarm optimization with an adaptive-grid external archive."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .pareto import ParetoArchive, Solution, dominates
from .problems import Problem, evaluate_population


@dataclass(frozen=True)
class MopsoParams:
    swarm_size: int = 100
    iterations: int = 150
    inertia: tuple[float, float] = (0.9, 0.4)
    c1: float = 2.0
    c2: float = 2.0
    archive_capacity: int = 100
    grid_divisions: int = 7
    mutation_rate: float = 0.1
    seed: int = 0
    workers: int = 1

    def __post_init__(self):
        if self.swarm_size <= 0 or self.iterations <= 0:
            raise ValueError("swarm_size and iterations must be > 0")
        if self.c1 < 0 or self.c2 < 0:
            raise ValueError("c1 and c2 must be >= 0")
        if not 0 <= self.mutation_rate <= 1:
            raise ValueError("mutation_rate must lie in [0, 1]")
        if self.archive_capacity < 1:
            raise ValueError("archive_capacity must be >= 1")


@dataclass
class Particle:
    position: np.ndarray
    velocity: np.ndarray
    best_position: np.ndarray
    best_f: np.ndarray


def run_mopso(problem: Problem, params: MopsoParams = MopsoParams(), callback=None) -> ParetoArchive:
    """Optimize ``problem`` and return the final archive.

    ``callback(iteration, archive, particles)`` is invoked after the
    initial evaluation (iteration -1) and after every iteration.

    All random draws happen here in a fixed order, so the result depends
    only on ``params.seed`` and not on ``params.workers``.
    """
    rng = np.random.default_rng(params.seed)
    n, d = params.swarm_size, problem.n_var
    lo, hi = problem.lower, problem.upper
    span = hi - lo

    X = lo + rng.random((n, d)) * span
    V = np.zeros((n, d))
    Xr, F = evaluate_population(problem, X, params.workers)
    pbest_x = X.copy()
    pbest_f = F.copy()

    archive = ParetoArchive(params.archive_capacity, params.grid_divisions, rng)
    for k in range(n):
        archive.insert(Solution(Xr[k], F[k]))
    if callback is not None:
        callback(-1, archive, _particles(X, V, pbest_x, pbest_f))

    w_start, w_end = params.inertia
    for it in range(params.iterations):
        w = w_start + (w_end - w_start) * it / max(params.iterations - 1, 1)
        if len(archive):
            leaders = np.array([s.x for s in archive.select_leaders(n, rng)])
        else:
            leaders = pbest_x.copy()
        r1 = rng.random((n, d))
        r2 = rng.random((n, d))
        V = w * V + params.c1 * r1 * (pbest_x - X) + params.c2 * r2 * (leaders - X)
        X = X + V
        out = (X < lo) | (X > hi)
        X = np.clip(X, lo, hi)
        V[out] = 0.0

        rate = params.mutation_rate * (1.0 - it / params.iterations)
        mutate = rng.random(n) < rate
        for k in np.flatnonzero(mutate):
            j = rng.integers(d)
            X[k, j] = lo[j] + rng.random() * span[j]

        Xr, F = evaluate_population(problem, X, params.workers)
        for k in range(n):
            if _replaces_pbest(F[k], pbest_f[k], rng):
                pbest_x[k] = X[k]
                pbest_f[k] = F[k]
        for k in range(n):
            archive.insert(Solution(Xr[k], F[k]))
        if callback is not None:
            callback(it, archive, _particles(X, V, pbest_x, pbest_f))
    return archive


def _replaces_pbest(new_f, old_f, rng) -> bool:
    # dominance decides; mutually non-dominated is a coin flip; identical keeps the incumbent
    if dominates(new_f, old_f):
        return True
    if dominates(old_f, new_f) or np.array_equal(new_f, old_f):
        return False
    return bool(rng.random() < 0.5)


def _particles(X, V, pbest_x, pbest_f):
    return [Particle(X[k].copy(), V[k].copy(), pbest_x[k].copy(), pbest_f[k].copy()) for k in range(len(X))]
