"""Problem interface consumed by the optimizers, plus two analytic benchmarks.

A problem exposes box bounds, an optional grid step per variable and an
``evaluate`` method returning the objective vector to minimize. Optimizers keep
continuous positions and call :meth:`Problem.repair` only at evaluation time,
so integer or gridded variables never disturb the search dynamics.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor

import numpy as np


class Problem:
    """Base class. Subclasses set ``lower``, ``upper``, ``n_obj`` and implement ``evaluate``."""

    n_obj: int = 2

    def __init__(self, lower, upper, steps=None, names=None):
        self.lower = np.asarray(lower, dtype=np.float64)
        self.upper = np.asarray(upper, dtype=np.float64)
        if self.lower.shape != self.upper.shape or self.lower.ndim != 1:
            raise ValueError("lower and upper must be 1-D arrays of equal length")
        if not (np.all(np.isfinite(self.lower)) and np.all(np.isfinite(self.upper))):
            raise ValueError("bounds must be finite")
        if np.any(self.upper < self.lower):
            raise ValueError("upper bound below lower bound")
        self.steps = np.zeros(self.n_var) if steps is None else np.asarray(steps, dtype=np.float64)
        if self.steps.shape != self.lower.shape or np.any(self.steps < 0):
            raise ValueError("steps must be nonnegative, one per variable")
        self.names = list(names) if names is not None else [f"x{i}" for i in range(self.n_var)]

    @property
    def n_var(self) -> int:
        return len(self.lower)

    def repair(self, x: np.ndarray) -> np.ndarray:
        """Clip to bounds and snap gridded variables to ``lower + k * step``."""
        x = np.clip(np.asarray(x, dtype=np.float64), self.lower, self.upper)
        gridded = self.steps > 0
        if gridded.any():
            lo = self.lower[gridded]
            step = self.steps[gridded]
            k = np.round((x[gridded] - lo) / step)
            k_max = np.floor((self.upper[gridded] - lo) / step + 1e-9)
            x[gridded] = np.round(lo + np.minimum(k, k_max) * step, 12)
        return x

    def evaluate(self, x: np.ndarray) -> np.ndarray:
        raise NotImplementedError


def evaluate_population(problem: Problem, X: np.ndarray, workers: int = 1):
    """Repair and evaluate every row of ``X``; returns (repaired X, objectives).

    Row order is preserved whatever ``workers`` is, so results do not depend
    on parallelism.
    """
    Xr = np.array([problem.repair(x) for x in X])
    if workers > 1 and len(Xr) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            F = list(pool.map(problem.evaluate, Xr))
    else:
        F = [problem.evaluate(x) for x in Xr]
    return Xr, np.array(F, dtype=np.float64).reshape(len(Xr), problem.n_obj)


class ZDT1(Problem):
    """Convex two-objective benchmark; Pareto front is ``f2 = 1 - sqrt(f1)`` on [0, 1]."""

    def __init__(self, n_var: int = 30):
        super().__init__(np.zeros(n_var), np.ones(n_var))

    def evaluate(self, x):
        f1 = x[0]
        g = 1.0 + 9.0 * np.sum(x[1:]) / (len(x) - 1)
        f2 = g * (1.0 - np.sqrt(f1 / g))
        return np.array([f1, f2])

    @staticmethod
    def front_f2(f1):
        return 1.0 - np.sqrt(f1)

    @staticmethod
    def exact_hypervolume(reference=(1.1, 1.1)) -> float:
        """Area dominated by the analytic front, for ``reference >= (1, 1)``."""
        r0, r1 = reference
        # integral over f1 in [0, 1] of (r1 - (1 - sqrt f1)), plus the strip f1 in [1, r0]
        return (r1 - 1.0) + 2.0 / 3.0 + (r0 - 1.0) * r1


class Bowl(Problem):
    """Quadratic bowl with a constant second objective; reduces MOO to plain minimization.

    Minimum value is ``offset`` at ``center``.
    """

    def __init__(self, n_var: int = 5, center=0.3, offset=1.0, low=-5.0, high=5.0):
        super().__init__(np.full(n_var, low), np.full(n_var, high))
        self.center = np.broadcast_to(np.asarray(center, dtype=np.float64), (n_var,))
        self.offset = offset

    def evaluate(self, x):
        return np.array([self.offset + float(np.sum((x - self.center) ** 2)), 0.0])


def distance_to_zdt1_front(F: np.ndarray, samples: int = 10001) -> np.ndarray:
    """Euclidean distance of each objective vector to the ZDT1 front, by dense sampling."""
    f1 = np.linspace(0.0, 1.0, samples)
    curve = np.stack([f1, 1.0 - np.sqrt(f1)], axis=1)
    F = np.asarray(F, dtype=np.float64)
    d = np.sqrt(((F[:, None, :] - curve[None, :, :]) ** 2).sum(axis=2))
    return d.min(axis=1)
