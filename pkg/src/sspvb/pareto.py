"""Pareto machinery shared by the optimizers. All objectives are minimized.

Non-finite objective values (the COE penalty for designs that deliver no
energy) compare as worse than any finite value, which IEEE ``inf`` already
does. Where objective ranges are needed (crowding, grids), such values are
replaced by a finite stand-in just above the largest finite value.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np


@dataclass(frozen=True, eq=False)
class Solution:
    """A decision vector and its objective vector."""

    x: np.ndarray
    f: np.ndarray

    def __post_init__(self):
        x = np.array(self.x, dtype=np.float64)
        f = np.array(self.f, dtype=np.float64)
        x.setflags(write=False)
        f.setflags(write=False)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "f", f)


def dominates(a: Sequence[float], b: Sequence[float]) -> bool:
    """True iff ``a`` is no worse than ``b`` everywhere and strictly better somewhere."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise ValueError(f"objective dimensions differ: {a.shape} vs {b.shape}")
    return bool(np.all(a <= b) and np.any(a < b))


def domination_matrix(F: np.ndarray) -> np.ndarray:
    """``D[i, j]`` is True when point ``i`` dominates point ``j``."""
    F = np.asarray(F, dtype=np.float64)
    le = np.all(F[:, None, :] <= F[None, :, :], axis=2)
    lt = np.any(F[:, None, :] < F[None, :, :], axis=2)
    return le & lt


def non_dominated_sort(points) -> list[list[int]]:
    """Fast non-dominated sorting.

    Returns fronts as lists of indices into ``points``; front 0 is the
    non-dominated set, front k is non-dominated once fronts before it are
    removed. Each index appears exactly once, in ascending order within its front.
    """
    F = np.asarray(points, dtype=np.float64)
    if F.ndim != 2 or len(F) == 0:
        raise ValueError("points must be a non-empty (n, m) array")
    D = domination_matrix(F)
    # how many points dominate each point
    counts = D.sum(axis=0)
    assigned = np.zeros(len(F), dtype=bool)
    fronts = []
    current = np.flatnonzero(counts == 0)
    while current.size:
        fronts.append(current.tolist())
        assigned[current] = True
        counts = counts - D[current].sum(axis=0)
        current = np.flatnonzero((counts == 0) & ~assigned)
    return fronts


def finite_objectives(F: np.ndarray) -> np.ndarray:
    """Replace non-finite entries column-wise with one more than the column's finite max."""
    F = np.array(F, dtype=np.float64)
    if F.size == 0:
        return F
    for m in range(F.shape[1]):
        col = F[:, m]
        bad = ~np.isfinite(col)
        if bad.any():
            good = col[~bad]
            col[bad] = (good.max() + 1.0) if good.size else 0.0
    return F


def crowding_distance(front) -> np.ndarray:
    """Crowding distance of every point in one front.

    Boundary points of each objective get ``inf``; interior points accumulate
    the neighbour gap normalized by that objective's range. Zero-range
    objectives contribute nothing.
    """
    F = finite_objectives(np.asarray(front, dtype=np.float64))
    n = len(F)
    if n == 0:
        raise ValueError("front must be non-empty")
    dist = np.zeros(n)
    if n <= 2:
        dist[:] = np.inf
        return dist
    for m in range(F.shape[1]):
        order = np.argsort(F[:, m], kind="stable")
        vals = F[order, m]
        span = vals[-1] - vals[0]
        dist[order[0]] = np.inf
        dist[order[-1]] = np.inf
        if span > 0:
            dist[order[1:-1]] += (vals[2:] - vals[:-2]) / span
    return dist


def hypervolume_2d(front, reference) -> float:
    """Area dominated by a two-objective front and bounded by ``reference``."""
    ref = np.asarray(reference, dtype=np.float64)
    if ref.shape != (2,):
        raise ValueError("hypervolume_2d needs a 2-D reference point")
    F = np.asarray(front, dtype=np.float64).reshape(-1, 2)
    if len(F) == 0:
        return 0.0
    for p in F:
        if not dominates(p, ref):
            raise ValueError(f"point {p.tolist()} does not dominate reference {ref.tolist()}")
    F = F[np.lexsort((F[:, 1], F[:, 0]))]
    area = 0.0
    ceiling = ref[1]
    for f0, f1 in F:
        if f1 < ceiling:
            area += (ref[0] - f0) * (ceiling - f1)
            ceiling = f1
    return float(area)


def grid_cells(F: np.ndarray, divisions: int) -> np.ndarray:
    """Flat adaptive-grid cell index per point; the grid spans the points' bounding box."""
    F = finite_objectives(F)
    lo = F.min(axis=0)
    hi = F.max(axis=0)
    span = hi - lo
    safe = np.where(span > 0, span, 1.0)
    idx = np.floor((F - lo) / safe * divisions).astype(np.int64)
    idx = np.clip(idx, 0, divisions - 1)
    idx[:, span <= 0] = 0
    flat = np.zeros(len(F), dtype=np.int64)
    for m in range(F.shape[1]):
        flat = flat * divisions + idx[:, m]
    return flat


class ParetoArchive:
    """Bounded external archive of mutually non-dominated solutions.

    Over capacity, one member of the most crowded adaptive-grid cell is
    evicted at random. Exact objective duplicates of a member are rejected,
    so the first arrival wins.
    """

    def __init__(self, capacity: int = 100, grid_divisions: int = 7, rng: np.random.Generator | None = None):
        if capacity < 1:
            raise ValueError("capacity must be >= 1")
        if grid_divisions < 1:
            raise ValueError("grid_divisions must be >= 1")
        self.capacity = capacity
        self.grid_divisions = grid_divisions
        self.rng = rng if rng is not None else np.random.default_rng(0)
        self.entries: list[Solution] = []
        self._F: np.ndarray | None = None

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    @property
    def objectives(self) -> np.ndarray:
        if not self.entries:
            return np.empty((0, 0))
        return self._F.copy()

    def insert(self, candidate: Solution) -> bool:
        """Offer a solution; returns whether it was kept."""
        f = candidate.f
        if not self.entries:
            self.entries.append(candidate)
            self._F = f[None, :].copy()
            return True
        F = self._F
        if F.shape[1] != f.shape[0]:
            raise ValueError("objective dimension mismatch")
        le = np.all(F <= f, axis=1)
        if np.any(le):
            # dominated by, or identical to, an existing member
            return False
        dominated = np.all(f <= F, axis=1) & np.any(f < F, axis=1)
        if dominated.any():
            keep = np.flatnonzero(~dominated)
            self.entries = [self.entries[k] for k in keep]
            F = F[keep]
        self.entries.append(candidate)
        self._F = np.vstack([F, f[None, :]])
        if len(self.entries) > self.capacity:
            self._evict_one()
        return candidate in self.entries

    def _evict_one(self):
        cells = grid_cells(self._F, self.grid_divisions)
        uniq, inverse, counts = np.unique(cells, return_inverse=True, return_counts=True)
        densest = np.argmax(counts)
        members = np.flatnonzero(inverse == densest)
        victim = int(members[self.rng.integers(len(members))])
        del self.entries[victim]
        self._F = np.delete(self._F, victim, axis=0)

    def select_leaders(self, count: int, rng: np.random.Generator) -> list[Solution]:
        """Draw ``count`` leaders by roulette over grid cells weighted by 1/occupancy."""
        if not self.entries:
            raise LookupError("archive is empty")
        cells = grid_cells(self._F, self.grid_divisions)
        uniq, inverse, counts = np.unique(cells, return_inverse=True, return_counts=True)
        weights = 1.0 / counts
        cum = np.cumsum(weights / weights.sum())
        members = [np.flatnonzero(inverse == c) for c in range(len(uniq))]
        leaders = []
        for _ in range(count):
            c = min(int(np.searchsorted(cum, rng.random(), side="right")), len(uniq) - 1)
            pool = members[c]
            leaders.append(self.entries[int(pool[rng.integers(len(pool))])])
        return leaders
