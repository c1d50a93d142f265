import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sspvb.pareto import (
    ParetoArchive,
    Solution,
    crowding_distance,
    dominates,
    grid_cells,
    hypervolume_2d,
    non_dominated_sort,
)


def brute_force_fronts(points):
    """Peel fronts one at a time with an all-pairs dominance check."""
    remaining = list(range(len(points)))
    fronts = []
    while remaining:
        front = [i for i in remaining
                 if not any(all(points[j][m] <= points[i][m] for m in range(len(points[i])))
                            and any(points[j][m] < points[i][m] for m in range(len(points[i])))
                            for j in remaining)]
        fronts.append(sorted(front))
        remaining = [i for i in remaining if i not in front]
    return fronts


def union_area(points, ref):
    """Area of the union of boxes [p, ref] by coordinate compression."""
    xs = sorted({p[0] for p in points} | {ref[0]})
    ys = sorted({p[1] for p in points} | {ref[1]})
    area = 0.0
    for x0, x1 in zip(xs, xs[1:]):
        for y0, y1 in zip(ys, ys[1:]):
            if any(p[0] <= x0 and p[1] <= y0 for p in points):
                area += (x1 - x0) * (y1 - y0)
    return area


vectors = st.lists(st.integers(0, 4), min_size=2, max_size=3)


class TestDominates:
    def test_examples(self):
        assert dominates((0.2, 0.0), (0.3, 0.0))
        assert not dominates((0.2, 0.05), (0.3, 0.0))
        assert not dominates((0.2, 0.1), (0.2, 0.1))

    def test_low_cost_reliable_design_beats_expensive_reliable_one(self):
        assert dominates((0.20456, 0.0), (0.369, 0.0))

    def test_inf_is_worse_than_anything(self):
        assert dominates((1e300, 1.0), (math.inf, 1.0))

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            dominates((1, 2), (1, 2, 3))

    @settings(max_examples=300)
    @given(st.integers(2, 3).flatmap(lambda m: st.tuples(*[st.lists(st.integers(0, 3), min_size=m, max_size=m)] * 3)))
    def test_strict_partial_order(self, triple):
        a, b, c = triple
        assert not dominates(a, a)
        assert not (dominates(a, b) and dominates(b, a))
        if dominates(a, b) and dominates(b, c):
            assert dominates(a, c)


class TestSorting:
    def test_incomparable_set_is_one_front(self):
        pts = [(0, 3), (1, 2), (2, 1), (3, 0)]
        assert [sorted(f) for f in non_dominated_sort(pts)] == [[0, 1, 2, 3]]

    def test_chain(self):
        assert [sorted(f) for f in non_dominated_sort([(3, 3), (1, 1), (2, 2)])] == [[1], [2], [0]]

    def test_fifty_random_points(self, rng):
        pts = rng.random((50, 2)).tolist()
        assert [sorted(f) for f in non_dominated_sort(pts)] == brute_force_fronts(pts)

    @settings(max_examples=100, deadline=None)
    @given(st.integers(2, 3).flatmap(
        lambda m: st.lists(st.lists(st.integers(0, 5), min_size=m, max_size=m), min_size=1, max_size=40)))
    def test_matches_oracle_with_ties(self, pts):
        fronts = [sorted(f) for f in non_dominated_sort(pts)]
        assert fronts == brute_force_fronts(pts)
        assert sorted(itertools.chain.from_iterable(fronts)) == list(range(len(pts)))


class TestCrowding:
    def test_small_fronts_are_infinite(self):
        assert np.all(np.isinf(crowding_distance([(0.0, 1.0)])))
        assert np.all(np.isinf(crowding_distance([(0.0, 1.0), (1.0, 0.0)])))

    def test_three_points(self):
        d = crowding_distance([(0.0, 2.0), (1.0, 1.0), (2.0, 0.0)])
        assert d[1] == 2.0
        assert np.isinf(d[0]) and np.isinf(d[2])

    def test_identical_points(self):
        d = crowding_distance([(1.0, 1.0)] * 5)
        assert np.isinf(d).sum() >= 1
        assert np.all(d[np.isfinite(d)] == 0.0)

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            crowding_distance(np.empty((0, 2)))


class TestHypervolume:
    def test_examples(self):
        assert hypervolume_2d([(1.0, 1.0)], (2.0, 2.0)) == 1.0
        assert hypervolume_2d([(1, 3), (2, 2), (3, 1)], (4, 4)) == 6.0
        assert hypervolume_2d([], (1.0, 1.0)) == 0.0

    def test_reference_must_be_dominated(self):
        with pytest.raises(ValueError):
            hypervolume_2d([(1.0, 5.0)], (4.0, 4.0))

    def test_random_fronts_match_union_area(self, rng):
        for _ in range(20):
            pts = rng.random((int(rng.integers(1, 15)), 2)).tolist()
            assert hypervolume_2d(pts, (1.1, 1.1)) == pytest.approx(union_area(pts, (1.1, 1.1)), abs=1e-9)

    @settings(max_examples=200)
    @given(st.lists(st.tuples(st.floats(0, 1), st.floats(0, 1)), min_size=1, max_size=20),
           st.tuples(st.floats(0, 1), st.floats(0, 1)))
    def test_adding_a_point_never_decreases(self, pts, extra):
        ref = (1.5, 1.5)
        assert hypervolume_2d(pts + [extra], ref) >= hypervolume_2d(pts, ref) - 1e-12


class TestGrid:
    def test_cells_cover_corners(self):
        F = np.array([[0.0, 0.0], [1.0, 1.0], [0.5, 0.5]])
        cells = grid_cells(F, 4)
        assert cells[0] == 0 and cells[1] == 15 and cells[2] == 2 * 4 + 2


def sol(f):
    return Solution(np.zeros(1), np.asarray(f, dtype=np.float64))


class TestArchive:
    def test_insert_into_empty(self):
        a = ParetoArchive()
        assert a.insert(sol((1.0, 1.0))) and len(a) == 1

    def test_dominated_candidate_rejected(self):
        a = ParetoArchive()
        a.insert(sol((1.0, 1.0)))
        assert not a.insert(sol((2.0, 2.0)))
        assert a.objectives.tolist() == [[1.0, 1.0]]

    def test_duplicate_rejected_first_kept(self):
        a = ParetoArchive()
        first = Solution(np.array([1.0]), np.array([1.0, 1.0]))
        a.insert(first)
        assert not a.insert(Solution(np.array([2.0]), np.array([1.0, 1.0])))
        assert a.entries == [first]

    def test_dominating_candidate_removes_entries(self):
        a = ParetoArchive()
        for f in [(1.0, 4.0), (2.0, 3.0), (3.0, 2.0), (5.0, 0.5)]:
            a.insert(sol(f))
        assert a.insert(sol((1.5, 2.0)))
        pts = [(1.0, 4.0), (2.0, 3.0), (3.0, 2.0), (5.0, 0.5), (1.5, 2.0)]
        expected = {pts[i] for i in brute_force_fronts(pts)[0]}
        assert {tuple(f) for f in a.objectives.tolist()} == expected
        assert len(a) == 3

    def test_leaders_from_empty_archive(self, rng):
        with pytest.raises(LookupError):
            ParetoArchive().select_leaders(3, rng)

    def test_leaders_prefer_sparse_cells(self):
        a = ParetoArchive(grid_divisions=2)
        for k in range(9):
            a.insert(sol((k * 0.01, 1.0 - k * 0.01)))
        a.insert(sol((1.0, 0.0)))
        lone = a.entries[-1]
        leaders = a.select_leaders(4000, np.random.default_rng(1))
        share = sum(s is lone for s in leaders) / len(leaders)
        # two occupied cells with weights 1/9 and 1, so the lone point wins 90% of draws
        assert share == pytest.approx(0.9, abs=0.02)

    @settings(max_examples=100, deadline=None)
    @given(st.lists(st.tuples(st.integers(0, 30), st.integers(0, 30)), min_size=1, max_size=80),
           st.integers(1, 12))
    def test_stream_keeps_archive_valid(self, stream, capacity):
        a = ParetoArchive(capacity=capacity, grid_divisions=3, rng=np.random.default_rng(0))
        unbounded = ParetoArchive(capacity=10_000)
        for f in stream:
            a.insert(sol(f))
            unbounded.insert(sol(f))
            F = a.objectives
            assert len(a) <= capacity
            assert not any(dominates(F[i], F[j]) for i in range(len(F)) for j in range(len(F)))
            assert len({tuple(r) for r in F.tolist()}) == len(F)
        uniq = list(dict.fromkeys(stream))
        expected = {uniq[i] for i in brute_force_fronts(uniq)[0]}
        assert {tuple(int(v) for v in r) for r in unbounded.objectives.tolist()} == expected
