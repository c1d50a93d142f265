import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sspvb.nsga2 import Nsga2Params, _survivors, polynomial_mutation, run_nsga2, sbx_crossover
from sspvb.pareto import dominates
from sspvb.problems import ZDT1, Bowl, distance_to_zdt1_front

bounded_pair = st.integers(1, 6).flatmap(lambda d: st.tuples(
    st.lists(st.floats(-5, 5), min_size=d, max_size=d),
    st.lists(st.floats(-5, 5), min_size=d, max_size=d),
    st.integers(0, 2**32 - 1),
))


class TestOperators:
    @settings(max_examples=200, deadline=None)
    @given(bounded_pair, st.floats(1, 40))
    def test_sbx_children_within_bounds(self, case, eta):
        a, b, seed = case
        lo, hi = np.full(len(a), -5.0), np.full(len(a), 5.0)
        c1, c2 = sbx_crossover(np.array(a), np.array(b), lo, hi, eta, np.random.default_rng(seed))
        for c in (c1, c2):
            assert np.all(c >= lo) and np.all(c <= hi)

    def test_sbx_identical_parents(self, rng):
        p = np.array([0.3, 0.7])
        c1, c2 = sbx_crossover(p, p.copy(), np.zeros(2), np.ones(2), 15.0, rng)
        np.testing.assert_array_equal(c1, p)
        np.testing.assert_array_equal(c2, p)

    def test_sbx_large_index_stays_near_parents(self, rng):
        p1, p2 = np.array([0.2, 0.4]), np.array([0.6, 0.5])
        for _ in range(50):
            c1, c2 = sbx_crossover(p1, p2, np.zeros(2), np.ones(2), 1e4, rng)
            near = np.minimum(np.abs(np.stack([c1, c2])[:, None, :] - np.stack([p1, p2])[None, :, :]).min(axis=1), 1)
            assert np.all(near < 1e-3)

    @settings(max_examples=200, deadline=None)
    @given(bounded_pair, st.floats(1, 40))
    def test_mutation_within_bounds(self, case, eta):
        a, _, seed = case
        lo, hi = np.full(len(a), -5.0), np.full(len(a), 5.0)
        y = polynomial_mutation(np.array(a), lo, hi, eta, 1.0, np.random.default_rng(seed))
        assert np.all(y >= lo) and np.all(y <= hi)

    def test_mutation_probability_zero_is_identity(self, rng):
        x = np.array([0.1, 0.2, 0.3])
        np.testing.assert_array_equal(polynomial_mutation(x, np.zeros(3), np.ones(3), 20.0, 0.0, rng), x)

    def test_survivors_keep_first_front_and_extremes(self):
        F = np.array([[0.0, 1.0], [0.5, 0.5], [0.45, 0.55], [1.0, 0.0], [2.0, 2.0], [3.0, 3.0]])
        keep = set(_survivors(F, 3).tolist())
        assert keep == {0, 3, 1} or keep == {0, 3, 2}


class TestRuns:
    @pytest.mark.parametrize("seed", [1, 2])
    def test_bowl(self, seed):
        problem = Bowl(n_var=5, center=0.3, offset=1.0)
        front = run_nsga2(problem, Nsga2Params(population=40, generations=150, seed=seed))
        assert min(s.f[0] for s in front) <= 1.01 * problem.offset

    def test_determinism_and_parallel_invariance(self):
        a = run_nsga2(ZDT1(6), Nsga2Params(population=30, generations=15, seed=3))
        b = run_nsga2(ZDT1(6), Nsga2Params(population=30, generations=15, seed=3))
        c = run_nsga2(ZDT1(6), Nsga2Params(population=30, generations=15, seed=3, workers=4))
        for other in (b, c):
            np.testing.assert_array_equal([s.f for s in a], [s.f for s in other])
            np.testing.assert_array_equal([s.x for s in a], [s.x for s in other])

    def test_elitism_per_objective(self):
        minima = []
        run_nsga2(ZDT1(8), Nsga2Params(population=30, generations=40, seed=6),
                  callback=lambda gen, X, F: minima.append(F.min(axis=0)))
        minima = np.array(minima)
        assert np.all(np.diff(minima, axis=0) <= 0.0)

    def test_population_within_bounds(self):
        problem = ZDT1(5)
        ok = []
        run_nsga2(problem, Nsga2Params(population=20, generations=20, seed=2),
                  callback=lambda gen, X, F: ok.append(bool(np.all(X >= problem.lower) and np.all(X <= problem.upper))))
        assert all(ok)

    def test_result_is_mutually_non_dominated_and_unique(self):
        front = run_nsga2(ZDT1(5), Nsga2Params(population=30, generations=30, seed=4))
        F = np.array([s.f for s in front])
        assert not any(dominates(a, b) for a in F for b in F)
        assert len({f.tobytes() for f in F}) == len(F)

    def test_zdt1_short_run_approaches_front(self):
        front = run_nsga2(ZDT1(10), Nsga2Params(population=50, generations=60, seed=1))
        assert distance_to_zdt1_front(np.array([s.f for s in front])).mean() < 0.2

    @pytest.mark.parametrize("kwargs", [{"population": 31}, {"population": 0}, {"generations": 0},
                                        {"crossover_prob": 1.5}, {"mutation_prob": -0.1}])
    def test_invalid_params(self, kwargs):
        with pytest.raises(ValueError):
            Nsga2Params(**kwargs)
