import numpy as np
import pytest

from sspvb.mopso import MopsoParams, run_mopso
from sspvb.pareto import dominates
from sspvb.problems import ZDT1, Bowl, Problem, distance_to_zdt1_front


def snapshot(archive):
    return np.array([s.f for s in archive]), np.array([s.x for s in archive])


class TestBowl:
    @pytest.mark.parametrize("seed", [1, 2])
    def test_reaches_minimum(self, seed):
        problem = Bowl(n_var=5, center=0.3, offset=1.0)
        archive = run_mopso(problem, MopsoParams(swarm_size=40, iterations=150, seed=seed))
        best = min(s.f[0] for s in archive)
        assert best <= 1.01 * problem.offset

    def test_gridded_problem_lands_on_grid(self):
        problem = Bowl(n_var=3, center=0.3)
        problem.steps = np.array([1.0, 0.5, 0.0])
        archive = run_mopso(problem, MopsoParams(swarm_size=20, iterations=30, seed=3))
        for s in archive:
            assert float(s.x[0]).is_integer()
            assert float(2 * s.x[1]).is_integer()


class TestContract:
    def test_same_seed_same_archive(self):
        params = MopsoParams(swarm_size=30, iterations=20, seed=11)
        a, b = run_mopso(ZDT1(6), params), run_mopso(ZDT1(6), params)
        for x, y in zip(snapshot(a), snapshot(b)):
            np.testing.assert_array_equal(x, y)

    def test_parallel_evaluation_does_not_change_result(self):
        base = MopsoParams(swarm_size=30, iterations=15, seed=5)
        a = run_mopso(ZDT1(6), base)
        b = run_mopso(ZDT1(6), MopsoParams(swarm_size=30, iterations=15, seed=5, workers=4))
        for x, y in zip(snapshot(a), snapshot(b)):
            np.testing.assert_array_equal(x, y)

    def test_positions_and_archive_within_bounds(self):
        problem = ZDT1(5)
        seen = []

        def check(it, archive, particles):
            for p in particles:
                seen.append(bool(np.all(p.position >= problem.lower) and np.all(p.position <= problem.upper)))

        archive = run_mopso(problem, MopsoParams(swarm_size=25, iterations=25, seed=2), callback=check)
        assert seen and all(seen)
        X = np.array([s.x for s in archive])
        assert np.all(X >= problem.lower) and np.all(X <= problem.upper)

    def test_archive_never_regresses_without_eviction(self):
        history = []
        params = MopsoParams(swarm_size=20, iterations=30, archive_capacity=100_000, seed=4)
        run_mopso(ZDT1(5), params, callback=lambda it, arch, _: history.append(arch.objectives))
        for old, new in zip(history, history[1:]):
            for f in old:
                assert any(np.array_equal(g, f) or dominates(g, f) for g in new)

    def test_no_social_or_cognitive_pull_means_no_motion(self):
        positions = []
        params = MopsoParams(swarm_size=10, iterations=10, c1=0.0, c2=0.0, mutation_rate=0.0, seed=9)
        run_mopso(ZDT1(4), params, callback=lambda it, arch, parts: positions.append(
            np.array([p.position for p in parts])))
        for later in positions[1:]:
            np.testing.assert_array_equal(later, positions[0])

    def test_archive_respects_capacity(self):
        archive = run_mopso(ZDT1(5), MopsoParams(swarm_size=40, iterations=40, archive_capacity=15, seed=1))
        assert 0 < len(archive) <= 15

    def test_returned_archive_is_mutually_non_dominated(self):
        F = snapshot(run_mopso(ZDT1(5), MopsoParams(swarm_size=30, iterations=30, seed=8)))[0]
        assert not any(dominates(a, b) for a in F for b in F)

    def test_zdt1_short_run_approaches_front(self):
        archive = run_mopso(ZDT1(10), MopsoParams(swarm_size=50, iterations=60, seed=1))
        assert distance_to_zdt1_front(snapshot(archive)[0]).mean() < 0.2

    def test_invalid_params(self):
        with pytest.raises(ValueError):
            MopsoParams(swarm_size=0)
        with pytest.raises(ValueError):
            MopsoParams(c1=-1.0)
        with pytest.raises(ValueError):
            MopsoParams(mutation_rate=1.5)


class TestBaseProblem:
    def test_repair_snaps_and_clips(self):
        p = Problem([0.0, 0.2], [10.0, 0.8], steps=[1.0, 0.1])
        np.testing.assert_array_equal(p.repair(np.array([3.6, 0.77])), [4.0, 0.8])
        np.testing.assert_array_equal(p.repair(np.array([-2.0, 0.95])), [0.0, 0.8])

    def test_bounds_must_be_finite(self):
        with pytest.raises(ValueError):
            Problem([0.0], [np.inf])
