import csv
import subprocess
import sys

import numpy as np
import pytest

from sspvb import cli, runner
from sspvb.config import load_config
from sspvb.model import Design
from sspvb.simulation import simulate

SMALL = """\
data.source = synthetic
data.seed = 7
data.days = 7
data.peak_load_kw = 1.0
bounds.n_pv_max = 20
bounds.n_bes_max = 10
mopso.swarm_size = 20
mopso.iterations = 15
nsga2.population = 20
nsga2.generations = 15
"""


@pytest.fixture
def config_file(tmp_path):
    path = tmp_path / "small.cfg"
    path.write_text(SMALL)
    return path


def read_rows(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


class TestOptimize:
    def test_writes_artifacts_and_summary(self, tmp_path, config_file, capsys):
        out = tmp_path / "run"
        assert cli.main(["optimize", "--config", str(config_file), "--seed", "2", "--out", str(out)]) == 0
        for name in ("front_mopso.csv", "front_nsga2.csv", "surface_mopso.csv", "surface_nsga2.csv", "summary.txt"):
            assert (out / name).is_file()
        summary = (out / "summary.txt").read_text()
        assert "seed: 2" in summary and "knee point" in summary and "timings" in summary
        assert "MOPSO" in summary and "NSGA-II" in summary and "best COE at LLP <= 0.0000 %" in summary
        assert "battery.capacity_per_unit = 2.4" in summary
        assert summary in capsys.readouterr().out

    def test_rows_round_trip_through_the_library(self, tmp_path, config_file):
        out = tmp_path / "run"
        cli.main(["optimize", "--config", str(config_file), "--algo", "nsga2", "--out", str(out)])
        problem = runner.build_problem(load_config(config_file, environ={}))
        front = read_rows(out / "front_nsga2.csv")
        assert list(front[0]) == ["n_pv", "n_bes", "dod", "coe_usd_per_kwh", "llp_frac"]
        for row in (front[0], front[-1]):
            ev = problem.evaluate_design(Design(int(row["n_pv"]), int(row["n_bes"]), float(row["dod"])))
            assert float(row["coe_usd_per_kwh"]) == ev.coe and float(row["llp_frac"]) == ev.llp
        surface = read_rows(out / "surface_nsga2.csv")
        assert len(surface) == len(front)
        assert sorted((r["dod"], r["coe_usd_per_kwh"], r["llp_frac"]) for r in front) == \
            sorted((r["dod"], r["coe_usd_per_kwh"], r["llp_frac"]) for r in surface)

    def test_byte_identical_with_parallel_workers(self, tmp_path, config_file):
        a, b = tmp_path / "a", tmp_path / "b"
        cli.main(["optimize", "--config", str(config_file), "--seed", "5", "--out", str(a)])
        cli.main(["optimize", "--config", str(config_file), "--seed", "5", "--out", str(b), "--workers", "3"])
        for name in ("front_mopso.csv", "front_nsga2.csv", "surface_mopso.csv", "surface_nsga2.csv"):
            assert (a / name).read_bytes() == (b / name).read_bytes()

    def test_unwritable_output_fails_before_computation(self, tmp_path, config_file, monkeypatch, capsys):
        blocker = tmp_path / "file"
        blocker.write_text("")

        def boom(*args, **kwargs):
            raise AssertionError("computation started")

        monkeypatch.setattr(runner, "build_problem", boom)
        code = cli.main(["optimize", "--config", str(config_file), "--out", str(blocker / "sub")])
        assert code != 0
        assert "error" in capsys.readouterr().err

    def test_config_errors_exit_nonzero(self, tmp_path, capsys):
        bad = tmp_path / "bad.cfg"
        bad.write_text("battery.capacity = 3\n")
        assert cli.main(["optimize", "--config", str(bad), "--out", str(tmp_path / "o")]) == 1
        assert "unknown config key" in capsys.readouterr().err
        assert cli.main(["optimize", "--set", "run.workers=0", "--out", str(tmp_path / "o")]) == 1


class TestOtherCommands:
    def test_sweep(self, tmp_path, config_file, capsys):
        out = tmp_path / "sweep"
        code = cli.main(["sweep-dod", "--config", str(config_file), "--from", "0.2", "--to", "0.8", "--step", "0.2",
                         "--epsilon", "0", "--algo", "mopso", "--out", str(out)])
        assert code == 0
        rows = read_rows(out / "sweep_mopso.csv")
        assert [r["dod"] for r in rows] == ["0.2", "0.4", "0.6", "0.8"]
        assert list(rows[0]) == ["dod", "best_n_pv", "best_n_bes", "coe_usd_per_kwh", "llp_frac", "feasible"]
        problem = runner.build_problem(load_config(config_file, environ={}))
        for row in rows:
            ev = problem.evaluate_design(Design(int(row["best_n_pv"]), int(row["best_n_bes"]), float(row["dod"])))
            assert float(row["coe_usd_per_kwh"]) == ev.coe and float(row["llp_frac"]) == ev.llp
            assert row["feasible"] == str(int(ev.llp <= 0.0))
        assert "optimum" in capsys.readouterr().out

    def test_simulate_trace(self, tmp_path, config_file, capsys):
        out = tmp_path / "trace.csv"
        assert cli.main(["simulate", "--config", str(config_file), "--n-pv", "12", "--n-bes", "6",
                         "--dod", "0.6", "--out", str(out)]) == 0
        rows = read_rows(out)
        cfg = load_config(config_file, environ={})
        problem = runner.build_problem(cfg)
        res = simulate(Design(12, 6, 0.6), problem.dataset, cfg.pv, cfg.battery)
        assert len(rows) == problem.dataset.hours
        k = 30
        assert float(rows[k]["soc_kwh"]) == res.soc[k]
        assert float(rows[k]["deficit_kwh"]) == res.deficit[k]
        np.testing.assert_array_equal([float(r["load_kw"]) for r in rows], problem.dataset.load)
        assert "LLP:" in capsys.readouterr().out

    def test_gen_data_then_files_config(self, tmp_path):
        data = tmp_path / "data"
        assert cli.main(["gen-data", "--seed", "3", "--days", "2", "--peak-load", "1.5", "--out", str(data)]) == 0
        cfg_path = tmp_path / "files.cfg"
        cfg_path.write_text("data.source = files\ndata.weather = data/weather.csv\ndata.load = data/load.csv\n")
        ds = runner.build_dataset(load_config(cfg_path, environ={}))
        assert ds.hours == 48 and ds.peak_load <= 1.5 * 1.15

    def test_brute_force(self, tmp_path, config_file):
        out = tmp_path / "bf"
        assert cli.main(["brute-force", "--config", str(config_file), "--grid",
                         "n_pv=0:20:2,n_bes=0:10:2,dod=0.2:0.8:0.3", "--out", str(out)]) == 0
        rows = read_rows(out / "front_brute_force.csv")
        problem = runner.build_problem(load_config(config_file, environ={}))
        row = rows[len(rows) // 2]
        ev = problem.evaluate_design(Design(int(row["n_pv"]), int(row["n_bes"]), float(row["dod"])))
        assert float(row["coe_usd_per_kwh"]) == ev.coe and float(row["llp_frac"]) == ev.llp
        assert cli.main(["brute-force", "--config", str(config_file), "--grid", "n_pv=0:20:1",
                         "--out", str(out)]) == 1
        assert cli.main(["brute-force", "--config", str(config_file), "--grid",
                         "n_pv=0:200:1,n_bes=0:100:1,dod=0.2:0.8:0.1", "--cap", "1000", "--out", str(out)]) == 1

    def test_report(self, tmp_path, config_file, capsys):
        out = tmp_path / "run"
        cli.main(["optimize", "--config", str(config_file), "--algo", "mopso", "--out", str(out)])
        original = (out / "surface_mopso.csv").read_bytes()
        (out / "surface_mopso.csv").unlink()
        assert cli.main(["report", "--run", str(out)]) == 0
        assert (out / "surface_mopso.csv").read_bytes() == original
        assert (out / "surface_all.csv").is_file()
        assert "knee" in (out / "report.txt").read_text()
        assert cli.main(["report", "--run", str(tmp_path / "empty")]) == 1

    def test_module_entry_point_and_usage_errors(self):
        ok = subprocess.run([sys.executable, "-m", "sspvb", "--help"], capture_output=True, text=True)
        assert ok.returncode == 0 and "optimize" in ok.stdout
        bad = subprocess.run([sys.executable, "-m", "sspvb", "optimize", "--algo", "anneal"],
                             capture_output=True, text=True)
        assert bad.returncode == 2
