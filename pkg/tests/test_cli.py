import json
import os
import subprocess
import sys

import numpy as np
import pytest

from uscsim import cli
from uscsim.presets import FIGURE_PRESETS
from uscsim.serialize import parse_metadata, read_csv


def run_cli(argv, tmp_path, name):
    out = str(tmp_path / name)
    rc = cli.main(argv + ["--out", out])
    assert rc == 0
    with open(out) as fh:
        return fh.read()


def run_subprocess(argv):
    return subprocess.run([sys.executable, "-m", "uscsim.cli"] + argv,
                          capture_output=True, text=True)


class TestFigurePresets:
    def test_fig3a_has_ten_level_columns(self, tmp_path):
        text = run_cli(["spectrum", "--figure", "fig3a", "--lam-steps", "6"],
                       tmp_path, "fig3a.csv")
        lines = [l for l in text.splitlines() if not l.startswith("#")]
        assert lines[0] == "lambda," + ",".join(f"E{i}" for i in range(1, 11))
        first = [float(v) for v in lines[1].split(",")]
        last = [float(v) for v in lines[-1].split(",")]
        assert first[0] == 0.0 and last[0] == 2.5

    def test_list_figures_table(self, capsys):
        assert cli.main(["list-figures"]) == 0
        out = capsys.readouterr().out
        rows = [l for l in out.splitlines() if l.split()
                and l.split()[0] in FIGURE_PRESETS]
        assert len(rows) == len(FIGURE_PRESETS)
        fig6_rows = [l for l in rows if l.startswith("fig6")]
        assert fig6_rows and all("0.01" in l for l in fig6_rows)
        fig8_rows = " ".join(l for l in rows if l.startswith("fig8"))
        for lam in ("0.5", "2.0", "2.5", "3.5"):
            assert f"lam/(hbar*omega0)={lam}" in fig8_rows

    def test_preset_subcommand_mismatch(self):
        assert cli.main(["splitting", "--figure", "fig3a"]) == cli.EXIT_CONFIG


class TestWorkedExampleCommand:
    def test_entropy_json(self, tmp_path):
        text = run_cli(["entropy", "--omega0-ratio", "1", "--delta-ratio", "1",
                        "--eps", "0", "--lambda", "1"], tmp_path, "we.json")
        report = json.loads(text)
        assert abs(report["S"] - 0.85) < 0.02
        assert abs(report["E2_minus_E1"] - 0.138) < 0.005


class TestDeterminism:
    def test_byte_identical_reruns(self, tmp_path):
        argv = ["squeezing", "--delta-ratio", "2", "--lam-min", "0",
                "--lam-max", "1", "--lam-steps", "4"]
        t1 = run_cli(argv, tmp_path, "a.csv")
        t2 = run_cli(argv, tmp_path, "b.csv")
        assert t1 == t2

    def test_threads_do_not_change_output(self, tmp_path):
        argv = ["spectrum", "--delta-ratio", "1", "--lam-min", "0",
                "--lam-max", "1.5", "--lam-steps", "7", "--levels", "4"]
        t1 = run_cli(argv + ["--threads", "1"], tmp_path, "t1.csv")
        t2 = run_cli(argv + ["--threads", "3"], tmp_path, "t3.csv")
        assert t1 == t2

    def test_no_temp_file_left(self, tmp_path):
        run_cli(["renorm-gap", "--delta-ratio", "1", "--lambda", "0.3"],
                tmp_path, "rg.json")
        assert not any(name.endswith(".tmp") for name in os.listdir(tmp_path))


CHEAP_OVERRIDES = {
    "spectrum": ["--lam-steps", "3", "--nmax", "64"],
    "splitting": ["--lam-steps", "3", "--nmax", "64"],
    "qfunc": ["--grid-points", "5", "--nmax", "32"],
    "wigner": ["--grid-points", "5", "--nmax", "32"],
    "squeezing": ["--lam-steps", "3", "--nmax", "48"],
    "entropy": ["--lam-steps", "3", "--nmax", "48"],
    "onset": ["--ratio-points", "2", "--nmax", "48"],
}


class TestConfigRoundTrip:
    @pytest.mark.parametrize("figure_id", sorted(FIGURE_PRESETS))
    def test_preset_round_trip(self, figure_id, tmp_path):
        preset = FIGURE_PRESETS[figure_id]
        argv = [preset.subcommand, "--figure", figure_id] \
            + CHEAP_OVERRIDES[preset.subcommand]
        out = str(tmp_path / f"{figure_id}.csv")
        assert cli.main(argv + ["--out", out]) == 0
        with open(out) as fh:
            text = fh.read()
        config = parse_metadata(text)["config"]
        assert config["figure"] == figure_id
        # re-running the recorded config reproduces the file byte for byte
        text2 = cli.run(config, out=str(tmp_path / "rerun.csv"))
        assert text2 == text

    def test_json_report_round_trip(self, tmp_path):
        argv = ["wkb", "--delta-ratio", "100", "--lambda", "6"]
        text = run_cli(argv, tmp_path, "wkb.json")
        config = json.loads(text)["config"]
        text2 = cli.run(config, out=str(tmp_path / "wkb2.json"))
        assert text2 == text


class TestExitCodes:
    def test_invalid_config_is_2(self):
        assert cli.main(["spectrum", "--delta-ratio", "1"]) == cli.EXIT_CONFIG

    def test_numerical_failure_is_3(self):
        r = run_subprocess(["wkb", "--delta-ratio", "1", "--lambda", "0.1"])
        assert r.returncode == cli.EXIT_NUMERICAL
        err = json.loads(r.stderr.splitlines()[-1])
        assert err["error"]["kind"] == "numerical"

    def test_io_failure_is_4(self, tmp_path):
        rc = cli.main(["renorm-gap", "--delta-ratio", "1", "--lambda", "0.1",
                       "--out", str(tmp_path / "missing_dir" / "x.json")])
        assert rc == cli.EXIT_IO

    def test_machine_readable_error(self):
        r = run_subprocess(["spectrum", "--delta-ratio", "1"])
        assert r.returncode == cli.EXIT_CONFIG
        err = json.loads(r.stderr.splitlines()[-1])
        assert err["error"]["kind"] == "config"


class TestOutputs:
    def test_qfunc_json_format(self, tmp_path):
        text = run_cli(["qfunc", "--delta-ratio", "1", "--lambda", "0.2",
                        "--grid-points", "7", "--format", "json"],
                       tmp_path, "q.json")
        report = json.loads(text)
        assert report["kind"] == "Q"
        assert len(report["x_grid"]) == 7
        assert len(report["values"]) == 7 and len(report["values"][0]) == 7
        assert np.isfinite(report["integral"]) and report["integral"] > 0.0

    def test_csv_only_commands_reject_json(self):
        assert cli.main(["spectrum", "--delta-ratio", "1", "--lam-min", "0",
                         "--lam-max", "1", "--lam-steps", "3",
                         "--format", "json"]) == cli.EXIT_CONFIG

    def test_wigner_csv_schema(self, tmp_path):
        text = run_cli(["wigner", "--delta-ratio", "10", "--lambda", "2.5",
                        "--grid-points", "11"], tmp_path, "w.csv")
        meta = parse_metadata(text)
        assert meta["kind"] == "Wigner"
        lines = [l for l in text.splitlines() if not l.startswith("#")]
        assert lines[0] == "X,P,value"
        assert len(lines) - 1 == 121
        values = np.array([float(l.split(",")[2]) for l in lines[1:]])
        assert values.min() < 0.0   # negativity visible even on a coarse grid

    def test_sweep_trajectory_and_report(self, tmp_path):
        out = str(tmp_path / "traj.csv")
        rep = str(tmp_path / "rep.json")
        rc = cli.main(["sweep", "--delta-ratio", "1", "--lambda", "0.2",
                       "--eps-end", "1", "--duration", "6", "--steps", "32",
                       "--samples", "5", "--out", out, "--report", rep])
        assert rc == 0
        meta, columns, rows = read_csv(out)
        assert columns == ["t", "eps", "ground_fidelity", "qubit_purity", "mean_X"]
        assert len(rows) == 5
        report = json.loads(open(rep).read())
        assert 0.0 <= report["fidelity_to_instantaneous_ground"] <= 1.0
        assert report["oscillator_state_class"] in (
            "coherent", "squeezed", "cat_even", "cat_odd", "entangled", "other")

    def test_rates_report_schema(self, tmp_path):
        text = run_cli(["rates", "--delta-ratio", "0.3", "--lambda", "0",
                        "--channel", "sigma_z", "--s0", "0.5"], tmp_path, "r.json")
        report = json.loads(text)
        for key in ("channel", "i", "j", "relaxation", "dephasing", "element_sq",
                    "S_at_gap", "S0"):
            assert key in report
        assert report["element_sq"] == pytest.approx(1.0, abs=1e-9)

    def test_semiclassical_report(self, tmp_path):
        text = run_cli(["semiclassical", "--delta-ratio", "1", "--lambda",
                        str(1.0 / np.sqrt(2.0))], tmp_path, "sc.json")
        report = json.loads(text)
        stable = [s for s in report["solutions"]
                  if s["stability"] == "stable" and s["is_ground_branch"]]
        assert len(stable) == 2
        assert sorted(abs(s["sigma_z"]) for s in stable)[0] == pytest.approx(
            np.sqrt(3) / 2, abs=1e-6)

    def test_adiabatic_qubit_report(self, tmp_path):
        text = run_cli(["adiabatic-qubit", "--delta-ratio", "100", "--lambda", "6"],
                       tmp_path, "aq.json")
        report = json.loads(text)
        assert report["ground"]["is_supercritical"] is True
        assert report["excited"]["x0"] is None
        assert report["ground"]["x0"] > 0.0
