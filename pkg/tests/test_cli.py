"""Tests for the command line surface."""

import json
import re

import pytest

from rmtlab.cli import main


def strip_timestamp(text: str) -> str:
    return re.sub(r"# timestamp = .*", "", text)


class TestEqm:
    def test_semicircle_json(self, tmp_path):
        out = tmp_path / "eqm.json"
        rc = main(["eqm", "--potential", "0,0,0.5", "--out", str(out)])
        assert rc == 0
        obj = json.loads(out.read_text())
        assert obj["results"]["support"][0] == pytest.approx(-2.0, abs=1e-10)
        assert obj["results"]["support"][1] == pytest.approx(2.0, abs=1e-10)
        assert obj["config"]["potential"] == "0,0,0.5"
        assert obj["results"]["classification"] == []

    def test_multicut_exit3(self, tmp_path):
        out = tmp_path / "eqm.json"
        rc = main(["eqm", "--potential", "0,0,-2,0,0.25", "--out", str(out)])
        assert rc == 3
        assert not out.exists()

    def test_malformed_potential_exit2(self, tmp_path):
        out = tmp_path / "eqm.json"
        rc = main(["eqm", "--potential", "0,zap,1", "--out", str(out)])
        assert rc == 2
        assert not out.exists()


class TestKernel:
    def test_sine_table(self, tmp_path):
        out = tmp_path / "k.csv"
        rc = main(["kernel", "--family", "sine", "--grid=-3:3:11",
                   "--out", str(out)])
        assert rc == 0
        lines = [ln for ln in out.read_text().splitlines() if not ln.startswith("#")]
        assert lines[0] == "x,y,value"
        assert len(lines) == 1 + 121
        for ln in lines[1:]:
            x, y, v = (float(t) for t in ln.split(","))
            if x == y:
                assert v == 1.0

    def test_matrix_family_columns(self, tmp_path):
        out = tmp_path / "k4.csv"
        rc = main(["kernel", "--family", "sine_beta4", "--grid", "0:1:3",
                   "--out", str(out)])
        assert rc == 0
        header = [ln for ln in out.read_text().splitlines()
                  if not ln.startswith("#")][0]
        assert header == "x,y,k11,k12,k21,k22"

    def test_bad_family_parameters_exit2(self, tmp_path):
        rc = main(["kernel", "--family", "bessel_hard", "--grid", "1:2:3",
                   "--out", str(tmp_path / "x.csv")])
        assert rc == 2

    def test_bad_grid_exit2(self, tmp_path):
        rc = main(["kernel", "--family", "sine", "--grid", "3:-3:11",
                   "--out", str(tmp_path / "x.csv")])
        assert rc == 2


class TestOppoly:
    def test_recurrence_table(self, tmp_path):
        out = tmp_path / "t.csv"
        rc = main(["oppoly", "--potential", "0,0,0.5", "--N", "16",
                   "--nmax", "12", "--out", str(out)])
        assert rc == 0
        lines = [ln for ln in out.read_text().splitlines() if not ln.startswith("#")]
        assert lines[0] == "k,a,b,gamma_sq"
        assert len(lines) == 1 + 13
        k, a, b, g = lines[4].split(",")
        assert float(a) == pytest.approx(3.0 / 16.0, abs=1e-11)

    def test_kernel_grid_emission(self, tmp_path):
        out = tmp_path / "t.csv"
        kout = tmp_path / "kn.csv"
        rc = main(["oppoly", "--potential", "0,0,0.5", "--N", "8",
                   "--nmax", "8", "--out", str(out),
                   "--kernel-n", "8", "--kernel-grid=-1:1:5",
                   "--kernel-out", str(kout)])
        assert rc == 0
        lines = [ln for ln in kout.read_text().splitlines() if not ln.startswith("#")]
        assert len(lines) == 1 + 25


class TestConverge:
    def test_bulk_errors_decrease(self, tmp_path):
        out = tmp_path / "conv.csv"
        rc = main(["converge", "--potential", "0,0,0.5", "--mode", "bulk",
                   "--n", "8,16,32", "--workers", "1", "--out", str(out)])
        assert rc == 0
        lines = [ln for ln in out.read_text().splitlines() if not ln.startswith("#")]
        assert lines[0] == "n,mode,sup_error,l1_error,runtime_seconds"
        sups = [float(ln.split(",")[2]) for ln in lines[1:]]
        assert len(sups) == 3
        assert sups[0] > sups[1] > sups[2]

    def test_worker_independence(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        for path, workers in [(a, "1"), (b, "2")]:
            rc = main(["converge", "--potential", "0,0,0.5", "--mode", "bulk",
                       "--n", "8,16", "--workers", workers, "--out", str(path)])
            assert rc == 0

        def errs(p):
            return [ln.split(",")[2] for ln in p.read_text().splitlines()
                    if ln and not ln.startswith("#") and not ln.startswith("n,")]

        assert errs(a) == errs(b)


class TestRh:
    def test_diagnostics(self, tmp_path):
        out = tmp_path / "rh.csv"
        rc = main(["rh", "--potential", "0,0,0.5", "--n", "16,32",
                   "--out", str(out)])
        assert rc == 0
        lines = [ln for ln in out.read_text().splitlines() if not ln.startswith("#")]
        rows = [ln.split(",") for ln in lines[1:]]
        checks = {r[0] for r in rows}
        assert {"det_M_minus_1", "det_A_minus_1", "connection_identity",
                "A_jump_0", "A_jump_pi", "matching_sup", "a_inf"} <= checks
        for r in rows:
            if r[0].startswith("det_") or r[0] == "connection_identity":
                assert float(r[2]) <= 1e-8
        m = {int(r[1]): float(r[2]) for r in rows if r[0] == "matching_sup"}
        assert m[32] < m[16]


class TestSample:
    def test_gaussian_outputs(self, tmp_path):
        out = tmp_path / "batch.bin"
        rc = main(["sample", "--beta", "2", "--n", "16", "--count", "20",
                   "--seed", "7", "--bins", "10", "--range=-2.2:2.2:0",
                   "--window", "0:0.5:0.3183", "--csv", "--out", str(out)])
        assert rc == 0
        from rmtlab.mc import SampleBatch

        batch = SampleBatch.from_bytes(out.read_bytes())
        assert batch.n == 16 and batch.count == 20 and batch.seed == 7
        assert (tmp_path / "batch_hist.csv").exists()
        assert (tmp_path / "batch_spacing.csv").exists()
        assert (tmp_path / "batch.csv").exists()

    def test_metropolis_requires_potential(self, tmp_path):
        rc = main(["sample", "--beta", "2", "--n", "8", "--count", "4",
                   "--seed", "1", "--metropolis", "--out",
                   str(tmp_path / "b.bin")])
        assert rc == 2

    def test_byte_identical_reruns(self, tmp_path):
        # same config, same output path, run twice: identical up to the
        # timestamp header line
        out = tmp_path / "run.bin"
        texts = []
        for _ in range(2):
            rc = main(["sample", "--beta", "1", "--n", "8", "--count", "10",
                       "--seed", "3", "--bins", "8", "--range=-2.5:2.5:0",
                       "--out", str(out)])
            assert rc == 0
            hist = (tmp_path / "run_hist.csv").read_text()
            texts.append((out.read_bytes(), strip_timestamp(hist)))
        assert texts[0] == texts[1]


class TestHelp:
    @pytest.mark.parametrize("cmd", ["eqm", "kernel", "oppoly", "converge",
                                     "rh", "sample"])
    def test_subcommand_help_exits_zero(self, cmd, capsys):
        rc = main([cmd, "--help"])
        assert rc == 0
        out = capsys.readouterr().out
        assert "--out" in out

    def test_top_help(self, capsys):
        assert main(["--help"]) == 0
        assert "eqm" in capsys.readouterr().out
