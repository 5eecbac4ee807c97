import csv
import json
import math
import subprocess
import sys

import numpy as np
import pytest

from rs_toolkit.cli import main


def read_csv(path):
    with open(path) as fh:
        schema = fh.readline().strip()
        rows = list(csv.DictReader(fh))
    return schema, rows


class TestVerify:
    def test_single_check(self, capsys):
        assert main(["verify", "--only", "e16", "--q", "0.5"]) == 0
        out = capsys.readouterr().out
        assert "e16" in out and "1/1 checks passed" in out

    def test_unknown_check_id(self, capsys):
        assert main(["verify", "--only", "e999"]) == 2
        assert "no check" in capsys.readouterr().err

    def test_malformed_q(self, capsys):
        assert main(["verify", "--q", "1.2"]) == 2
        assert "q must lie in (0, 1)" in capsys.readouterr().err

    def test_tol_override_forces_failure(self, capsys):
        # residuals are tiny but not zero, so an impossible tolerance fails
        assert main(["verify", "--only", "e4", "--q", "0.5", "--tol", "1e-30"]) == 1

    def test_json_report(self, tmp_path, capsys):
        out = tmp_path / "report.json"
        assert main(["verify", "--only", "e16", "--q", "0.5",
                     "--out", str(out), "--format", "json"]) == 0
        payload = json.loads(out.read_text())
        assert payload and payload[0]["id"] == "e16"
        assert set(payload[0]) == {"id", "eq", "params", "residual", "tol", "pass"}
        assert all(rec["pass"] for rec in payload)

    def test_csv_report(self, tmp_path, capsys):
        out = tmp_path / "report.csv"
        assert main(["verify", "--only", "e29", "--q", "0.4,0.7",
                     "--out", str(out)]) == 0
        schema, rows = read_csv(out)
        assert schema.startswith("# schema=rs-verify")
        assert len(rows) == 2
        assert all(r["pass"] == "true" for r in rows)


class TestFigures:
    def test_fig1_extrema(self, tmp_path, capsys):
        out = tmp_path / "fig1.csv"
        assert main(["figure", "--id", "1", "--out", str(out)]) == 0
        _, rows = read_csv(out)
        data = [(float(r["phi"]), float(r["q"]), float(r["reE"]), float(r["imE"]))
                for r in rows]
        q_max = max(r[1] for r in data)
        top_q = [r for r in data if r[1] == q_max]
        best = max(top_q, key=lambda r: r[2])
        assert best[0] == pytest.approx(0.0, abs=1e-12)
        # the imaginary part concentrates at the seam in the small-q corner
        peak = max(data, key=lambda r: abs(r[3]))
        assert abs(abs(peak[0]) - math.pi) < 1e-9
        assert peak[1] <= 0.1

    def test_fig2_normalisation_and_symmetry(self, tmp_path, capsys):
        out = tmp_path / "fig2.csv"
        assert main(["figure", "--id", "2", "--out", str(out)]) == 0
        _, rows = read_csv(out)
        by_curve = {}
        for r in rows:
            by_curve.setdefault((r["q"], r["n"]), []).append(
                (float(r["phi"]), float(r["psi2"])))
        assert len(by_curve) == 15  # 3 q values x 5 degrees
        for curve in by_curve.values():
            curve.sort()
            phi = np.array([c[0] for c in curve])
            val = np.array([c[1] for c in curve])
            assert np.trapezoid(val, phi) == pytest.approx(1.0, abs=1e-3)
            assert np.max(np.abs(val - val[::-1])) < 1e-10

    def test_fig3_approaches_asymptote(self, tmp_path, capsys):
        out = tmp_path / "fig3.csv"
        assert main(["figure", "--id", "3", "--out", str(out)]) == 0
        _, rows = read_csv(out)
        target = math.cos(math.pi / 3.0)
        for qv in ("0.80000000000000004", "0.84999999999999998", "0.90000000000000002"):
            curve = sorted((float(r["mu2"]), float(r["value"])) for r in rows
                           if r["q"] == qv and r["quantity"] == "meanC")
            assert curve[0][1] == pytest.approx(0.0)
            assert abs(curve[-1][1] - target) < abs(curve[0][1] - target)
            values = [v for _, v in curve]
            assert all(b >= a - 1e-12 for a, b in zip(values, values[1:]))

    def test_fig4_inequality(self, tmp_path, capsys):
        out = tmp_path / "fig4.csv"
        assert main(["figure", "--id", "4", "--out", str(out)]) == 0
        _, rows = read_csv(out)
        assert {r["q"] for r in rows} == {
            "0.80000000000000004", "0.84999999999999998",
            "0.90000000000000002", "0.94999999999999996"}
        for r in rows:
            assert float(r["usym"]) >= float(r["bound"]) - 1e-12
            assert float(r["bound"]) == 0.25

    def test_bad_figure_id(self, capsys):
        assert main(["figure", "--id", "9", "--out", "/tmp/never.csv"]) == 2

    @pytest.mark.parametrize("fig", ["1", "2", "3", "4"])
    def test_byte_stability(self, fig, tmp_path, capsys):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        assert main(["figure", "--id", fig, "--out", str(a)]) == 0
        assert main(["figure", "--id", fig, "--out", str(b)]) == 0
        assert a.read_bytes() == b.read_bytes()


class TestSweep:
    def test_row_count(self, tmp_path, capsys):
        out = tmp_path / "sweep.csv"
        assert main(["sweep", "--quantity", "meanC", "--q", "0.8",
                     "--mu2", "0:2:50", "--theta", "1.0", "--out", str(out)]) == 0
        _, rows = read_csv(out)
        assert len(rows) == 50

    def test_excitation_distribution(self, tmp_path, capsys):
        out = tmp_path / "exc.csv"
        assert main(["sweep", "--quantity", "excitation", "--q", "0.8",
                     "--mu2", "2:2:1", "--nmax", "41", "--out", str(out)]) == 0
        _, rows = read_csv(out)
        assert len(rows) == 41
        total = sum(float(r["prob"]) for r in rows)
        assert total <= 1.0 + 1e-12
        assert total == pytest.approx(1.0, abs=1e-6)

    def test_unknown_quantity(self, capsys):
        assert main(["sweep", "--quantity", "nope", "--q", "0.8",
                     "--mu2", "0:1:3"]) == 2
        assert "unknown sweep quantity" in capsys.readouterr().err

    def test_label_outside_domain(self, capsys):
        assert main(["sweep", "--quantity", "meanC", "--q", "0.5",
                     "--mu2", "0:5:6"]) == 2

    def test_json_output(self, tmp_path, capsys):
        out = tmp_path / "sweep.json"
        assert main(["sweep", "--quantity", "u_sym", "--q", "0.9",
                     "--mu2", "1:2:3", "--out", str(out),
                     "--format", "json"]) == 0
        payload = json.loads(out.read_text())
        assert len(payload) == 3
        assert all(rec["value"] >= 0.25 for rec in payload)

    def test_bad_range(self, capsys):
        assert main(["sweep", "--quantity", "meanC", "--q", "0.8",
                     "--mu2", "0-1-5"]) == 2


def test_console_script_installed():
    out = subprocess.run(["rs-toolkit", "verify", "--only", "e16", "--q", "0.5"],
                         capture_output=True, text=True)
    assert out.returncode == 0
    assert "1/1 checks passed" in out.stdout


def test_thread_cap_respected(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv("RS_TOOLKIT_THREADS", "1")
    a = tmp_path / "a.csv"
    assert main(["figure", "--id", "4", "--out", str(a)]) == 0
    monkeypatch.setenv("RS_TOOLKIT_THREADS", "4")
    b = tmp_path / "b.csv"
    assert main(["figure", "--id", "4", "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_bad_thread_env(monkeypatch, capsys):
    monkeypatch.setenv("RS_TOOLKIT_THREADS", "zero")
    assert main(["figure", "--id", "4", "--out", "/tmp/never2.csv"]) == 2
