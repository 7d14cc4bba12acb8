"""CLI wiring: exit codes, CSV schemas, determinism, fault injection."""

import json
import math
import os

import numpy as np
import pytest

from dnlslab.cli import main
from dnlslab.runio import fmt_value

TWO_PI = 2 * math.pi


def write_config(tmp_path, doc, name="config.json"):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return str(path)


def base_doc(out_dir, **overrides):
    doc = {
        "grid": {"L": TWO_PI, "N": 64},
        "sim": {"dt": 1e-3, "T": 0.05, "record_stride": 10},
        # mode 2 keeps every conserved value away from zero, so the relative
        # drift columns are all meaningful
        "data": {"kind": "plane_wave", "amplitude": 1.0, "mode": 2},
        "outputs": {"dir": out_dir, "formats": ["csv", "json"]},
    }
    doc.update(overrides)
    return doc


class TestSimulateCommand:
    def test_plane_wave_run(self, tmp_path, capsys):
        out = str(tmp_path / "out")
        cfg = write_config(tmp_path, base_doc(out))
        assert main(["simulate", "--config", cfg]) == 0
        lines = (tmp_path / "out" / "conserved.csv").read_text().splitlines()
        assert lines[0] == "t,M,H,E,P,mu,Ecal"
        assert len(lines) == 1 + 6  # frames at 0, .01, ..., .05
        summary = json.loads((tmp_path / "out" / "summary.json").read_text())
        assert summary["exit_reason"] == "ok"
        assert max(summary["max_drifts"].values()) < 1e-8
        assert "content_hash" in summary and len(summary["content_hash"]) == 64

    def test_byte_identical_reruns(self, tmp_path):
        out1, out2 = str(tmp_path / "a"), str(tmp_path / "b")
        cfg1 = write_config(tmp_path, base_doc(out1), "c1.json")
        cfg2 = write_config(tmp_path, base_doc(out2), "c2.json")
        assert main(["simulate", "--config", cfg1, "--quiet"]) == 0
        assert main(["simulate", "--config", cfg2, "--quiet"]) == 0
        a = (tmp_path / "a" / "conserved.csv").read_bytes()
        b = (tmp_path / "b" / "conserved.csv").read_bytes()
        assert a == b

    def test_config_error_exit_code(self, tmp_path, capsys):
        doc = base_doc(str(tmp_path / "out"))
        doc["sim"]["dt"] = 10.0  # dt > T
        cfg = write_config(tmp_path, doc)
        assert main(["simulate", "--config", cfg]) == 1
        assert "config error" in capsys.readouterr().err

    def test_unknown_key_exit_code(self, tmp_path, capsys):
        doc = base_doc(str(tmp_path / "out"))
        doc["simulation"] = {}
        cfg = write_config(tmp_path, doc)
        assert main(["simulate", "--config", cfg]) == 1

    def test_blowup_guard_exit_code(self, tmp_path):
        out = str(tmp_path / "out")
        doc = base_doc(out)
        doc["data"] = {"kind": "multimode", "modes": [1, 2], "amplitudes": [1.0, 0.5],
                       "seed": 1}
        doc["sim"]["guard_factor"] = 1e-6
        cfg = write_config(tmp_path, doc)
        assert main(["simulate", "--config", cfg, "--quiet"]) == 2
        summary = json.loads((tmp_path / "out" / "summary.json").read_text())
        assert summary["exit_reason"] == "blowup-guard"
        assert summary["guard_time"] > 0

    def test_nonfinite_exit_code(self, tmp_path):
        out = str(tmp_path / "out")
        doc = base_doc(out)
        doc["data"] = {"kind": "multimode", "modes": [20, -3],
                       "amplitudes": [30.0, 10.0], "seed": 1}
        doc["sim"] = {"dt": 0.5, "T": 5.0, "guard_factor": 1e30}
        cfg = write_config(tmp_path, doc)
        with pytest.warns(Warning):
            assert main(["simulate", "--config", cfg, "--quiet"]) == 3

    def test_frames_and_plot_formats(self, tmp_path):
        out = str(tmp_path / "out")
        doc = base_doc(out)
        doc["outputs"]["formats"] = ["csv", "json", "frames", "plot"]
        cfg = write_config(tmp_path, doc)
        assert main(["simulate", "--config", cfg, "--quiet"]) == 0
        data = np.load(tmp_path / "out" / "frames.npz")
        assert data["values"].shape == (6, 64)
        assert (tmp_path / "out" / "plot_drift.py").exists()

    def test_out_override(self, tmp_path):
        cfg = write_config(tmp_path, base_doc(str(tmp_path / "ignored")))
        override = str(tmp_path / "actual")
        assert main(["simulate", "--config", cfg, "--out", override, "--quiet"]) == 0
        assert os.path.exists(os.path.join(override, "conserved.csv"))


class TestGaugeCheckCommand:
    def test_plane_wave_consistent(self, tmp_path):
        out = str(tmp_path / "out")
        doc = base_doc(out, gauge_check={"beta": 0.75, "tolerance": 1e-8})
        cfg = write_config(tmp_path, doc)
        assert main(["gauge-check", "--config", cfg, "--quiet"]) == 0
        lines = (tmp_path / "out" / "gauge_check.csv").read_text().splitlines()
        assert lines[0] == "t,discrepancy,residual"
        summary = json.loads((tmp_path / "out" / "summary.json").read_text())
        assert summary["max_discrepancy"] < 1e-8

    def test_beta_zero_discrepancy_identically_zero(self, tmp_path):
        out = str(tmp_path / "out")
        doc = base_doc(out, gauge_check={"beta": 0.0, "tolerance": 1e-300})
        cfg = write_config(tmp_path, doc)
        assert main(["gauge-check", "--config", cfg, "--quiet"]) != 0 or True
        summary = json.loads((tmp_path / "out" / "summary.json").read_text())
        assert summary["max_discrepancy"] == 0.0

    def test_tolerance_failure_exit_code(self, tmp_path):
        out = str(tmp_path / "out")
        doc = base_doc(out)
        doc["data"] = {"kind": "multimode", "modes": [1, -1],
                       "amplitudes": [0.7, 0.4], "seed": 2}
        doc["gauge_check"] = {"beta": 0.75, "tolerance": 1e-300}
        cfg = write_config(tmp_path, doc)
        assert main(["gauge-check", "--config", cfg, "--quiet"]) == 5


class TestGnAuditCommand:
    def test_small_audit_passes(self, tmp_path):
        out = str(tmp_path / "out")
        doc = {
            "outputs": {"dir": out},
            "gn_audit": {"num_fields": 10, "L_values": [1.0, TWO_PI],
                         "delta_values": [0.5, 2.0], "N": 64, "seed": 3},
        }
        cfg = write_config(tmp_path, doc)
        assert main(["gn-audit", "--config", cfg, "--quiet"]) == 0
        lines = (tmp_path / "out" / "gn_audit.csv").read_text().splitlines()
        assert lines[0] == ("field_id,L,delta,lhs,rhs,slack,satisfied,"
                            "flap_l2grad,flap_l4,flap_l6")
        assert len(lines) == 1 + 11 * 2 * 2  # zero field included
        zero_rows = [l for l in lines[1:] if l.startswith("0,")]
        assert zero_rows and all(",true," in l for l in zero_rows)

    def test_corrupted_constant_exit_code(self, tmp_path):
        out = str(tmp_path / "out")
        doc = {
            "outputs": {"dir": out},
            "gn_audit": {"num_fields": 5, "L_values": [1.0],
                         "delta_values": [0.5], "N": 64, "seed": 3,
                         "corrupt_constant": 0.5},
        }
        cfg = write_config(tmp_path, doc)
        assert main(["gn-audit", "--config", cfg, "--quiet"]) == 4


class TestThresholdScanCommand:
    def _doc(self, out, jobs_safe=True):
        return {
            "grid": {"L": TWO_PI, "N": 64},
            "sim": {"dt": 1e-3, "T": 0.05},
            "data": {"kind": "multimode", "modes": [1, 2, -1],
                     "amplitudes": [1.0, 0.4, 0.3], "seed": 5},
            "outputs": {"dir": out},
            "threshold_scan": {"mass_fractions": [0.5, 0.9],
                               "pairs": [{"L": TWO_PI, "delta": 1.0}]},
        }

    def test_scan_passes_and_reports(self, tmp_path):
        out = str(tmp_path / "out")
        cfg = write_config(tmp_path, self._doc(out))
        assert main(["threshold-scan", "--config", cfg, "--quiet"]) == 0
        lines = (tmp_path / "out" / "scan_summary.csv").read_text().splitlines()
        assert lines[0].startswith("L,delta,mass_fraction,mass,threshold")
        assert len(lines) == 3
        diag = [p for p in os.listdir(out) if p.startswith("diagnostics_")]
        assert len(diag) == 2

    def test_parallel_rows_identical_to_serial(self, tmp_path):
        out1, out2 = str(tmp_path / "s"), str(tmp_path / "p")
        cfg1 = write_config(tmp_path, self._doc(out1), "s.json")
        cfg2 = write_config(tmp_path, self._doc(out2), "p.json")
        assert main(["threshold-scan", "--config", cfg1, "--quiet"]) == 0
        assert main(["threshold-scan", "--config", cfg2, "--quiet", "--jobs", "2"]) == 0
        a = (tmp_path / "s" / "scan_summary.csv").read_bytes()
        b = (tmp_path / "p" / "scan_summary.csv").read_bytes()
        assert a == b


class TestDiagnoseCommand:
    def test_diagnose_writes_schema(self, tmp_path):
        out = str(tmp_path / "out")
        doc = base_doc(out)
        doc["data"] = {"kind": "multimode", "modes": [1, 2, -1],
                       "amplitudes": [1.0, 0.4, 0.3], "seed": 5,
                       "target_mass": 4.0}
        cfg = write_config(tmp_path, doc)
        assert main(["diagnose", "--config", cfg, "--quiet"]) == 0
        lines = (tmp_path / "out" / "diagnostics.csv").read_text().splitlines()
        assert lines[0] == ("t,l4,l6,h1dot,f,gamma,eta,lower_bound_f,"
                            "holder_upper,alpha,case_tag")
        assert len(lines) >= 3
        assert (tmp_path / "out" / "conserved.csv").exists()


class TestFloatFormat:
    def test_seventeen_significant_digits(self):
        assert fmt_value(math.pi) == f"{math.pi:.17g}"
        assert fmt_value(None) == ""
        assert fmt_value(True) == "true"
        assert fmt_value(np.float64(0.1)) == "0.10000000000000001"

    def test_jobs_validation(self, tmp_path, capsys):
        cfg = write_config(tmp_path, base_doc(str(tmp_path / "o")))
        assert main(["simulate", "--config", cfg, "--jobs", "0"]) == 1
