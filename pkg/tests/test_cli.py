import json
import math

import pytest

from chamber import cli
from chamber.cli import ConfigError, main, validate
from chamber.constants import BOHR_RADIUS


class TestValidate:
    def test_defaults_are_injected(self):
        cfg = validate("interfere", {})
        assert cfg["hours"] == 1.0
        assert cfg["n_nuclei"] == 1000
        assert cfg["mean_life"] is None  # auto-calibrated
        assert cfg["mirror_mass"] == 1.0
        assert cfg["sigma0"] == BOHR_RADIUS

    def test_negative_mean_life_names_constraint(self):
        with pytest.raises(ConfigError, match="mean_life > 0"):
            validate("neutron", {"mean_life": "-5"})

    def test_unknown_key_gets_nearest_hint(self):
        with pytest.raises(ConfigError, match="wavelength"):
            validate("interfere", {"wavelenght": "1e-4"})

    def test_unknown_experiment(self):
        with pytest.raises(ConfigError):
            validate("teleport", {})

    def test_unit_suffixes_and_named_lengths(self):
        cfg = validate("packet-spread", {"mass": "1g", "sigma0": "bohr"})
        assert cfg["mass"] == 1.0
        assert cfg["sigma0"] == BOHR_RADIUS

    def test_non_numeric_rejected(self):
        with pytest.raises(ConfigError, match="trials"):
            validate("montecarlo", {"trials": "many"})


class TestExitCodes:
    def test_success(self, tmp_path, capsys):
        assert main(["neutron", "--out", str(tmp_path)]) == 0
        assert "decayed" in capsys.readouterr().out

    def test_config_error(self, tmp_path, capsys):
        assert main(["neutron", "--mean-life", "-1", "--out", str(tmp_path)]) == 2
        assert "mean_life" in capsys.readouterr().err

    def test_bad_config_file(self, tmp_path):
        bad = tmp_path / "cfg.json"
        bad.write_text("[1, 2]")
        assert main(["neutron", "--config", str(bad), "--out", str(tmp_path)]) == 2


class TestExperiments:
    def test_neutron_summary(self, tmp_path):
        main(["neutron", "--out", str(tmp_path)])
        summary = json.loads((tmp_path / "summary.json").read_text())
        assert summary["results"]["survival"] == pytest.approx(math.exp(-600.0 / 887.0))
        assert 0.45 <= summary["results"]["decayed"] <= 0.55
        assert summary["config"]["mean_life"] == 887.0
        assert "version" in summary and "seed" in summary

    def test_decay_stats(self, tmp_path):
        assert main(["decay-stats", "--trials", "300", "--n-nuclei", "50",
                     "--out", str(tmp_path)]) == 0
        summary = json.loads((tmp_path / "summary.json").read_text())
        results = summary["results"]
        assert results["survival_norm"] == pytest.approx(0.5, abs=1e-12)
        sigma = results["mc_binomial_sigma"]
        assert abs(results["mc_decay_fraction"] - 0.5) < 4.0 * sigma
        lines = (tmp_path / "decay_stats.csv").read_text().splitlines()
        assert lines[0] == "trial,n_decays,first_decay_time"
        assert len(lines) == 301

    def test_packet_spread(self, tmp_path):
        assert main(["packet-spread", "--mass", "1g", "--sigma0", "bohr",
                     "--out", str(tmp_path)]) == 0
        results = json.loads((tmp_path / "summary.json").read_text())["results"]
        assert results["doubling_time_s"] == pytest.approx(9.2e10, rel=0.01)
        assert 2.5e3 < results["doubling_time_years"] < 3.3e3
        assert results["dk"] < 1e-16

    def test_overlap_scan(self, tmp_path):
        assert main(["overlap-scan", "--out", str(tmp_path)]) == 0
        results = json.loads((tmp_path / "summary.json").read_text())["results"]
        assert results["ratio_cubed"] == pytest.approx(1e-42, rel=1e-9)
        assert results["gaussian_zero_separation"] == pytest.approx(2.8e-21, rel=0.02)

    def test_interfere_unitary(self, tmp_path):
        assert main(["interfere", "--mode", "unitary", "--hours", "1",
                     "--out", str(tmp_path)]) == 0
        results = json.loads((tmp_path / "summary.json").read_text())["results"]
        assert results["visibility"] >= 0.99
        assert results["branch_norms"] == pytest.approx([0.5, 0.5], abs=1e-12)
        assert results["overlap_log_modulus"] < -1e12
        lines = (tmp_path / "pattern.csv").read_text().splitlines()
        assert lines[0] == "position,intensity"
        assert len(lines) == 2002

    def test_interfere_collapse(self, tmp_path):
        assert main(["interfere", "--mode", "collapse", "--trials", "400",
                     "--out", str(tmp_path)]) == 0
        results = json.loads((tmp_path / "summary.json").read_text())["results"]
        assert results["visibility"] <= 0.02
        assert abs(results["collapsed_fraction"] - 0.5) < 4.0 * math.sqrt(0.25 / 400)

    def test_interfere_half_reference(self, tmp_path):
        assert main(["interfere", "--mode", "half", "--out", str(tmp_path)]) == 0
        results = json.loads((tmp_path / "summary.json").read_text())["results"]
        assert results["visibility"] >= 0.99

    def test_montecarlo_outcomes(self, tmp_path):
        assert main(["montecarlo", "--trials", "200", "--out", str(tmp_path)]) == 0
        lines = (tmp_path / "outcomes.csv").read_text().splitlines()
        assert lines[0] == "seed,decayed,decay_time,detect_time,final_config"
        assert len(lines) == 201
        results = json.loads((tmp_path / "summary.json").read_text())["results"]
        total = results["fraction_up"] + results["fraction_down"] + results["fraction_moving"]
        assert total == pytest.approx(1.0, abs=1e-12)

    def test_density(self, tmp_path):
        assert main(["density", "--members", "100", "--seed", "6",
                     "--out", str(tmp_path)]) == 0
        results = json.loads((tmp_path / "summary.json").read_text())["results"]
        assert 0.0 <= results["visibility"] <= 1.0
        assert (tmp_path / "mixed_pattern.csv").exists()

    def test_config_file_with_flag_override(self, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"mean_life": 887.0, "time": 60.0}))
        out = tmp_path / "out"
        assert main(["neutron", "--config", str(cfg), "--time", "600",
                     "--out", str(out)]) == 0
        summary = json.loads((out / "summary.json").read_text())
        assert summary["config"]["time"] == 600.0


class TestReproducibility:
    @pytest.mark.parametrize("argv", [
        ["interfere", "--mode", "unitary", "--phase-policy", "random", "--seed", "3"],
        ["interfere", "--mode", "collapse", "--trials", "300", "--seed", "3"],
        ["decay-stats", "--trials", "200", "--seed", "9"],
        ["montecarlo", "--trials", "150", "--seed", "9"],
        ["density", "--members", "64", "--seed", "2"],
    ])
    def test_byte_identical_reruns(self, tmp_path, argv):
        out_a, out_b = tmp_path / "a", tmp_path / "b"
        assert main(argv + ["--out", str(out_a)]) == 0
        assert main(argv + ["--out", str(out_b)]) == 0
        for file_a in sorted(out_a.iterdir()):
            file_b = out_b / file_a.name
            assert file_a.read_bytes() == file_b.read_bytes()
