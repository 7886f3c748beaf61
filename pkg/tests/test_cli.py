import json

import numpy as np
import pytest

from bogoent.bogo import BogoCoeffs, write_coeffs
from bogoent.cli import main


def write_config(tmp_path, name, payload):
    path = tmp_path / name
    path.write_text(json.dumps(payload))
    return str(path)


def read_csv(path):
    meta, header, rows = [], None, []
    for line in path.read_text().splitlines():
        if line.startswith("#"):
            meta.append(line)
        elif header is None:
            header = line.split(",")
        else:
            rows.append([float(v) for v in line.split(",")])
    return meta, header, np.array(rows)


@pytest.fixture
def cavity_config(tmp_path):
    # cutoff 30 keeps the u = 0 truncation leakage below 1e-10 in N/h
    out = tmp_path / "cavity.csv"
    cfg = write_config(
        tmp_path,
        "cavity.json",
        {
            "h": 1e-3,
            "cutoff": 30,
            "modes": [1, 2],
            "squeezings": [0.0, 1.0],
            "u_grid": {"start": 0.0, "stop": 1.0, "num": 9},
            "out": str(out),
        },
    )
    return cfg, out


class TestCavityCommand:
    def test_runs_and_writes_rows(self, cavity_config):
        cfg, out = cavity_config
        assert main(["cavity", "--config", cfg]) == 0
        meta, header, rows = read_csv(out)
        assert any("bogoent" in line for line in meta)
        assert any("config-sha256" in line for line in meta)
        assert header[0] == "u"
        assert rows.shape[0] == 9

    def test_squeezed_column_dominates(self, cavity_config):
        cfg, out = cavity_config
        main(["cavity", "--config", cfg])
        _, header, rows = read_csv(out)
        e0 = rows[:, header.index("N_over_h_leading[s=0]")]
        e1 = rows[:, header.index("N_over_h_leading[s=1]")]
        # the leading-order ordering is exact (equality where the
        # enhancement term vanishes, e.g. u = 1/2 for this pair)
        assert np.all(e1 >= e0 - 1e-15)
        n0 = rows[:, header.index("N_over_h_full[s=0]")]
        n1 = rows[:, header.index("N_over_h_full[s=1]")]
        # full columns carry O(h^2) corrections on top of the leading-order
        # curves, i.e. O(h) in N/h; mixedness can push the squeezed column
        # below by ~0.14 h exactly where the leading enhancement is zero
        assert np.all(n1 >= n0 - 1e-3)

    def test_u_zero_row_vanishes(self, cavity_config):
        cfg, out = cavity_config
        main(["cavity", "--config", cfg])
        _, header, rows = read_csv(out)
        for name in header:
            if name.startswith("N_over_h"):
                assert abs(rows[0, header.index(name)]) <= 1e-10

    def test_row_invariants(self, cavity_config):
        cfg, out = cavity_config
        main(["cavity", "--config", cfg])
        _, header, rows = read_csv(out)
        for name in header:
            col = rows[:, header.index(name)]
            if name.startswith("N_over_h"):
                assert np.all(col >= 0)
            if name.startswith("det_sigma"):
                assert np.all(col >= 1 - 1e-10)

    def test_byte_identical_reruns(self, cavity_config, tmp_path):
        cfg, out = cavity_config
        main(["cavity", "--config", cfg])
        first = out.read_bytes()
        main(["cavity", "--config", cfg])
        assert out.read_bytes() == first

    def test_threads_do_not_change_output(self, cavity_config):
        cfg, out = cavity_config
        main(["cavity", "--config", cfg])
        serial = out.read_bytes()
        main(["cavity", "--config", cfg, "--threads", "4"])
        assert out.read_bytes() == serial

    def test_decreasing_grid_exit_2(self, tmp_path):
        cfg = write_config(
            tmp_path,
            "bad.json",
            {
                "h": 1e-3,
                "modes": [1, 2],
                "squeezings": [0.0],
                "u_grid": [0.5, 0.4],
                "out": str(tmp_path / "x.csv"),
            },
        )
        assert main(["cavity", "--config", cfg]) == 2

    def test_unknown_key_exit_2(self, tmp_path):
        cfg = write_config(
            tmp_path,
            "bad.json",
            {
                "h": 1e-3,
                "modes": [1, 2],
                "squeezings": [0.0],
                "u_grid": [0.0, 0.5],
                "out": str(tmp_path / "x.csv"),
                "typo_key": 1,
            },
        )
        assert main(["cavity", "--config", cfg]) == 2

    def test_bad_h_exit_2(self, tmp_path):
        cfg = write_config(
            tmp_path,
            "bad.json",
            {
                "h": 2.5,
                "modes": [1, 2],
                "squeezings": [0.0],
                "u_grid": [0.0, 0.5],
                "out": str(tmp_path / "x.csv"),
            },
        )
        assert main(["cavity", "--config", cfg]) == 2

    def test_cutoff_flag_overrides(self, tmp_path):
        out = tmp_path / "c.csv"
        cfg = write_config(
            tmp_path,
            "c.json",
            {
                "h": 1e-3,
                "cutoff": 8,
                "modes": [1, 6],
                "squeezings": [0.0],
                "u_grid": [0.2],
                "out": str(out),
            },
        )
        assert main(["cavity", "--config", cfg, "--cutoff", "4"]) == 2  # pair > cutoff
        assert main(["cavity", "--config", cfg, "--cutoff", "12"]) == 0

    def test_missing_out_exit_2(self, tmp_path):
        cfg = write_config(
            tmp_path,
            "noout.json",
            {"h": 1e-3, "modes": [1, 2], "squeezings": [0.0], "u_grid": [0.1]},
        )
        assert main(["cavity", "--config", cfg]) == 2


class TestFrwCommand:
    def test_grid_run(self, tmp_path):
        out = tmp_path / "frw.csv"
        cfg = write_config(
            tmp_path,
            "frw.json",
            {
                "epsilon": 1.0,
                "rho": 1.0,
                "mass": 1.0,
                "k_grid": {"start": 0.5, "stop": 2.0, "num": 4},
                "out": str(out),
            },
        )
        assert main(["frw", "--config", cfg]) == 0
        _, header, rows = read_csv(out)
        assert header == ["k", "beta_sq", "nu_minus", "negativity"]
        assert rows.shape == (4, 4)
        assert np.all(rows[:, 3] >= 0)

    def test_epsilon_zero_grid_all_zero(self, tmp_path):
        out = tmp_path / "frw0.csv"
        cfg = write_config(
            tmp_path,
            "frw0.json",
            {
                "epsilon": 0.0,
                "rho": 1.0,
                "mass": 1.0,
                "k_grid": [0.5, 1.0, 1.5],
                "out": str(out),
            },
        )
        assert main(["frw", "--config", cfg]) == 0
        _, header, rows = read_csv(out)
        assert np.all(rows[:, header.index("negativity")] == 0.0)

    def test_single_k(self, tmp_path):
        out = tmp_path / "frw1.csv"
        cfg = write_config(
            tmp_path,
            "frw1.json",
            {"epsilon": 1.0, "rho": 1.0, "mass": 1.0, "k": 1.0, "out": str(out)},
        )
        assert main(["frw", "--config", cfg]) == 0
        _, _, rows = read_csv(out)
        assert rows[0, 1] == pytest.approx(9.791576576478963e-05, rel=1e-12)

    def test_both_k_and_grid_rejected(self, tmp_path):
        cfg = write_config(
            tmp_path,
            "bad.json",
            {"epsilon": 1.0, "rho": 1.0, "mass": 1.0, "k": 1.0, "k_grid": [1.0],
             "out": "x.csv"},
        )
        assert main(["frw", "--config", cfg]) == 2

    def test_determinism(self, tmp_path):
        out = tmp_path / "frw.csv"
        cfg = write_config(
            tmp_path,
            "frw.json",
            {"epsilon": 1.0, "rho": 1.0, "mass": 1.0, "k_grid": [0.5, 1.0],
             "out": str(out)},
        )
        main(["frw", "--config", cfg])
        first = out.read_bytes()
        main(["frw", "--config", cfg])
        assert out.read_bytes() == first


def identity_coeff_file(tmp_path, n=3):
    path = tmp_path / "identity.coeffs"
    write_coeffs(BogoCoeffs(tuple(range(1, n + 1)), np.eye(n), np.zeros((n, n)), h=0.0), path)
    return str(path)


def squeezer_coeff_file(tmp_path, r=0.5):
    path = tmp_path / "squeezer.coeffs"
    c = BogoCoeffs(
        (1, 2), np.cosh(r) * np.eye(2), np.sinh(r) * np.array([[0, 1], [1, 0]]), h=1.0
    )
    write_coeffs(c, path)
    return str(path)


class TestCheckCommand:
    def test_identity_file_passes(self, tmp_path, capsys):
        cfg = write_config(tmp_path, "chk.json", {"coeffs": identity_coeff_file(tmp_path)})
        assert main(["check", "--config", cfg]) == 0
        out = capsys.readouterr().out
        assert "normalization_residual = 0" in out
        assert "passed = True" in out

    def test_violating_file_exit_3(self, tmp_path):
        path = tmp_path / "bad.coeffs"
        write_coeffs(BogoCoeffs((1,), 2.0 * np.eye(1), np.zeros((1, 1)), h=0.0), path)
        cfg = write_config(tmp_path, "chk.json", {"coeffs": str(path), "tol": 1e-10})
        assert main(["check", "--config", cfg]) == 3

    def test_malformed_file_exit_2(self, tmp_path):
        path = tmp_path / "junk.coeffs"
        path.write_text("garbage\n")
        cfg = write_config(tmp_path, "chk.json", {"coeffs": str(path)})
        assert main(["check", "--config", cfg]) == 2


class TestApplyCommand:
    def test_identity_coefficients_no_entanglement(self, tmp_path, capsys):
        cfg = write_config(
            tmp_path,
            "apply.json",
            {
                "coeffs": identity_coeff_file(tmp_path),
                "squeezings": [0.7, 0.7, 0.0],
                "modes": [1, 2],
            },
        )
        assert main(["apply", "--config", cfg]) == 0
        out = capsys.readouterr().out
        neg = float(out.split("negativity = ")[1].splitlines()[0])
        assert neg <= 1e-12

    def test_two_mode_squeezer_entangles(self, tmp_path, capsys):
        cfg = write_config(
            tmp_path,
            "apply.json",
            {
                "coeffs": squeezer_coeff_file(tmp_path, r=0.5),
                "squeezings": [0.0, 0.0],
                "modes": [1, 2],
            },
        )
        assert main(["apply", "--config", cfg]) == 0
        out = capsys.readouterr().out
        nu = float(out.split("nu_minus = ")[1].splitlines()[0])
        assert nu == pytest.approx(np.exp(-1.0), rel=1e-10)

    def test_csv_output(self, tmp_path):
        out = tmp_path / "apply.csv"
        cfg = write_config(
            tmp_path,
            "apply.json",
            {
                "coeffs": squeezer_coeff_file(tmp_path),
                "modes": [1, 2],
                "out": str(out),
            },
        )
        assert main(["apply", "--config", cfg]) == 0
        _, header, rows = read_csv(out)
        assert header[:2] == ["k", "kp"]
        assert rows.shape[0] == 1

    def test_wrong_squeezing_length_exit_2(self, tmp_path):
        cfg = write_config(
            tmp_path,
            "apply.json",
            {
                "coeffs": identity_coeff_file(tmp_path),
                "squeezings": [0.1],
                "modes": [1, 2],
            },
        )
        assert main(["apply", "--config", cfg]) == 2

    def test_unknown_mode_exit_2(self, tmp_path):
        cfg = write_config(
            tmp_path,
            "apply.json",
            {"coeffs": identity_coeff_file(tmp_path), "modes": [1, 9]},
        )
        assert main(["apply", "--config", cfg]) == 2


class TestCommonErrors:
    def test_missing_config_file(self):
        assert main(["frw", "--config", "/nonexistent/cfg.json"]) == 2

    def test_missing_coefficient_file(self, tmp_path):
        cfg = write_config(
            tmp_path, "chk.json", {"coeffs": str(tmp_path / "absent.coeffs")}
        )
        assert main(["check", "--config", cfg]) == 2

    def test_unwritable_output(self, cavity_config):
        cfg, _ = cavity_config
        assert main(["cavity", "--config", cfg, "--out", "/nonexistent/dir/x.csv"]) == 2

    def test_invalid_json(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{not json")
        assert main(["frw", "--config", str(path)]) == 2

    def test_bad_threads(self, cavity_config):
        cfg, _ = cavity_config
        assert main(["cavity", "--config", cfg, "--threads", "0"]) == 2
