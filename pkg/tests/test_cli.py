import json
import math

import pytest

from gicbounds import TwoUserChannel, tin_rates
from gicbounds.cli import main
from gicbounds.config import (
    ConfigError,
    SweepSpec,
    db_to_linear,
    linear_to_db,
    load_channel_config,
)

FIG1_ARGS = ["--a", "0.04", "--b", "0.09", "--p1", "10", "--p2", "20"]


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


class TestClassifyCommand:
    def test_noisy_channel(self, capsys):
        code, out, _ = run(capsys, "classify", *FIG1_ARGS)
        assert code == 0
        payload = json.loads(out)
        assert payload["kind"] == "NOISY_INTERFERENCE"
        assert payload["sum_capacity_bits"] == pytest.approx(3.1198, abs=5e-5)
        assert payload["certificate"]["rho1"] > 0

    def test_trivial_channel(self, capsys):
        code, out, _ = run(capsys, "classify", "--a", "0", "--b", "0", "--p1", "1", "--p2", "1")
        assert code == 0
        payload = json.loads(out)
        assert payload["kind"] == "ZIC_NOISY"
        assert payload["sum_capacity_bits"] == pytest.approx(1.0, abs=1e-12)

    def test_unknown_exit_zero(self, capsys):
        code, out, _ = run(capsys, "classify", "--a", "0.5", "--b", "0.5", "--p1", "100", "--p2", "100")
        assert code == 0
        assert json.loads(out)["kind"] == "UNKNOWN"

    def test_db_gains(self, capsys):
        a_db = 10 * math.log10(0.04)
        b_db = 10 * math.log10(0.09)
        code, out, _ = run(
            capsys, "classify", "--a", repr(a_db), "--b", repr(b_db),
            "--p1", "10", "--p2", "20", "--db",
        )
        assert code == 0
        payload = json.loads(out)
        assert payload["sum_capacity_bits"] == pytest.approx(
            tin_rates(TwoUserChannel(0.04, 0.09, 10, 20)).sum, rel=1e-9
        )

    def test_m_user_config(self, capsys, tmp_path):
        cfg = tmp_path / "ch3.json"
        cfg.write_text(json.dumps({
            "gains": [[1, 0.05, 0.05], [0.05, 1, 0.05], [0.05, 0.05, 1]],
            "powers": [5, 5, 5],
            "units": "linear",
        }))
        code, out, _ = run(capsys, "classify", "--config", str(cfg))
        assert code == 0
        payload = json.loads(out)
        assert payload["feasible"] is True
        assert payload["sum_capacity_bits"] == pytest.approx(3.173, abs=5e-4)

    def test_two_user_matrix_config(self, capsys, tmp_path):
        cfg = tmp_path / "ch2.json"
        cfg.write_text(json.dumps({
            "gains": [[1, 0.09], [0.04, 1]],
            "powers": [10, 20],
        }))
        code, out, _ = run(capsys, "classify", "--config", str(cfg))
        assert code == 0
        assert json.loads(out)["kind"] == "NOISY_INTERFERENCE"

    @pytest.mark.parametrize(
        "argv",
        [
            ["classify", "--a", "0.1", "--b", "0.1", "--p1", "1"],  # missing p2
            ["classify", "--a", "-1", "--b", "0", "--p1", "1", "--p2", "1"],
            ["classify"],
            ["classify", "--a", "x", "--b", "0", "--p1", "1", "--p2", "1"],
        ],
    )
    def test_bad_input_exit_one(self, capsys, argv):
        code, _, err = run(capsys, *argv)
        assert code == 1
        assert err


class TestRegionCommand:
    def test_csv_shape_and_determinism(self, capsys, tmp_path):
        out1, out2 = tmp_path / "r1.csv", tmp_path / "r2.csv"
        args = ["region", *FIG1_ARGS, "--mu-grid", "5", "--eta-grid", "3"]
        assert run(capsys, *args, "--out", str(out1))[0] == 0
        assert run(capsys, *args, "--out", str(out2))[0] == 0
        assert out1.read_bytes() == out2.read_bytes()
        assert b"\r" not in out1.read_bytes()  # LF line endings only
        lines = out1.read_text().splitlines()
        assert lines[0] == "r1_bits,r2_bits,kind"
        kinds = {row.split(",")[2] for row in lines[1:]}
        assert kinds == {"inner", "outer"}

    def test_csv_roundtrip_and_tangency(self, capsys, tmp_path):
        out = tmp_path / "region.csv"
        code, _, _ = run(
            capsys, "region", *FIG1_ARGS,
            "--mu-grid", "9", "--eta-grid", "3", "--out", str(out),
        )
        assert code == 0
        rows = [r.split(",") for r in out.read_text().splitlines()[1:]]
        outer = [(float(x), float(y)) for x, y, k in rows if k == "outer"]
        support = max(x + y for x, y in outer)
        assert support == pytest.approx(tin_rates(TwoUserChannel(0.04, 0.09, 10, 20)).sum, abs=1e-6)
        # re-parsing reproduces the in-memory vertices exactly
        from gicbounds import build_outer_region

        region = build_outer_region(TwoUserChannel(0.04, 0.09, 10, 20), 9, 3)
        assert outer == [(p.r1, p.r2) for p in region.boundary]

    def test_toy_region_csv(self):
        from gicbounds import RateRegion
        from gicbounds.cli import boundary_csv

        square = RateRegion((), ((1.0, 0.0, 1.0), (0.0, 1.0, 1.0)))
        text = boundary_csv({"outer": square.boundary})
        assert text.splitlines() == [
            "r1_bits,r2_bits,kind",
            "0,1,outer",
            "1,1,outer",
            "1,0,outer",
        ]

    def test_svg_output(self, capsys, tmp_path):
        svg = tmp_path / "region.svg"
        code, _, _ = run(
            capsys, "region", *FIG1_ARGS, "--mu-grid", "5", "--eta-grid", "2",
            "--out", str(tmp_path / "r.csv"), "--svg", str(svg),
        )
        assert code == 0
        text = svg.read_text()
        assert text.startswith("<svg") and text.count("<polyline") == 2

    def test_regime_violation_exit_one(self, capsys):
        code, _, err = run(
            capsys, "region", "--a", "1.5", "--b", "0.5", "--p1", "1", "--p2", "1"
        )
        assert code == 1 and err


class TestSweepCommand:
    def test_two_point_sweep(self, capsys):
        code, out, _ = run(
            capsys, "sweep", *FIG1_ARGS, "--param", "p1",
            "--from", "1", "--to", "2", "--points", "2", "--metric", "sum-tin",
        )
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "p1,sum-tin"
        assert len(lines) == 3

    def test_csv_values_reparse_exactly(self, capsys):
        code, out, _ = run(
            capsys, "sweep", *FIG1_ARGS, "--param", "p2",
            "--from", "0.5", "--to", "8", "--points", "5", "--metric", "sum-tin",
        )
        assert code == 0
        for row in out.strip().splitlines()[1:]:
            p2_txt, val_txt = row.split(",")
            ch = TwoUserChannel(0.04, 0.09, 10, float(p2_txt))
            assert float(val_txt) == tin_rates(ch).sum

    def test_verdict_sweep_threshold(self, capsys):
        code, out, _ = run(
            capsys, "sweep", "--a", "0.1", "--b", "0.1", "--p1", "5000", "--p2", "5000",
            "--param", "symmetric-a", "--from", "1e-3", "--to", "1.0",
            "--points", "13", "--log", "--metric", "verdict",
        )
        assert code == 0
        rows = [r.split(",") for r in out.strip().splitlines()[1:]]
        threshold = 0.002023  # symmetric gain threshold at power 5000
        for a_txt, verdict in rows:
            a = float(a_txt)
            if a < threshold * 0.999:
                assert verdict == "NOISY_INTERFERENCE", a
            elif a > threshold * 1.001:
                assert verdict == "UNKNOWN", a

    def test_sum_upper_sweep_non_monotone(self, capsys):
        code, out, _ = run(
            capsys, "sweep", "--a", "0.1", "--b", "0.1", "--p1", "5000", "--p2", "5000",
            "--param", "symmetric-a", "--from", "1e-3", "--to", "1.0",
            "--points", "12", "--log", "--metric", "sum-upper",
        )
        assert code == 0
        rows = out.strip().splitlines()[1:]
        assert rows[-1].split(",")[1] == "n/a"  # unit gain: no family applies
        vals = [float(r.split(",")[1]) for r in rows if r.split(",")[1] != "n/a"]
        assert any(  # decreases, dips, increases again: an interior local minimum
            vals[j - 1] > vals[j] < vals[j + 1] for j in range(1, len(vals) - 1)
        )

    def test_sum_upper_not_applicable_at_unit_gain(self, capsys):
        code, out, _ = run(
            capsys, "sweep", "--a", "0.5", "--b", "0.5", "--p1", "10", "--p2", "10",
            "--param", "symmetric-a", "--from", "0.5", "--to", "1.0",
            "--points", "2", "--metric", "sum-upper",
        )
        assert code == 0
        rows = out.strip().splitlines()[1:]
        assert rows[0].split(",")[1] != "n/a"
        assert rows[1].split(",")[1] == "n/a"

    def test_tdm_best_beats_fixed_splits(self, capsys):
        code, out, _ = run(
            capsys, "sweep", *FIG1_ARGS, "--param", "p1",
            "--from", "5", "--to", "10", "--points", "2", "--metric", "tdm-best",
        )
        assert code == 0
        from gicbounds import tdm_fdm_sum_rate
        for row, p1 in zip(out.strip().splitlines()[1:], (5.0, 10.0)):
            best = float(row.split(",")[1])
            ch = TwoUserChannel(0.04, 0.09, p1, 20)
            assert best >= max(tdm_fdm_sum_rate(ch, al) for al in (0.2, 0.5, 0.8)) - 1e-9

    def test_bad_spec_exit_one(self, capsys):
        code, _, err = run(
            capsys, "sweep", *FIG1_ARGS, "--param", "p1",
            "--from", "2", "--to", "1", "--points", "5", "--metric", "sum-tin",
        )
        assert code == 1 and err


class TestMurateCommand:
    def test_with_oracle(self, capsys, tmp_path):
        cfg = tmp_path / "ch3.json"
        cfg.write_text(json.dumps({
            "gains": [[1, 0.05, 0.05], [0.05, 1, 0.05], [0.05, 0.05, 1]],
            "powers": [5, 5, 5],
        }))
        code, out, _ = run(
            capsys, "murate", "--config", str(cfg), "--oracle-resolution", "16", "--json",
        )
        assert code == 0
        payload = json.loads(out)
        assert payload["feasible"] and payload["oracle"]["feasible"]

    def test_two_user_flags(self, capsys):
        code, out, _ = run(capsys, "murate", *FIG1_ARGS)
        assert code == 0
        assert "feasible" in out


class TestThresholdCommand:
    def test_gain_threshold(self, capsys):
        code, out, _ = run(capsys, "threshold", "--p", "5000", "--json")
        assert code == 0
        payload = json.loads(out)
        assert abs(payload["a_star_db"] - (-26.99)) <= 0.15

    def test_power_threshold(self, capsys):
        code, out, _ = run(capsys, "threshold", "--m", "3", "--c", "0.05", "--json")
        assert code == 0
        assert json.loads(out)["p_star"] == pytest.approx(5.811, abs=5e-4)

    def test_conflicting_flags(self, capsys):
        code, _, err = run(capsys, "threshold", "--p", "10", "--m", "3", "--c", "0.05")
        assert code == 1 and err


class TestExitCodes:
    def test_internal_error_exit_two(self, capsys, monkeypatch):
        import gicbounds.cli as cli_mod

        def boom(*args, **kwargs):
            raise RuntimeError("invariant violated")

        monkeypatch.setattr(cli_mod.region, "build_outer_region", boom)
        code, _, err = run(capsys, "region", *FIG1_ARGS)
        assert code == 2 and "internal" in err


class TestConfigHelpers:
    def test_db_round_trip_full_precision(self):
        for x in (0.04, 0.09, 1.0, 123.456):
            assert db_to_linear(linear_to_db(x)) == pytest.approx(x, rel=1e-12)
        assert db_to_linear(-13.9794) == pytest.approx(0.04, rel=1e-6)

    def test_db_matrix_config(self, tmp_path):
        cfg = tmp_path / "db.json"
        cfg.write_text(json.dumps({
            "gains": [[0, 10 * math.log10(0.09)], [10 * math.log10(0.04), 0]],
            "powers": [10, 20],
            "units": "db",
        }))
        ch = load_channel_config(cfg)
        assert isinstance(ch, TwoUserChannel)
        assert ch.a == pytest.approx(0.04, rel=1e-12)
        assert ch.b == pytest.approx(0.09, rel=1e-12)

    @pytest.mark.parametrize(
        "payload",
        [
            {"a": 0.1, "b": 0.1, "p1": 1},  # missing key
            {"a": 0.1, "b": 0.1, "p1": 1, "p2": 1, "gains": [[1]]},  # mixed shapes
            {"gains": [[1, 0.1], [0.1, 1]]},  # no powers
            {"gains": [[1, 0.1]], "powers": [1, 1]},  # not square
            {"gains": [[1, 0.1], [0.1, 2]], "powers": [1, 1]},  # bad diagonal
            {"a": 0.1, "b": 0.1, "p1": 1, "p2": 1, "units": "furlongs"},
        ],
    )
    def test_malformed_configs(self, tmp_path, payload):
        cfg = tmp_path / "bad.json"
        cfg.write_text(json.dumps(payload))
        with pytest.raises(ConfigError):
            load_channel_config(cfg)

    def test_sweep_spec_validation(self):
        with pytest.raises(ConfigError):
            SweepSpec("a", 0.1, 0.2, 1, "sum-tin")
        with pytest.raises(ConfigError):
            SweepSpec("zz", 0.1, 0.2, 5, "sum-tin")
        with pytest.raises(ConfigError):
            SweepSpec("a", 0.1, 0.2, 5, "nope")
        with pytest.raises(ConfigError):
            SweepSpec("a", -0.1, 0.2, 5, "sum-tin", log_spacing=True)
