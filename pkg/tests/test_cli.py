import json
import math
import subprocess
import sys

import pytest

from cvdense import cli


class TestChannelGrammar:
    def test_identity(self):
        assert cli.parse_channel_spec("identity").kind == "identity"

    def test_amplifier(self):
        ch = cli.parse_channel_spec("amplifier:s=0.3,nth=1.5")
        assert ch.x == pytest.approx(math.cosh(0.3))
        assert ch.y == pytest.approx(1.5 * math.sinh(0.3) ** 2)

    def test_pureloss_default_nth(self):
        ch = cli.parse_channel_spec("pureloss:theta=0.4")
        assert ch.y == pytest.approx(math.sin(0.4) ** 2)

    def test_env_conventions(self):
        e29 = cli.parse_channel_spec("env:gamma=0.1,t=1,nbar=0.5")
        sec = cli.parse_channel_spec("env:gamma=0.1,t=1,nbar=0.5,conv=secIV")
        assert sec.y > e29.y

    @pytest.mark.parametrize("bad", [
        "amplifier", "amplifier:s=x", "amplifier:s=0.1,phase=3", "warp:f=1",
        "env:gamma=0.1,t=1", "pureloss:theta=0.2,nth=0.5",
    ])
    def test_rejects(self, bad):
        with pytest.raises(cli.ParseError):
            cli.parse_channel_spec(bad)


class TestStateGrammar:
    def test_forms(self):
        assert cli.parse_state_spec("tmsv") == ("tmsv", {})
        assert cli.parse_state_spec("tmsv:r=0.7") == ("tmsv", {"r": 0.7})
        assert cli.parse_state_spec("kappa:k=0.3,r=1.0") == ("kappa", {"k": 0.3, "r": 1.0})
        assert cli.parse_state_spec("pure:a=2.5") == ("pure", {"a": 2.5})
        assert cli.parse_state_spec("decomp:r=1,s2=0.2") == ("decomp", {"r": 1.0, "s2": 0.2})
        assert cli.parse_state_spec("random:nbar=30,seed=7") == \
            ("random", {"nbar": 30.0, "seed": 7})

    def test_rejects(self):
        with pytest.raises(cli.ParseError):
            cli.parse_state_spec("kappa:r=1.0")
        with pytest.raises(cli.ParseError):
            cli.parse_state_spec("ghz:n=3")


class TestRanges:
    def test_closed_both_ends(self):
        assert cli.range_values(0.0, 1.0, 0.25) == pytest.approx([0, 0.25, 0.5, 0.75, 1.0])

    def test_non_divisible_step(self):
        assert cli.range_values(0.0, 1.0, 0.3) == pytest.approx([0.0, 0.3, 0.6, 0.9])

    def test_parse_errors(self):
        for bad in ("1:0:0.1", "0:1", "0:1:-1", "a:b:c"):
            with pytest.raises(cli.ParseError):
                cli.parse_range(bad)


class TestMetaRoundTrip:
    @pytest.mark.parametrize("cfg", [
        cli.RunConfig(command="capacity", nbar=30.0),
        cli.RunConfig(command="sweep", nbar=30.0, param="s", stage="dist",
                      channel="amplifier", sweep=(0.0, 0.6, 0.01)),
        cli.RunConfig(command="threshold", nbar=30.0, param="t",
                      channel="env:gamma=0.1,nbar=0.5", stage="all",
                      bracket=(0.01, 6.0), steps=128),
        cli.RunConfig(command="figure", figure="fig4a", nbar=30.0, param="s",
                      channel="amplifier", stage="dist", sweep=(0.0, 0.7, 0.005)),
        cli.RunConfig(command="holevo-scatter", nbar=40.0, samples=777, seed=99,
                      fmt="json", output="out dir/scatter.json"),
    ])
    def test_round_trip(self, cfg):
        assert cli.RunConfig.from_meta(cfg.to_meta()) == cfg

    def test_rejects_foreign_line(self):
        with pytest.raises(cli.ParseError):
            cli.RunConfig.from_meta("nbar=30")


class TestCommands:
    def test_capacity_stdout(self, capsys):
        assert cli.main(["capacity", "--state", "tmsv", "--nbar", "30"]) == 0
        out = capsys.readouterr().out.splitlines()
        assert out[0].startswith("# meta: ")
        header = out[1].split(",")
        row = dict(zip(header, out[2].split(",")))
        assert float(row["capacity_bits"]) == pytest.approx(9.8626, abs=1e-3)
        assert row["feasible"] == "true"

    def test_capacity_fixed_r_and_pure_state(self, capsys):
        assert cli.main(["capacity", "--state", "tmsv:r=1.0", "--nbar", "30"]) == 0
        fixed = float(capsys.readouterr().out.splitlines()[2].split(",")[3])
        assert cli.main(["capacity", "--state", "tmsv", "--nbar", "30"]) == 0
        free = float(capsys.readouterr().out.splitlines()[2].split(",")[3])
        assert fixed < free  # fixed squeezing cannot beat the optimized value
        assert cli.main(["capacity", "--state", "pure:a=3.0", "--nbar", "30"]) == 0

    def test_threshold_nbar(self, capsys):
        assert cli.main(["threshold", "--param", "nbar", "--nbar", "30", "--tau", "0.9"]) == 0
        row = capsys.readouterr().out.splitlines()[2].split(",")
        assert float(row[1]) == pytest.approx(3.181, abs=1e-2)

    def test_threshold_channel_param(self, capsys):
        assert cli.main(["threshold", "--param", "s", "--stage", "dist", "--channel",
                         "amplifier", "--nbar", "30", "--scheme", "adaptive"]) == 0
        row = capsys.readouterr().out.splitlines()[2].split(",")
        assert float(row[1]) == pytest.approx(0.467, abs=5e-3)

    def test_sweep_tau(self, capsys):
        assert cli.main(["sweep", "--param", "tau", "--range", "0.8:1.0:0.1",
                         "--nbar", "10"]) == 0
        lines = capsys.readouterr().out.splitlines()
        assert len(lines) == 2 + 3  # meta, header, three rows

    def test_sweep_flags_infeasible_rows(self, capsys):
        # strong post-encoding amplification overruns a one-photon budget
        assert cli.main(["sweep", "--param", "s", "--stage", "post", "--channel",
                         "amplifier", "--range", "0:2.5:0.5", "--nbar", "1"]) == 0
        lines = capsys.readouterr().out.splitlines()
        header = lines[1].split(",")
        rows = [dict(zip(header, l.split(","))) for l in lines[2:]]
        assert rows[0]["feasible_adaptive"] == "true"
        assert rows[-1]["feasible_adaptive"] == "false"
        assert rows[-1]["capacity_adaptive"] == "nan"

    def test_kappa_scan(self, capsys):
        assert cli.main(["kappa-scan", "--nbar", "30", "--points", "6",
                         "--dist-a", "amplifier:s=0.1", "--dist-b", "amplifier:s=0.1"]) == 0
        lines = capsys.readouterr().out.splitlines()
        assert lines[1].startswith("kappa,capacity_bits,advantage_bits")
        last = lines[-1].split(",")
        assert float(last[0]) == pytest.approx(0.5)
        assert float(last[3]) > 0  # noise depletes the advantage at every kappa

    def test_holevo_scatter_sorted(self, capsys):
        assert cli.main(["holevo-scatter", "--nbar", "30", "--samples", "50",
                         "--seed", "10"]) == 0
        lines = capsys.readouterr().out.splitlines()
        assert lines[1] == "seed,nbar_sender,entanglement_bits,holevo_bits"
        ents = [float(l.split(",")[2]) for l in lines[2:]]
        assert ents == sorted(ents)

    def test_json_format(self, capsys):
        assert cli.main(["capacity", "--nbar", "5", "--format", "json"]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["columns"][0] == "state"
        assert len(payload["rows"]) == 1

    def test_figure_fig4a_runs(self, capsys):
        cfg = cli.figure_preset("fig4a")
        cfg = cli.RunConfig(**{**cfg.__dict__, "sweep": (0.0, 0.6, 0.1)})
        assert cli.run(cfg) == 0
        lines = capsys.readouterr().out.splitlines()
        assert lines[1] == "s,advantage_adaptive,advantage_non_adaptive"
        first = lines[2].split(",")
        assert float(first[1]) == pytest.approx(3.4893, abs=1e-3)

    def test_unknown_figure(self):
        with pytest.raises(cli.ParseError):
            cli.figure_preset("fig99")
        assert "fig3a" in str(cli.FIGURE_NAMES)

    def test_figure_names_complete(self):
        expected = {"fig3a", "fig3b", "fig4a", "fig4b", "fig4c", "fig4d",
                    "fig5a", "fig5b", "fig5c", "fig5d", "fig6a", "fig6b",
                    "fig6c", "fig6d", "fig7a", "fig7b", "fig8"}
        assert set(cli.FIGURE_NAMES) == expected


class TestExitCodes:
    def test_parse_error(self, capsys):
        assert cli.main(["capacity", "--nbar", "30", "--dist-a", "bogus:x=1"]) == 2

    def test_numerical_failure(self, capsys):
        # full loss during distribution: no advantage threshold exists
        assert cli.main(["threshold", "--param", "nbar", "--nbar", "30",
                         "--dist-a", "pureloss:theta=1.5707963267948966",
                         "--dist-b", "pureloss:theta=1.5707963267948966"]) == 3

    def test_kappa_scheme_guard(self, capsys):
        assert cli.main(["capacity", "--state", "kappa:k=0.3", "--nbar", "10",
                         "--scheme", "non-adaptive"]) == 2


class TestFileOutput:
    def test_byte_identical_reruns(self, tmp_path):
        out1 = tmp_path / "a.csv"
        out2 = tmp_path / "b.csv"
        args = ["holevo-scatter", "--nbar", "30", "--samples", "40", "--seed", "5"]
        assert cli.main(args + ["--output", str(out1)]) == 0
        assert cli.main(args + ["--output", str(out2)]) == 0

        def body(path):
            return path.read_bytes().split(b"\n", 1)[1]

        assert body(out1) == body(out2)
        # identical destination: the whole file is reproduced byte for byte
        assert cli.main(args + ["--output", str(out1)]) == 0
        first = out1.read_bytes()
        assert cli.main(args + ["--output", str(out1)]) == 0
        assert out1.read_bytes() == first

    def test_meta_line_reparses(self, tmp_path):
        out = tmp_path / "cap.csv"
        assert cli.main(["capacity", "--nbar", "12", "--output", str(out)]) == 0
        meta = out.read_text().splitlines()[0]
        cfg = cli.RunConfig.from_meta(meta)
        assert cfg.command == "capacity" and cfg.nbar == 12.0

    def test_output_dir_env(self, tmp_path, monkeypatch):
        monkeypatch.setenv(cli.OUTPUT_DIR_ENV, str(tmp_path))
        assert cli.main(["capacity", "--nbar", "3", "--output", "sub/cap.csv"]) == 0
        assert (tmp_path / "sub" / "cap.csv").exists()


def test_console_entry_point():
    out = subprocess.run([sys.executable, "-m", "cvdense.cli", "capacity",
                          "--nbar", "30"], capture_output=True, text=True)
    assert out.returncode == 0
    assert "capacity_bits" in out.stdout
