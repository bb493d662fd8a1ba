import pytest

from underlay.config import DEFAULT_SWEEPS, ConfigError, default_config, load_config, parse_config
from underlay.csvio import format_csv, numeric_content, parse_csv, read_csv, strip_timestamp
from underlay.rates import DecoderKind

GOOD = """
[scenario]
n_m = 3
decoder = SD   ; case-insensitive
trials = 5000
lambda_i = 1e-4
master_seed = 0x10

[sweep]
variable = n_m
n_m = 1, 2,
      3
r_m = 0.1, 1
"""


class TestConfig:
    def test_parse(self):
        lc = parse_config(GOOD)
        assert lc.scenario.n_m == 3
        assert lc.scenario.decoder is DecoderKind.SD
        assert lc.scenario.lambda_i == 1e-4
        assert lc.scenario.master_seed == 16
        assert lc.sweep.variable == "n_m"
        assert lc.sweep.values == (1.0, 2.0, 3.0)
        assert lc.sweep_for("r_m").values == (0.1, 1.0)
        assert lc.sweep_for("lambda_i").values == DEFAULT_SWEEPS["lambda_i"]
        assert "master_seed" in lc.explicit and "alpha" not in lc.explicit

    def test_defaults(self):
        lc = default_config()
        assert lc.scenario.trials == 100_000
        assert lc.sweep.variable == "r_m"
        assert lc.explicit == frozenset()

    @pytest.mark.parametrize(
        "text, field",
        [
            ("[scenario]\nn_m = two\n", "scenario.n_m"),
            ("[scenario]\nr_m = inf\n", "scenario.r_m"),
            ("[scenario]\nbogus = 1\n", "scenario.bogus"),
            ("[scenario]\ntrials = 0\n", "trials"),
            ("[scenario]\nn_i = 3\nlambda_i = 1e-4\n", "n_i"),
            ("[sweep]\nvariable = alpha\n", "sweep.variable"),
            ("[sweep]\nr_m = 0.1, x\n", "sweep.r_m"),
            ("[sweep]\nr_m = ,\n", "sweep.r_m"),
            ("[sweep]\nfoo = 1\n", "sweep.foo"),
            ("[extra]\na = 1\n", "extra"),
            ("not an ini file", "<string>"),
        ],
    )
    def test_errors_name_the_field(self, text, field):
        with pytest.raises(ConfigError, match=field.replace(".", r"\.")):
            parse_config(text)

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError, match="cannot read"):
            load_config(tmp_path / "nope.ini")

    def test_none_values(self):
        assert parse_config("[scenario]\nb_distance_m = none\n").scenario.b_distance_m is None

    @pytest.mark.parametrize("name", ["rate_vs_rm_jd.ini", "rate_vs_rm_sd.ini", "rate_vs_nm.ini", "rate_vs_density_jd.ini", "rate_vs_density_sd.ini"])
    def test_shipped_configs_load(self, name):
        from pathlib import Path

        load_config(Path(__file__).parent.parent / "configs" / name)


class TestCsv:
    def test_round_trip_exact(self, tmp_path):
        rows = [(0.1, 1 / 3, "upper_bound", 7, True), (2.0, 1e-300, "approximation", 0, False)]
        text = format_csv([("tool", "x"), ("created", "now")], ["a", "b", "c", "d", "e"], rows)
        path = tmp_path / "t.csv"
        path.write_text(text)
        t = read_csv(path)
        assert t.manifest == {"tool": "x", "created": "now"}
        assert t.columns == ["a", "b", "c", "d", "e"]
        assert t.column("b") == [1 / 3, 1e-300]
        assert t.column("d", int) == [7, 0]
        assert t.column("c", str) == ["upper_bound", "approximation"]

    def test_strip_timestamp(self):
        text = format_csv([("a", 1), ("created", "t0")], ["x"], [(1.0,)])
        other = format_csv([("a", 1), ("created", "t1")], ["x"], [(1.0,)])
        assert text != other
        assert strip_timestamp(text) == strip_timestamp(other)
        assert numeric_content(text) == [["x"], ["1.0"]]

    def test_bad_tables(self):
        with pytest.raises(ValueError):
            parse_csv("# only: manifest\n")
        with pytest.raises(ValueError):
            parse_csv("a,b\n1\n")
