"""Config parsing, report writing, and exit-code behavior of the CLI."""

import numpy as np
import pytest

from fracsmc.cli import (
    ConfigError,
    ExperimentConfig,
    config_echo,
    fmt,
    main,
    parse_config,
)

GOOD = """
# steady test run
equation = poisson
preset = u1
alpha = 0.6
n_x = 2
m = 20
k_max = 4
seed = 3
"""


class TestParseConfig:
    def test_parses_and_validates(self):
        cfg = parse_config(GOOD)
        assert cfg.equation == "poisson"
        assert cfg.alpha == 0.6
        assert cfg.m == 20
        assert cfg.n_t == 0  # defaulted

    def test_comments_and_blank_lines_ignored(self):
        cfg = parse_config("equation=poisson # inline\n\npreset=u1\nalpha=1\nn_x=2\nm=5\n")
        assert cfg.alpha == 1.0

    def test_unknown_key_rejected(self):
        with pytest.raises(ConfigError, match="unknown key"):
            parse_config(GOOD + "walkers = 10\n")

    def test_duplicate_key_rejected(self):
        with pytest.raises(ConfigError, match="duplicate"):
            parse_config(GOOD + "alpha = 0.7\n")

    def test_bad_value_rejected(self):
        with pytest.raises(ConfigError, match="bad value"):
            parse_config("equation=poisson\npreset=u1\nalpha=x\nn_x=2\nm=5\n")

    def test_alpha_out_of_range_rejected(self):
        with pytest.raises(ConfigError, match="alpha"):
            parse_config("equation=poisson\npreset=u1\nalpha=2.5\nn_x=2\nm=5\n")

    def test_parabolic_requires_time_fields(self):
        with pytest.raises(ConfigError, match="parabolic"):
            parse_config(
                "equation=parabolic\npreset=u1_parabolic\nalpha=1\nn_x=2\nm=5\n"
            )

    def test_preset_must_match_equation(self):
        with pytest.raises(ConfigError, match="preset"):
            parse_config(
                "equation=poisson\npreset=u1_parabolic\nalpha=1\nn_x=2\nm=5\n"
            )

    def test_echo_reparses_to_equal_config(self):
        cfg = parse_config(GOOD)
        echoed = config_echo(cfg).lstrip("# ")
        again = parse_config("\n".join(echoed.split()))
        assert again == cfg


class TestFmt:
    def test_round_trips_doubles(self):
        for x in [1 / 3, 1e-300, 2**-52, np.pi, 6.02e23]:
            assert float(fmt(x)) == x


class TestMainExitCodes:
    def _write(self, tmp_path, text):
        p = tmp_path / "exp.cfg"
        p.write_text(text)
        return str(p)

    def test_run_success_writes_report(self, tmp_path):
        out = tmp_path / "r.csv"
        cfg = self._write(tmp_path, GOOD + f"out = {out}\n")
        assert main(["run", cfg, "--threads", "1"]) == 0
        lines = out.read_text().splitlines()
        assert lines[0].startswith("# equation=poisson")
        assert lines[1] == "k,max_update,e_inf,capped_path_rate,elapsed_ms"
        assert len(lines) >= 3

    def test_invalid_config_exits_2_without_output(self, tmp_path):
        out = tmp_path / "r.csv"
        cfg = self._write(tmp_path, GOOD.replace("0.6", "2.5") + f"out = {out}\n")
        assert main(["run", cfg]) == 2
        assert not out.exists()

    def test_missing_config_exits_2(self, tmp_path):
        assert main(["run", str(tmp_path / "nope.cfg")]) == 2

    def test_unknown_suite_exits_2(self):
        assert main(["validate", "nonsense"]) == 2

    def test_seed_and_out_overrides(self, tmp_path):
        cfg = self._write(tmp_path, GOOD)
        out = tmp_path / "override.csv"
        assert main(["run", cfg, "--seed", "9", "--out", str(out), "--threads", "1"]) == 0
        assert "seed=9" in out.read_text().splitlines()[0]


class TestDeterminism:
    def test_reports_byte_identical_across_thread_counts(self, tmp_path):
        cfgp = tmp_path / "exp.cfg"
        out = tmp_path / "r.csv"
        cfgp.write_text(GOOD + f"out = {out}\n")
        outs = []
        for nthreads in ("1", "4"):
            assert main(["run", str(cfgp), "--threads", nthreads]) == 0
            outs.append(out.read_bytes())
        assert outs[0] == outs[1]

    def test_timings_column_empty_by_default(self, tmp_path):
        cfgp = tmp_path / "exp.cfg"
        out = tmp_path / "r.csv"
        cfgp.write_text(GOOD + f"out = {out}\n")
        assert main(["run", str(cfgp), "--threads", "1"]) == 0
        for row in out.read_text().splitlines()[2:]:
            assert row.endswith(",")
