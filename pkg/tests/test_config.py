import math

import pytest

from aarm.config import DEFAULTS, PRESETS, ConfigError, build_config, parse_config, parse_config_text
from aarm.problems import KernelKind


def write(tmp_path, text, name="exp.cfg"):
    p = tmp_path / name
    p.write_text(text)
    return p


def test_empty_file_gives_smooth_defaults(tmp_path):
    cfg = parse_config(write(tmp_path, ""))
    hp = cfg.solver.hyper_params
    assert (hp.gamma_bar, hp.r, hp.beta, hp.eta) == (1.0, 1.0, 2.0, 1.0)
    assert cfg.signal == "smooth" and cfg.n == cfg.m == 500
    assert cfg.kernel.kind is KernelKind.AIRY
    assert (cfg.kernel.kappa, cfg.kernel.amplitude) == (1000.0, 500.0)
    assert cfg.noise.sigma == 0.1
    assert cfg.lambda_tik == cfg.lambda_tv == 1.0
    assert cfg.solver.tau == pytest.approx(1.5 * math.sqrt(501))
    assert cfg.solver.delta == 1e-3
    assert cfg.solver.ar_orders == (2, 0)
    assert cfg.solvers == ("aarm",)


def test_beta_violation_names_key(tmp_path):
    with pytest.raises(ConfigError) as info:
        parse_config(write(tmp_path, "hyper.beta = 1.0\n"))
    assert info.value.key == "hyper.beta"
    assert "3/2" in str(info.value)


def test_tv_only_routing(tmp_path):
    cfg = parse_config(write(tmp_path, "solver = tv\ntv.lambda = 1.0\n"))
    assert cfg.solvers == ("tv",)
    assert cfg.lambda_tv == 1.0


def test_comments_blank_lines_and_all(tmp_path):
    text = "# header\n\nsolver = all   # every solver\nproblem.n = 100\nproblem.m = 100\nouter.tau = 20\n"
    cfg = parse_config(write(tmp_path, text))
    assert cfg.solvers == ("aarm", "tikhonov", "tv")
    assert cfg.n == 100 and cfg.solver.tau == 20.0


@pytest.mark.parametrize(
    "text, line",
    [
        ("problem.n = 100\nbogus.key = 3\n", 2),
        ("problem.n 100\n", 1),
        ("\n\nproblem.n = abc\n", 3),
        ("problem.n = 100\nproblem.n = 200\n", 2),
        ("noise.abs_max = maybe\n", 1),
        ("problem.n = 10.5\n", 1),
        ("problem.signal =\n", 1),
    ],
)
def test_parse_errors_carry_line_numbers(text, line):
    with pytest.raises(ConfigError) as info:
        parse_config_text(text)
    assert info.value.line == line
    assert f"line {line}" in str(info.value)


@pytest.mark.parametrize(
    "values, key",
    [
        ({"problem.m": 600}, "problem.m"),
        ({"threshold.rho": 0.2}, "threshold"),
        ({"outer.tau": 0.5}, "outer"),
        ({"init.theta": 1.5}, "init.theta"),
        ({"tv.lambda": 0.0}, "tv.lambda"),
        ({"bregman.n_max": 0}, "bregman"),
        ({"noise.sigma": -1.0}, "noise.sigma"),
    ],
)
def test_validation_errors_name_key(values, key):
    with pytest.raises(ConfigError) as info:
        build_config(values)
    assert info.value.key == key


def test_presets_and_precedence(tmp_path):
    pw = build_config(preset="piecewise")
    assert pw.kernel.kind is KernelKind.RICKER and pw.kernel.peak_freq == 50.0
    assert pw.noise.sigma == 0.0005 and pw.signal == "piecewise"
    mixed = build_config(preset="mixed")
    assert mixed.noise.sigma == 0.02 and mixed.kernel.kind is KernelKind.AIRY
    cfg = parse_config(write(tmp_path, "noise.sigma = 0.3\nnoise.seed = 9\n"), preset="piecewise", seed=42)
    assert cfg.noise.sigma == 0.3
    assert cfg.seed == 42
    assert cfg.kernel.kind is KernelKind.RICKER
    with pytest.raises(ConfigError):
        build_config(preset="nope")


def test_missing_file(tmp_path):
    with pytest.raises(ConfigError):
        parse_config(tmp_path / "absent.cfg")


def test_every_key_parses_its_default_text():
    for key, (conv, default) in DEFAULTS.items():
        if key == "solver":
            text = ",".join(default)
        elif key == "outer.tau":
            text = "auto"
        else:
            text = str(default).lower() if isinstance(default, bool) else str(default)
        assert parse_config_text(f"{key} = {text}")[key] == default
    assert set(PRESETS) == {"smooth", "piecewise", "mixed"}
