"""Experiment configuration: INI text with one section named after the experiment."""

from __future__ import annotations

import configparser
import math
from dataclasses import dataclass, field, fields

EXPERIMENTS = (
    "davies_concentration",
    "boundary_fixed_eps",
    "boundary_scaled_eps",
    "skin_bundles",
    "skin_gap_scaling",
    "protected_separation",
    "logical_bundle",
    "logical_scaling",
    "moment_checks",
    "oracle_checks",
)

_SKIN = {"gamma_r": 1.6, "gamma_l": 0.4, "lam": 1.0}
_LOGICAL = {"beta": 1.8, "gamma": 2.0, "c": 0.75}

# experiment -> (model params, run defaults)
DEFAULTS = {
    "davies_concentration": (
        {"beta": 1.2, "omega": 1.0},
        dict(sizes=(3, 4, 5, 6), epsilon=(0.7,), n_samples=48, t_min=1e-3, t_max=6.0, n_points=72),
    ),
    "boundary_fixed_eps": (
        {"delta": 0.25, "gamma": 4.0},
        dict(sizes=(3, 4, 5, 6), epsilon=(0.55,), n_samples=300, t_min=1e-3, t_max=40.0, n_points=160),
    ),
    "boundary_scaled_eps": (
        {"delta": 0.25, "gamma": 4.0},
        dict(
            sizes=(3, 4, 5, 6), epsilon_rule="scaled", eps0=0.1, eps_base=2.0,
            n_samples=2000, t_min=0.1, t_max=40.0, n_points=48,
        ),
    ),
    "skin_bundles": (
        dict(_SKIN),
        dict(sizes=(16, 24, 32, 64, 128, 192), epsilon=(0.35, 0.01), n_samples=200, t_min=1e-2, t_max=500.0, n_points=400),
    ),
    "skin_gap_scaling": (
        dict(_SKIN),
        dict(
            sizes=(16, 24, 32, 48, 64, 96, 128, 192), epsilon=(0.01, 0.35), n_samples=500,
            t_min=1e-2, t_max=500.0, n_points=400, curve_samples=0,
        ),
    ),
    "protected_separation": (
        {"leak_exponent": 5.0, "delta_q": 0.1},
        dict(sizes=(256,), epsilon=(0.2,), n_samples=100, t_min=1e-2, t_max=20.0, n_points=60, worst_t_max=1000.0, worst_n_points=200),
    ),
    "logical_bundle": (
        dict(_LOGICAL),
        dict(sizes=(6,), epsilon=(0.35,), n_samples=64, t_min=1e-2, t_max=400.0, n_points=96),
    ),
    "logical_scaling": (
        dict(_LOGICAL),
        dict(sizes=(3, 4, 5, 6), epsilon=(0.35,), n_samples=36, t_min=1e-2, t_max=400.0, n_points=88),
    ),
    "moment_checks": (
        {"d_b": 4},
        dict(sizes=(4, 8), epsilon=(0.5,), n_samples=20000, t_min=0.1, t_max=1.0, n_points=8),
    ),
    "oracle_checks": (
        {"tolerance": 1e-8, "triples": 100},
        dict(sizes=(0,), epsilon=(0.5,), n_samples=0, t_min=0.1, t_max=1.0, n_points=8),
    ),
}


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class ExperimentConfig:
    experiment: str
    params: dict = field(default_factory=dict)
    sizes: tuple = ()
    epsilon: tuple = ()
    epsilon_rule: str = "fixed"
    eps0: float = 0.1
    eps_base: float = 2.0
    n_samples: int = 48
    t_min: float = 1e-3
    t_max: float = 6.0
    n_points: int = 72
    log_grid: bool = True
    worst_t_max: float = 0.0
    worst_n_points: int = 0
    curve_samples: int = 64
    seed: int = 0
    workers: int = 1

    def epsilons(self, size) -> tuple:
        """Thresholds used at ``size``; the scaled rule gives ε₀·base^{−size/2}."""
        if self.epsilon_rule == "scaled":
            return (self.eps0 * self.eps_base ** (-size / 2),)
        return self.epsilon


_RUN_KEYS = {f.name: f for f in fields(ExperimentConfig) if f.name not in ("experiment", "params")}


def _convert(name, raw, kind):
    try:
        if kind == "tuple_int":
            return tuple(int(x) for x in raw.split(",") if x.strip())
        if kind == "tuple_float":
            return tuple(float(x) for x in raw.split(",") if x.strip())
        if kind == "int":
            return int(raw)
        if kind == "float":
            return float(raw)
        if kind == "bool":
            low = raw.strip().lower()
            if low not in ("true", "false", "yes", "no", "1", "0"):
                raise ValueError(raw)
            return low in ("true", "yes", "1")
        return raw.strip()
    except ValueError:
        raise ConfigError(f"{name}: cannot parse {raw!r} as {kind}") from None


_KINDS = {
    "sizes": "tuple_int",
    "epsilon": "tuple_float",
    "epsilon_rule": "str",
    "eps0": "float",
    "eps_base": "float",
    "n_samples": "int",
    "t_min": "float",
    "t_max": "float",
    "n_points": "int",
    "log_grid": "bool",
    "worst_t_max": "float",
    "worst_n_points": "int",
    "curve_samples": "int",
    "seed": "int",
    "workers": "int",
}


def default_config(experiment: str) -> ExperimentConfig:
    if experiment not in DEFAULTS:
        raise ConfigError(f"unknown experiment {experiment!r}; choose from {', '.join(EXPERIMENTS)}")
    params, run = DEFAULTS[experiment]
    return ExperimentConfig(experiment=experiment, params=dict(params), **run)


def validate(cfg: ExperimentConfig) -> ExperimentConfig:
    e = cfg.experiment
    if cfg.n_points < 8:
        raise ConfigError(f"{e}.n_points: need at least 8, got {cfg.n_points}")
    if cfg.log_grid and cfg.t_min <= 0:
        raise ConfigError(f"{e}.t_min: log grids need t_min > 0")
    if not cfg.t_max > cfg.t_min:
        raise ConfigError(f"{e}.t_max: must exceed t_min")
    if cfg.epsilon_rule not in ("fixed", "scaled"):
        raise ConfigError(f"{e}.epsilon_rule: must be 'fixed' or 'scaled'")
    if cfg.epsilon_rule == "fixed" and not cfg.epsilon:
        raise ConfigError(f"{e}.epsilon: at least one threshold required")
    if any(not 0 < x < 2 for x in cfg.epsilon):
        raise ConfigError(f"{e}.epsilon: thresholds must lie in (0, 2)")
    if cfg.workers < 1:
        raise ConfigError(f"{e}.workers: must be >= 1")
    if cfg.n_samples < 0 or cfg.curve_samples < 0:
        raise ConfigError(f"{e}.n_samples: must be nonnegative")
    if not cfg.sizes:
        raise ConfigError(f"{e}.sizes: at least one size required")
    return cfg


def parse_config(text: str) -> ExperimentConfig:
    parser = configparser.ConfigParser(interpolation=None, strict=True)
    parser.optionxform = str
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"malformed config: {exc}") from None
    sections = parser.sections()
    if len(sections) != 1:
        raise ConfigError(f"expected exactly one experiment section, found {sections}")
    name = sections[0]
    cfg = default_config(name)
    model_defaults = DEFAULTS[name][0]
    values = {}
    params = dict(cfg.params)
    unknown = []
    for key, raw in parser.items(name):
        if key in _KINDS:
            values[key] = _convert(f"{name}.{key}", raw, _KINDS[key])
        elif key in model_defaults:
            kind = "int" if isinstance(model_defaults[key], int) and not isinstance(model_defaults[key], bool) else "float"
            params[key] = _convert(f"{name}.{key}", raw, kind)
        else:
            unknown.append(key)
    if unknown:
        allowed = sorted(set(_KINDS) | set(model_defaults))
        raise ConfigError(f"{name}: unknown keys {sorted(unknown)}; allowed: {allowed}")
    return validate(ExperimentConfig(**{**cfg.__dict__, **values, "params": params}))


def _fmt(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v) if math.isfinite(v) else str(v)
    if isinstance(v, tuple):
        return ", ".join(_fmt(x) for x in v)
    return str(v)


def emit_config(cfg: ExperimentConfig) -> str:
    lines = [f"[{cfg.experiment}]"]
    for key in _KINDS:
        lines.append(f"{key} = {_fmt(getattr(cfg, key))}")
    for key, v in cfg.params.items():
        lines.append(f"{key} = {_fmt(v)}")
    return "\n".join(lines) + "\n"


def load_config(path) -> ExperimentConfig:
    try:
        with open(path, encoding="utf-8") as fh:
            return parse_config(fh.read())
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from None
