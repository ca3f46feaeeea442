"""Scenario configuration and its flat ``key = value`` file format."""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass
from pathlib import Path

from .propagation import ChannelParams, FadingParams, LosProbability, PathLossParams


class ConfigError(ValueError):
    pass


PROMOTION_RULES = ("strongest", "random")


@dataclass(frozen=True)
class ScenarioConfig:
    # geometry
    cell_radius: float = 500.0
    min_close_in: float = 35.0
    d2d_max_separation: float = 20.0
    # population; n_dt counts every DT pair, including the n_rb - n_ut promoted ones
    n_rb: int = 16
    n_ut: int = 16
    n_dt: int = 32
    # radio
    bandwidth_per_rb: float = 180e3  # Hz
    p_ut_max: float = 30.0  # dBm
    p_dt_max: float = 10.0  # dBm
    noise_density: float = -174.0  # dBm/Hz
    gamma_s_th: float = 0.0  # dB
    gamma_d_th: float = 0.0  # dB
    ber_s: float = 1e-3
    ber_d: float = 1e-3
    # propagation
    los_mu: float = 61.4
    los_nu: float = 2.0
    los_sigma: float = 5.8
    nlos_mu: float = 72.0
    nlos_nu: float = 2.92
    nlos_sigma: float = 8.7
    p1: float = 0.8
    p2: float = 0.2
    rician_k: float = 5.0
    # experiment
    drops: int = 500
    min_dt_rate: float = 512e3  # bit/s
    promotion: str = "strongest"
    exclude_infeasible: bool = False
    seed: int = 0

    def __post_init__(self):
        try:
            self.channel
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
        if not (self.n_rb >= self.n_ut >= 0 and self.n_rb >= 1):
            raise ConfigError(f"need n_rb >= n_ut >= 0 and n_rb >= 1, got n_rb={self.n_rb}, n_ut={self.n_ut}")
        if self.n_dt < self.n_promoted:
            raise ConfigError(
                f"n_dt={self.n_dt} cannot supply {self.n_promoted} promoted DT owners (n_rb - n_ut)"
            )
        if not 0 < self.min_close_in < self.cell_radius:
            raise ConfigError("need 0 < min_close_in < cell_radius")
        for name in ("d2d_max_separation", "bandwidth_per_rb"):
            if not getattr(self, name) > 0:
                raise ConfigError(f"{name} must be positive")
        for name in ("ber_s", "ber_d"):
            if not 0 < getattr(self, name) < 0.2:
                raise ConfigError(f"{name} must lie in (0, 0.2), got {getattr(self, name)}")
        if self.drops < 1:
            raise ConfigError("drops must be >= 1")
        if self.promotion not in PROMOTION_RULES:
            raise ConfigError(f"promotion must be one of {PROMOTION_RULES}, got {self.promotion!r}")
        if not 0 <= self.seed < 2**64:
            raise ConfigError("seed must be an unsigned 64-bit integer")

    @property
    def n_promoted(self):
        return self.n_rb - self.n_ut

    @property
    def n_pool(self):
        return self.n_dt - self.n_promoted

    @property
    def channel(self):
        return ChannelParams(
            los=PathLossParams(self.los_mu, self.los_nu, self.los_sigma),
            nlos=PathLossParams(self.nlos_mu, self.nlos_nu, self.nlos_sigma),
            probs=LosProbability(self.p1, self.p2),
            fading=FadingParams(self.rician_k),
        )

    def replace(self, **changes):
        return dataclasses.replace(self, **changes)


_FIELDS = {f.name: f for f in dataclasses.fields(ScenarioConfig)}


def _parse_value(name, text):
    kind = _FIELDS[name].type
    try:
        if kind == "int":
            return int(text, 0)
        if kind == "float":
            return float(text)
        if kind == "bool":
            low = text.lower()
            if low in ("true", "yes", "1"):
                return True
            if low in ("false", "no", "0"):
                return False
            raise ValueError(text)
    except ValueError:
        raise ConfigError(f"{name}: cannot parse {text!r} as {kind}") from None
    return text


def parse_config(text, base: ScenarioConfig | None = None) -> ScenarioConfig:
    values = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not sep or not key:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw!r}")
        if key not in _FIELDS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in values:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        values[key] = _parse_value(key, value)
    return dataclasses.replace(base or ScenarioConfig(), **values)


def load_config(path) -> ScenarioConfig:
    return parse_config(Path(path).read_text(encoding="utf-8"))


def dump_config(cfg: ScenarioConfig) -> str:
    lines = []
    for name in _FIELDS:
        value = getattr(cfg, name)
        if isinstance(value, float) and math.isinf(value):
            value = "inf"
        lines.append(f"{name} = {value}")
    return "\n".join(lines) + "\n"
