"""28 GHz link gains: probabilistic LOS/NLOS path loss, lognormal shadowing, Rician fading."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

MIN_DISTANCE = 1.0  # meters; log10 floor


class LinkClass(enum.IntEnum):
    D2D = 0
    NON_D2D = 1


class Condition(enum.IntEnum):
    NLOS = 0
    LOS = 1


@dataclass(frozen=True)
class PathLossParams:
    mu: float  # dB intercept
    nu: float  # exponent
    sigma: float  # dB shadowing std

    def __post_init__(self):
        if not self.nu > 0:
            raise ValueError(f"path-loss exponent must be positive, got {self.nu}")
        if not self.sigma >= 0:
            raise ValueError(f"shadowing sigma must be non-negative, got {self.sigma}")


@dataclass(frozen=True)
class LosProbability:
    p1: float  # D2D links
    p2: float  # everything else

    def __post_init__(self):
        for name in ("p1", "p2"):
            p = getattr(self, name)
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {p}")

    def for_class(self, link_class):
        return self.p1 if link_class == LinkClass.D2D else self.p2


@dataclass(frozen=True)
class FadingParams:
    rician_k: float  # linear; 0 is Rayleigh, inf is no fading

    def __post_init__(self):
        if not self.rician_k >= 0:
            raise ValueError(f"Rician K must be non-negative, got {self.rician_k}")


@dataclass(frozen=True)
class ChannelParams:
    los: PathLossParams = field(default_factory=lambda: PathLossParams(61.4, 2.0, 5.8))
    nlos: PathLossParams = field(default_factory=lambda: PathLossParams(72.0, 2.92, 8.7))
    probs: LosProbability = field(default_factory=lambda: LosProbability(0.8, 0.2))
    fading: FadingParams = field(default_factory=lambda: FadingParams(5.0))

    def for_condition(self, condition):
        return self.los if condition == Condition.LOS else self.nlos


def path_loss_db(distance, params: PathLossParams, shadow_draw=0.0):
    """mu + 10 nu log10(d) + xi, with d floored at 1 m. Works elementwise on arrays."""
    d = np.maximum(distance, MIN_DISTANCE)
    out = params.mu + 10.0 * params.nu * np.log10(d) + shadow_draw
    return float(out) if np.ndim(out) == 0 else out


def sample_link_condition(link_class, probs: LosProbability, rng: np.random.Generator):
    return Condition.LOS if rng.random() < probs.for_class(link_class) else Condition.NLOS


def rician_power(fading: FadingParams, rng: np.random.Generator, size=None):
    """|h|^2 for a unit-mean-power Rician variate."""
    k = fading.rician_k
    if math.isinf(k):
        return 1.0 if size is None else np.ones(size)
    los = math.sqrt(k / (k + 1.0))
    scatter = math.sqrt(1.0 / (2.0 * (k + 1.0)))
    re = los + scatter * rng.standard_normal(size)
    im = scatter * rng.standard_normal(size)
    return re * re + im * im


def channel_gain(
    tx,
    rx,
    link_class,
    params: ChannelParams,
    rng: np.random.Generator | None = None,
    *,
    condition=None,
    shadow_db=None,
    fading=None,
):
    """Linear power gain of one link.

    Any of ``condition``, ``shadow_db`` or ``fading`` can be pinned; the rest
    are drawn from ``rng`` in that order.
    """
    distance = math.dist(tx, rx)
    if condition is None:
        condition = sample_link_condition(link_class, params.probs, rng)
    pl = params.for_condition(condition)
    if shadow_db is None:
        shadow_db = rng.normal(0.0, pl.sigma) if pl.sigma > 0 else 0.0
    if fading is None:
        fading = rician_power(params.fading, rng)
    return 10.0 ** (-path_loss_db(distance, pl, shadow_db) / 10.0) * fading


def link_gains(distance, link_class, params: ChannelParams, rng: np.random.Generator):
    """Vectorised ``channel_gain`` over arrays of distances and link classes.

    One LOS draw, one shadowing draw and one fading draw per element
    (block, quasi-static channel). Returns ``(gain, n_clamped)``.
    """
    distance = np.asarray(distance, dtype=float)
    link_class = np.broadcast_to(np.asarray(link_class), distance.shape)
    p_los = np.where(link_class == LinkClass.D2D, params.probs.p1, params.probs.p2)
    is_los = rng.random(distance.shape) < p_los
    z = rng.standard_normal(distance.shape)
    fade = rician_power(params.fading, rng, size=distance.shape)

    d = np.maximum(distance, MIN_DISTANCE)
    log_d = np.log10(d)
    pl = np.where(
        is_los,
        params.los.mu + 10.0 * params.los.nu * log_d + params.los.sigma * z,
        params.nlos.mu + 10.0 * params.nlos.nu * log_d + params.nlos.sigma * z,
    )
    return 10.0 ** (-pl / 10.0) * fade, int(np.count_nonzero(distance < MIN_DISTANCE))
