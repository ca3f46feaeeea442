"""Network drops: node placement, DT promotion and the gain matrix."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import ConfigError, ScenarioConfig
from .propagation import LinkClass, link_gains

BS_POSITION = np.zeros(2)

UT = "UT"
DT = "DT"


@dataclass
class DtPair:
    index: int
    tx: np.ndarray
    rx: np.ndarray
    direct_gain: float
    origin: int = -1  # index in the full DT population before promotion


@dataclass
class Owner:
    index: int
    kind: str
    tx: np.ndarray
    rx: np.ndarray | None = None  # pair receiver, promoted owners only
    direct_gain: float | None = None
    origin: int = -1

    @property
    def alpha(self):
        return 1 if self.kind == UT else 0

    @property
    def beta(self):
        return 1 - self.alpha


@dataclass
class Scenario:
    owners: list[Owner]
    dt_pairs: list[DtPair]
    drop_index: int = 0
    n_clamped: int = 0  # direct links shorter than the 1 m floor
    bs_position: np.ndarray = BS_POSITION

    @property
    def n_owners(self):
        return len(self.owners)

    @property
    def n_pairs(self):
        return len(self.dt_pairs)

    @property
    def n_ut(self):
        return sum(o.kind == UT for o in self.owners)


@dataclass
class GainMatrix:
    """Linear power gains. Shapes: owners N, pool DTs M.

    h_dt_to_owner_rx is (M, N) and h_owner_to_dt_rx is (N, M);
    h_dt_to_dt_rx[d_other, d] is the gain from d_other's TX into d's RX.
    """

    h_owner_to_bs: np.ndarray
    h_owner_self: np.ndarray
    h_dt_to_bs: np.ndarray
    h_dt_to_owner_rx: np.ndarray
    h_owner_to_dt_rx: np.ndarray
    h_dt_to_dt_rx: np.ndarray
    alpha: np.ndarray
    beta: np.ndarray
    n_clamped: int = 0

    @property
    def h_dt_direct(self):
        return np.diagonal(self.h_dt_to_dt_rx).copy()

    @property
    def shape(self):
        return len(self.h_owner_to_bs), len(self.h_dt_to_bs)

    def owner_desired(self):
        """alpha*H_sB + beta*H_ss per owner."""
        return self.alpha * self.h_owner_to_bs + self.beta * self.h_owner_self

    def dt_to_owner_receiver(self):
        """(N, M): alpha_s*H_dB + beta_s*H_ds, the gain of DT d into owner s's receiver."""
        a = self.alpha[:, None]
        b = self.beta[:, None]
        return a * self.h_dt_to_bs[None, :] + b * self.h_dt_to_owner_rx.T


def drop_streams(cfg: ScenarioConfig, drop_index):
    """Independent generators for (placement, direct links, promotion, cross links)."""
    ss = np.random.SeedSequence([cfg.seed, int(drop_index)])
    return [np.random.Generator(np.random.PCG64(s)) for s in ss.spawn(4)]


def sample_annulus(rng, n, r_min, r_max):
    r = np.sqrt(rng.uniform(r_min**2, r_max**2, n))
    theta = rng.uniform(0.0, 2.0 * np.pi, n)
    return np.column_stack([r * np.cos(theta), r * np.sin(theta)])


def sample_receivers(rng, tx, separation, r_min, r_max):
    """One RX per TX, uniform in a disc around it, redrawn until inside the annulus."""
    rx = np.empty_like(tx)
    todo = np.arange(len(tx))
    while todo.size:
        r = separation * np.sqrt(rng.random(todo.size))
        theta = rng.uniform(0.0, 2.0 * np.pi, todo.size)
        cand = tx[todo] + np.column_stack([r * np.cos(theta), r * np.sin(theta)])
        dist = np.hypot(cand[:, 0], cand[:, 1])
        ok = (dist >= r_min) & (dist <= r_max)
        rx[todo[ok]] = cand[ok]
        todo = todo[~ok]
    return rx


def promote_dts(cfg: ScenarioConfig, pairs: list[DtPair], rng=None):
    """Move n_rb - n_ut pairs into the owner set (tail indices).

    Returns ``(promoted_owners, remaining_pairs)``; remaining pairs are
    re-indexed from 0 in their original order.
    """
    v = cfg.n_promoted
    if v > len(pairs):
        raise ConfigError(f"cannot promote {v} DTs from a pool of {len(pairs)}")
    if cfg.promotion == "strongest":
        gains = np.array([p.direct_gain for p in pairs])
        chosen = list(np.argsort(-gains, kind="stable")[:v])
    else:
        chosen = list(rng.choice(len(pairs), size=v, replace=False)) if v else []
    chosen = [int(i) for i in chosen]
    promoted = [
        Owner(
            index=cfg.n_ut + k,
            kind=DT,
            tx=pairs[i].tx,
            rx=pairs[i].rx,
            direct_gain=pairs[i].direct_gain,
            origin=pairs[i].origin,
        )
        for k, i in enumerate(chosen)
    ]
    taken = set(chosen)
    remaining = [
        DtPair(j, p.tx, p.rx, p.direct_gain, p.origin)
        for j, p in enumerate(p for i, p in enumerate(pairs) if i not in taken)
    ]
    return promoted, remaining


def generate_drop(cfg: ScenarioConfig, drop_index=0) -> Scenario:
    place_rng, direct_rng, promo_rng, _ = drop_streams(cfg, drop_index)
    ut_pos = sample_annulus(place_rng, cfg.n_ut, cfg.min_close_in, cfg.cell_radius)
    dt_tx = sample_annulus(place_rng, cfg.n_dt, cfg.min_close_in, cfg.cell_radius)
    dt_rx = sample_receivers(place_rng, dt_tx, cfg.d2d_max_separation, cfg.min_close_in, cfg.cell_radius)

    direct, n_clamped = link_gains(
        np.linalg.norm(dt_tx - dt_rx, axis=1), LinkClass.D2D, cfg.channel, direct_rng
    )
    pairs = [DtPair(i, dt_tx[i], dt_rx[i], float(direct[i]), origin=i) for i in range(cfg.n_dt)]
    promoted, pool = promote_dts(cfg, pairs, promo_rng)
    owners = [Owner(s, UT, ut_pos[s]) for s in range(cfg.n_ut)] + promoted
    return Scenario(owners, pool, drop_index=drop_index, n_clamped=n_clamped)


def build_gain_matrix(scenario: Scenario, cfg: ScenarioConfig, rng=None) -> GainMatrix:
    """Draw every cross link demanded by the SINR expressions.

    Direct pair links reuse the gains drawn at placement time. With ``rng``
    omitted the drop's own cross-link stream is used.
    """
    if rng is None:
        rng = drop_streams(cfg, scenario.drop_index)[3]
    owners, pool = scenario.owners, scenario.dt_pairs
    n, m = len(owners), len(pool)
    promoted = [o for o in owners if o.kind == DT]
    v = len(promoted)

    tx = np.array([o.tx for o in owners] + [p.tx for p in pool]).reshape(n + m, 2)
    rx = np.array(
        [scenario.bs_position] + [o.rx for o in promoted] + [p.rx for p in pool]
    ).reshape(1 + v + m, 2)
    tx_is_pair = np.array([o.kind == DT for o in owners] + [True] * m)
    rx_is_pair = np.arange(1 + v + m) >= 1
    link_class = np.where(tx_is_pair[:, None] & rx_is_pair[None, :], LinkClass.D2D, LinkClass.NON_D2D)

    dist = np.linalg.norm(tx[:, None, :] - rx[None, :, :], axis=2)
    g, n_clamped = link_gains(dist, link_class, cfg.channel, rng)

    # rx column of each owner's own receiver
    own_col = np.zeros(n, dtype=int)
    for k, o in enumerate(promoted):
        own_col[o.index] = 1 + k
        g[o.index, 1 + k] = o.direct_gain
    for d, p in enumerate(pool):
        g[n + d, 1 + v + d] = p.direct_gain
    n_clamped -= int(np.count_nonzero(np.diagonal(dist[n:, 1 + v:]) < 1.0))
    n_clamped -= sum(int(np.linalg.norm(o.tx - o.rx) < 1.0) for o in promoted)

    alpha = np.array([o.alpha for o in owners], dtype=float)
    return GainMatrix(
        h_owner_to_bs=g[:n, 0].copy(),
        h_owner_self=g[np.arange(n), own_col].copy(),
        h_dt_to_bs=g[n:, 0].copy(),
        h_dt_to_owner_rx=g[n:, :][:, own_col].copy(),
        h_owner_to_dt_rx=g[:n, 1 + v:].copy(),
        h_dt_to_dt_rx=g[n:, 1 + v:].copy(),
        alpha=alpha,
        beta=1.0 - alpha,
        n_clamped=n_clamped + scenario.n_clamped,
    )
