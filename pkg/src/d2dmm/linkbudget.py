"""BER-aware SINR, rates, interference thresholds and feasibility for an assignment.

All arithmetic is linear scale. ``rho`` is an (N, M) 0/1 array: rho[s, d] = 1
when pool DT d reuses owner s's RB.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .config import ScenarioConfig
from .topology import DT, GainMatrix, Scenario


def dbm_to_watts(dbm):
    return 10.0 ** ((dbm - 30.0) / 10.0)


def db_to_linear(db):
    return 10.0 ** (db / 10.0)


def cst(ber):
    """SINR scaling -1.5 / ln(5 BER) for a target bit error rate."""
    if not 0.0 < ber < 0.2:
        raise ValueError(f"BER must lie in (0, 0.2), got {ber}")
    return -1.5 / math.log(5.0 * ber)


@dataclass(frozen=True)
class PowerAndNoise:
    p_owner: np.ndarray  # W
    p_dt: np.ndarray  # W
    noise_owner: float  # W per RB
    noise_dt: float

    @classmethod
    def from_config(cls, cfg: ScenarioConfig, scenario: Scenario):
        p_owner = np.array(
            [dbm_to_watts(cfg.p_dt_max if o.kind == DT else cfg.p_ut_max) for o in scenario.owners]
        )
        p_dt = np.full(scenario.n_pairs, dbm_to_watts(cfg.p_dt_max))
        noise = dbm_to_watts(cfg.noise_density + 10.0 * math.log10(cfg.bandwidth_per_rb))
        return cls(p_owner, p_dt, noise, noise)


@dataclass(frozen=True)
class Instance:
    """Everything the rate and constraint formulas need for one drop."""

    gains: GainMatrix
    power: PowerAndNoise
    cst_s: float
    cst_d: float
    gamma_s_th: float  # linear
    gamma_d_th: float  # linear
    bandwidth: float
    p_owner_max: np.ndarray | None = None
    p_dt_max: float | None = None

    @classmethod
    def from_config(cls, cfg: ScenarioConfig, scenario: Scenario, gains: GainMatrix):
        pw = PowerAndNoise.from_config(cfg, scenario)
        return cls(
            gains=gains,
            power=pw,
            cst_s=cst(cfg.ber_s),
            cst_d=cst(cfg.ber_d),
            gamma_s_th=db_to_linear(cfg.gamma_s_th),
            gamma_d_th=db_to_linear(cfg.gamma_d_th),
            bandwidth=cfg.bandwidth_per_rb,
            p_owner_max=pw.p_owner.copy(),
            p_dt_max=dbm_to_watts(cfg.p_dt_max),
        )

    @property
    def n_owners(self):
        return self.gains.shape[0]

    @property
    def n_dts(self):
        return self.gains.shape[1]

    def with_ber(self, ber_s, ber_d):
        return Instance(
            self.gains, self.power, cst(ber_s), cst(ber_d), self.gamma_s_th,
            self.gamma_d_th, self.bandwidth, self.p_owner_max, self.p_dt_max,
        )

    def empty_rho(self):
        return np.zeros((self.n_owners, self.n_dts), dtype=np.int8)


def validate_rho(rho, inst: Instance):
    rho = np.asarray(rho)
    if rho.shape != (inst.n_owners, inst.n_dts):
        raise ValueError(f"rho has shape {rho.shape}, expected {(inst.n_owners, inst.n_dts)}")
    if not np.isin(rho, (0, 1)).all():
        raise ValueError("rho entries must be 0 or 1")
    return rho


# ---- vectorised core -------------------------------------------------------


def owner_signal(inst: Instance):
    return inst.power.p_owner * inst.gains.owner_desired()


def bs_contributions(inst: Instance):
    """(N, M): P_d (alpha_s H_dB + beta_s H_ds), DT d's interference at owner s's receiver."""
    return inst.power.p_dt[None, :] * inst.gains.dt_to_owner_receiver()


def interf_at_bs_all(rho, inst: Instance):
    return (rho * bs_contributions(inst)).sum(axis=1)


def owner_sinr_all(rho, inst: Instance):
    return owner_signal(inst) / (interf_at_bs_all(rho, inst) + inst.power.noise_owner)


def interf_at_dt_all(rho, inst: Instance):
    """Interference at every DT receiver: its owner's signal plus co-channel DTs on the same RB."""
    g = inst.gains
    p_s = inst.power.p_owner
    from_owner = (rho * (p_s[:, None] * g.h_owner_to_dt_rx)).sum(axis=0)
    share = rho.T.astype(float) @ rho.astype(float)  # share[d, d'] = 1 if same owner
    np.fill_diagonal(share, 0.0)
    from_dts = ((inst.power.p_dt[:, None] * g.h_dt_to_dt_rx) * share.T).sum(axis=0)
    return from_owner + from_dts


def dt_signal(inst: Instance):
    return inst.power.p_dt * inst.gains.h_dt_direct


def admitted(rho):
    return np.asarray(rho).sum(axis=0) > 0


def dt_sinr_all(rho, inst: Instance):
    """SINR per DT; 0 for DTs not admitted on any RB."""
    sinr = dt_signal(inst) / (interf_at_dt_all(rho, inst) + inst.power.noise_dt)
    return np.where(admitted(rho), sinr, 0.0)


def owner_rates(rho, inst: Instance):
    return inst.bandwidth * np.log2(1.0 + inst.cst_s * owner_sinr_all(rho, inst))


def dt_rates(rho, inst: Instance):
    n_rb = np.asarray(rho).sum(axis=0)
    return n_rb * inst.bandwidth * np.log2(1.0 + inst.cst_d * dt_sinr_all(rho, inst))


def system_sum_rate(rho, inst: Instance):
    return float(owner_rates(rho, inst).sum() + dt_rates(rho, inst).sum())


def interf_owner_threshold_all(inst: Instance):
    return owner_signal(inst) / inst.gamma_s_th - inst.power.noise_owner


def interf_dt_threshold_all(inst: Instance):
    return dt_signal(inst) / inst.gamma_d_th - inst.power.noise_dt


# ---- per-index surface -----------------------------------------------------


def owner_sinr(s, rho, inst: Instance):
    return float(owner_sinr_all(rho, inst)[s])


def dt_sinr(d, rho, inst: Instance):
    """Returns ``(sinr, admitted)``; an unadmitted DT reports ``(0.0, False)``."""
    ok = bool(admitted(rho)[d])
    return (float(dt_sinr_all(rho, inst)[d]) if ok else 0.0), ok


def owner_rate(s, rho, inst: Instance):
    return float(owner_rates(rho, inst)[s])


def dt_rate(d, rho, inst: Instance):
    return float(dt_rates(rho, inst)[d])


def interf_at_bs(s, rho, inst: Instance):
    return float(interf_at_bs_all(rho, inst)[s])


def interf_at_dt(d, rho, inst: Instance):
    return float(interf_at_dt_all(rho, inst)[d])


def interf_owner_threshold(s, inst: Instance):
    """Largest BS-side interference owner s tolerates; negative means no sharer fits."""
    return float(interf_owner_threshold_all(inst)[s])


def interf_dt_threshold(d, inst: Instance):
    """Largest interference DT d tolerates; negative means it fails even interference-free."""
    return float(interf_dt_threshold_all(inst)[d])


# ---- feasibility -----------------------------------------------------------


@dataclass
class Feasibility:
    owner_violations: list[int] = field(default_factory=list)
    dt_violations: list[int] = field(default_factory=list)
    column_violations: list[int] = field(default_factory=list)
    owner_power_violations: list[int] = field(default_factory=list)
    dt_power_violations: list[int] = field(default_factory=list)
    blocked_owners: list[int] = field(default_factory=list)

    @property
    def feasible(self):
        """No constraint broken by the assignment itself.

        Blocked owners (below their SINR target with no sharers at all) only
        count as violations when something was placed on their RB.
        """
        return not (
            self.owner_violations or self.dt_violations or self.column_violations
            or self.owner_power_violations or self.dt_power_violations
        )

    @property
    def strict(self):
        """Every owner meets its SINR target, blocked or not."""
        return self.feasible and not self.blocked_owners


def blocked_owners(inst: Instance):
    """Owners that miss gamma_s_th even with an empty RB."""
    sinr0 = owner_signal(inst) / inst.power.noise_owner
    return [int(s) for s in np.flatnonzero(sinr0 < inst.gamma_s_th)]


def check_feasible(rho, inst: Instance) -> Feasibility:
    rho = validate_rho(rho, inst)
    out = Feasibility()
    col = rho.sum(axis=0)
    out.column_violations = [int(d) for d in np.flatnonzero(col > 1)]

    out.blocked_owners = blocked_owners(inst)
    blocked = set(out.blocked_owners)
    occupied = rho.sum(axis=1) > 0
    g_s = owner_sinr_all(rho, inst)
    out.owner_violations = [
        int(s) for s in np.flatnonzero(g_s < inst.gamma_s_th) if s not in blocked or occupied[s]
    ]
    g_d = dt_sinr_all(rho, inst)
    out.dt_violations = [int(d) for d in np.flatnonzero((col > 0) & (g_d < inst.gamma_d_th))]

    if inst.p_owner_max is not None:
        out.owner_power_violations = [
            int(s) for s in np.flatnonzero(inst.power.p_owner > inst.p_owner_max)
        ]
    if inst.p_dt_max is not None:
        out.dt_power_violations = [int(d) for d in np.flatnonzero(inst.power.p_dt > inst.p_dt_max)]
    return out
