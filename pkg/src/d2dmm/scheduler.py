"""Greedy interference-threshold scheduler.

Each DT is first offered to the untreated owner maximising R_s + R_d with the
DT alone on the RB. Owners are then treated one at a time, largest candidate
set first: DTs whose own SINR fails under the full candidate set are dropped,
then the strongest BS-side interferers are dropped until the owner's margin
holds. The surviving set is frozen and the dropped DTs are re-offered to the
owners still untreated.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import linkbudget as lb

NO_FEASIBLE_OWNER = "no feasible owner"
PRUNED_OWN_SINR = "pruned for own SINR"
PRUNED_OWNER_SINR = "pruned for owner SINR"


@dataclass
class CandidateSets:
    omega: dict[int, list[int]]
    untreated: set[int]
    unassigned: set[int]
    rejected: dict[int, str] = field(default_factory=dict)


@dataclass
class ScheduleResult:
    rho: np.ndarray
    rejected: dict[int, str]
    iterations: int
    interf_bs: np.ndarray
    interf_bs_threshold: np.ndarray

    @property
    def admitted(self):
        return [int(d) for d in np.flatnonzero(self.rho.sum(axis=0))]


def _solo_tables(inst: lb.Instance):
    """Per (owner, DT) quantities with DT d alone on owner s's RB, all (N, M)."""
    g = inst.gains
    contrib = lb.bs_contributions(inst)
    sig_s = lb.owner_signal(inst)
    sig_d = lb.dt_signal(inst)
    i_d = inst.power.p_owner[:, None] * g.h_owner_to_dt_rx
    gamma_s = sig_s[:, None] / (contrib + inst.power.noise_owner)
    gamma_d = sig_d[None, :] / (i_d + inst.power.noise_dt)
    rate = inst.bandwidth * (
        np.log2(1.0 + inst.cst_s * gamma_s) + np.log2(1.0 + inst.cst_d * gamma_d)
    )
    return contrib, gamma_d, rate


def build_candidates(dts, owners, inst: lb.Instance, cands: CandidateSets | None = None, reason=None):
    """Offer each DT in ``dts`` to the owners in ``owners``.

    Qualifying owners keep their BS-side margin strictly with d alone and give d
    an SINR of at least gamma_d_th against the owner's signal only. The best
    R_s + R_d wins (lowest index on ties). Updates and returns ``cands``.
    """
    owners = sorted(owners)
    if cands is None:
        cands = CandidateSets({s: [] for s in owners}, set(owners), set(dts))
    if not owners:
        for d in sorted(dts):
            cands.rejected[d] = reason.get(d, NO_FEASIBLE_OWNER) if reason else NO_FEASIBLE_OWNER
            cands.unassigned.discard(d)
        return cands
    contrib, gamma_d, rate = _solo_tables(inst)
    th_s = lb.interf_owner_threshold_all(inst)
    rows = np.array(owners)
    for d in sorted(dts):
        ok = (contrib[rows, d] < th_s[rows]) & (gamma_d[rows, d] >= inst.gamma_d_th)
        cands.unassigned.discard(d)
        if not ok.any():
            cands.rejected[d] = reason.get(d, NO_FEASIBLE_OWNER) if reason else NO_FEASIBLE_OWNER
            continue
        score = np.where(ok, rate[rows, d], -np.inf)
        s = owners[int(np.argmax(score))]
        cands.omega[s].append(d)
        cands.rejected.pop(d, None)
    return cands


def prune_owner(s, omega_s, inst: lb.Instance):
    """Return ``(kept, removed)`` with removal reasons, for owner s and candidates omega_s."""
    g = inst.gains
    members = sorted(omega_s)
    removed = {}

    if members:
        rho = inst.empty_rho()
        rho[s, members] = 1
        interf = lb.interf_at_dt_all(rho, inst)
        th_d = lb.interf_dt_threshold_all(inst)
        for d in members:
            if interf[d] > th_d[d]:
                removed[d] = PRUNED_OWN_SINR
    kept = [d for d in members if d not in removed]

    contrib = inst.power.p_dt * (g.alpha[s] * g.h_dt_to_bs + g.beta[s] * g.h_dt_to_owner_rx[:, s])
    th_s = lb.interf_owner_threshold(s, inst)
    while kept and contrib[kept].sum() > th_s:
        worst = kept[int(np.argmax(contrib[kept]))]
        kept.remove(worst)
        removed[worst] = PRUNED_OWNER_SINR
    return kept, removed


def run(inst: lb.Instance) -> ScheduleResult:
    n, m = inst.n_owners, inst.n_dts
    cands = build_candidates(range(m), range(n), inst)
    rho = inst.empty_rho()
    iterations = 0
    while cands.untreated:
        s = min(cands.untreated, key=lambda k: (-len(cands.omega[k]), k))
        kept, removed = prune_owner(s, cands.omega[s], inst)
        rho[s, kept] = 1
        cands.untreated.discard(s)
        cands.omega[s] = kept
        iterations += 1
        if removed:
            build_candidates(removed, cands.untreated, inst, cands, reason=removed)
    return ScheduleResult(
        rho=rho,
        rejected=dict(sorted(cands.rejected.items())),
        iterations=iterations,
        interf_bs=lb.interf_at_bs_all(rho, inst),
        interf_bs_threshold=lb.interf_owner_threshold_all(inst),
    )
