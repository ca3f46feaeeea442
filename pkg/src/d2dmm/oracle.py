"""Exhaustive optimum of the sum-rate problem for small instances."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from . import linkbudget as lb

DEFAULT_LIMIT = 10**7


class SearchSpaceTooLarge(ValueError):
    pass


@dataclass
class OracleResult:
    best_rho: np.ndarray | None
    best_objective: float
    feasible_count: int
    enumerated_count: int
    blocked_owners: list[int] = field(default_factory=list)
    feasible_codes: set[tuple[int, ...]] | None = field(default=None, repr=False)

    @property
    def instance_feasible(self):
        """False when some owner misses its SINR target even with no sharers."""
        return self.best_rho is not None and not self.blocked_owners


def encode(rho):
    """Per DT: 0 if unassigned, else 1 + owner index."""
    rho = np.asarray(rho)
    code = np.zeros(rho.shape[1], dtype=int)
    rows, cols = np.nonzero(rho)
    code[cols] = rows + 1
    return tuple(int(c) for c in code)


def decode(code, n_owners):
    rho = np.zeros((n_owners, len(code)), dtype=np.int8)
    for d, c in enumerate(code):
        if c:
            rho[c - 1, d] = 1
    return rho


def search_space(n_owners, n_dts):
    return (n_owners + 1) ** n_dts


def _feasible(rho, inst, blocked):
    """check_feasible without building a report; owners first, DTs only if owners pass."""
    occupied = rho.sum(axis=1) > 0
    if blocked.size and occupied[blocked].any():
        return False
    g_s = lb.owner_sinr_all(rho, inst)
    bad = g_s < inst.gamma_s_th
    bad[blocked] = False
    if bad.any():
        return False
    col = rho.sum(axis=0) > 0
    g_d = lb.dt_sinr_all(rho, inst)
    return not (col & (g_d < inst.gamma_d_th)).any()


def solve_exhaustive(inst: lb.Instance, limit=DEFAULT_LIMIT, keep_feasible=False) -> OracleResult:
    """Enumerate every DT-to-{none, owner} map and keep the feasible one with largest sum rate.

    Lexicographic enumeration with strict improvement, so ties resolve to the
    smallest encoding. Owners blocked even on an empty RB must stay unshared;
    with no blocked owners this is exactly the strict constraint set.
    """
    n, m = inst.n_owners, inst.n_dts
    size = search_space(n, m)
    if size > limit:
        raise SearchSpaceTooLarge(f"(N+1)^M = {size} exceeds the limit {limit}")
    blocked = np.array(lb.blocked_owners(inst), dtype=int)
    best_code, best_obj = None, -np.inf
    feasible_count = enumerated = 0
    codes = set() if keep_feasible else None
    for code in itertools.product(range(n + 1), repeat=m):
        enumerated += 1
        rho = decode(code, n)
        if not _feasible(rho, inst, blocked):
            continue
        feasible_count += 1
        if codes is not None:
            codes.add(code)
        obj = lb.system_sum_rate(rho, inst)
        if obj > best_obj:
            best_code, best_obj = code, obj
    best_rho = decode(best_code, n) if best_code is not None else None
    return OracleResult(
        best_rho, float(best_obj), feasible_count, enumerated, [int(s) for s in blocked], codes
    )
