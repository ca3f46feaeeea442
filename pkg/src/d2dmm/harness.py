"""Monte Carlo driver: seeded drops, sweeps, aggregation and CSV output."""

from __future__ import annotations

import csv
import io
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import linkbudget as lb
from . import oracle, scheduler
from .config import ConfigError, ScenarioConfig
from .topology import build_gain_matrix, generate_drop

log = logging.getLogger(__name__)

SWEEP_AXES = ("n_dt", "n_ut", "ber")

CSV_COLUMNS = (
    "sweep_axis",
    "sweep_value",
    "drops",
    "mean_system_rate_bps",
    "ci95_bps",
    "mean_d2d_rate_bps",
    "mean_owner_rate_bps",
    "satisfaction_ratio",
    "admitted_fraction",
    "infeasible_drops",
    "seed",
)


@dataclass
class DropMetrics:
    drop_index: int
    owner_rates: np.ndarray
    dt_rates: np.ndarray
    rho: np.ndarray
    feasibility: lb.Feasibility
    rejected: dict[int, str]
    n_satisfied: int
    n_clamped: int = 0

    @property
    def owner_sum_rate(self):
        return float(self.owner_rates.sum())

    @property
    def d2d_sum_rate(self):
        return float(self.dt_rates.sum())

    @property
    def system_rate(self):
        return self.owner_sum_rate + self.d2d_sum_rate

    @property
    def n_admitted(self):
        return int(np.count_nonzero(self.rho.sum(axis=0)))

    @property
    def n_pool(self):
        return self.rho.shape[1]

    @property
    def satisfaction_ratio(self):
        # nothing admitted: reported as fully satisfied
        return self.n_satisfied / self.n_admitted if self.n_admitted else 1.0

    @property
    def infeasible(self):
        return bool(self.feasibility.blocked_owners)


def build_instance(cfg: ScenarioConfig, drop_index):
    scenario = generate_drop(cfg, drop_index)
    gains = build_gain_matrix(scenario, cfg)
    return scenario, lb.Instance.from_config(cfg, scenario, gains)


def run_drop(cfg: ScenarioConfig, drop_index) -> DropMetrics:
    scenario, inst = build_instance(cfg, drop_index)
    result = scheduler.run(inst)
    dt_rates = lb.dt_rates(result.rho, inst)
    admitted = result.rho.sum(axis=0) > 0
    return DropMetrics(
        drop_index=drop_index,
        owner_rates=lb.owner_rates(result.rho, inst),
        dt_rates=dt_rates,
        rho=result.rho,
        feasibility=lb.check_feasible(result.rho, inst),
        rejected=result.rejected,
        n_satisfied=int(np.count_nonzero(admitted & (dt_rates >= cfg.min_dt_rate))),
        n_clamped=inst.gains.n_clamped,
    )


def _run_drop_args(args):
    return run_drop(*args)


def run_drops(cfg: ScenarioConfig, drops=None, workers=1):
    """Metrics for drops 0..drops-1, always in drop order."""
    drops = cfg.drops if drops is None else drops
    jobs = [(cfg, i) for i in range(drops)]
    if workers <= 1 or drops <= 1:
        return [run_drop(*job) for job in jobs]
    chunk = max(1, drops // (4 * workers))
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_run_drop_args, jobs, chunksize=chunk))


@dataclass
class SweepSpec:
    axis: str
    values: list
    drops_per_point: int = 500

    def __post_init__(self):
        if self.axis not in SWEEP_AXES:
            raise ConfigError(f"sweep axis must be one of {SWEEP_AXES}, got {self.axis!r}")
        if not self.values:
            raise ConfigError("sweep needs at least one value")
        if self.axis in ("n_dt", "n_ut"):
            if any(float(v) != int(v) for v in self.values):
                raise ConfigError(f"{self.axis} values must be integers")
            self.values = [int(v) for v in self.values]
        else:
            self.values = [float(v) for v in self.values]
        diffs = np.diff(self.values)
        if len(self.values) > 1 and not ((diffs > 0).all() or (diffs < 0).all()):
            raise ConfigError("sweep values must be strictly ordered")
        if self.drops_per_point < 1:
            raise ConfigError("drops_per_point must be >= 1")

    @classmethod
    def parse(cls, text, drops_per_point=500):
        axis, sep, values = text.partition("=")
        if not sep:
            raise ConfigError(f"sweep must look like axis=v1,v2,..., got {text!r}")
        try:
            vals = [float(v) for v in values.split(",") if v.strip()]
        except ValueError:
            raise ConfigError(f"bad sweep values in {text!r}") from None
        return cls(axis.strip(), vals, drops_per_point)

    def apply(self, cfg: ScenarioConfig, value):
        if self.axis == "ber":
            return cfg.replace(ber_s=value, ber_d=value)
        return cfg.replace(**{self.axis: value})


@dataclass
class AggregateMetrics:
    sweep_axis: str
    sweep_value: float
    drops: int
    mean_system_rate: float
    confidence_halfwidth: float
    mean_d2d_rate: float
    mean_owner_rate: float
    satisfaction_ratio: float
    admitted_fraction: float
    infeasible_drop_count: int
    seed: int
    per_drop: list[DropMetrics] = field(default_factory=list, repr=False)


def _axis_value(cfg, axis):
    return cfg.ber_d if axis == "ber" else getattr(cfg, axis)


def aggregate(metrics: list[DropMetrics], cfg: ScenarioConfig, axis="n_dt", value=None):
    """Average drop metrics in drop order.

    Drops with a blocked owner are counted in ``infeasible_drop_count`` and
    left out of the means only when ``cfg.exclude_infeasible`` is set.
    """
    metrics = sorted(metrics, key=lambda m: m.drop_index)
    used = [m for m in metrics if not (cfg.exclude_infeasible and m.infeasible)]
    system = np.array([m.system_rate for m in used])
    owner = np.array([m.owner_sum_rate for m in used])
    d2d = np.array([m.d2d_sum_rate for m in used])
    n = len(used)
    if n:
        mean_sys, mean_owner, mean_d2d = (float(math.fsum(a) / n) for a in (system, owner, d2d))
    else:
        mean_sys = mean_owner = mean_d2d = math.nan
    ci = 1.96 * float(np.std(system, ddof=1)) / math.sqrt(n) if n > 1 else 0.0
    n_admitted = sum(m.n_admitted for m in used)
    n_satisfied = sum(m.n_satisfied for m in used)
    n_pool = sum(m.n_pool for m in used)
    return AggregateMetrics(
        sweep_axis=axis,
        sweep_value=_axis_value(cfg, axis) if value is None else value,
        drops=len(metrics),
        mean_system_rate=mean_sys,
        confidence_halfwidth=ci,
        mean_d2d_rate=mean_d2d,
        mean_owner_rate=mean_owner,
        satisfaction_ratio=n_satisfied / n_admitted if n_admitted else 1.0,
        admitted_fraction=n_admitted / n_pool if n_pool else 0.0,
        infeasible_drop_count=sum(m.infeasible for m in metrics),
        seed=cfg.seed,
        per_drop=metrics,
    )


def run_sweep(cfg: ScenarioConfig, sweep: SweepSpec, workers=1):
    rows = []
    for value in sweep.values:
        point = sweep.apply(cfg, value)
        log.info("sweep %s=%s (%d drops)", sweep.axis, value, sweep.drops_per_point)
        metrics = run_drops(point, sweep.drops_per_point, workers)
        rows.append(aggregate(metrics, point, sweep.axis, value))
    return rows


def _fmt(value):
    if isinstance(value, (bool, np.bool_)):
        return str(int(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return repr(float(value))


def format_results(table) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in table:
        writer.writerow(
            [
                row.sweep_axis,
                _fmt(row.sweep_value),
                row.drops,
                _fmt(row.mean_system_rate),
                _fmt(row.confidence_halfwidth),
                _fmt(row.mean_d2d_rate),
                _fmt(row.mean_owner_rate),
                _fmt(row.satisfaction_ratio),
                _fmt(row.admitted_fraction),
                row.infeasible_drop_count,
                row.seed,
            ]
        )
    return buf.getvalue()


def write_results(table, path):
    path = Path(path)
    try:
        path.write_text(format_results(table), encoding="utf-8")
    except OSError as exc:
        raise OSError(f"cannot write results to {path}: {exc.strerror or exc}") from exc
    return path


@dataclass
class OracleComparison:
    compared: int
    skipped: int
    mean_ratio: float  # heuristic / optimum sum rate
    worst_ratio: float
    dominance_violations: int


def compare_with_oracle(cfg: ScenarioConfig, drops, max_space):
    """Run heuristic and exhaustive optimum on every drop small enough to enumerate."""
    ratios, skipped, violations = [], 0, 0
    for i in range(drops):
        _, inst = build_instance(cfg, i)
        if oracle.search_space(inst.n_owners, inst.n_dts) > max_space:
            skipped += 1
            continue
        heur = lb.system_sum_rate(scheduler.run(inst).rho, inst)
        best = oracle.solve_exhaustive(inst, limit=max_space)
        if heur > best.best_objective * (1 + 1e-12):
            violations += 1
        ratios.append(heur / best.best_objective)
    return OracleComparison(
        compared=len(ratios),
        skipped=skipped,
        mean_ratio=float(np.mean(ratios)) if ratios else math.nan,
        worst_ratio=float(np.min(ratios)) if ratios else math.nan,
        dominance_violations=violations,
    )
