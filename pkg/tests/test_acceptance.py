"""Exit criteria. One PASS/FAIL line per criterion is printed in the terminal summary."""

import math
import time
from contextlib import contextmanager

import numpy as np
import pytest
from conftest import ACCEPTANCE_LOG, make_instance, random_instance, random_rho

from d2dmm import linkbudget as lb
from d2dmm import oracle, scheduler
from d2dmm.config import ScenarioConfig
from d2dmm.harness import SweepSpec, build_instance, format_results, run_sweep
from d2dmm.propagation import PathLossParams, path_loss_db


@contextmanager
def criterion(number, title, budget_s):
    start = time.perf_counter()
    ok = False
    detail = ""
    try:
        yield
        elapsed = time.perf_counter() - start
        assert elapsed < budget_s, f"took {elapsed:.1f}s, budget {budget_s}s"
        ok = True
    except AssertionError as exc:
        detail = f" -- {str(exc).splitlines()[0]}"
        raise
    finally:
        elapsed = time.perf_counter() - start
        status = "PASS" if ok else "FAIL"
        ACCEPTANCE_LOG.append(f"[{status}] {number}. {title} ({elapsed:.1f}s){detail}")


def test_1_threshold_constraint_equivalence():
    with criterion(1, "threshold form <=> SINR constraint on 1000 random instances", 5):
        rng = np.random.default_rng(2001)
        checked = 0
        for _ in range(1000):
            n, m = int(rng.integers(1, 4)), int(rng.integers(1, 6))
            base = random_instance(rng, n, m)
            inst = make_instance(
                base.gains,
                gamma_s_th=10 ** rng.uniform(-1, 1.5),
                gamma_d_th=10 ** rng.uniform(-1, 1.5),
            )
            rho = random_rho(rng, n, m)
            g_s = lb.owner_sinr_all(rho, inst)
            ok_b = lb.interf_at_bs_all(rho, inst) <= lb.interf_owner_threshold_all(inst)
            for s in range(n):
                if abs(g_s[s] / inst.gamma_s_th - 1) > 1e-12:
                    assert ok_b[s] == (g_s[s] >= inst.gamma_s_th)
                    checked += 1
            g_d = lb.dt_sinr_all(rho, inst)
            ok_d = lb.interf_at_dt_all(rho, inst) <= lb.interf_dt_threshold_all(inst)
            for d in np.flatnonzero(rho.sum(axis=0)):
                if abs(g_d[d] / inst.gamma_d_th - 1) > 1e-12:
                    assert ok_d[d] == (g_d[d] >= inst.gamma_d_th)
                    checked += 1
        assert checked > 3000


HEURISTIC_CONFIGS = [
    ScenarioConfig(n_rb=2, n_ut=2, n_dt=8, seed=11),
    ScenarioConfig(n_rb=4, n_ut=2, n_dt=16, seed=12),
    ScenarioConfig(n_rb=4, n_ut=4, n_dt=10, seed=13),
    ScenarioConfig(n_rb=8, n_ut=4, n_dt=32, seed=14),
    ScenarioConfig(n_rb=8, n_ut=8, n_dt=32, seed=15),
]


def test_2_heuristic_feasibility():
    with criterion(2, "scheduler output feasible on 500 drops over 5 configs", 30):
        for cfg in HEURISTIC_CONFIGS:
            for i in range(100):
                _, inst = build_instance(cfg, i)
                res = scheduler.run(inst)
                rep = lb.check_feasible(res.rho, inst)
                assert rep.feasible, (cfg, i, rep)
                assert (res.rho.sum(axis=0) <= 1).all()


ORACLE_CONFIGS = [
    ScenarioConfig(n_rb=3, n_ut=3, n_dt=5, seed=21),
    ScenarioConfig(n_rb=3, n_ut=2, n_dt=6, seed=22),
    ScenarioConfig(n_rb=2, n_ut=1, n_dt=5, seed=23),
    ScenarioConfig(n_rb=3, n_ut=1, n_dt=7, seed=24),
]


def test_3_oracle_dominance():
    with criterion(3, "oracle >= heuristic and heuristic in feasible set, 200 instances", 60):
        for cfg in ORACLE_CONFIGS:
            for i in range(50):
                _, inst = build_instance(cfg, i)
                assert inst.n_owners <= 3 and inst.n_dts <= 5
                heur = scheduler.run(inst)
                best = oracle.solve_exhaustive(inst, keep_feasible=True)
                assert oracle.encode(heur.rho) in best.feasible_codes, (cfg, i)
                assert best.best_objective >= lb.system_sum_rate(heur.rho, inst) * (1 - 1e-12), (cfg, i)


def test_4_cst_checkpoints():
    with criterion(4, "cst(1e-3)=0.28313+-1e-5, cst(1e-1)=2.1640+-1e-4, cst(0.2) raises", 1):
        with pytest.raises(ValueError):
            lb.cst(0.2)
        assert lb.cst(1e-1) == pytest.approx(2.1640, abs=1e-4)
        assert lb.cst(1e-3) == pytest.approx(0.28313, abs=1e-5), f"cst(1e-3) = {lb.cst(1e-3)!r}"


def test_5_path_loss_checkpoints():
    with criterion(5, "LOS/NLOS path loss at 100 m = 101.4 / 130.4 dB", 1):
        assert abs(path_loss_db(100.0, PathLossParams(61.4, 2.0, 5.8), 0.0) - 101.4) <= 1e-9
        assert abs(path_loss_db(100.0, PathLossParams(72.0, 2.92, 8.7), 0.0) - 130.4) <= 1e-9


def test_6_ber_monotonicity():
    with criterion(6, "per-user rates non-decreasing in BER at fixed assignment", 30):
        cfg = ScenarioConfig(n_rb=8, n_ut=6, n_dt=24, seed=31)
        for i in range(100):
            _, inst = build_instance(cfg, i)
            rho = scheduler.run(inst).rho
            prev = None
            for ber in (1e-3, 1e-2, 1e-1):
                at = inst.with_ber(ber, ber)
                cur = np.r_[lb.owner_rates(rho, at), lb.dt_rates(rho, at)]
                if prev is not None:
                    assert (cur >= prev).all(), (i, ber)
                prev = cur


def test_7_trend_reproduction():
    with criterion(7, "N=16, pool 16..64: D2D rate rises at low load, SR falls at top load", 300):
        cfg = ScenarioConfig(n_rb=16, n_ut=16, n_dt=16, seed=7)
        rows = run_sweep(cfg, SweepSpec("n_dt", [16, 32, 48, 64], drops_per_point=500))
        d2d = [r.mean_d2d_rate for r in rows]
        sr = [r.satisfaction_ratio for r in rows]
        low_load = d2d[:3]
        assert all(a <= b for a, b in zip(low_load, low_load[1:])), d2d
        assert sr[-1] <= sr[-2], sr


def test_8_determinism_and_parallel_equivalence():
    with criterion(8, "fixed-seed mini-sweep CSV byte-identical across runs and workers 1/4", 60):
        cfg = ScenarioConfig(n_rb=4, n_ut=2, n_dt=6, seed=2024)
        sweep = SweepSpec("n_dt", [6, 8, 10], drops_per_point=20)
        first = format_results(run_sweep(cfg, sweep, workers=1)).encode()
        again = format_results(run_sweep(cfg, sweep, workers=1)).encode()
        parallel = format_results(run_sweep(cfg, sweep, workers=4)).encode()
        assert first == again == parallel
        assert not math.isnan(float(first.splitlines()[1].split(b",")[3]))
