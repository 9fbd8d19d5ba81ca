"""Acceptance gate: ten criteria, each printed as one PASS/FAIL line.

Run on its own with ``pytest tests/test_acceptance.py -s -m acceptance``.
"""

import contextlib
import json
import math
import time

import numpy as np
import pytest

from hedge_nash import SymmetricGame, run_trajectory
from hedge_nash.analysis import (CONTESTED, TOLERANCES, check_average_identities, check_convexity,
                                 check_regret_bound, check_step_inequalities, random_instance,
                                 regret_bound_value, replay_witness)
from hedge_nash.campaign import Instance, campaign_instances, run_campaign, run_instance
from hedge_nash.game_core import approximation_error
from hedge_nash.generators import GeneratorSpec, generate
from hedge_nash.oracle import support_enumeration, verify
from hedge_nash.schedule import build_schedule
from schedule_oracle import oracle_schedule

pytestmark = pytest.mark.acceptance

GRID_ALPHAS = (0.01, 0.1, 0.5)
GRID_K = 2000
CONVEXITY_GRID = np.linspace(0.0, 2.0, 41)


@pytest.fixture
def criterion(capsys):
    @contextlib.contextmanager
    def run(number: int, name: str):
        info = {}
        t0 = time.perf_counter()
        try:
            yield info
        except BaseException as exc:
            with capsys.disabled():
                print(f"\nFAIL criterion {number:2d} {name} ({type(exc).__name__})")
            raise
        detail = ", ".join(f"{k}={v}" for k, v in info.items())
        with capsys.disabled():
            print(f"\nPASS criterion {number:2d} {name} ({time.perf_counter() - t0:.2f}s) {detail}")
    return run


@pytest.fixture(scope="module")
def grid():
    """20 random games, n in 2..10, each run at three learning rates to K=2000 with every step kept."""
    rng = np.random.Generator(np.random.PCG64(2024))
    t0 = time.perf_counter()
    runs = []
    for _ in range(20):
        n = int(rng.integers(2, 11))
        game = SymmetricGame(rng.random((n, n)))
        for alpha in GRID_ALPHAS:
            runs.append((game, run_trajectory(game, alpha, GRID_K, observe_every=1)))
    return runs, time.perf_counter() - t0


def test_c01_log_ratio_identity(grid, criterion):
    with criterion(1, "log-ratio identity, all pairs, all K <= 2000") as info:
        runs, build_time = grid
        t0 = time.perf_counter()
        worst = 0.0
        for game, traj in runs:
            assert traj.ks.tolist() == list(range(GRID_K + 1))
            c_avg = traj.averages @ game.payoffs.T
            rhs = traj.alpha * (traj.ks + 1.0)[:, None] * c_avg
            # every pair (i, j): d_i - d_j with d = ln X^{K+1} - rhs
            d = traj.log_next - rhs
            worst = max(worst, float((d.max(axis=1) - d.min(axis=1)).max()))
        elapsed = build_time + time.perf_counter() - t0
        info.update(trajectories=len(runs), total_seconds=f"{elapsed:.2f}", max_violation=f"{worst:.2e}")
        assert worst <= 1e-8
        assert elapsed < 10.0


def test_c02_convexity(criterion):
    with criterion(2, "convexity of the entropy step, 1000 samples") as info:
        rng = np.random.Generator(np.random.PCG64(7))
        t0 = time.perf_counter()
        worst = -math.inf
        for _ in range(1000):
            game, x, y = random_instance(rng)
            r = check_convexity(game, x, y, CONVEXITY_GRID, secant=None)
            worst = max(worst, r.max_violation)
        info.update(min_second_difference=f"{-worst:.2e}")
        assert -worst >= -1e-7
        assert time.perf_counter() - t0 < 30.0


def test_c03_step_inequalities(criterion):
    with criterion(3, "one-step inequalities, 1000 samples") as info:
        rng = np.random.Generator(np.random.PCG64(8))
        worst = {}
        for _ in range(1000):
            game, x, y = random_instance(rng)
            alpha = float(rng.uniform(1e-3, 2.0))
            for r in check_step_inequalities(game, x, y, alpha):
                worst[r.lemma_id] = max(worst.get(r.lemma_id, -math.inf), r.max_violation)
        info.update({k: f"{v:.2e}" for k, v in worst.items()})
        assert set(worst) == {"secant_bound", "log_lower_bound", "slater_chain"}
        assert all(v <= 1e-10 for v in worst.values())


def test_c04_averaged_inequalities(grid, criterion):
    with criterion(4, "averaged identities and bound, every K") as info:
        runs, _ = grid
        worst = {}
        for game, traj in runs:
            for r in check_average_identities(traj, game):
                assert r.samples == GRID_K + 1
                worst[r.lemma_id] = max(worst.get(r.lemma_id, -math.inf), r.max_violation)
        info.update({k: f"{v:.2e}" for k, v in worst.items()})
        assert {"averaged_identity", "averaged_bound"} <= set(worst)
        assert all(v <= 1e-8 for v in worst.values())


def test_c05_regret_bound(grid, criterion):
    with criterion(5, "average external regret bound, every K") as info:
        runs, _ = grid
        worst = -math.inf
        for game, traj in runs:
            bound = math.log(game.n) / (traj.alpha * (traj.ks + 1.0)) + math.expm1(traj.alpha)
            worst = max(worst, float((traj.regret_avg - bound).max()))
            assert check_regret_bound(traj, game).passed
        info.update(max_excess=f"{worst:.2e}")
        assert worst <= 1e-9


def test_c06_zero_sum_convergence(criterion):
    with criterion(6, "zero-sum games, alpha=0.05, K=10^4") as info:
        t0 = time.perf_counter()
        alpha, K = 0.05, 10_000
        gaps = []
        for i in range(20):
            n = (3, 5, 10)[i % 3]
            game = generate(GeneratorSpec("symmetric_zero_sum", n, i))
            traj = run_trajectory(game, alpha, K)
            eps = approximation_error(game, traj.final_average()).epsilon
            bound = math.log(n) / (alpha * (K + 1)) + math.expm1(alpha)
            assert bound == pytest.approx(float(regret_bound_value(n, alpha, K)), rel=1e-15)
            assert eps <= bound, (game.label, eps, bound)
            gaps.append(bound - eps)
        info.update(games=20, min_margin=f"{min(gaps):.3e}")
        assert time.perf_counter() - t0 < 60.0


def test_c07_schedule_arithmetic(criterion):
    with criterion(7, "schedule arithmetic vs 50-digit reference") as info:
        s = build_schedule(3, 0.2)
        o = oracle_schedule(3, "0.2")
        assert s.k_hat == 1450 == o["k_hat"]
        assert (s.K, s.k_prime) == (o["K"], o["k_prime"])
        for key in ("eps_prime", "alpha", "theta"):
            assert abs(getattr(s, key) - float(o[key])) <= 1e-9
        sweep = 0
        for n in range(1, 13):
            for eps in (0.01, 0.02, 0.05, 0.1, 0.2, 0.3, 0.5, 0.75, 1.0):
                assert build_schedule(n, eps).predicted_error <= eps
                sweep += 1
        info.update(K=s.K, k_hat=s.k_hat, k_prime=s.k_prime, sweep_points=sweep)


def test_c08_oracle(rps01, identity2, criterion):
    with criterion(8, "support enumeration oracle") as info:
        rps = support_enumeration(rps01)
        assert len(rps.equilibria) == 1
        assert np.abs(rps.equilibria[0].strategy.masses - 1 / 3).max() <= 1e-9
        ident = support_enumeration(identity2)
        assert len(ident.equilibria) == 3
        for game, eqs in ((rps01, rps), (identity2, ident)):
            for e in eqs.equilibria:
                assert verify(game, e.strategy, 1e-9)
        info.update(rps=1, identity2=3)


def test_c09_schedule_campaign(tmp_path, criterion):
    with criterion(9, "schedule campaign with replayable witnesses") as info:
        t0 = time.perf_counter()
        instances = [i for i in campaign_instances() if i.instance_id.startswith("grid-")]
        assert len(instances) == 60
        results = run_campaign(tmp_path, instances)
        assert (tmp_path / "report.md").read_text().startswith("# Hedge schedule campaign")
        assert all(r.asserted_ok for r in results)
        violations = 0
        for r in results:
            files = {f.split("__")[1][:-len(".json")] for f in r.witness_files}
            for rep in r.reports:
                if rep.contested and not rep.passed:
                    violations += 1
                    assert rep.lemma_id in files
                    w = json.loads((tmp_path / "witnesses" / f"{r.instance.instance_id}__{rep.lemma_id}.json").read_text())
                    lhs, rhs = replay_witness(w)
                    assert lhs == pytest.approx(w["lhs"], rel=1e-9, abs=1e-12)
                    assert rhs == pytest.approx(w["rhs"], rel=1e-9, abs=1e-12)
                    assert lhs - rhs > TOLERANCES[rep.lemma_id]
        met = sum(r.target_met for r in results)
        info.update(instances=len(results), target_met=met, contested_violations=violations)
        assert {r.lemma_id for r in results[0].reports} >= CONTESTED
        assert time.perf_counter() - t0 < 300.0


def test_c10_guaranteed_family(criterion):
    with criterion(10, "schedule at eps=0.2 on structured families") as info:
        zs, ds = [], []
        for n in (3, 5):
            for seed in range(5):
                for family, bucket in (("symmetric_zero_sum", zs), ("doubly_symmetric", ds)):
                    inst = Instance(f"{family}-{n}-{seed}", GeneratorSpec(family, n, seed), 0.2,
                                    guaranteed=family == "symmetric_zero_sum")
                    bucket.append(run_instance(inst).eps_average)
        assert all(e <= 0.2 for e in zs)
        # doubly symmetric: recorded only
        info.update(zero_sum_max=f"{max(zs):.4f}", doubly_symmetric_max=f"{max(ds):.4f}",
                    doubly_symmetric_within=f"{sum(e <= 0.2 for e in ds)}/{len(ds)}")
