"""Batch experiments: full checks on one game, and the schedule campaign grid."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import analysis
from .analysis import LemmaReport, merge_reports
from .game_core import SymmetricGame
from .generators import GeneratorSpec, generate
from .hedge import Trajectory, perturb_trajectory, run_trajectory
from .io import atomic_write_text, write_json
from .schedule import build_schedule

CONVEXITY_GRID = np.round(np.arange(0, 41) * 0.05, 10)


def max_workers() -> int:
    env = os.environ.get("HEDGE_NASH_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return os.cpu_count() or 1


def sampled_step_reports(game: SymmetricGame, traj: Trajectory | None, alpha: float, samples: int,
                         seed: int, convexity_samples: int = 0) -> list[LemmaReport]:
    """Step inequalities at iterates drawn from ``traj`` (or random points) against random ``Y``."""
    rng = np.random.Generator(np.random.PCG64(seed))
    n = game.n
    reports = []
    rows = traj.iterates if traj is not None else None
    for s in range(samples + convexity_samples):
        if rows is not None and s % 2 == 0:
            x = rows[rng.integers(len(rows))]
            x = np.maximum(x, 1e-300)
            x = x / x.sum()
        else:
            x = rng.dirichlet(np.ones(n))
            x = np.maximum(x, 1e-300)
            x /= x.sum()
        y = rng.dirichlet(np.ones(n)) if rng.random() < 0.5 else np.eye(n)[rng.integers(n)]
        if s < samples:
            reports.extend(analysis.check_step_inequalities(game, x, y, alpha))
        else:
            reports.append(analysis.check_convexity(game, x, y, CONVEXITY_GRID))
    return reports


@dataclass
class CheckResult:
    game: SymmetricGame
    alpha: float
    K: int
    reports: list[LemmaReport]
    theorem: dict
    eps_average: float
    trajectory: Trajectory = field(repr=False)

    @property
    def asserted_ok(self) -> bool:
        return all(r.passed for r in self.reports if not r.contested)

    @property
    def contested_ok(self) -> bool:
        return all(r.passed for r in self.reports if r.contested)


def check_game(game: SymmetricGame, alpha: float, K: int, seed: int = 0, step_samples: int = 200,
               convexity_samples: int = 20, perturb: float = 0.0) -> CheckResult:
    """Run every check on one game: trajectory lemmas, regret, and sampled step inequalities."""
    traj = run_trajectory(game, alpha, K, observe_every=1)
    checked = perturb_trajectory(traj, perturb, seed) if perturb > 0 else traj
    reports = analysis.check_average_identities(checked, game)
    reports += analysis.check_la_and_bound(checked, game)
    reports.append(analysis.check_regret_bound(checked, game))
    reports += sampled_step_reports(game, traj, alpha, step_samples, seed, convexity_samples)
    return CheckResult(game, alpha, K, merge_reports(reports), analysis.theorem_limit_summary(traj),
                       float(traj.eps_average[-1]), traj)


# -- campaign -----------------------------------------------------------------------------

@dataclass(frozen=True)
class Instance:
    instance_id: str
    spec: GeneratorSpec
    eps: float
    guaranteed: bool = False


def campaign_instances(ns=(2, 3, 4), epsilons=(0.1, 0.2), games_per_cell: int = 10,
                       family_ns=(3, 5), family_seeds: int = 5) -> list[Instance]:
    out = []
    for n in ns:
        for eps in epsilons:
            for seed in range(games_per_cell):
                spec = GeneratorSpec("random_uniform", n, seed)
                out.append(Instance(f"grid-{spec.label}-eps{eps:g}", spec, eps))
    for family in ("symmetric_zero_sum", "doubly_symmetric"):
        for n in family_ns:
            for seed in range(family_seeds):
                spec = GeneratorSpec(family, n, seed)
                out.append(Instance(f"family-{spec.label}-eps0.2", spec, 0.2,
                                    guaranteed=family == "symmetric_zero_sum"))
    return out


@dataclass
class InstanceResult:
    instance: Instance
    schedule: dict
    eps_average: float
    target_met: bool
    reports: list[LemmaReport]
    theorem: dict
    witness_files: list[str] = field(default_factory=list)

    @property
    def asserted_ok(self) -> bool:
        ok = all(r.passed for r in self.reports if not r.contested)
        if self.instance.guaranteed:
            ok = ok and self.target_met
        return ok

    def verdict(self, lemma_id: str) -> str:
        for r in self.reports:
            if r.lemma_id == lemma_id:
                return "holds" if r.passed else f"VIOLATED ({r.max_violation:.3g})"
        return "n/a"

    def to_json(self) -> dict:
        return {"instance_id": self.instance.instance_id, "generator": self.instance.spec.to_json(),
                "eps_target": self.instance.eps, "schedule": self.schedule,
                "eps_average": self.eps_average, "target_met": self.target_met,
                "guaranteed_family": self.instance.guaranteed, "theorem": self.theorem,
                "reports": [r.to_json() for r in self.reports], "witness_files": self.witness_files}


def run_instance(inst: Instance, step_samples: int = 20) -> InstanceResult:
    game = generate(inst.spec)
    sched = build_schedule(game.n, inst.eps)
    res = check_game(game, sched.alpha, sched.K, seed=inst.spec.seed, step_samples=step_samples,
                     convexity_samples=2)
    return InstanceResult(inst, sched.to_json(), res.eps_average, res.eps_average <= inst.eps,
                          res.reports, res.theorem)


def run_campaign(output_dir: str | Path, instances: list[Instance] | None = None,
                 workers: int | None = None) -> list[InstanceResult]:
    """Run all instances (in parallel, merged by instance order) and write the report."""
    instances = campaign_instances() if instances is None else instances
    workers = max_workers() if workers is None else workers
    out = Path(output_dir)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run_instance, instances))
    else:
        results = [run_instance(i) for i in instances]
    wdir = out / "witnesses"
    for res in results:
        for r in res.reports:
            if r.passed or r.witness is None:
                continue
            path = wdir / f"{res.instance.instance_id}__{r.lemma_id}.json"
            write_json(path, r.witness)
            res.witness_files.append(str(path.relative_to(out)))
    write_json(out / "campaign.json", [r.to_json() for r in results])
    atomic_write_text(out / "report.md", render_report(results))
    return results


def render_report(results: list[InstanceResult]) -> str:
    lines = ["# Hedge schedule campaign", ""]
    asserted = all(r.asserted_ok for r in results)
    contested = [r for r in results if any(not x.passed for x in r.reports if x.contested)]
    lines += [f"- instances: {len(results)}",
              f"- asserted checks: {'all pass' if asserted else 'FAILURES'}",
              f"- instances with a contested-bound violation: {len(contested)}",
              f"- instances meeting the eps target: {sum(r.target_met for r in results)}", ""]
    lines += ["| instance | n | eps | alpha | K | eps_average | target met | asserted | inductive_LA | mylove_bound | eps - n(e^a-1) |",
              "|---|---|---|---|---|---|---|---|---|---|---|"]
    for r in results:
        s = r.schedule
        lines.append(
            f"| {r.instance.instance_id} | {s['n']} | {r.instance.eps:g} | {s['alpha']:.6g} | {s['K']} "
            f"| {r.eps_average:.6g} | {'yes' if r.target_met else 'no'} "
            f"| {'pass' if r.asserted_ok else 'FAIL'} | {r.verdict('inductive_LA')} "
            f"| {r.verdict('mylove_bound')} | {r.theorem['gap_to_limit_value']:.3g} |")
    if any(r.witness_files for r in results):
        lines += ["", "## Witness files", ""]
        for r in results:
            for w in r.witness_files:
                lines.append(f"- `{w}`")
    lines.append("")
    return "\n".join(lines)

