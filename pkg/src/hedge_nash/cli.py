"""Command-line entry point: ``hedge-nash {run,schedule,check,oracle,campaign}``.

Exit codes: 0 success, 1 an asserted bound was violated, 2 usage or I/O error.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import sys
from dataclasses import dataclass
from pathlib import Path

from . import __version__
from .analysis import RegretBoundViolation
from .campaign import check_game, run_campaign
from .game_core import GameError, SymmetricGame, approximation_error, load_game
from .generators import FAMILIES, GeneratorSpec, generate
from .hedge import default_stride, run_trajectory
from .io import atomic_write_text, dumps, write_json, write_trajectory_csv, write_witnesses
from .oracle import support_enumeration
from .schedule import ScheduleError, build_schedule, mylove_bound

log = logging.getLogger("hedge_nash")

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


@dataclass
class RunConfig:
    command: str
    game_source: str | GeneratorSpec | None
    alpha: float | None
    K: int | None
    eps: float | None
    output_dir: Path
    observe_every: int | None
    normalize_flag: bool
    n: int | None = None
    seed: int = 0
    perturb: float = 0.0

    @classmethod
    def from_args(cls, args) -> "RunConfig":
        source: str | GeneratorSpec | None = None
        if getattr(args, "game", None):
            source = args.game
        elif getattr(args, "generator", None):
            with open(args.generator) as fh:
                source = GeneratorSpec.from_json(json.load(fh))
        elif getattr(args, "family", None):
            if args.n is None:
                raise UsageError("--family requires --n")
            source = GeneratorSpec(args.family, args.n, args.seed)
        cfg = cls(args.command, source, getattr(args, "alpha", None), getattr(args, "K", None),
                  getattr(args, "eps", None), Path(getattr(args, "output_dir", ".") or "."),
                  getattr(args, "observe_every", None), getattr(args, "normalize", False),
                  getattr(args, "n", None), getattr(args, "seed", 0) or 0,
                  getattr(args, "perturb_masses", 0.0) or 0.0)
        cfg.validate()
        return cfg

    def validate(self) -> None:
        if self.command in ("run", "check", "oracle") and self.game_source is None:
            raise UsageError("provide a game with --game, --generator, or --family/--n")
        explicit = self.alpha is not None or self.K is not None
        if self.command == "run":
            if explicit and self.eps is not None:
                raise UsageError("give either --alpha and --K, or --eps, not both")
            if explicit and (self.alpha is None or self.K is None):
                raise UsageError("--alpha and --K must be given together")
            if not explicit and self.eps is None:
                raise UsageError("run needs --alpha and --K, or --eps")
        if self.alpha is not None and not (self.alpha > 0 and math.isfinite(self.alpha)):
            raise UsageError("--alpha must be positive")
        if self.K is not None and self.K < 0:
            raise UsageError("--K must be >= 0")
        if self.eps is not None and not (0 < self.eps <= 1):
            raise UsageError("--eps must lie in (0, 1]")
        if self.observe_every is not None and self.observe_every < 1:
            raise UsageError("--observe-every must be >= 1")

    def load_game(self) -> SymmetricGame:
        if isinstance(self.game_source, GeneratorSpec):
            return generate(self.game_source)
        return load_game(self.game_source, normalize_payoffs=self.normalize_flag)

    def parameters(self, n: int) -> tuple[float, int, float | None]:
        """(alpha, K, target eps) from explicit flags or from the schedule."""
        if self.eps is not None and self.alpha is None:
            s = build_schedule(n, self.eps)
            return s.alpha, s.K, self.eps
        return self.alpha, self.K, self.eps


def cmd_run(cfg: RunConfig) -> int:
    game = cfg.load_game()
    alpha, K, target = cfg.parameters(game.n)
    stride = cfg.observe_every or default_stride(K)
    traj = run_trajectory(game, alpha, K, observe_every=stride)
    final = approximation_error(game, traj.final_average())
    bound = mylove_bound(game.n, alpha, K)
    out = cfg.output_dir
    write_trajectory_csv(out / "trajectory.csv", traj.records())
    report = final.to_json()
    report.update({"game": game.to_json(), "alpha": alpha, "K": K, "eps_target": target,
                   "target_met": None if target is None else final.epsilon <= target,
                   "bound_rhs": bound})
    write_json(out / "report.json", report)
    print(f"final eps_average={final.epsilon!r} target={'n/a' if target is None else repr(target)} "
          f"bound={bound!r}")
    return EXIT_OK


def cmd_schedule(cfg: RunConfig) -> int:
    n = cfg.n
    if n is None and cfg.game_source is not None:
        n = cfg.load_game().n
    if n is None or cfg.eps is None:
        raise UsageError("schedule needs --n (or a game) and --eps")
    text = dumps(build_schedule(n, cfg.eps).to_json())
    sys.stdout.write(text)
    return EXIT_OK


def cmd_check(cfg: RunConfig) -> int:
    game = cfg.load_game()
    if cfg.alpha is None and cfg.eps is None:
        alpha, K = 0.1, 2000
    else:
        alpha, K, _ = cfg.parameters(game.n)
        if K is None:
            K = 2000
    res = check_game(game, alpha, K, seed=cfg.seed, perturb=cfg.perturb)
    out = cfg.output_dir
    write_json(out / "reports.json", {"game": game.to_json(), "alpha": alpha, "K": K,
                                      "theorem": res.theorem,
                                      "reports": [r.to_json() for r in res.reports]})
    write_witnesses(out / "witnesses", "", res.reports)
    for r in res.reports:
        kind = "contested" if r.contested else "asserted"
        print(f"{r.lemma_id:22s} {kind:9s} {'PASS' if r.passed else 'FAIL'} max_violation={r.max_violation:.3e}")
    return EXIT_OK if res.asserted_ok else EXIT_VIOLATION


def cmd_oracle(cfg: RunConfig) -> int:
    game = cfg.load_game()
    eqs = support_enumeration(game)
    write_json(cfg.output_dir / "equilibria.json", eqs.to_json())
    sys.stdout.write(dumps(eqs.to_json()))
    return EXIT_OK


def cmd_campaign(cfg: RunConfig) -> int:
    results = run_campaign(cfg.output_dir)
    ok = all(r.asserted_ok for r in results)
    print(f"campaign: {len(results)} instances, asserted checks {'pass' if ok else 'FAIL'}, "
          f"report at {cfg.output_dir / 'report.md'}")
    return EXIT_OK if ok else EXIT_VIOLATION


COMMANDS = {"run": cmd_run, "schedule": cmd_schedule, "check": cmd_check,
            "oracle": cmd_oracle, "campaign": cmd_campaign}


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="hedge-nash", description="Hedge dynamics on symmetric games.")
    p.add_argument("--version", action="version", version=__version__)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def game_args(sp):
        g = sp.add_argument_group("game source")
        g.add_argument("--game", help="game JSON file")
        g.add_argument("--generator", help="generator spec JSON file")
        g.add_argument("--family", choices=FAMILIES)
        g.add_argument("--n", type=int)
        g.add_argument("--seed", type=int, default=0)
        g.add_argument("--normalize", action="store_true", help="rescale payoffs of --game onto [0, 1]")

    def out_arg(sp, default="hedge_nash_out"):
        sp.add_argument("--output-dir", default=default)

    sp = sub.add_parser("run", help="run Hedge and write the trajectory CSV")
    game_args(sp)
    sp.add_argument("--alpha", type=float)
    sp.add_argument("--K", type=int)
    sp.add_argument("--eps", type=float, help="use the schedule for this target error")
    sp.add_argument("--observe-every", type=int)
    out_arg(sp)

    sp = sub.add_parser("schedule", help="print the schedule JSON for (n, eps)")
    game_args(sp)
    sp.add_argument("--eps", type=float, required=True)

    sp = sub.add_parser("check", help="run every bound check on one game")
    game_args(sp)
    sp.add_argument("--alpha", type=float)
    sp.add_argument("--K", type=int)
    sp.add_argument("--eps", type=float)
    sp.add_argument("--perturb-masses", type=float, default=0.0,
                    help="fault injection: jitter stored iterates by this much before checking")
    out_arg(sp)

    sp = sub.add_parser("oracle", help="enumerate symmetric equilibria")
    game_args(sp)
    out_arg(sp)

    sp = sub.add_parser("campaign", help="run the schedule campaign grid and write report.md")
    out_arg(sp, "hedge_nash_campaign")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = RunConfig.from_args(args)
        return COMMANDS[cfg.command](cfg)
    except (UsageError, GameError, ScheduleError, OSError, ValueError, KeyError) as exc:
        print(f"hedge-nash: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except RegretBoundViolation as exc:
        print(f"hedge-nash: bound violated: {exc}", file=sys.stderr)
        return EXIT_VIOLATION


if __name__ == "__main__":
    sys.exit(main())
