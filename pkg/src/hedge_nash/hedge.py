"""Hedge (multiplicative weights) dynamics with a fixed learning rate.

The canonical state is the vector of cumulative payoff scores ``S^k``;
iterates are derived as ``softmax(ln x0 + alpha * S^k)``. Masses of
dominated strategies underflow long before their logarithms become
unrepresentable, so every log-mass is read from the score representation.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field, replace
from functools import cached_property

import numpy as np

from . import _kernels
from .game_core import GameError, MixedStrategy, SymmetricGame, approximation_errors, as_strategy
from .schedule import mylove_bound

CSV_HEADER = ("k", "eps_iterate", "eps_average", "bound_rhs", "regret_avg")


def _logsumexp(z: np.ndarray) -> float:
    zmax = z.max()
    return float(zmax + np.log(np.exp(z - zmax).sum()))


def _check_alpha(alpha: float) -> None:
    if not (alpha > 0 and math.isfinite(alpha)):
        raise GameError(f"learning rate must be positive and finite, got {alpha}")


def log_hedge_map(game: SymmetricGame, x, alpha: float) -> np.ndarray:
    """``ln T(X)`` computed without forming ``exp`` of unshifted payoffs."""
    x = as_strategy(x)
    if x.n != game.n:
        raise GameError(f"strategy has dimension {x.n}, game has {game.n}")
    if not x.is_interior():
        raise GameError("Hedge map requires an interior strategy")
    _check_alpha(alpha)
    z = np.log(x.masses) + alpha * (game.payoffs @ x.masses)
    return z - _logsumexp(z)


def hedge_step(game: SymmetricGame, x, alpha: float) -> MixedStrategy:
    """One application of the Hedge map ``T``."""
    return MixedStrategy(np.exp(log_hedge_map(game, x, alpha)))


@dataclass(frozen=True, eq=False)
class HedgeState:
    k: int
    scores: np.ndarray
    iterate: MixedStrategy
    average: MixedStrategy
    alpha: float
    x0: MixedStrategy

    @classmethod
    def start(cls, n: int, alpha: float, x0=None) -> "HedgeState":
        _check_alpha(alpha)
        x0 = MixedStrategy.uniform(n) if x0 is None else as_strategy(x0)
        if not x0.is_interior():
            raise GameError("starting strategy must be interior")
        return cls(0, np.zeros(x0.n), x0, x0, alpha, x0)

    def log_iterate(self) -> np.ndarray:
        z = np.log(self.x0.masses) + self.alpha * self.scores
        return z - _logsumexp(z)


def advance(state: HedgeState, game: SymmetricGame) -> HedgeState:
    if state.x0.n != game.n:
        raise GameError(f"state has dimension {state.x0.n}, game has {game.n}")
    scores = state.scores + game.payoffs @ state.iterate.masses
    z = np.log(state.x0.masses) + state.alpha * scores
    x_next = np.exp(z - _logsumexp(z))
    k = state.k
    avg = x_next / (k + 2) + ((k + 1) / (k + 2)) * state.average.masses
    return replace(state, k=k + 1, scores=scores, iterate=MixedStrategy(x_next),
                   average=MixedStrategy(avg))


@dataclass(frozen=True)
class TrajectoryRecord:
    k: int
    eps_iterate: float
    eps_average: float
    bound_rhs: float
    regret_avg: float


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Observed rows of a Hedge run.

    Row ``r`` describes iteration ``k = ks[r]``:

    ``log_iterates``   ln X^k
    ``log_next``       ln X^{k+1}
    ``averages``       empirical average of X^0..X^k
    ``averages_next``  empirical average of X^0..X^{k+1}
    ``scores``         S^k, cumulative payoffs of X^0..X^{k-1}
    ``payoffs``        CX^k
    ``xlogx_sums``     sum over t <= k of X^t ln X^t (per coordinate)
    ``self_sums``      sum over t <= k of X^t . CX^t
    """

    game: SymmetricGame
    alpha: float
    x0: MixedStrategy
    K: int
    ks: np.ndarray
    log_iterates: np.ndarray
    log_next: np.ndarray
    averages: np.ndarray
    averages_next: np.ndarray
    scores: np.ndarray
    payoffs: np.ndarray
    xlogx_sums: np.ndarray
    self_sums: np.ndarray
    uniform_start: bool = field(default=True)

    @property
    def n(self) -> int:
        return self.game.n

    @cached_property
    def iterates(self) -> np.ndarray:
        return np.exp(self.log_iterates)

    @cached_property
    def eps_iterate(self) -> np.ndarray:
        return approximation_errors(self.game.payoffs, self.iterates)

    @cached_property
    def eps_average(self) -> np.ndarray:
        return approximation_errors(self.game.payoffs, self.averages)

    @cached_property
    def regret_avg(self) -> np.ndarray:
        """max_i (1/(k+1)) sum_{t<=k} (E_i - X^t) . CX^t at every observed k."""
        cum = self.scores + self.payoffs
        return (cum.max(axis=1) - self.self_sums) / (self.ks + 1)

    @cached_property
    def bound_rhs(self) -> np.ndarray:
        return np.array([mylove_bound(self.n, self.alpha, int(k)) for k in self.ks])

    def records(self) -> list[TrajectoryRecord]:
        return [TrajectoryRecord(int(k), float(a), float(b), float(c), float(d))
                for k, a, b, c, d in zip(self.ks, self.eps_iterate, self.eps_average,
                                         self.bound_rhs, self.regret_avg)]

    def final_average(self) -> MixedStrategy:
        return MixedStrategy(self.averages[-1])


def write_records_csv(fh, records) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in records:
        w.writerow([r.k] + [repr(float(v)) for v in (r.eps_iterate, r.eps_average, r.bound_rhs, r.regret_avg)])


def default_stride(K: int) -> int:
    return max(1, K // 1000)


def run_trajectory(game: SymmetricGame, alpha: float, K: int, observe_every: int | None = None,
                   x0=None, use_jit: bool | None = None) -> Trajectory:
    """Run ``K`` Hedge steps from ``x0`` (uniform by default).

    Rows are kept every ``observe_every`` steps and always at ``k = K``.
    Scores grow by at most 1 per step, so ``alpha * S`` stays finite for any
    ``K`` up to 2**40 with ``alpha <= 50``.
    """
    _check_alpha(alpha)
    if K < 0:
        raise GameError("K must be >= 0")
    stride = default_stride(K) if observe_every is None else int(observe_every)
    if stride < 1:
        raise GameError("observe_every must be >= 1")
    uniform = x0 is None
    x0 = MixedStrategy.uniform(game.n) if x0 is None else as_strategy(x0)
    if x0.n != game.n:
        raise GameError(f"start has dimension {x0.n}, game has {game.n}")
    if not x0.is_interior():
        raise GameError("starting strategy must be interior")
    if not uniform:
        uniform = bool(np.all(x0.masses == x0.masses[0]))
    out = _kernels.run_kernel(game.payoffs, np.log(x0.masses), alpha, K, stride, use_jit=use_jit)
    return Trajectory(game, float(alpha), x0, int(K), *out, uniform_start=uniform)


def perturb_trajectory(traj: Trajectory, delta: float, seed: int = 0) -> Trajectory:
    """Copy of ``traj`` with every stored iterate's masses jittered by up to ``delta``.

    Fault injection for the checkers: the log-ratio identity no longer holds
    on the result.
    """
    rng = np.random.Generator(np.random.PCG64(seed))

    def jitter(logs):
        m = np.exp(logs) + delta * rng.uniform(-1.0, 1.0, logs.shape)
        m = np.maximum(m, 1e-300)
        return np.log(m / m.sum(axis=1, keepdims=True))

    return replace(traj, log_iterates=jitter(traj.log_iterates), log_next=jitter(traj.log_next))
