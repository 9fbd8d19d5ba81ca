"""Exact symmetric equilibria of small games by support enumeration."""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .game_core import GameError, MixedStrategy, SymmetricGame, approximation_error, as_strategy

log = logging.getLogger(__name__)

MAX_N = 12
NONNEG_TOL = 1e-12
OFF_SUPPORT_TOL = 1e-9
ACCEPT_TOL = 1e-9
DEDUP_TOL = 1e-8


@dataclass(frozen=True)
class Equilibrium:
    strategy: MixedStrategy
    residual: float
    support: tuple[int, ...]

    def to_json(self) -> dict:
        return {"masses": [float(v) for v in self.strategy.masses],
                "residual": self.residual, "support": list(self.support)}


@dataclass(frozen=True)
class EquilibriumSet:
    equilibria: list[Equilibrium]
    game_label: str = ""

    def __len__(self):
        return len(self.equilibria)

    def to_json(self) -> list[dict]:
        return [e.to_json() for e in self.equilibria]


def _solve_support(c: np.ndarray, idx: np.ndarray):
    n = c.shape[0]
    t = idx.size
    # unknowns: x on the support, then the common payoff v
    a = np.zeros((t + 1, t + 1))
    a[:t, :t] = c[np.ix_(idx, idx)]
    a[:t, t] = -1.0
    a[t, :t] = 1.0
    b = np.zeros(t + 1)
    b[t] = 1.0
    sol = np.linalg.solve(a, b)
    if not np.all(np.isfinite(sol)):
        raise np.linalg.LinAlgError("non-finite solution")
    x = np.zeros(n)
    x[idx] = sol[:t]
    return x, float(sol[t])


def support_enumeration(game: SymmetricGame, max_n: int = MAX_N) -> EquilibriumSet:
    """All symmetric equilibria found by solving the indifference system on each support.

    Supports are visited in increasing bitmask order, so the output is
    deterministic. Singular systems are skipped.
    """
    n = game.n
    if n > max_n:
        raise GameError(f"support enumeration is limited to n <= {max_n}, got {n}")
    c = game.payoffs
    found: list[Equilibrium] = []
    for mask in range(1, 1 << n):
        idx = np.array([i for i in range(n) if mask >> i & 1])
        try:
            x, v = _solve_support(c, idx)
        except np.linalg.LinAlgError:
            log.debug("singular indifference system on support %s", idx.tolist())
            continue
        if x.min() < -NONNEG_TOL:
            continue
        x = np.clip(x, 0.0, None)
        x /= x.sum()
        cx = c @ x
        off = np.setdiff1d(np.arange(n), idx)
        if off.size and cx[off].max() > v + OFF_SUPPORT_TOL:
            continue
        residual = approximation_error(game, x).epsilon
        if residual > ACCEPT_TOL:
            continue
        if any(np.abs(e.strategy.masses - x).max() <= DEDUP_TOL for e in found):
            continue
        s = MixedStrategy(x)
        found.append(Equilibrium(s, residual, s.support))
    return EquilibriumSet(found, game.label or "")


def verify(game: SymmetricGame, x, eps: float) -> bool:
    return approximation_error(game, as_strategy(x)).epsilon <= eps
