"""Symmetric games, mixed strategies and the equilibrium-approximation error.

Pure strategies are indexed from 0. A game ``C`` is an ``n x n`` payoff
matrix with entries in ``[0, 1]``; entry ``(i, j)`` is the payoff of pure
strategy ``i`` against pure strategy ``j``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

SIMPLEX_TOL = 1e-12
RENORMALIZE_TOL = 1e-9


class GameError(ValueError):
    """Raised for malformed games, strategies or dimension mismatches."""


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=np.float64, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class SymmetricGame:
    payoffs: np.ndarray
    label: str | None = None

    def __post_init__(self):
        c = np.asarray(self.payoffs, dtype=np.float64)
        if c.ndim != 2 or c.shape[0] != c.shape[1] or c.shape[0] < 1:
            raise GameError(f"payoff matrix must be square with n >= 1, got shape {c.shape}")
        if not np.all(np.isfinite(c)):
            raise GameError("payoff matrix has non-finite entries")
        if c.min() < 0.0 or c.max() > 1.0:
            raise GameError("payoff entries must lie in [0, 1]; use normalize() first")
        object.__setattr__(self, "payoffs", _frozen(c))

    @property
    def n(self) -> int:
        return self.payoffs.shape[0]

    def to_json(self) -> dict:
        d = {"n": self.n, "payoffs": [float(v) for v in self.payoffs.ravel()]}
        if self.label is not None:
            d["label"] = self.label
        return d

    @classmethod
    def from_json(cls, d: dict, normalize_payoffs: bool = False) -> "SymmetricGame":
        try:
            n = int(d["n"])
            flat = np.asarray(d["payoffs"], dtype=np.float64)
        except (KeyError, TypeError, ValueError) as exc:
            raise GameError(f"invalid game JSON: {exc}") from exc
        if n < 1:
            raise GameError("n must be >= 1")
        if flat.ndim != 1 or flat.size != n * n:
            raise GameError(f"expected {n * n} payoffs, got {flat.size}")
        matrix = flat.reshape(n, n)
        label = d.get("label")
        if normalize_payoffs:
            return normalize(matrix, label=label)
        return cls(matrix, label=label)

    def __eq__(self, other):
        if not isinstance(other, SymmetricGame):
            return NotImplemented
        return self.label == other.label and np.array_equal(self.payoffs, other.payoffs)

    def __hash__(self):
        return hash((self.payoffs.tobytes(), self.label))


@dataclass(frozen=True, eq=False)
class MixedStrategy:
    """A point on the probability simplex.

    Inputs within ``1e-9`` of the simplex are renormalized by their sum;
    anything further off is rejected.
    """

    masses: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.masses, dtype=np.float64)
        if x.ndim != 1 or x.size < 1:
            raise GameError("strategy must be a nonempty vector")
        if not np.all(np.isfinite(x)):
            raise GameError("strategy has non-finite masses")
        if x.min() < -RENORMALIZE_TOL:
            raise GameError(f"negative mass {x.min()}")
        total = x.sum()
        if abs(total - 1.0) > RENORMALIZE_TOL:
            raise GameError(f"masses sum to {total}, not 1")
        x = np.clip(x, 0.0, None)
        if abs(x.sum() - 1.0) > SIMPLEX_TOL:
            x = x / x.sum()
        object.__setattr__(self, "masses", _frozen(x))

    @property
    def n(self) -> int:
        return self.masses.size

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(int(i) for i in np.flatnonzero(self.masses > 0))

    def is_interior(self) -> bool:
        return bool(np.all(self.masses > 0))

    @classmethod
    def uniform(cls, n: int) -> "MixedStrategy":
        return cls(np.full(n, 1.0 / n))

    @classmethod
    def pure(cls, n: int, i: int) -> "MixedStrategy":
        x = np.zeros(n)
        x[i] = 1.0
        return cls(x)

    def __eq__(self, other):
        if not isinstance(other, MixedStrategy):
            return NotImplemented
        return np.array_equal(self.masses, other.masses)

    def __hash__(self):
        return hash(self.masses.tobytes())

    def __len__(self):
        return self.n

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.masses, dtype=dtype)


def as_strategy(x) -> MixedStrategy:
    return x if isinstance(x, MixedStrategy) else MixedStrategy(np.asarray(x, dtype=np.float64))


def _check_dims(game: SymmetricGame, x: MixedStrategy) -> None:
    if x.n != game.n:
        raise GameError(f"strategy has dimension {x.n}, game has {game.n}")


@dataclass(frozen=True)
class ApproximationReport:
    epsilon: float
    payoff_max: float
    payoff_self: float
    best_response_index: int
    strategy: MixedStrategy = field(repr=False)

    def to_json(self) -> dict:
        return {
            "epsilon": self.epsilon,
            "payoff_max": self.payoff_max,
            "payoff_self": self.payoff_self,
            "best_response_index": self.best_response_index,
            "strategy": [float(v) for v in self.strategy.masses],
        }


@dataclass(frozen=True, eq=False)
class Decomposition:
    doubly_symmetric_part: np.ndarray
    skew_part: np.ndarray


def payoff_vector(game: SymmetricGame, x) -> np.ndarray:
    """Return ``CX``, the payoff of every pure strategy against ``x``."""
    x = as_strategy(x)
    _check_dims(game, x)
    return game.payoffs @ x.masses


def best_response(game: SymmetricGame, x) -> int:
    """Lowest-index pure best response to ``x``."""
    return int(np.argmax(payoff_vector(game, x)))


def approximation_error(game: SymmetricGame, x) -> ApproximationReport:
    """``(CX)_max - X.CX``: how much a best response gains against ``x``."""
    x = as_strategy(x)
    cx = payoff_vector(game, x)
    i = int(np.argmax(cx))
    pmax = float(cx[i])
    pself = float(x.masses @ cx)
    # X.CX is a convex combination of the entries of CX; clamp rounding below zero
    eps = max(pmax - pself, 0.0)
    return ApproximationReport(eps, pmax, min(pself, pmax), i, x)


def approximation_errors(payoffs: np.ndarray, rows: np.ndarray) -> np.ndarray:
    """Vectorized epsilon for each row of ``rows`` (shape ``(m, n)``)."""
    cx = rows @ payoffs.T
    return np.maximum(cx.max(axis=1) - np.einsum("ij,ij->i", rows, cx), 0.0)


def decompose(game: SymmetricGame) -> Decomposition:
    """Split ``C`` into a doubly symmetric part and a skew-symmetric part."""
    c = game.payoffs
    return Decomposition(_frozen((c + c.T) / 2.0), _frozen((c - c.T) / 2.0))


def normalize(matrix, label: str | None = None) -> SymmetricGame:
    """Affinely rescale ``matrix`` onto ``[0, 1]``; a constant matrix maps to 0.5."""
    m = np.asarray(matrix, dtype=np.float64)
    if m.size == 0:
        raise GameError("empty matrix")
    if not np.all(np.isfinite(m)):
        raise GameError("matrix has non-finite entries")
    lo, hi = m.min(), m.max()
    if hi > lo:
        out = (m - lo) / (hi - lo)
    else:
        out = np.full_like(m, 0.5)
    return SymmetricGame(np.clip(out, 0.0, 1.0), label=label)


def load_game(path: str | Path, normalize_payoffs: bool = False) -> SymmetricGame:
    with open(path) as fh:
        return SymmetricGame.from_json(json.load(fh), normalize_payoffs=normalize_payoffs)
