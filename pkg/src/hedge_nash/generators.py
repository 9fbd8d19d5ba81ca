"""Seeded families of symmetric games.

Random families draw from numpy's PCG64 bit generator
(``numpy.random.Generator(numpy.random.PCG64(seed))``), whose stream is fixed
across platforms for a given seed. Uniform matrices are filled row-major
with ``Generator.random((n, n))``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .game_core import GameError, SymmetricGame, normalize

FAMILIES = ("rps", "random_uniform", "doubly_symmetric", "symmetric_zero_sum", "coordination")


@dataclass(frozen=True)
class GeneratorSpec:
    family: str
    n: int
    seed: int = 0

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise GameError(f"unknown family {self.family!r}; choose from {', '.join(FAMILIES)}")
        if self.n < 1:
            raise GameError("n must be >= 1")
        if self.family == "rps" and (self.n < 3 or self.n % 2 == 0):
            raise GameError("rps requires odd n >= 3")
        if not 0 <= self.seed < 2 ** 64:
            raise GameError("seed must be a 64-bit unsigned integer")

    @property
    def label(self) -> str:
        return f"{self.family}-n{self.n}-s{self.seed}"

    @classmethod
    def from_json(cls, d: dict) -> "GeneratorSpec":
        return cls(str(d["family"]), int(d["n"]), int(d.get("seed", 0)))

    def to_json(self) -> dict:
        return {"family": self.family, "n": self.n, "seed": self.seed}


def _rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def rps_matrix(n: int) -> np.ndarray:
    c = np.zeros((n, n))
    np.fill_diagonal(c, 0.5)
    for i in range(n):
        c[i, (i - 1) % n] = 1.0
    return c


def _zero_sum(m: np.ndarray) -> np.ndarray:
    skew = (m - m.T) / 2.0
    peak = np.abs(skew).max()
    if peak > 0:
        skew = skew * (0.5 / peak)
    upper = np.clip(0.5 + np.triu(skew, 1), 0.0, 1.0)
    # mirror as 1 - upper so C + C^T is exactly 1 off the diagonal
    c = np.triu(upper, 1) + np.tril(1.0 - upper.T, -1)
    np.fill_diagonal(c, 0.5)
    return c


def generate(spec: GeneratorSpec) -> SymmetricGame:
    n = spec.n
    if spec.family == "rps":
        return SymmetricGame(rps_matrix(n), label=spec.label)
    if spec.family == "coordination":
        return SymmetricGame(np.eye(n), label=spec.label)
    m = _rng(spec.seed).random((n, n))
    if spec.family == "random_uniform":
        return SymmetricGame(m, label=spec.label)
    if spec.family == "doubly_symmetric":
        return normalize((m + m.T) / 2.0, label=spec.label)
    return SymmetricGame(_zero_sum(m), label=spec.label)
