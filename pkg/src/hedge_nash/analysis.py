"""Relative-entropy machinery and numerical checks of the Hedge error bounds.

Two kinds of checks live here. The step inequalities, the averaged identities
and the regret bound follow from exact algebra plus payoffs in ``[0, 1]``;
a violation beyond tolerance is a bug. The inductive log-mass relation
(``inductive_LA``) and the averaged-error bound built on it
(``mylove_bound``) are hypotheses: they are evaluated, and every violation
is returned with a witness that can be replayed from the game and the
learning rate alone.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .game_core import GameError, MixedStrategy, SymmetricGame, approximation_errors, as_strategy
from .hedge import Trajectory, run_trajectory
from .schedule import RHO, mylove_bound

LEMMA_IDS = (
    "convexity",
    "secant_bound",
    "log_lower_bound",
    "slater_chain",
    "telescoping_identity",
    "averaged_identity",
    "averaged_bound",
    "inductive_LA",
    "mylove_bound",
    "regret_bound",
)
CONTESTED = frozenset({"inductive_LA", "mylove_bound"})

TOLERANCES = {
    "convexity": 1e-7,
    "secant_bound": 1e-10,
    "log_lower_bound": 1e-10,
    "slater_chain": 1e-10,
    "telescoping_identity": 1e-8,
    "averaged_identity": 1e-8,
    "averaged_bound": 1e-8,
    "inductive_LA": 1e-10,
    "mylove_bound": 1e-10,
    "regret_bound": 1e-9,
}


@dataclass
class LemmaReport:
    lemma_id: str
    samples: int
    max_violation: float
    witness: dict | None = None
    tolerance: float = field(default=0.0)

    def __post_init__(self):
        if self.lemma_id not in LEMMA_IDS:
            raise ValueError(f"unknown lemma id {self.lemma_id!r}")
        if not self.tolerance:
            self.tolerance = TOLERANCES[self.lemma_id]

    @property
    def passed(self) -> bool:
        return self.max_violation <= self.tolerance

    @property
    def contested(self) -> bool:
        return self.lemma_id in CONTESTED

    def to_json(self) -> dict:
        return {"lemma_id": self.lemma_id, "samples": self.samples,
                "max_violation": self.max_violation, "tolerance": self.tolerance,
                "passed": self.passed, "contested": self.contested, "witness": self.witness}


def merge_reports(reports) -> list[LemmaReport]:
    """Combine reports per lemma: samples add, the worst violation and its witness win."""
    merged: dict[str, LemmaReport] = {}
    for r in reports:
        cur = merged.get(r.lemma_id)
        if cur is None:
            merged[r.lemma_id] = LemmaReport(r.lemma_id, r.samples, r.max_violation, r.witness, r.tolerance)
            continue
        cur.samples += r.samples
        if r.max_violation > cur.max_violation:
            cur.max_violation = r.max_violation
            cur.witness = r.witness
    return [merged[k] for k in LEMMA_IDS if k in merged]


def _report(lemma_id: str, samples: int, violation: float, witness: dict) -> LemmaReport:
    rep = LemmaReport(lemma_id, samples, float(violation))
    if not rep.passed:
        rep.witness = witness
    return rep


# -- relative entropy -------------------------------------------------------

def _re_log(p: np.ndarray, log_q: np.ndarray) -> float:
    s = p > 0
    return float(np.sum(p[s] * (np.log(p[s]) - log_q[s])))


def relative_entropy(p, q) -> float:
    """``sum_{i in supp P} P(i) ln(P(i)/Q(i))``; requires supp P inside supp Q."""
    p, q = as_strategy(p), as_strategy(q)
    if p.n != q.n:
        raise GameError("dimension mismatch")
    sp = p.masses > 0
    if np.any(q.masses[sp] <= 0):
        raise GameError("support of P is not contained in the support of Q")
    with np.errstate(divide="ignore"):
        return _re_log(p.masses, np.log(q.masses))


def _log_map(c: np.ndarray, x: np.ndarray, alpha: float) -> np.ndarray:
    z = np.log(x) + alpha * (c @ x)
    zmax = z.max()
    return z - (zmax + np.log(np.exp(z - zmax).sum()))


def _interior(game: SymmetricGame, x) -> np.ndarray:
    x = as_strategy(x)
    if x.n != game.n:
        raise GameError("dimension mismatch")
    if not x.is_interior():
        raise GameError("X must be interior")
    return x.masses


def re_after_step(game: SymmetricGame, x, y, alpha: float) -> float:
    """``RE(Y, T_alpha(X))`` for ``alpha >= 0``, evaluated in the log domain."""
    xm = _interior(game, x)
    return _re_log(as_strategy(y).masses, _log_map(game.payoffs, xm, alpha))


def re_alpha_derivative(game: SymmetricGame, x, y, alpha: float) -> float:
    """d/dalpha RE(Y, T_alpha(X)) = softmax-weighted mean payoff minus ``Y.CX``."""
    xm = _interior(game, x)
    ym = as_strategy(y).masses
    cx = game.payoffs @ xm
    z = alpha * cx
    w = xm * np.exp(z - z.max())
    return float((w @ cx) / w.sum() - ym @ cx)


# -- per-sample checks --------------------------------------------------------

def _sample_witness(game, x, y, alpha, lhs, rhs, violation, **extra) -> dict:
    w = {"game": game.to_json(), "X": [float(v) for v in np.asarray(x)],
         "Y": None if y is None else [float(v) for v in np.asarray(y)],
         "alpha": alpha, "lhs": float(lhs), "rhs": float(rhs), "violation": float(violation)}
    w.update(extra)
    return w


def check_convexity(game: SymmetricGame, x, y, alpha_grid, secant=(0.3, 0.9)) -> LemmaReport:
    """Convexity of ``alpha -> RE(Y, T_alpha(X))`` on a grid.

    The violation is the largest negative second difference, normalised so
    that a uniform grid with step ``h`` gives ``F(a-h) - 2F(a) + F(a+h)``.
    The secant inequalities at ``secant = (a, b)`` are folded in as well.
    """
    grid = np.sort(np.asarray(alpha_grid, dtype=np.float64))
    if grid.size < 3:
        raise ValueError("alpha grid needs at least 3 points")
    xm = _interior(game, x)
    y = as_strategy(y)
    f = np.array([re_after_step(game, xm, y, a) for a in grid])
    left = (f[1:-1] - f[:-2]) / (grid[1:-1] - grid[:-2])
    right = (f[2:] - f[1:-1]) / (grid[2:] - grid[1:-1])
    d2 = (right - left) * (grid[2:] - grid[:-2]) / 2
    worst = int(np.argmin(d2))
    violation = float(-d2[worst])
    witness = _sample_witness(game, xm, y.masses, float(grid[worst + 1]), d2[worst], 0.0, violation)
    if secant is not None:
        a, b = secant
        fa, fb = re_after_step(game, xm, y, a), re_after_step(game, xm, y, b)
        slope = (fb - fa) / (b - a)
        lo = re_alpha_derivative(game, xm, y, a) - slope
        hi = slope - re_alpha_derivative(game, xm, y, b)
        if max(lo, hi) > violation:
            violation = max(lo, hi)
            witness = _sample_witness(game, xm, y.masses, a, slope, 0.0, violation, secant=[a, b])
    return _report("convexity", 1, violation, witness)


def check_step_inequalities(game: SymmetricGame, x, y, alpha: float) -> list[LemmaReport]:
    """One-step bounds: the entropy decrease bound, its per-coordinate log form, and the Slater chain."""
    if not alpha > 0:
        raise GameError("alpha must be positive")
    xm = _interior(game, x)
    ym = as_strategy(y).masses
    c = game.payoffs
    cx = c @ xm
    xcx = float(xm @ cx)
    log_t = _log_map(c, xm, alpha)
    slack = alpha * math.expm1(alpha)

    re_new = _re_log(ym, log_t)
    re_old = _re_log(ym, np.log(xm))
    lhs = re_new
    rhs = re_old - alpha * (ym @ cx - xcx) + slack
    reports = [_report("secant_bound", 1, lhs - rhs, _sample_witness(game, xm, ym, alpha, lhs, rhs, lhs - rhs))]

    lows = np.log(xm) + alpha * (cx - xcx) - slack
    i = int(np.argmax(lows - log_t))
    v = float(lows[i] - log_t[i])
    reports.append(_report("log_lower_bound", 1, v,
                           _sample_witness(game, xm, None, alpha, log_t[i], lows[i], v, coordinate=i)))

    lhs = re_new - re_old
    rhs = alpha * re_alpha_derivative(game, xm, ym, alpha)
    reports.append(_report("slater_chain", 1, lhs - rhs, _sample_witness(game, xm, ym, alpha, lhs, rhs, lhs - rhs)))
    return reports


# -- trajectory checks ---------------------------------------------------------
# Each row evaluator maps a trajectory to per-row (lhs, rhs) arrays, already
# reduced to the worst pair/coordinate of that row; violation = lhs - rhs
# (absolute difference for identities).

def _c_avg(traj: Trajectory, game: SymmetricGame) -> np.ndarray:
    return traj.averages @ game.payoffs.T


def _rows_telescoping(traj, game):
    kp1 = (traj.ks + 1).astype(np.float64)
    rhs_full = traj.alpha * kp1[:, None] * _c_avg(traj, game)
    d = traj.log_next - rhs_full
    hi, lo = d.argmax(axis=1), d.argmin(axis=1)
    r = np.arange(len(d))
    lhs = traj.log_next[r, hi] - traj.log_next[r, lo]
    rhs = rhs_full[r, hi] - rhs_full[r, lo]
    return lhs, rhs


def _rows_averaged_identity(traj, game):
    ca = _c_avg(traj, game)
    scale = 1.0 / (traj.alpha * (traj.ks + 1))
    lhs4 = ca.max(axis=1) - np.einsum("ij,ij->i", traj.averages, ca)
    rhs4 = -scale * np.einsum("ij,ij->i", traj.averages, traj.log_next)
    lhs5 = ca.max(axis=1) - np.einsum("ij,ij->i", traj.averages_next, ca)
    rhs5 = -scale * np.einsum("ij,ij->i", traj.averages_next, traj.log_next)
    pick5 = (lhs5 - rhs5) > (lhs4 - rhs4)
    return np.where(pick5, lhs5, lhs4), np.where(pick5, rhs5, rhs4)


def _rows_averaged_bound(traj, game):
    ca = _c_avg(traj, game)
    kp1 = traj.ks + 1.0
    lhs = ca.max(axis=1) - np.einsum("ij,ij->i", traj.averages, ca)
    rhs = -np.einsum("ij,ij->i", traj.averages_next, traj.log_next) / (traj.alpha * kp1) + 1.0 / kp1
    return lhs, rhs


def _rows_inductive_la(traj, game):
    kp1 = (traj.ks + 1.0)[:, None]
    a = traj.alpha
    lhs = -traj.averages * traj.log_iterates / (a * kp1)
    rhs = -traj.xlogx_sums / (a * kp1 * kp1) + math.expm1(a) + RHO ** traj.ks.astype(np.float64)[:, None]
    j = (lhs - rhs).argmax(axis=1)
    r = np.arange(len(j))
    return lhs[r, j], rhs[r, j]


def _rows_mylove(traj, game):
    lhs = approximation_errors(game.payoffs, traj.averages)
    rhs = np.array([mylove_bound(game.n, traj.alpha, int(k)) for k in traj.ks])
    return lhs, rhs


def regret_bound_value(n_or_x0, alpha: float, K) -> np.ndarray | float:
    """``max_i(-ln x0(i)) / (alpha (K+1)) + e^alpha - 1``; ``ln n`` for a uniform start."""
    if isinstance(n_or_x0, (int, np.integer)):
        start_term = math.log(n_or_x0)
    else:
        start_term = float(-np.log(as_strategy(n_or_x0).masses).min())
    return start_term / (alpha * (np.asarray(K) + 1.0)) + math.expm1(alpha)


def _rows_regret(traj, game):
    lhs = _regret_rows(traj, game)
    return lhs, regret_bound_value(traj.x0, traj.alpha, traj.ks)


def _regret_rows(traj, game):
    if not np.array_equal(game.payoffs, traj.game.payoffs):
        raise GameError("trajectory was generated on a different game")
    return traj.regret_avg


ROW_EVALUATORS = {
    "telescoping_identity": _rows_telescoping,
    "averaged_identity": _rows_averaged_identity,
    "averaged_bound": _rows_averaged_bound,
    "inductive_LA": _rows_inductive_la,
    "mylove_bound": _rows_mylove,
    "regret_bound": _rows_regret,
}


def _violations(lemma_id, lhs, rhs):
    if lemma_id == "telescoping_identity":
        return np.abs(lhs - rhs)
    return lhs - rhs


def trajectory_witness(lemma_id: str, traj: Trajectory, row: int, lhs: float, rhs: float,
                       violation: float) -> dict:
    return {"lemma": lemma_id, "game": traj.game.to_json(), "alpha": traj.alpha, "k": int(traj.ks[row]),
            "lhs": float(lhs), "rhs": float(rhs), "violation": float(violation)}


def _check_rows(lemma_id: str, traj: Trajectory, game: SymmetricGame) -> LemmaReport:
    lhs, rhs = ROW_EVALUATORS[lemma_id](traj, game)
    v = _violations(lemma_id, lhs, rhs)
    row = int(np.argmax(v))
    return _report(lemma_id, int(v.size), v[row], trajectory_witness(lemma_id, traj, row, lhs[row], rhs[row], v[row]))


def _require_uniform(traj: Trajectory, game: SymmetricGame) -> None:
    if game.n != traj.n:
        raise GameError("trajectory and game dimensions differ")
    if not traj.uniform_start:
        raise GameError("these checks assume the uniform starting strategy")


def check_average_identities(trajectory: Trajectory, game: SymmetricGame) -> list[LemmaReport]:
    """Per-pair log-ratio identity and the averaged error inequalities derived from it."""
    _require_uniform(trajectory, game)
    return [_check_rows(k, trajectory, game)
            for k in ("telescoping_identity", "averaged_identity", "averaged_bound")]


def check_la_and_bound(trajectory: Trajectory, game: SymmetricGame) -> list[LemmaReport]:
    """Evaluate the contested inductive relation and the averaged-error bound; never raises on violation."""
    _require_uniform(trajectory, game)
    if trajectory.xlogx_sums is None:
        raise GameError("trajectory lacks running sums of X ln X")
    return [_check_rows(k, trajectory, game) for k in ("inductive_LA", "mylove_bound")]


class RegretBoundViolation(AssertionError):
    pass


def check_regret_bound(trajectory: Trajectory, game: SymmetricGame) -> LemmaReport:
    if game.n != trajectory.n:
        raise GameError("trajectory and game dimensions differ")
    return _check_rows("regret_bound", trajectory, game)


def external_regret(trajectory: Trajectory, game: SymmetricGame) -> float:
    """Time-averaged external regret at the last observed step.

    Raises ``RegretBoundViolation`` if it exceeds the telescoped bound
    ``ln(n)/(alpha (K+1)) + e^alpha - 1`` by more than ``1e-9``.
    """
    if trajectory.ks.size == 0:
        raise GameError("empty trajectory")
    if game.n != trajectory.n:
        raise GameError("trajectory and game dimensions differ")
    regret = float(_regret_rows(trajectory, game)[-1])
    bound = float(regret_bound_value(trajectory.x0, trajectory.alpha, trajectory.ks[-1]))
    if regret > bound + TOLERANCES["regret_bound"]:
        raise RegretBoundViolation(f"average regret {regret} exceeds bound {bound}")
    return regret


def replay_witness(witness: dict) -> tuple[float, float]:
    """Rerun the trajectory named by a witness and re-evaluate ``(lhs, rhs)`` at its ``k``."""
    lemma = witness["lemma"]
    if lemma not in ROW_EVALUATORS:
        raise ValueError(f"lemma {lemma!r} has no trajectory replay")
    game = SymmetricGame.from_json(witness["game"])
    k = int(witness["k"])
    traj = run_trajectory(game, float(witness["alpha"]), k, observe_every=max(k, 1))
    lhs, rhs = ROW_EVALUATORS[lemma](traj, game)
    return float(lhs[-1]), float(rhs[-1])


def theorem_limit_summary(trajectory: Trajectory) -> dict:
    """Final averaged error against the asymptotic claim ``n(e^alpha - 1)``.

    Both readings are recorded: ``limsup <= n(e^alpha-1)`` (compare with the
    finite-K bound and the limit value) and ``lim == n(e^alpha-1)`` (report
    the signed gap).
    """
    n, a, K = trajectory.n, trajectory.alpha, int(trajectory.ks[-1])
    eps = float(trajectory.eps_average[-1])
    limit = n * math.expm1(a)
    bound = mylove_bound(n, a, K)
    return {"K": K, "alpha": a, "eps_average": eps, "limit_value": limit, "finite_bound": bound,
            "within_finite_bound": eps <= bound, "within_limit_value": eps <= limit,
            "gap_to_limit_value": eps - limit}


# -- random instances --------------------------------------------------------------

def random_instance(rng: np.random.Generator, n: int | None = None, n_range=(2, 10), min_mass: float = 0.0):
    """A random ``(game, X, Y)``; ``X`` interior, ``Y`` pure, sparse or dense."""
    if n is None:
        n = int(rng.integers(n_range[0], n_range[1] + 1))
    game = SymmetricGame(rng.random((n, n)))
    x = rng.dirichlet(np.full(n, 0.5))
    x = np.maximum(x, max(min_mass, 1e-300))
    x /= x.sum()
    kind = rng.integers(3)
    if kind == 0:
        y = np.zeros(n)
        y[rng.integers(n)] = 1.0
    elif kind == 1:
        y = rng.dirichlet(np.ones(n)) * (rng.random(n) < 0.5)
        if y.sum() == 0:
            y[rng.integers(n)] = 1.0
        y /= y.sum()
    else:
        y = rng.dirichlet(np.ones(n))
    return game, MixedStrategy(x), MixedStrategy(y)
