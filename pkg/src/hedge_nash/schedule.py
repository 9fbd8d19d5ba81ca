"""Parameter schedule for running Hedge as an approximation scheme.

Given a target error ``eps`` for an ``n``-strategy game, pick a learning rate
and iteration budget whose predicted error (per the averaged-error bound)
is at most ``eps``.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

RHO = 0.5


class ScheduleError(ValueError):
    pass


@dataclass(frozen=True)
class FptasSchedule:
    n: int
    eps_target: float
    k_hat: int
    eps_prime: float
    alpha: float
    theta: float
    K: int
    k_prime: int
    rho: float
    predicted_error: float

    def to_json(self) -> dict:
        return asdict(self)


def iterations_for_theta(n: int, alpha: float, theta: float) -> int:
    """``floor((n/e + 1 + alpha) / (alpha * theta))``."""
    if n < 1 or not alpha > 0 or not theta > 0:
        raise ScheduleError(f"need n >= 1, alpha > 0, theta > 0 (got {n}, {alpha}, {theta})")
    return int(math.floor((n * math.exp(-1.0) + 1.0 + alpha) / (alpha * theta)))


def mylove_bound(n: int, alpha: float, K: int, rho: float = RHO) -> float:
    """Upper bound on the error of the empirical average after ``K`` steps.

    Sum of four terms: ``n/(e alpha (K+1))``, ``1/(K+1)``, and the
    ``(K+2)/(K+1)``-inflated ``n(e^alpha - 1)`` and ``n rho^K``.
    """
    if not alpha > 0:
        raise ScheduleError("alpha must be positive")
    if K < 0:
        raise ScheduleError("K must be >= 0")
    r = (K + 2) / (K + 1)
    return (n * math.exp(-1.0) / (alpha * (K + 1)) + 1.0 / (K + 1)
            + r * n * math.expm1(alpha) + r * n * rho ** K)


def predicted_error(eps_prime: float, K: int) -> float:
    r = (K + 2) / (K + 1)
    return r * eps_prime / 3 + eps_prime / 3 + r * eps_prime / 3


def build_schedule(n: int, eps: float) -> FptasSchedule:
    if n < 1:
        raise ScheduleError("n must be >= 1")
    if not (0 < eps <= 1):
        raise ScheduleError(f"eps must lie in (0, 1], got {eps}")
    k_hat = iterations_for_theta(n, math.log1p(eps / (3 * n)), eps / 3)
    # solve the three-term error sum at K = k_hat for eps'
    eps_prime = 3 * eps / (2 * (k_hat + 2) / (k_hat + 1) + 1)
    alpha = math.log1p(eps_prime / (3 * n))
    theta = eps_prime / 3
    K = iterations_for_theta(n, alpha, theta)
    k_prime = math.ceil(math.log(eps_prime / (3 * n)) / math.log(RHO))
    if not (K >= k_hat >= k_prime):
        raise ScheduleError(
            f"budget ordering K >= k_hat >= k_prime violated: K={K}, k_hat={k_hat}, k_prime={k_prime} "
            f"(n={n}, eps={eps})")
    pred = predicted_error(eps_prime, K)
    if pred > eps + 1e-12:
        raise ScheduleError(f"predicted error {pred} exceeds target {eps}")
    return FptasSchedule(n, eps, k_hat, eps_prime, alpha, theta, K, k_prime, RHO, pred)
