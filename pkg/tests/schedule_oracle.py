"""Arbitrary-precision reference for the step-size schedule."""

import mpmath as mp

mp.mp.dps = 50


def oracle_iterations(n, alpha, theta):
    return int(mp.floor((n * mp.e ** -1 + 1 + alpha) / (alpha * theta)))


def oracle_schedule(n, eps):
    eps = mp.mpf(eps)
    k_hat = oracle_iterations(n, mp.log(1 + eps / (3 * n)), eps / 3)
    eps_p = 3 * eps / (2 * mp.mpf(k_hat + 2) / (k_hat + 1) + 1)
    alpha = mp.log(1 + eps_p / (3 * n))
    K = oracle_iterations(n, alpha, eps_p / 3)
    k_prime = int(mp.ceil(mp.log(eps_p / (3 * n)) / mp.log(mp.mpf(1) / 2)))
    return dict(k_hat=k_hat, eps_prime=eps_p, alpha=alpha, theta=eps_p / 3, K=K, k_prime=k_prime)
