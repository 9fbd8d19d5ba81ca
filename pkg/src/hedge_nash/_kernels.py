"""Hot loops for Hedge trajectories.

Two implementations of the same recurrence are kept side by side: a numba
``@njit`` kernel with explicit loops, and a per-step vectorized numpy path.
``HEDGE_NASH_DISABLE_JIT=1`` (or a missing numba) selects the numpy path.
Both return identical layouts and agree to rounding.
"""

from __future__ import annotations

import os
import warnings

import numpy as np

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        def deco(f):
            return f

        if args and callable(args[0]):
            return args[0]
        return deco


def _jit_disabled() -> bool:
    return os.environ.get("HEDGE_NASH_DISABLE_JIT", "").strip().lower() in ("1", "true", "yes", "on")


USE_JIT = HAVE_NUMBA and not _jit_disabled()

if not HAVE_NUMBA and not _jit_disabled():  # pragma: no cover
    warnings.warn("numba is not available; falling back to the numpy Hedge kernel")


def record_indices(K: int, stride: int) -> np.ndarray:
    """Observed iteration indices: every ``stride``-th step and always ``K``."""
    ks = np.arange(0, K + 1, stride, dtype=np.int64)
    if ks[-1] != K:
        ks = np.append(ks, np.int64(K))
    return ks


@njit(cache=True, nogil=True)
def _record_count(K, stride):
    m = K // stride + 1
    if K % stride != 0:
        m += 1
    return m


@njit(cache=True, nogil=True)
def trajectory_jit(C, log_x0, alpha, K, stride):
    n = C.shape[0]
    m = _record_count(K, stride)
    ks = np.empty(m, dtype=np.int64)
    out_log = np.empty((m, n))
    out_log_next = np.empty((m, n))
    out_avg = np.empty((m, n))
    out_avg_next = np.empty((m, n))
    out_scores = np.empty((m, n))
    out_payoff = np.empty((m, n))
    out_xlogx = np.empty((m, n))
    out_self = np.empty(m)

    scores = np.zeros(n)
    logx = log_x0.copy()
    x = np.exp(logx)
    avg = x.copy()
    xlogx = x * logx
    payoff = np.empty(n)
    logx_next = np.empty(n)
    x_next = np.empty(n)
    avg_next = np.empty(n)
    cum_self = 0.0
    r = 0
    for k in range(K + 1):
        self_k = 0.0
        for i in range(n):
            s = 0.0
            for j in range(n):
                s += C[i, j] * x[j]
            payoff[i] = s
            self_k += x[i] * s
        cum_self += self_k

        # softmax of log_x0 + alpha * S^{k+1}, max-shifted
        zmax = -np.inf
        for i in range(n):
            logx_next[i] = log_x0[i] + alpha * (scores[i] + payoff[i])
            if logx_next[i] > zmax:
                zmax = logx_next[i]
        tot = 0.0
        for i in range(n):
            tot += np.exp(logx_next[i] - zmax)
        lse = zmax + np.log(tot)
        w_new = 1.0 / (k + 2)
        w_old = (k + 1.0) / (k + 2)
        for i in range(n):
            logx_next[i] -= lse
            x_next[i] = np.exp(logx_next[i])
            avg_next[i] = w_new * x_next[i] + w_old * avg[i]

        if k % stride == 0 or k == K:
            ks[r] = k
            for i in range(n):
                out_log[r, i] = logx[i]
                out_log_next[r, i] = logx_next[i]
                out_avg[r, i] = avg[i]
                out_avg_next[r, i] = avg_next[i]
                out_scores[r, i] = scores[i]
                out_payoff[r, i] = payoff[i]
                out_xlogx[r, i] = xlogx[i]
            out_self[r] = cum_self
            r += 1

        for i in range(n):
            scores[i] += payoff[i]
            logx[i] = logx_next[i]
            x[i] = x_next[i]
            avg[i] = avg_next[i]
            xlogx[i] += x_next[i] * logx_next[i]

    return ks, out_log, out_log_next, out_avg, out_avg_next, out_scores, out_payoff, out_xlogx, out_self


def trajectory_numpy(C, log_x0, alpha, K, stride):
    n = C.shape[0]
    ks = record_indices(K, stride)
    m = ks.size
    out = {name: np.empty((m, n)) for name in ("log", "log_next", "avg", "avg_next", "scores", "payoff", "xlogx")}
    out_self = np.empty(m)

    scores = np.zeros(n)
    logx = log_x0.copy()
    x = np.exp(logx)
    avg = x.copy()
    xlogx = x * logx
    cum_self = 0.0
    r = 0
    for k in range(K + 1):
        payoff = C @ x
        cum_self += x @ payoff
        z = log_x0 + alpha * (scores + payoff)
        zmax = z.max()
        logx_next = z - (zmax + np.log(np.exp(z - zmax).sum()))
        x_next = np.exp(logx_next)
        avg_next = x_next / (k + 2) + ((k + 1.0) / (k + 2)) * avg

        if r < m and ks[r] == k:
            out["log"][r] = logx
            out["log_next"][r] = logx_next
            out["avg"][r] = avg
            out["avg_next"][r] = avg_next
            out["scores"][r] = scores
            out["payoff"][r] = payoff
            out["xlogx"][r] = xlogx
            out_self[r] = cum_self
            r += 1

        scores = scores + payoff
        logx, x, avg = logx_next, x_next, avg_next
        xlogx = xlogx + x_next * logx_next

    return (ks, out["log"], out["log_next"], out["avg"], out["avg_next"],
            out["scores"], out["payoff"], out["xlogx"], out_self)


def run_kernel(C, log_x0, alpha, K, stride, use_jit: bool | None = None):
    """Dispatch to the jitted or numpy kernel (``use_jit=None`` follows the env flag)."""
    C = np.ascontiguousarray(C, dtype=np.float64)
    log_x0 = np.ascontiguousarray(log_x0, dtype=np.float64)
    jit = USE_JIT if use_jit is None else (use_jit and HAVE_NUMBA)
    fn = trajectory_jit if jit else trajectory_numpy
    return fn(C, log_x0, float(alpha), int(K), int(stride))
