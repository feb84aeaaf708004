"""Compiled whole-run simulation used by the Monte-Carlo harness.

This mirrors filters.network_round step for step with plain loops so numba
can compile it once and amortize the cost over hundreds of runs. The
round-level routine in filters stays the readable reference; the harness
cross-checks the two paths in the test suite and `use_fast: false` in the
experiment config switches this module off entirely.

Algorithm codes: 0 klms (unconditional add), 1 quantized merge-or-add
(covers qklms, dklms with threshold 0 and qdklms), 2 fbqdklms.
"""

import math

import numpy as np
from numba import njit

ALG_CODES = {"klms": 0, "qklms": 1, "dklms": 1, "qdklms": 1, "fbqdklms": 2}


@njit(cache=True)
def _simulate(alg, A, C, X, D, eta, epsilon, zeta, budget, sigma):
    T = X.shape[0]
    n = X.shape[1]
    dim = X.shape[2]
    rounds = T - 1
    cap = T + 1
    s2 = sigma * sigma

    centers = np.zeros((n, cap, dim))
    weights = np.zeros((n, cap))
    sig = np.zeros((n, cap))
    age = np.zeros((n, cap))
    size = np.zeros(n, np.int64)
    for q in range(n):
        for i in range(dim):
            centers[q, 0, i] = X[0, q, i]
        weights[q, 0] = eta * D[0, q]
        sig[q, 0] = abs(D[0, q])
        age[q, 0] = 1.0
        size[q] = 1

    err2 = np.zeros((rounds, n))
    sizes = np.zeros((rounds, n), np.int64)
    e = np.zeros(n)
    ed = np.zeros(n)
    xf = np.zeros(dim)
    rem = np.zeros(dim)

    for r in range(1, T):
        # phase 1: fuse, predict, local errors
        for q in range(n):
            for i in range(dim):
                acc = 0.0
                for l in range(n):
                    acc += C[l, q] * X[r, l, i]
                xf[i] = acc
            y = 0.0
            for j in range(size[q]):
                d2 = 0.0
                for i in range(dim):
                    t = centers[q, j, i] - xf[i]
                    d2 += t * t
                y += weights[q, j] * math.exp(-d2 / s2)
            e[q] = D[r, q] - y

        # phase 2: diffuse errors, update dictionaries
        for q in range(n):
            acc = 0.0
            for l in range(n):
                acc += A[q, l] * e[l]
            ed[q] = acc

        for q in range(n):
            m = size[q]
            x_off = r
            innov = eta * ed[q]
            if alg == 0:
                for i in range(dim):
                    centers[q, m, i] = X[x_off, q, i]
                weights[q, m] = innov
                sig[q, m] = abs(ed[q])
                age[q, m] = 1.0
                size[q] = m + 1
            else:
                best_j = 0
                best_d2 = np.inf
                for j in range(m):
                    d2 = 0.0
                    for i in range(dim):
                        t = centers[q, j, i] - X[x_off, q, i]
                        d2 += t * t
                    if d2 < best_d2:
                        best_d2 = d2
                        best_j = j
                if math.sqrt(best_d2) <= epsilon:
                    if alg == 2:
                        w_old = weights[q, best_j]
                        w_new = w_old + innov
                        for j in range(m):
                            if j != best_j:
                                d2 = 0.0
                                for i in range(dim):
                                    t = centers[q, j, i] - centers[q, best_j, i]
                                    d2 += t * t
                                sig[q, j] = zeta * sig[q, j] + abs(weights[q, j]) * math.exp(-d2 / s2)
                                age[q, j] = zeta * age[q, j]
                        if abs(w_old) > 0.0:
                            sig[q, best_j] = (abs(w_new) / abs(w_old)) * zeta * sig[q, best_j] + abs(w_new)
                        else:
                            sig[q, best_j] = zeta * sig[q, best_j] + abs(w_new)
                        age[q, best_j] = zeta * age[q, best_j] + 1.0
                    weights[q, best_j] += innov
                else:
                    if alg == 2:
                        for j in range(m):
                            d2 = 0.0
                            for i in range(dim):
                                t = centers[q, j, i] - X[x_off, q, i]
                                d2 += t * t
                            sig[q, j] = zeta * sig[q, j] + abs(ed[q]) * math.exp(-d2 / s2)
                    for i in range(dim):
                        centers[q, m, i] = X[x_off, q, i]
                    weights[q, m] = innov
                    sig[q, m] = abs(ed[q])
                    age[q, m] = 1.0
                    size[q] = m + 1
                    if alg == 2 and size[q] > budget:
                        mm = size[q]
                        victim = 0
                        for j in range(1, mm):
                            if sig[q, j] < sig[q, victim]:
                                victim = j
                        for i in range(dim):
                            rem[i] = centers[q, victim, i]
                        lam_rem = age[q, victim]
                        for j in range(victim, mm - 1):
                            for i in range(dim):
                                centers[q, j, i] = centers[q, j + 1, i]
                            weights[q, j] = weights[q, j + 1]
                            sig[q, j] = sig[q, j + 1]
                            age[q, j] = age[q, j + 1]
                        size[q] = mm - 1
                        for j in range(size[q]):
                            d2 = 0.0
                            for i in range(dim):
                                t = centers[q, j, i] - rem[i]
                                d2 += t * t
                            sig[q, j] -= abs(weights[q, j]) * lam_rem * math.exp(-d2 / s2)
                            age[q, j] = zeta * age[q, j] + 1.0
            err2[r - 1, q] = e[q] * e[q]
            sizes[r - 1, q] = size[q]
    return err2, sizes


def simulate(algorithm, A, C, X, D, eta, epsilon, zeta, budget, sigma):
    """Run one full simulation; returns per-round per-node (e^2, dict size)."""
    alg = ALG_CODES[algorithm]
    if algorithm == "dklms":
        epsilon = 0.0
    b = np.int64(budget) if (algorithm == "fbqdklms" and budget is not None) else np.int64(2**62)
    return _simulate(
        np.int64(alg),
        np.ascontiguousarray(A, dtype=np.float64),
        np.ascontiguousarray(C, dtype=np.float64),
        np.ascontiguousarray(X, dtype=np.float64),
        np.ascontiguousarray(D, dtype=np.float64),
        float(eta),
        float(epsilon),
        float(zeta),
        b,
        float(sigma),
    )
