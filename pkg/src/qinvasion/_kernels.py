"""Compiled inner loop of the imitation dynamics.

All kernels work on CSR neighbor arrays and integer strategy indices; the
payoff table is a dense (n_strategies x n_strategies) float array of row
payoffs.
"""

import numpy as np
from numba import njit

from qinvasion.seeding import generation_key, node_uniform

NEIGHBOR_STREAM = 0
ACCEPT_STREAM = 1

# p can exceed 1 by rounding when F_j - F_i equals alpha * max(k) exactly;
# only an overshoot beyond this counts as a violation of the bound
CLAMP_SLACK = 1e-12


@njit(cache=True)
def accumulate(indptr, indices, strat, table, out):
    for i in range(len(strat)):
        si = strat[i]
        f = 0.0
        for e in range(indptr[i], indptr[i + 1]):
            f += table[si, strat[indices[e]]]
        out[i] = f


@njit(cache=True)
def imitate(indptr, indices, strat, payoff, alpha, seed, generation, order, nxt):
    """Write generation t+1 strategies into ``nxt``; return (changed, clamped)."""
    key = generation_key(seed, generation)
    changed = 0
    clamped = 0
    for pos in range(len(order)):
        i = order[pos]
        lo = indptr[i]
        ki = indptr[i + 1] - lo
        u = node_uniform(key, i, NEIGHBOR_STREAM)
        j = indices[lo + int(u * ki)]
        new = strat[i]
        diff = payoff[j] - payoff[i]
        if diff > 0.0:
            kj = indptr[j + 1] - indptr[j]
            p = diff / (alpha * max(ki, kj))
            if p > 1.0:
                if p > 1.0 + CLAMP_SLACK:
                    clamped += 1
                p = 1.0
            if node_uniform(key, i, ACCEPT_STREAM) < p:
                new = strat[j]
        if new != strat[i]:
            changed += 1
        nxt[i] = new
    return changed, clamped


@njit(cache=True)
def evolve(indptr, indices, strat, table, alpha, seed, start_generation,
           max_generations, freeze_window, counts):
    """Run until max_generations or until no node changes for freeze_window
    consecutive generations.

    ``strat`` holds the initial state and is overwritten with the final one.
    Row g of ``counts`` receives the strategy counts after update g + 1.
    Returns (generations_run, converged, clamped).
    """
    n = len(strat)
    cur = strat.copy()
    nxt = np.empty_like(cur)
    payoff = np.empty(n)
    order = np.arange(n)
    n_strat = counts.shape[1]
    still = 0
    clamped = 0
    gen = 0
    converged = False
    while gen < max_generations:
        accumulate(indptr, indices, cur, table, payoff)
        changed, c = imitate(indptr, indices, cur, payoff, alpha, seed,
                             start_generation + gen, order, nxt)
        clamped += c
        cur, nxt = nxt, cur
        for s in range(n_strat):
            counts[gen, s] = 0
        for i in range(n):
            counts[gen, cur[i]] += 1
        gen += 1
        if changed == 0:
            still += 1
            if still >= freeze_window:
                converged = True
                break
        else:
            still = 0
    strat[:] = cur
    return gen, converged, clamped
