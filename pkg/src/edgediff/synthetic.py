"""Deterministic synthetic graphs for experiments and tests.

Heavy-tailed degree sequences with an exact (even) total, and Chung-Lu
style random graphs whose expected degrees follow a prescribed sequence.
"""

from __future__ import annotations

import numpy as np

from .forward import coerce_rng
from .graph import Graph


def powerlaw_degree_sequence(
    n: int,
    total: int,
    exponent: float = 2.0,
    d_max: int | None = None,
    seed: int | np.random.Generator = 0,
) -> np.ndarray:
    """Heavy-tailed degrees with sum exactly `total` (must be even).

    Draws Pareto-distributed values, clips them to [1, d_max], then walks
    the residual off by +/-1 adjustments, largest entries first.
    """
    if total % 2 != 0:
        raise ValueError("total degree must be even")
    if total < n:
        raise ValueError("need total >= n so every node can have degree >= 1")
    rng = coerce_rng(seed)
    cap = d_max if d_max is not None else n - 1
    raw = 1.0 + rng.pareto(exponent - 1.0, size=n)
    d = np.clip(np.floor(raw * total / raw.sum()).astype(np.int64), 1, cap)
    order = np.argsort(-d, kind="stable")
    i = 0
    while d.sum() != total:
        idx = order[i % n]
        if d.sum() < total and d[idx] < cap:
            d[idx] += 1
        elif d.sum() > total and d[idx] > 1:
            d[idx] -= 1
        i += 1
    return d


def chung_lu_graph(degrees, seed: int | np.random.Generator = 0) -> Graph:
    """Random graph with edge probability min(1, d_i d_j / sum d)."""
    d = np.asarray(degrees, dtype=np.float64)
    n = len(d)
    total = d.sum()
    if total <= 0:
        return Graph.from_edges(n, [])
    rng = coerce_rng(seed)
    ii, jj = np.triu_indices(n, 1)
    p = np.minimum(d[ii] * d[jj] / total, 1.0)
    keep = rng.random(len(p)) < p
    return Graph.from_edges(n, np.column_stack((ii[keep], jj[keep])))
