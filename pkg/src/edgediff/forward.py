"""Exact distributions of the edge-removal diffusion process.

The forward process deletes each surviving edge independently with
probability beta_t at step t and never adds edges (empty-graph prior).
Everything here is a pure function of its inputs; sampling takes an explicit
seed or numpy Generator, and identical seeds give identical outputs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, NamedTuple

import numpy as np

from .graph import Graph, degree_sequence


def coerce_rng(seed: int | np.random.Generator) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def one_minus_pow(x, k):
    """1 - (1-x)**k, stable for tiny x and large k.

    Uses expm1/log1p so that e.g. x=1e-12, k=500 keeps full precision.
    k == 0 returns exactly 0 even when x == 1 (where log1p(-x) is -inf).
    """
    x = np.asarray(x, dtype=np.float64)
    k = np.asarray(k, dtype=np.float64)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = -np.expm1(k * np.log1p(-x))
    out = np.where(k == 0, 0.0, out)
    if out.ndim == 0:
        return float(out)
    return out


@dataclass(frozen=True)
class NoiseSchedule:
    """Per-step removal probabilities and their cumulative survival products.

    beta[t-1] is the step-t removal probability for t = 1..T;
    alpha_t = 1 - beta_t and alpha_bar_t = prod_{tau<=t} alpha_tau with
    alpha_bar_0 = 1.  prior_p is the edge probability of the terminal prior
    and is fixed at 0 (pure edge removal).
    """

    T: int
    beta: np.ndarray = field(repr=False)
    prior_p: float = 0.0

    def __post_init__(self):
        beta = np.asarray(self.beta, dtype=np.float64)
        if beta.shape != (self.T,):
            raise ValueError(f"beta must have shape ({self.T},)")
        if not np.all(np.isfinite(beta)):
            raise ValueError("beta entries must be finite")
        if np.any(beta < 0) or np.any(beta > 1):
            raise ValueError("beta entries must lie in [0, 1]")
        if self.prior_p != 0.0:
            raise ValueError("only the empty-graph prior (prior_p = 0) is supported")
        object.__setattr__(self, "beta", beta)

    @classmethod
    def from_betas(cls, betas) -> "NoiseSchedule":
        betas = np.asarray(betas, dtype=np.float64)
        return cls(T=len(betas), beta=betas)

    @classmethod
    def from_alphas(cls, alphas) -> "NoiseSchedule":
        alphas = np.asarray(alphas, dtype=np.float64)
        return cls(T=len(alphas), beta=1.0 - alphas)

    @property
    def alpha(self) -> np.ndarray:
        return 1.0 - self.beta

    @property
    def alpha_bar(self) -> np.ndarray:
        """alpha_bar_t for t = 1..T (index t-1)."""
        return np.cumprod(self.alpha)

    def beta_at(self, t: int) -> float:
        self._check_t(t)
        return float(self.beta[t - 1])

    def alpha_at(self, t: int) -> float:
        self._check_t(t)
        return float(self.alpha[t - 1])

    def alpha_bar_at(self, t: int) -> float:
        """Cumulative survival through step t; t = 0 gives 1."""
        if t == 0:
            return 1.0
        self._check_t(t)
        return float(self.alpha_bar[t - 1])

    def _check_t(self, t: int) -> None:
        if not 1 <= t <= self.T:
            raise ValueError(f"timestep {t} outside 1..{self.T}")


def forward_marginal_sample(
    a0: Graph, sched: NoiseSchedule, t: int, seed: int | np.random.Generator
) -> Graph:
    """Draw the step-t corruption of a0 directly: keep each edge w.p. alpha_bar_t."""
    if not 0 <= t <= sched.T:
        raise ValueError(f"timestep {t} outside 0..{sched.T}")
    if t == 0:
        return a0
    rng = coerce_rng(seed)
    keep_p = sched.alpha_bar_at(t)
    keep = rng.random(a0.num_edges) < keep_p
    return Graph._from_canonical(a0.n, a0.edge_array[keep])


class TrajectoryStep(NamedTuple):
    t: int
    graph: Graph
    active: np.ndarray  # bool per node: lost >=1 edge at this step


def forward_trajectory(
    a0: Graph, sched: NoiseSchedule, seed: int | np.random.Generator
) -> Iterator[TrajectoryStep]:
    """Run the stepwise removal chain, yielding (t, A^t, s^t) for t = 1..T.

    s^t flags the nodes whose degree changed between A^{t-1} and A^t.
    """
    rng = coerce_rng(seed)
    edges = a0.edge_array
    for t in range(1, sched.T + 1):
        drop = rng.random(len(edges)) < sched.beta_at(t)
        removed = edges[drop]
        edges = edges[~drop]
        active = np.zeros(a0.n, dtype=bool)
        if len(removed):
            active[removed[:, 0]] = True
            active[removed[:, 1]] = True
        yield TrajectoryStep(t, Graph._from_canonical(a0.n, edges), active)


def write_trajectory_csv(path, steps) -> None:
    """Per-step edge and active-node counts, one row per timestep."""
    lines = ["t,num_edges,num_active_nodes"]
    for step in steps:
        lines.append(f"{step.t},{step.graph.num_edges},{int(np.count_nonzero(step.active))}")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def degree_marginal_params(d0_i: int, t: int, sched: NoiseSchedule) -> tuple[int, float]:
    """Binomial (n, p) of a node's step-t degree given its initial degree.

    Each of the d0_i initial edges survives to step t independently with
    probability alpha_bar_t; t = 0 is allowed and gives p = 1.
    """
    return int(d0_i), sched.alpha_bar_at(t)


def active_prob_given_prev_degree(d_prev: int, t: int, sched: NoiseSchedule) -> float:
    """P(node loses >= 1 edge at step t | degree d_prev entering the step)."""
    return one_minus_pow(sched.beta_at(t), d_prev)


def active_posterior(dt_i: int, d0_i: int, t: int, sched: NoiseSchedule) -> float:
    """P(node was active at step t | current degree dt_i, initial degree d0_i).

    Equals 1 - (1 - beta_t * alpha_bar_{t-1} / (1 - alpha_bar_t))^(d0_i - dt_i):
    each of the d0_i - dt_i missing edges was removed at step t with that
    per-edge probability, independently.
    """
    if dt_i > d0_i:
        raise ValueError(f"current degree {dt_i} exceeds initial degree {d0_i}")
    sched._check_t(t)
    denom = 1.0 - sched.alpha_bar_at(t)
    if denom == 0.0:
        raise ValueError(f"no noise applied through step {t} (alpha_bar_t == 1)")
    ratio = sched.beta_at(t) * sched.alpha_bar_at(t - 1) / denom
    return one_minus_pow(ratio, d0_i - dt_i)


def oracle_edge_posterior(at_ij: int, a0_ij: int, t: int, sched: NoiseSchedule) -> float:
    """Exact P(A^{t-1}_ij = 1 | A^t_ij, A^0_ij) under the removal process.

    Surviving edges were certainly present one step earlier; edges absent
    from A^0 never existed; a removed original edge was present at t-1 with
    probability alpha_bar_{t-1} * beta_t / (1 - alpha_bar_t), which is 1 at
    t = 1 (the final denoising step restores every removed edge).
    """
    sched._check_t(t)
    if at_ij and not a0_ij:
        raise ValueError("A^t_ij = 1 with A^0_ij = 0 is impossible under edge removal")
    if at_ij:
        return 1.0
    if not a0_ij:
        return 0.0
    denom = 1.0 - sched.alpha_bar_at(t)
    if denom == 0.0:
        raise ValueError(f"no noise applied through step {t} (alpha_bar_t == 1)")
    return sched.alpha_bar_at(t - 1) * sched.beta_at(t) / denom


def empirical_forward_curves(
    a0: Graph, sched: NoiseSchedule, num_samples: int, seed: int | np.random.Generator
) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Mean and sd of per-step edge and active-node counts over trajectories.

    Returns (mean_edges, sd_edges, mean_active, sd_active), each of length T.
    """
    rng = coerce_rng(seed)
    edges = np.zeros((num_samples, sched.T))
    active = np.zeros((num_samples, sched.T))
    for k in range(num_samples):
        for step in forward_trajectory(a0, sched, rng):
            edges[k, step.t - 1] = step.graph.num_edges
            active[k, step.t - 1] = np.count_nonzero(step.active)
    return (
        edges.mean(axis=0),
        edges.std(axis=0, ddof=1) if num_samples > 1 else np.zeros(sched.T),
        active.mean(axis=0),
        active.std(axis=0, ddof=1) if num_samples > 1 else np.zeros(sched.T),
    )
