"""Reverse-process generation over a pluggable edge model.

The reverse chain walks t = T..1.  Each step picks the nodes allowed to gain
edges (from the analytic posterior given the prescribed degree sequence,
optionally rescaled so the expected count matches the schedule), queries an
edge model on every pair of chosen nodes (pairs already present are
regenerated, letting the model refine earlier steps), and optionally
rescales the edge probabilities so the expected number of generated edges
matches the step's volume budget.  Pairs with an unchosen endpoint carry
over unchanged.
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from pathlib import Path
from typing import NamedTuple

import numpy as np

from .errors import DegenerateStateError
from .forward import NoiseSchedule, coerce_rng, forward_marginal_sample, one_minus_pow
from .graph import Graph, active_subgraph_edge_count, degree_sequence
from .schedule import expected_active_curve


@dataclass(frozen=True)
class SamplerMode:
    """Which of the two reweighting corrections to apply; all four legal."""

    node_correction: bool = True
    edge_correction: bool = True


@dataclass(frozen=True)
class EdgeQuery:
    """One step's batch of active pairs, as seen by an edge model.

    pairs holds (i, j) with i < j, both endpoints active; in_current flags
    the pairs already present in the step's graph.
    """

    pairs: np.ndarray
    in_current: np.ndarray
    d0: np.ndarray
    dt: np.ndarray
    t: int
    sched: NoiseSchedule


class EdgeModel(ABC):
    """Edge-probability predictor over active node pairs.

    Implementations must be deterministic given (query, model state) and
    return values in [0, 1] aligned with query.pairs.
    """

    @abstractmethod
    def edge_probabilities(self, query: EdgeQuery) -> np.ndarray: ...


class OracleEdgeModel(EdgeModel):
    """Exact posterior of the removal process against a reference graph.

    Stand-in for a trained predictor: pairs present in the current graph
    score 1, pairs absent from the reference score 0, and removed reference
    edges score the exact per-step restoration probability (which reaches 1
    at t = 1, so an uncorrected run reproduces the reference exactly).
    """

    def __init__(self, reference: Graph):
        self.reference = reference

    def edge_probabilities(self, query: EdgeQuery) -> np.ndarray:
        n = self.reference.n
        keys = query.pairs[:, 0] * n + query.pairs[:, 1]
        ref_set = self.reference.edge_key_set
        in_ref = np.fromiter((k in ref_set for k in keys.tolist()), dtype=bool, count=len(keys))
        if np.any(query.in_current & ~in_ref):
            raise ValueError("current graph holds an edge absent from the reference; not an edge-removal state")
        sched = query.sched
        denom = 1.0 - sched.alpha_bar_at(query.t)
        if denom == 0.0:
            raise ValueError(f"no noise applied through step {query.t}")
        restore = sched.alpha_bar_at(query.t - 1) * sched.beta_at(query.t) / denom
        out = np.where(query.in_current, 1.0, np.where(in_ref, restore, 0.0))
        return out


class DegreeAffinityModel(EdgeModel):
    """Residual-degree affinity: score absent pairs by the product of their
    remaining degree budgets, scaled so the largest product maps to 1.
    Pairs already present score 1 (kept unless the volume correction
    re-decides them)."""

    def edge_probabilities(self, query: EdgeQuery) -> np.ndarray:
        residual = np.maximum(query.d0 - query.dt, 0).astype(np.float64)
        raw = residual[query.pairs[:, 0]] * residual[query.pairs[:, 1]]
        raw[query.in_current] = 0.0
        top = raw.max() if len(raw) else 0.0
        if top > 0:
            raw /= top
        out = np.where(query.in_current, 1.0, raw)
        return out


def edge_model_oracle(reference: Graph) -> EdgeModel:
    return OracleEdgeModel(reference)


def edge_model_degree_affinity() -> EdgeModel:
    return DegreeAffinityModel()


def node_reweighted_posterior(dt, d0, t: int, sched: NoiseSchedule) -> np.ndarray:
    """Active-node probabilities rescaled to the schedule's expected count.

    Rescales the per-node posteriors p_i by h_t / sum(p) and clamps to
    [0, 1]; nodes with no remaining degree budget stay at exactly 0.
    """
    dt = np.asarray(dt, dtype=np.int64)
    d0 = np.asarray(d0, dtype=np.int64)
    if np.any(dt > d0):
        raise ValueError("current degrees exceed the prescribed degree sequence")
    p = _active_probs(dt, d0, t, sched)
    h_t = expected_active_nodes_at(d0, sched, t)
    total = float(p.sum())
    if total == 0.0:
        if h_t > 0.0:
            raise DegenerateStateError(
                f"step {t}: no node has degree budget but the schedule expects "
                f"{h_t:.3g} active nodes"
            )
        return np.zeros(len(d0))
    return np.clip(h_t / total * p, 0.0, 1.0)


def expected_active_nodes_at(d0, sched: NoiseSchedule, t: int) -> float:
    """Closed-form expected active-node count at step t of a schedule."""
    return float(expected_active_curve(d0, sched.alpha)[t - 1])


def _active_probs(dt: np.ndarray, d0: np.ndarray, t: int, sched: NoiseSchedule) -> np.ndarray:
    """Per-node posterior activity probabilities, over-budget clamped to 0."""
    denom = 1.0 - sched.alpha_bar_at(t)
    if denom == 0.0:
        raise ValueError(f"no noise applied through step {t}; reverse step undefined")
    ratio = sched.beta_at(t) * sched.alpha_bar_at(t - 1) / denom
    budget = np.maximum(d0 - dt, 0)
    return one_minus_pow(ratio, budget)


def delta_edges(d0, at: Graph, s, t: int, sched: NoiseSchedule) -> float:
    """Number of edges the reverse step should produce within the active set.

    The marginal edge budget (alpha_bar_{t-1} - alpha_bar_t) * E0 plus the
    active-subgraph edges being regenerated.
    """
    d0 = np.asarray(d0, dtype=np.int64)
    shed = sched.alpha_bar_at(t - 1) - sched.alpha_bar_at(t)
    return shed * float(d0.sum()) / 2.0 + active_subgraph_edge_count(at, s)


def edge_reweighted_probs(raw, delta_e: float) -> np.ndarray:
    """Scale raw edge probabilities so they sum to delta_e, clamped to [0, 1].

    A zero raw mass is fine when delta_e is zero (returns zeros) and
    degenerate otherwise.
    """
    raw = np.asarray(raw, dtype=np.float64)
    if np.any(raw < 0) or np.any(raw > 1):
        raise ValueError("raw probabilities must lie in [0, 1]")
    total = float(raw.sum())
    if total == 0.0:
        if delta_e == 0.0:
            return np.zeros(len(raw))
        raise DegenerateStateError(
            f"model assigns zero probability everywhere but {delta_e:.3g} edges are required"
        )
    return np.minimum(raw * (delta_e / total), 1.0)


class StepRecord(NamedTuple):
    t: int
    active_nodes: int
    edges: int
    delta_e: float
    clamp_events_nodes: int
    clamp_events_edges: int
    over_budget_nodes: int


@dataclass(frozen=True)
class GenerationRun:
    """A finished reverse run: the graph plus per-step diagnostics."""

    final: Graph
    per_t: tuple[StepRecord, ...] = field(repr=False)
    seed: int | None

    @property
    def total_clamp_events(self) -> tuple[int, int]:
        return (
            sum(r.clamp_events_nodes for r in self.per_t),
            sum(r.clamp_events_edges for r in self.per_t),
        )

    @property
    def total_over_budget(self) -> int:
        return sum(r.over_budget_nodes for r in self.per_t)


def write_generation_run_csv(path: str | Path, run: GenerationRun) -> None:
    lines = ["t,active_nodes,edges,delta_E,clamp_events_nodes,clamp_events_edges"]
    for r in run.per_t:
        lines.append(
            f"{r.t},{r.active_nodes},{r.edges},{r.delta_e:.17g},"
            f"{r.clamp_events_nodes},{r.clamp_events_edges}"
        )
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")


def sample_degree_guided(
    d0,
    model: EdgeModel,
    sched: NoiseSchedule,
    mode: SamplerMode = SamplerMode(),
    seed: int | np.random.Generator = 0,
) -> GenerationRun:
    """Generate a graph from an empty start, guided by a degree sequence."""
    d0 = np.asarray(d0, dtype=np.int64)
    if int(d0.sum()) % 2 != 0:
        raise ValueError("degree sequence must have even sum")
    rng = coerce_rng(seed)
    start = Graph.from_edges(len(d0), [])
    return _denoise(start, sched.T, d0, model, sched, mode, rng,
                    seed if isinstance(seed, int) else None)


def sample_with_eo_control(
    a0: Graph,
    t_start: int,
    model: EdgeModel,
    sched: NoiseSchedule,
    mode: SamplerMode = SamplerMode(),
    seed: int | np.random.Generator = 0,
) -> GenerationRun:
    """Corrupt a0 forward to t_start, then denoise back to a sample.

    Small t_start leaves most of a0 intact (high edge overlap); t_start = T
    with a fully decayed schedule is unconditional generation.
    """
    if not 1 <= t_start <= sched.T:
        raise ValueError(f"t_start {t_start} outside 1..{sched.T}")
    rng = coerce_rng(seed)
    corrupted = forward_marginal_sample(a0, sched, t_start, rng)
    return _denoise(corrupted, t_start, degree_sequence(a0), model, sched, mode, rng,
                    seed if isinstance(seed, int) else None)


def _denoise(
    start: Graph,
    t_start: int,
    d0: np.ndarray,
    model: EdgeModel,
    sched: NoiseSchedule,
    mode: SamplerMode,
    rng: np.random.Generator,
    seed: int | None,
) -> GenerationRun:
    n = len(d0)
    if start.n != n:
        raise ValueError("start graph and degree sequence disagree on node count")
    e0 = float(d0.sum()) / 2.0

    cur: set = set(start.edge_keys.tolist())
    dt = degree_sequence(start).copy()
    h_curve = expected_active_curve(d0, sched.alpha) if mode.node_correction else None

    records: list[StepRecord] = []
    for t in range(t_start, 0, -1):
        p = _active_probs(dt, d0, t, sched)
        over_budget = int(np.count_nonzero(dt > d0))
        clamp_nodes = 0
        if mode.node_correction:
            total = float(p.sum())
            h_t = float(h_curve[t - 1])
            if total == 0.0:
                if h_t > 0.0:
                    raise DegenerateStateError(
                        f"step {t}: no node has degree budget but the schedule "
                        f"expects {h_t:.3g} active nodes"
                    )
                q = p
            else:
                scaled = h_t / total * p
                clamp_nodes = int(np.count_nonzero(scaled > 1.0))
                q = np.minimum(scaled, 1.0)
        else:
            q = p

        s = rng.random(n) < q
        active = np.flatnonzero(s)
        k = len(active)
        ii, jj = np.triu_indices(k, 1)
        pairs = np.column_stack((active[ii], active[jj])) if k > 1 else np.empty((0, 2), dtype=np.int64)
        keys = pairs[:, 0] * n + pairs[:, 1] if len(pairs) else np.empty(0, dtype=np.int64)
        in_cur = np.fromiter((key in cur for key in keys.tolist()), dtype=bool, count=len(keys))

        shed = sched.alpha_bar_at(t - 1) - sched.alpha_bar_at(t)
        delta_e = shed * e0 + float(np.count_nonzero(in_cur))

        clamp_edges = 0
        if len(pairs):
            raw = model.edge_probabilities(
                EdgeQuery(pairs=pairs, in_current=in_cur, d0=d0, dt=dt, t=t, sched=sched)
            )
            if mode.edge_correction:
                total_raw = float(raw.sum())
                if total_raw == 0.0:
                    if delta_e > 0.0:
                        raise DegenerateStateError(
                            f"step {t}: model assigns zero probability everywhere "
                            f"but {delta_e:.3g} edges are required"
                        )
                    probs = raw
                else:
                    scaled = raw * (delta_e / total_raw)
                    clamp_edges = int(np.count_nonzero(scaled > 1.0))
                    probs = np.minimum(scaled, 1.0)
            else:
                probs = raw

            gen = rng.random(len(pairs)) < probs
            add = keys[gen & ~in_cur]
            remove = keys[in_cur & ~gen]
            for key in remove.tolist():
                cur.remove(key)
            for key in add.tolist():
                cur.add(key)
            if len(add):
                np.add.at(dt, add // n, 1)
                np.add.at(dt, add % n, 1)
            if len(remove):
                np.add.at(dt, remove // n, -1)
                np.add.at(dt, remove % n, -1)

        records.append(
            StepRecord(
                t=t,
                active_nodes=k,
                edges=len(cur),
                delta_e=delta_e,
                clamp_events_nodes=clamp_nodes,
                clamp_events_edges=clamp_edges,
                over_budget_nodes=over_budget,
            )
        )

    final_keys = np.array(sorted(cur), dtype=np.int64)
    arr = np.column_stack((final_keys // n, final_keys % n)) if len(final_keys) else np.empty((0, 2), dtype=np.int64)
    return GenerationRun(final=Graph._from_canonical(n, arr), per_t=tuple(records), seed=seed)
