"""Solve an edge noise schedule from a desired active-node schedule.

Given per-timestep targets for how many nodes should be touched by edge
removal, find survival rates alpha_1..alpha_T whose expected active-node
curve matches the targets while the cumulative survival product is driven
to (approximately) zero.  The scale K linking the unnormalized targets to
absolute node counts is found by binary search; for each K the per-timestep
alphas are found by one-dimensional bisection, which is exact enough here
because the expected active count at step t is continuous and strictly
decreasing in alpha_t.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import SolverError
from .forward import NoiseSchedule

ALPHA_CEIL_GAP = 1e-12  # alphas never reach 1: keep them <= 1 - this gap


@dataclass(frozen=True)
class DegreeHistogram:
    """Distinct positive degrees with multiplicities.

    Zero-degree nodes contribute exactly zero expected activity, so they are
    dropped; the expected-active evaluation then costs O(#distinct degrees).
    """

    degrees: np.ndarray
    counts: np.ndarray

    @classmethod
    def from_degrees(cls, d0) -> "DegreeHistogram":
        d0 = np.asarray(d0, dtype=np.int64)
        if d0.ndim != 1:
            raise ValueError("degree sequence must be one-dimensional")
        if np.any(d0 < 0):
            raise ValueError("degrees must be nonnegative")
        pos = d0[d0 > 0]
        degrees, counts = np.unique(pos, return_counts=True)
        return cls(degrees=degrees.astype(np.float64), counts=counts.astype(np.float64))

    @property
    def num_positive(self) -> float:
        return float(self.counts.sum())


def _h_of_x(hist: DegreeHistogram, x: float) -> float:
    """Expected active nodes when each surviving edge dies w.p. x this step.

    x = alpha_bar_{t-1} * beta_t is the probability that a given original
    edge is removed exactly at step t; a node with initial degree d is
    active with probability 1 - (1-x)^d.
    """
    if x <= 0.0:
        return 0.0
    if len(hist.degrees) == 0:
        return 0.0
    return float(np.dot(hist.counts, -np.expm1(hist.degrees * math.log1p(-x))))


def expected_active_nodes(d0, alphas, t: int) -> float:
    """Expected number of active nodes at step t, closed form.

    alphas is the schedule prefix alpha_1..alpha_t (longer sequences are
    fine; only the first t entries are used).  Marginalizing the step-(t-1)
    degree binomial gives 1 - (1 - alpha_bar_{t-1} * beta_t)^{d_i} per node,
    summed over nodes; t = 1 is the alpha_bar_0 = 1 instance.
    """
    alphas = np.asarray(alphas, dtype=np.float64)
    if t < 1 or t > len(alphas):
        raise ValueError(f"timestep {t} outside 1..{len(alphas)}")
    hist = d0 if isinstance(d0, DegreeHistogram) else DegreeHistogram.from_degrees(d0)
    abar_prev = float(np.prod(alphas[: t - 1]))
    x = abar_prev * (1.0 - float(alphas[t - 1]))
    return _h_of_x(hist, x)


def expected_active_nodes_direct(d0, alphas, t: int) -> float:
    """Expected active nodes at step t by literal marginalization.

    Sums (1 - alpha_t^k) * Binom(k; d_i, alpha_bar_{t-1}) over the possible
    step-(t-1) degrees k of every node.  Slow reference path; must agree
    with :func:`expected_active_nodes` to floating-point accuracy.
    """
    alphas = np.asarray(alphas, dtype=np.float64)
    if t < 1 or t > len(alphas):
        raise ValueError(f"timestep {t} outside 1..{len(alphas)}")
    d0 = np.asarray(d0, dtype=np.int64)
    alpha_t = float(alphas[t - 1])
    if t == 1:
        return float(sum(1.0 - alpha_t**d for d in d0.tolist()))
    p = float(np.prod(alphas[: t - 1]))  # alpha_bar_{t-1}
    total = 0.0
    for d in d0.tolist():
        acc = 0.0
        for k in range(1, d + 1):
            pmf = math.comb(d, k) * p**k * (1.0 - p) ** (d - k)
            acc += (1.0 - alpha_t**k) * pmf
        total += acc
    return total


def gamma_library(name: str, T: int) -> np.ndarray:
    """Built-in active-node schedules: constant and three polynomials."""
    t = np.arange(1, T + 1, dtype=np.float64)
    if name == "constant":
        return np.ones(T)
    if name == "poly1":
        return (0.5 * t / T - 0.5) ** 2 + 0.4
    if name == "poly2":
        return (0.5 * t / T - 0.5) ** 2 + 0.5
    if name == "poly3":
        return -0.5 * (t / T - 0.3) ** 2 + 0.7
    raise ValueError(f"unknown gamma schedule {name!r}; expected constant/poly1/poly2/poly3")


def baseline_linear_schedule(T: int, beta_start: float, beta_end: float) -> NoiseSchedule:
    """Linearly interpolated removal probabilities, the conventional default."""
    if not 0 < beta_start <= beta_end < 1:
        raise ValueError("need 0 < beta_start <= beta_end < 1")
    return NoiseSchedule.from_betas(np.linspace(beta_start, beta_end, T))


@dataclass(frozen=True)
class SolverConfig:
    """Tolerances and brackets for the schedule solve.

    eps1 bounds the squared-residual objective; None resolves to
    (0.01 * n)^2 * T at solve time.  eps2 bounds the final cumulative
    survival product.  bisection_rule picks the direction the K bracket
    moves on a violated tolerance: "text" shrinks K when the loss is too
    high and grows it when too little is removed; "printed" is the opposite
    convention, kept for comparison.  With stop_at_first_feasible=False the
    search keeps narrowing the bracket after feasibility and returns the
    lowest-loss feasible iterate, which lands at the constraint boundary
    where no timestep is clamped.
    """

    eps1: float | None = None
    eps2: float = 1e-5
    k_min: float = 1e-4
    k_max: float = 10.0
    max_outer_iters: int = 60
    alpha_floor: float = 1e-6
    alpha_tol: float = 1e-12
    bisection_rule: str = "text"
    stop_at_first_feasible: bool = False

    def __post_init__(self):
        if not 0 < self.eps2 < 1:
            raise ValueError("eps2 must lie in (0, 1)")
        if not 0 < self.k_min < self.k_max:
            raise ValueError("need 0 < k_min < k_max")
        if not 0 < self.alpha_floor < 1:
            raise ValueError("alpha_floor must lie in (0, 1)")
        if self.bisection_rule not in ("text", "printed"):
            raise ValueError("bisection_rule must be 'text' or 'printed'")

    def resolve_eps1(self, n: int, T: int) -> float:
        return self.eps1 if self.eps1 is not None else (0.01 * n) ** 2 * T


@dataclass(frozen=True)
class SolveReport:
    """Solved schedule plus the diagnostics needed to reproduce the solve."""

    success: bool
    K: float
    alphas: np.ndarray = field(repr=False)
    loss: float
    alpha_bar_T: float
    per_t_expected_active: np.ndarray = field(repr=False)
    per_t_target: np.ndarray = field(repr=False)
    iterations: int
    eps1: float
    eps2: float
    bisection_rule: str
    gamma: np.ndarray = field(repr=False)
    n: int

    @property
    def T(self) -> int:
        return len(self.alphas)

    def to_noise_schedule(self) -> NoiseSchedule:
        return NoiseSchedule.from_alphas(self.alphas)


def _solve_alphas_for_targets(
    hist: DegreeHistogram, targets: np.ndarray, cfg: SolverConfig
) -> tuple[np.ndarray, np.ndarray, float]:
    """Sequential per-timestep bisection; returns (alphas, h curve, loss).

    The expected active count at step t depends on earlier alphas only
    through alpha_bar_{t-1}, so each step is a one-dimensional strictly
    monotone root problem on [alpha_floor, 1).  Unattainable targets clamp
    alpha_t to the nearer bracket end and leave their residual in the loss.
    """
    alphas = np.empty(len(targets))
    abar_prev = 1.0
    ceil = 1.0 - ALPHA_CEIL_GAP
    for t0, g in enumerate(targets):
        lo, hi = cfg.alpha_floor, ceil
        if g >= _h_of_x(hist, abar_prev * (1.0 - lo)):
            alpha = lo
        elif g <= _h_of_x(hist, abar_prev * (1.0 - hi)):
            alpha = hi
        else:
            # h is decreasing in alpha: keep h(lo) > g > h(hi)
            while hi - lo > cfg.alpha_tol:
                mid = 0.5 * (lo + hi)
                if _h_of_x(hist, abar_prev * (1.0 - mid)) > g:
                    lo = mid
                else:
                    hi = mid
            alpha = 0.5 * (lo + hi)
        alphas[t0] = alpha
        abar_prev *= alpha
    h = expected_active_curve(hist, alphas)
    loss = float(np.sum((h - targets) ** 2))
    return alphas, h, loss


def solve_alphas_given_K(
    K: float, gamma, d0, cfg: SolverConfig = SolverConfig()
) -> tuple[np.ndarray, float]:
    """Solve the per-timestep alphas for a fixed scale K; returns (alphas, loss)."""
    gamma = np.asarray(gamma, dtype=np.float64)
    if np.any(gamma <= 0):
        raise ValueError("gamma entries must be positive")
    if K <= 0:
        raise ValueError("K must be positive")
    d0 = np.asarray(d0, dtype=np.int64)
    hist = DegreeHistogram.from_degrees(d0)
    if len(hist.degrees) == 0:
        raise SolverError("degree sequence has no positive entries; expected activity is identically zero")
    alphas, _, loss = _solve_alphas_for_targets(hist, K * len(d0) * gamma, cfg)
    return alphas, loss


def expected_active_curve(d0, alphas) -> np.ndarray:
    """Closed-form expected active nodes for every t = 1..T at once."""
    hist = d0 if isinstance(d0, DegreeHistogram) else DegreeHistogram.from_degrees(d0)
    alphas = np.asarray(alphas, dtype=np.float64)
    abar_prev = 1.0
    out = np.empty(len(alphas))
    for i, a in enumerate(alphas):
        out[i] = _h_of_x(hist, abar_prev * (1.0 - a))
        abar_prev *= a
    return out


def solve_schedule(gamma, d0, cfg: SolverConfig = SolverConfig()) -> SolveReport:
    """Binary search on the scale K, re-solving the alphas at each probe.

    The loss stays low only when K is small enough for the targets to be
    attainable, and the survival product reaches eps2 only when K is large
    enough, so both tolerances bracket K from opposite sides.  Under the
    default "text" rule a too-high loss shrinks the upper bracket and a
    too-high survival product raises the lower one; feasible probes also
    shrink the upper bracket so the search polishes toward the lowest-loss
    feasible K.  Returns a failure report (success=False) carrying the
    best-found iterate when the bracket is exhausted.
    """
    gamma = np.asarray(gamma, dtype=np.float64)
    if gamma.ndim != 1 or len(gamma) == 0:
        raise ValueError("gamma must be a nonempty one-dimensional sequence")
    if np.any(gamma <= 0):
        raise ValueError("gamma entries must be positive")
    d0 = np.asarray(d0, dtype=np.int64)
    n = len(d0)
    T = len(gamma)
    hist = DegreeHistogram.from_degrees(d0)
    if len(hist.degrees) == 0:
        raise SolverError("degree sequence has no positive entries; cannot match any activity target")
    eps1 = cfg.resolve_eps1(n, T)

    def probe(K: float):
        targets = K * n * gamma
        alphas, h, loss = _solve_alphas_for_targets(hist, targets, cfg)
        return alphas, loss, float(np.prod(alphas)), h, targets

    K1, K2 = cfg.k_min, cfg.k_max
    K = 0.5 * (K1 + K2)
    best = None  # (loss, K, alphas, abar_T, h, targets)
    last = None
    iterations = 0
    for _ in range(cfg.max_outer_iters):
        iterations += 1
        alphas, loss, abar_T, h, targets = probe(K)
        last = (loss, K, alphas, abar_T, h, targets)
        feasible = loss <= eps1 and abar_T <= cfg.eps2
        if feasible and (best is None or loss < best[0]):
            best = last
        if feasible and cfg.stop_at_first_feasible:
            break
        if cfg.bisection_rule == "text":
            if loss > eps1:
                K2 = K
            elif abar_T > cfg.eps2:
                K1 = K
            else:
                K2 = K  # feasible: polish toward the constraint boundary
        else:  # printed rule, for comparison
            if feasible:
                break
            if loss > eps1:
                K1 = K
            elif abar_T > cfg.eps2:
                K2 = K
        if K2 - K1 <= 1e-12 * max(1.0, K2):
            break
        K = 0.5 * (K1 + K2)

    chosen = best if best is not None else last
    loss, K, alphas, abar_T, h, targets = chosen
    return SolveReport(
        success=best is not None,
        K=K,
        alphas=alphas,
        loss=loss,
        alpha_bar_T=abar_T,
        per_t_expected_active=h,
        per_t_target=targets,
        iterations=iterations,
        eps1=eps1,
        eps2=cfg.eps2,
        bisection_rule=cfg.bisection_rule,
        gamma=gamma,
        n=n,
    )


def schedule_loss(alphas, K: float, gamma, d0) -> float:
    """Squared residual between the expected and targeted active-node curves."""
    gamma = np.asarray(gamma, dtype=np.float64)
    alphas = np.asarray(alphas, dtype=np.float64)
    if len(alphas) != len(gamma):
        raise ValueError("alphas and gamma must have equal length")
    d0 = np.asarray(d0, dtype=np.int64)
    h = expected_active_curve(d0, alphas)
    targets = K * len(d0) * gamma
    return float(np.sum((h - targets) ** 2))


def write_schedule_csv(path: str | Path, report: SolveReport) -> None:
    """One row per timestep plus a trailing comment block with the solve facts.

    Floats are printed with 17 significant digits so the file round-trips
    bit-exactly through read_schedule_csv.
    """
    sched = report.to_noise_schedule()
    alpha_bar = sched.alpha_bar
    lines = ["t,beta,alpha,alpha_bar,gamma,target_active,expected_active"]
    for i in range(report.T):
        lines.append(
            f"{i + 1},{sched.beta[i]:.17g},{sched.alpha[i]:.17g},{alpha_bar[i]:.17g},"
            f"{report.gamma[i]:.17g},{report.per_t_target[i]:.17g},"
            f"{report.per_t_expected_active[i]:.17g}"
        )
    lines += [
        f"# K = {report.K:.17g}",
        f"# eps1 = {report.eps1:.17g}",
        f"# eps2 = {report.eps2:.17g}",
        f"# loss = {report.loss:.17g}",
        f"# alpha_bar_T = {report.alpha_bar_T:.17g}",
        f"# iterations = {report.iterations}",
        f"# bisection_rule = {report.bisection_rule}",
        f"# n = {report.n}",
        f"# success = {str(report.success).lower()}",
        "# schedule-csv-version = 1",
    ]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")


def read_schedule_csv(path: str | Path) -> tuple[NoiseSchedule, dict]:
    """Load a schedule CSV; returns the schedule and the trailer metadata.

    The metadata dict carries the trailer keys (K, eps1, ...) plus the gamma
    and target/expected columns as arrays.
    """
    betas: list[float] = []
    gammas: list[float] = []
    targets: list[float] = []
    expected: list[float] = []
    meta: dict = {}
    for raw in Path(path).read_text(encoding="utf-8").splitlines():
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line.lstrip("#").strip()
            if "=" in body:
                key, _, val = body.partition("=")
                meta[key.strip()] = val.strip()
            continue
        if line.startswith("t,"):
            continue
        cols = line.split(",")
        betas.append(float(cols[1]))
        gammas.append(float(cols[4]))
        targets.append(float(cols[5]))
        expected.append(float(cols[6]))
    for key in ("K", "eps1", "eps2", "loss", "alpha_bar_T"):
        if key in meta:
            meta[key] = float(meta[key])
    if "iterations" in meta:
        meta["iterations"] = int(meta["iterations"])
    if "n" in meta:
        meta["n"] = int(meta["n"])
    if "success" in meta:
        meta["success"] = meta["success"] == "true"
    meta["gamma"] = np.array(gammas)
    meta["target_active"] = np.array(targets)
    meta["expected_active"] = np.array(expected)
    return NoiseSchedule.from_betas(np.array(betas)), meta
