"""Two-objective alternating optimization of quorum charts.

Maximizing the spanned volume directly converges slowly, so phases that
minimize -log(quality) alternate with phases that minimize ln(L), the log of
the summed off-diagonal Gram magnitudes.  The best chart ever seen is always
tracked by quality, whatever the current phase objective is.
"""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .hilbert import params_per_vector, quorum_from_chart
from .metrics import (
    MetricsReport,
    evaluate_quorum,
    gram_matrix,
    non_orthogonality_from_gram,
    quality_from_gram,
)
from .powell import PowellConfig, powell_minimize

__all__ = [
    "NEG_LOG_QUALITY",
    "LOG_L",
    "LOG_L_SENTINEL",
    "ObjectiveSpec",
    "ScheduleConfig",
    "TraceRecord",
    "AlternatingResult",
    "MultiRestartResult",
    "make_objective",
    "random_chart",
    "alternating_optimize",
    "multi_restart",
]

NEG_LOG_QUALITY = "neg_log_quality"
LOG_L = "log_l"
# ln L is -inf at exact orthogonality; line searches need a finite stand-in.
LOG_L_SENTINEL = -1e12


@dataclass(frozen=True)
class ObjectiveSpec:
    """Which scalar objective to minimize, over charts of which quorum size."""

    kind: str  # NEG_LOG_QUALITY or LOG_L
    n: int
    l: int

    def build(self):
        return make_objective(self.kind, self.n, self.l)


@dataclass(frozen=True)
class ScheduleConfig:
    """Phase layout of one optimization run plus restart bookkeeping.

    ``l_phase_length`` caps the ln(L) phases separately; those sweeps cost
    more per line search and mostly serve to unstick the volume phases, so a
    shorter budget there is often the better trade.  None means use
    ``phase_length`` for both.
    """

    phase_length: int = 200   # Powell sweeps per phase
    total_phases: int = 20
    restart_count: int = 4
    rng_seed: int = 0
    l_phase_length: int | None = None

    def __post_init__(self):
        if self.phase_length <= 0 or self.total_phases <= 0 or self.restart_count <= 0:
            raise ValueError("schedule counts must be positive")
        if self.l_phase_length is not None and self.l_phase_length <= 0:
            raise ValueError("l_phase_length must be positive when given")

    def sweeps_for(self, kind: str) -> int:
        if kind == LOG_L and self.l_phase_length is not None:
            return self.l_phase_length
        return self.phase_length


@dataclass(frozen=True)
class TraceRecord:
    phase: int
    iteration: int
    objective_kind: str
    objective: float
    quality: float
    ln_l: float
    evaluations: int
    elapsed_s: float


@dataclass
class AlternatingResult:
    chart: np.ndarray                 # best chart seen, ranked by quality
    report: MetricsReport             # metrics of that best chart
    final_chart: np.ndarray | None = None  # where the schedule actually ended
    trace: list = field(default_factory=list)
    nfev: int = 0
    seed: int | None = None


@dataclass
class MultiRestartResult:
    best: AlternatingResult
    runs: list = field(default_factory=list)      # (seed, quality) per restart
    results: list = field(default_factory=list)   # full AlternatingResult per restart


def make_objective(kind: str, n: int, l: int):
    """Scalar objective over flat charts; both kinds share the same
    chart-to-Gram evaluation path as the reporting code."""
    if kind == NEG_LOG_QUALITY:

        def objective(chart):
            g = gram_matrix(quorum_from_chart(chart, n, l))
            return -quality_from_gram(g).log_quality

    elif kind == LOG_L:

        def objective(chart):
            g = gram_matrix(quorum_from_chart(chart, n, l))
            l_sum, ln_l = non_orthogonality_from_gram(g)
            return ln_l if l_sum > 0.0 else LOG_L_SENTINEL

    else:
        raise ValueError(f"unknown objective kind {kind!r}")
    return objective


def random_chart(rng: np.random.Generator, n: int = 6, l: int = 3) -> np.ndarray:
    """Uniform random chart: thetas in [0, pi/2), phases in [0, 2 pi)."""
    m_free = n * n - 2
    half = params_per_vector(n, l) // 2
    thetas = rng.uniform(0.0, np.pi / 2.0, size=(m_free, l, half))
    phis = rng.uniform(0.0, 2.0 * np.pi, size=(m_free, l, half))
    return np.concatenate([thetas, phis], axis=-1).reshape(-1)


def _chart_metrics(chart, n, l):
    g = gram_matrix(quorum_from_chart(chart, n, l))
    qual = quality_from_gram(g)
    _, ln_l = non_orthogonality_from_gram(g)
    return qual, ln_l


def alternating_optimize(
    chart0,
    n: int = 6,
    l: int = 3,
    sched: ScheduleConfig = ScheduleConfig(),
    cfg: PowellConfig = PowellConfig(),
    objective_factory=make_objective,
) -> AlternatingResult:
    """Run the alternating phase schedule from one starting chart.

    Phases alternate beginning with the -log(quality) objective.  Returns the
    best-ever chart ranked by quality, with its full metrics report and a
    per-sweep trace.  ``objective_factory(kind, n, l)`` exists so tests can
    substitute a sanity objective.
    """
    x = np.asarray(chart0, dtype=float).reshape(-1).copy()
    t_start = time.perf_counter()
    trace: list[TraceRecord] = []
    nfev_total = 0

    best_qual, _ = _chart_metrics(x, n, l)
    best_chart = x.copy()
    best_log_quality = best_qual.log_quality

    for phase in range(1, sched.total_phases + 1):
        kind = NEG_LOG_QUALITY if phase % 2 == 1 else LOG_L
        objective = objective_factory(kind, n, l)
        phase_cfg = PowellConfig(
            max_iterations=sched.sweeps_for(kind),
            f_tol=cfg.f_tol,
            x_tol=cfg.x_tol,
            bracket_growth=cfg.bracket_growth,
            max_line_evals=cfg.max_line_evals,
        )

        def record(xk, fval, nfev, sweep):
            nonlocal best_log_quality, best_chart
            qual, ln_l = _chart_metrics(xk, n, l)
            if qual.log_quality > best_log_quality:
                best_log_quality = qual.log_quality
                best_chart = np.array(xk, dtype=float, copy=True)
            trace.append(
                TraceRecord(
                    phase=phase,
                    iteration=sweep,
                    objective_kind=kind,
                    objective=fval,
                    quality=qual.quality,
                    ln_l=ln_l,
                    evaluations=nfev_total + nfev,
                    elapsed_s=time.perf_counter() - t_start,
                )
            )

        result = powell_minimize(objective, x, phase_cfg, callback=record)
        nfev_total += result.nfev
        x = result.x

    report = evaluate_quorum(quorum_from_chart(best_chart, n, l))
    return AlternatingResult(
        chart=best_chart, report=report, final_chart=x, trace=trace, nfev=nfev_total
    )


def _run_restart(args) -> AlternatingResult:
    seed, n, l, sched, cfg = args
    rng = np.random.default_rng(seed)
    chart0 = random_chart(rng, n, l)
    result = alternating_optimize(chart0, n, l, sched, cfg)
    result.seed = seed
    return result


def multi_restart(
    sched: ScheduleConfig = ScheduleConfig(),
    cfg: PowellConfig = PowellConfig(),
    seeds=None,
    n: int = 6,
    l: int = 3,
    workers: int = 1,
) -> MultiRestartResult:
    """Independent alternating runs from random charts; best quality wins.

    ``seeds`` defaults to sched.rng_seed .. sched.rng_seed + restart_count - 1.
    Restarts are independent, so with workers > 1 they run in separate
    processes; results are reduced in seed order either way, which makes the
    outcome reproducible.
    """
    if seeds is None:
        seeds = [sched.rng_seed + k for k in range(sched.restart_count)]
    seeds = list(seeds)
    if not seeds:
        raise ValueError("need at least one seed")
    tasks = [(seed, n, l, sched, cfg) for seed in seeds]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_restart, tasks))
    else:
        results = [_run_restart(t) for t in tasks]
    best = results[0]
    for r in results[1:]:
        if r.report.log_quality > best.report.log_quality:
            best = r
    runs = [(r.seed, r.report.quality) for r in results]
    return MultiRestartResult(best=best, runs=runs, results=results)
