"""The outer search loop: build, score, accumulate, and rank alignments.

Each iteration matches every driving alignment (always containing the new
pattern) against every stored pattern, unifies and scores the results,
deduplicates them against everything formed so far, and promotes a few of
the best new alignments to drive the next iteration.  The loop stops when
an iteration forms nothing new or a resource cap is reached.  Results are
deterministic for fixed inputs and parameters, regardless of worker count.
"""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .alignment import (
    Alignment,
    derive_code,
    extract_inferences,
    residue,
)
from .core import Corpus, Pattern
from .matcher import MatchParams, match_pair, target_index
from .scoring import CostModel, ScoreBreakdown, build_cost_model, compression_score


@dataclass(frozen=True)
class EngineParams:
    """Loop-level knobs on top of the pairwise match parameters."""

    match: MatchParams = field(default_factory=MatchParams)
    driving_keep: int = 3
    max_iterations: int = 20
    max_alignments_total: int = 5000
    exact_mode: bool = False
    keep_best: int = 10
    workers: int = 1

    def __post_init__(self) -> None:
        for name in ("driving_keep", "max_iterations", "max_alignments_total",
                     "keep_best", "workers"):
            if getattr(self, name) < 1:
                raise ValueError("%s must be >= 1" % name)


@dataclass
class Entry:
    """One ranked alignment with its scores, code, and inferences."""

    alignment: Alignment
    breakdown: ScoreBreakdown
    code: list[int]
    inferences: list[int]
    residue: list[int]
    p: float = 0.0
    relative: float | None = None
    group_rank: int | None = None


@dataclass
class RunStats:
    iterations: int = 0
    formed: int = 0
    wall_time: float = 0.0
    truncated: bool = False


@dataclass
class RunResult:
    """Ranked alignments plus coverage-grouped probabilities for one run."""

    new: Pattern
    entries: list[Entry]
    report: object  # ProbabilityReport; typed loosely to avoid an import cycle
    stats: RunStats
    status: str = "ok"

    def best(self) -> Entry | None:
        return self.entries[0] if self.entries else None


@dataclass
class EngineState:
    """Mutable loop state: the driving frontier and everything formed.

    Stored patterns are always targets; unified alignments formed so far
    keep target status too, but a driving alignment can never legally merge
    with one (both contain the new row, and shared origins may not match),
    so matching visits only the stored patterns.
    """

    driving: list[Alignment]
    accumulated: dict[tuple, tuple[Alignment, ScoreBreakdown]]
    iteration: int = 0

    def target_patterns(self, corpus: Corpus) -> list[Pattern]:
        return list(corpus.patterns.values())


def compress_iteration(
    state: EngineState,
    corpus: Corpus,
    model: CostModel,
    params: EngineParams,
    indices: dict[int, dict[int, list[int]]],
    executor: ThreadPoolExecutor | None = None,
) -> list[tuple[Alignment, ScoreBreakdown]]:
    """Match every (driving, target) pair and absorb the new alignments.

    Candidate results are merged in task order, so the outcome does not
    depend on worker scheduling.  Returns the newly accumulated alignments;
    an empty return means the loop has converged.
    """
    state.iteration += 1
    targets = state.target_patterns(corpus)
    tasks = [(d, t) for d in range(len(state.driving)) for t in range(len(targets))]

    def work(task: tuple[int, int]) -> list[Alignment]:
        d, t = task
        pattern = targets[t]
        return match_pair(
            state.driving[d], pattern, params.match, model, indices[pattern.pattern_id]
        )

    if executor is not None:
        batches = list(executor.map(work, tasks))
    else:
        batches = [work(task) for task in tasks]

    fresh: list[tuple[Alignment, ScoreBreakdown]] = []
    seen_now: set[tuple] = set()
    for batch in batches:
        for alignment in batch:
            key = alignment.canonical_key
            if key in state.accumulated or key in seen_now:
                continue
            if len(state.accumulated) + len(seen_now) >= params.max_alignments_total:
                return fresh
            seen_now.add(key)
            breakdown = compression_score(model, alignment)
            state.accumulated[key] = (alignment, breakdown)
            fresh.append((alignment, breakdown))
    return fresh


def run(
    corpus: Corpus,
    new: Pattern,
    params: EngineParams | None = None,
    model: CostModel | None = None,
) -> RunResult:
    """Compress ``new`` against the corpus and rank every alignment formed."""
    from .probability import absolute_probability, build_report

    params = params or EngineParams()
    if model is None:
        model = build_cost_model(corpus)
    start = time.perf_counter()

    state = EngineState(driving=[Alignment.singleton(new)], accumulated={})
    indices = {p.pattern_id: target_index(p) for p in corpus.patterns.values()}
    truncated = False

    # In exact mode the goal is full coverage of the new pattern, and partial
    # bindings score poorly until the tying patterns arrive, so the frontier
    # chases coverage first; otherwise plain score order drives.  Results are
    # always ranked by plain score.
    if params.exact_mode:
        promote_key = lambda pair: (
            -len(pair[0].new_coverage),
            -pair[1].score,
            len(pair[0].rows),
            pair[0].canonical_key,
        )
    else:
        promote_key = lambda pair: (
            -pair[1].score, len(pair[0].rows), pair[0].canonical_key
        )

    executor = ThreadPoolExecutor(max_workers=params.workers) if params.workers > 1 else None
    try:
        while state.iteration < params.max_iterations:
            fresh = compress_iteration(state, corpus, model, params, indices, executor)
            if not fresh:
                break
            if len(state.accumulated) >= params.max_alignments_total:
                truncated = True
                break
            fresh.sort(key=promote_key)
            state.driving = [a for a, _ in fresh[: params.driving_keep]]
    finally:
        if executor is not None:
            executor.shutdown()

    scored = sorted(
        state.accumulated.values(),
        key=lambda pair: (-pair[1].score, len(pair[0].rows), pair[0].canonical_key),
    )
    if not scored and not corpus.patterns:
        singleton = Alignment.singleton(new)
        scored = [(singleton, compression_score(model, singleton))]

    entries = []
    for alignment, breakdown in scored:
        entries.append(
            Entry(
                alignment=alignment,
                breakdown=breakdown,
                code=derive_code(alignment),
                inferences=extract_inferences(alignment),
                residue=residue(alignment),
                p=absolute_probability(model, alignment, breakdown),
            )
        )
    report = build_report(entries)

    stats = RunStats(
        iterations=state.iteration,
        formed=len(state.accumulated),
        wall_time=time.perf_counter() - start,
        truncated=truncated,
    )
    status = "truncated" if truncated else ("empty" if not entries else "ok")
    result = RunResult(new=new, entries=entries, report=report, stats=stats, status=status)
    if params.exact_mode:
        result = filter_exact(result)
    return result


def filter_exact(result: RunResult, new_len: int | None = None) -> RunResult:
    """Keep only alignments that cover every symbol of the new pattern.

    Models exact calculation and reasoning; an empty survivor set signals
    that the new pattern is not derivable from the stored ones.
    """
    from .probability import build_report

    if new_len is None:
        new_len = len(result.new)
    survivors = [
        e for e in result.entries if len(e.alignment.new_coverage) == new_len
    ]
    status = result.status if survivors else "no_full_coverage"
    return RunResult(
        new=result.new,
        entries=survivors,
        report=build_report(survivors),
        stats=result.stats,
        status=status,
    )
