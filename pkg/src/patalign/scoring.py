"""Bit-cost model and the compression score used to rank alignments.

Symbol costs are add-one-smoothed Shannon information of frequency-weighted
occurrence counts, floored at ``min_cost`` bits.  An alignment is scored as

    score = raw_cost(new) - encoded_cost(alignment) - gap_penalty(alignment)

where the encoded cost charges the derived code plus the residue (unmatched
new symbols, transmitted raw), and the gap penalty charges log2(1 + run) for
every maximal unmatched run lying strictly between a row's first and last
match column.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .alignment import Alignment, derive_code, residue
from .core import Corpus, Pattern


@dataclass(frozen=True)
class CostModel:
    """Per-symbol bit costs plus the scoring coefficients."""

    costs: tuple[float, ...]
    min_cost: float = 1.0
    gap_beta: float = 1.0
    smoothing: float = 1.0

    def cost(self, sid: int) -> float:
        return self.costs[sid]

    def sequence_cost(self, symbols) -> float:
        return sum(self.costs[s] for s in symbols)


def build_cost_model(
    corpus: Corpus,
    min_cost: float = 1.0,
    gap_beta: float = 1.0,
    smoothing: float = 1.0,
) -> CostModel:
    """Derive symbol costs from the corpus statistics.

    cost(s) = max(min_cost, -log2((count(s) + k) / (total + k * |symbols|)))
    with k the smoothing constant.  Symbols interned but absent from stored
    patterns (e.g. novel symbols of the incoming pattern) get the unseen
    cost; an empty corpus prices every symbol at -log2(1 / |symbols|).
    """
    n = len(corpus.symbols)
    denom = corpus.total_weighted_occurrences + smoothing * n
    costs = []
    for sid in range(n):
        p = (corpus.symbol_weighted_count(sid) + smoothing) / denom
        costs.append(max(min_cost, -math.log2(p)))
    return CostModel(tuple(costs), min_cost, gap_beta, smoothing)


@dataclass(frozen=True)
class ScoreBreakdown:
    """The raw/encoded/gap decomposition of one alignment's score."""

    raw_cost: float
    encoded_cost: float
    gap_penalty: float
    score: float
    matched_new_count: int


def raw_cost(model: CostModel, new: Pattern) -> float:
    return model.sequence_cost(new.symbols)


def encoded_cost(model: CostModel, a: Alignment) -> float:
    return model.sequence_cost(derive_code(a)) + model.sequence_cost(residue(a))


def gap_penalty(model: CostModel, a: Alignment) -> float:
    """Charge every interior unmatched run, per row, log-concavely.

    For a fixed total gap length the formula strictly prefers one large gap
    over several small ones, and for a fixed number of gaps it prefers them
    short.
    """
    matched: dict[int, list[int]] = {}
    for col in a.columns:
        for r, pos in col.cells:
            matched.setdefault(r, []).append(pos)
    total = 0.0
    for r, positions in matched.items():
        positions.sort()
        for lo, hi in zip(positions, positions[1:]):
            run = hi - lo - 1
            if run > 0:
                total += math.log2(1 + run)
    return model.gap_beta * total


def compression_score(model: CostModel, a: Alignment) -> ScoreBreakdown:
    n_raw = raw_cost(model, a.rows[0].pattern)
    n_enc = encoded_cost(model, a)
    penalty = gap_penalty(model, a)
    return ScoreBreakdown(
        raw_cost=n_raw,
        encoded_cost=n_enc,
        gap_penalty=penalty,
        score=n_raw - n_enc - penalty,
        matched_new_count=len(a.new_coverage),
    )


def grammar_score(
    model: CostModel,
    grammar: Corpus,
    data: list[Pattern],
    engine_params=None,
) -> tuple[float, float, float]:
    """Minimum-length-encoding total for a candidate grammar over data.

    G charges every stored grammar symbol at the model's cost; E charges each
    datum with the encoded cost of its best alignment against the grammar
    (its full raw cost if no alignment forms).  Returns (G, E, G + E).

    The grammar corpus and the data patterns must share one symbol table,
    and the model must cover every id in it.
    """
    from .engine import EngineParams, run  # deferred: engine imports scoring

    g_bits = sum(
        model.sequence_cost(p.symbols) for p in grammar.patterns.values()
    )
    params = engine_params or EngineParams()
    e_bits = 0.0
    for datum in data:
        result = run(grammar, datum, params, model=model)
        if result.entries:
            e_bits += result.entries[0].breakdown.encoded_cost
        else:
            e_bits += model.sequence_cost(datum.symbols)
    return g_bits, e_bits, g_bits + e_bits
