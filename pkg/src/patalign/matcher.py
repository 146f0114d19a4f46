"""Pairwise k-best partial matching between a driving sequence and a target.

Matching works over sparse hits (equal-symbol position pairs) rather than a
dense table, so a pair of long sequences with few shared symbols costs
little and gaps of any size are bridged for free.  Chains of hits must be
strictly increasing on both sides; each chain is scored by the bit cost of
the symbols it matches minus a log penalty for the gaps it spans, and the
k best chains are kept.  Search thoroughness is controlled by a beam width
over partial chains; with a beam at least as wide as the hit count the top
chain is exactly optimal.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .alignment import Alignment, LegalityError, extend_alignment
from .core import Pattern
from .scoring import CostModel


@dataclass(frozen=True)
class MatchPoint:
    """An equal-symbol pairing of a driving item with a target position."""

    d_pos: int
    t_pos: int
    symbol: int


@dataclass(frozen=True)
class MatchParams:
    """Thoroughness knobs for the pairwise matcher."""

    k_best: int = 4
    beam: int = 50
    max_hits_per_symbol: int = 64
    min_chain_length: int = 1

    def __post_init__(self) -> None:
        for name in ("k_best", "beam", "max_hits_per_symbol", "min_chain_length"):
            if getattr(self, name) < 1:
                raise ValueError("%s must be >= 1" % name)


@dataclass(frozen=True)
class Chain:
    """An order-consistent set of match points with its bit gain."""

    points: tuple[MatchPoint, ...]
    score: float


def target_index(target: Pattern) -> dict[int, list[int]]:
    """Positions of each symbol in the target, for repeated hit lookups."""
    index: dict[int, list[int]] = {}
    for pos, sid in enumerate(target.symbols):
        index.setdefault(sid, []).append(pos)
    return index


def _prefix_compatible(a: Pattern, b: Pattern) -> bool:
    # one id prefix must properly refine the other (same class, extra
    # discriminators); equal prefixes mean rival entries of one table or
    # repeated appearances, whose handles never legitimately unify
    pa = a.symbols[: a.id_prefix_len]
    pb = b.symbols[: b.id_prefix_len]
    if len(pa) == len(pb):
        return False
    if len(pa) > len(pb):
        pa, pb = pb, pa
    return pb[: len(pa)] == pa


def find_hits(
    driving: Alignment,
    target: Pattern,
    params: MatchParams,
    index: dict[int, list[int]] | None = None,
) -> list[MatchPoint]:
    """All legal equal-symbol pairs, capped per distinct symbol.

    Pairs whose origin sets intersect (a symbol occurrence offered against
    itself, possible when the target pattern already appears in the driving
    alignment) are excluded.  Identification symbols of two stored patterns
    may pair only when one pattern's id prefix extends the other's: a
    pattern's handle matches the slot of a pattern that references it, or
    the handle of a refinement of its own class, but never the handle of an
    unrelated pattern (two handles side by side encode nothing).
    """
    if index is None:
        index = target_index(target)
    rows = driving.rows
    per_symbol: dict[int, list[MatchPoint]] = {}
    for d_idx, item in enumerate(driving.unified):
        positions = index.get(item.symbol)
        if not positions:
            continue
        id_cells = [
            rows[r].pattern
            for r, pos in item.cells
            if r != 0 and rows[r].pattern.is_id_position(pos)
        ]
        bucket = per_symbol.setdefault(item.symbol, [])
        for t_pos in positions:
            if (target.pattern_id, t_pos) in item.origins:
                continue
            if id_cells and target.is_id_position(t_pos):
                if not all(_prefix_compatible(p, target) for p in id_cells):
                    continue
            bucket.append(MatchPoint(d_idx, t_pos, item.symbol))
    hits: list[MatchPoint] = []
    for sid in per_symbol:
        bucket = per_symbol[sid]
        if len(bucket) > params.max_hits_per_symbol:
            bucket = bucket[: params.max_hits_per_symbol]
        hits.extend(bucket)
    hits.sort(key=lambda h: (h.d_pos, h.t_pos))
    return hits


def chain_gain(points, model: CostModel) -> float:
    """Matched-symbol cost minus the log gap penalty between points."""
    gain = sum(model.cost(p.symbol) for p in points)
    for a, b in zip(points, points[1:]):
        d_gap = b.d_pos - a.d_pos - 1
        t_gap = b.t_pos - a.t_pos - 1
        if d_gap > 0:
            gain -= model.gap_beta * math.log2(1 + d_gap)
        if t_gap > 0:
            gain -= model.gap_beta * math.log2(1 + t_gap)
    return gain


class _Entry:
    """A partial chain ending at one hit, with score and deterministic rank."""

    __slots__ = ("hit", "score", "length", "gap_span", "prev", "key", "protected")

    def __init__(self, hit: MatchPoint, score: float, length: int, gap_span: int, prev):
        self.hit = hit
        self.score = score
        self.length = length
        self.gap_span = gap_span
        self.prev = prev
        trail = prev.key[3] if prev is not None else ()
        # best first: high score, then more points, then tighter span,
        # then lexicographically smallest point list
        self.key = (-score, -length, gap_span, trail + ((hit.d_pos, hit.t_pos),))
        self.protected = False

    def points(self) -> tuple[MatchPoint, ...]:
        out = []
        entry = self
        while entry is not None:
            out.append(entry.hit)
            entry = entry.prev
        return tuple(reversed(out))


def k_best_chains(
    hits: list[MatchPoint], params: MatchParams, model: CostModel
) -> list[Chain]:
    """Up to ``k_best`` order-consistent chains, best gain first.

    Hits are swept in (d, t) order; every partial chain lives in a frontier
    capped at ``beam`` entries.  A wider beam or larger k never lowers the
    best returned score, and a beam >= len(hits) makes the top chain exactly
    the maximum-gain chain.
    """
    if not hits:
        return []
    # Chain scores decompose over (predecessor, successor) transitions, so
    # the best chain ending at a hit extends some predecessor's best chain.
    # Each hit's best entry is therefore protected from beam eviction: with
    # beam >= len(hits) nothing is ever dropped and the top chain is exact.
    # The remaining beam slots hold per-hit alternates, which is what lets
    # second-best chains (e.g. the same points minus a noisy outlier) reach
    # the k-best list.
    frontier: list[_Entry] = []
    all_entries: list[_Entry] = []
    for hit in hits:
        cost = model.cost(hit.symbol)
        candidates: list[_Entry] = [_Entry(hit, cost, 1, 0, None)]
        for entry in frontier:
            if entry.hit.d_pos < hit.d_pos and entry.hit.t_pos < hit.t_pos:
                d_gap = hit.d_pos - entry.hit.d_pos - 1
                t_gap = hit.t_pos - entry.hit.t_pos - 1
                penalty = 0.0
                if d_gap > 0:
                    penalty += model.gap_beta * math.log2(1 + d_gap)
                if t_gap > 0:
                    penalty += model.gap_beta * math.log2(1 + t_gap)
                candidates.append(
                    _Entry(
                        hit,
                        entry.score + cost - penalty,
                        entry.length + 1,
                        entry.gap_span + d_gap + t_gap,
                        entry,
                    )
                )
        candidates.sort(key=lambda e: e.key)
        kept = candidates[: params.k_best]
        kept[0].protected = True
        all_entries.extend(kept)
        frontier.extend(kept)
        if len(frontier) > params.beam:
            frontier.sort(key=lambda e: (not e.protected,) + e.key)
            del frontier[max(params.beam, sum(e.protected for e in frontier)):]
    all_entries.sort(key=lambda e: e.key)
    return [Chain(e.points(), e.score) for e in all_entries[: params.k_best]]


def _filter_slot_fills(driving: Alignment, target: Pattern, points):
    """Drop contents-to-contents pairings not backed by a handle match.

    Matching the substance of one handled pattern directly against the
    substance of another is slot-filling; it is meaningful only when the
    chain (or, in direction, the pairing itself) also relates the two
    patterns through an identification symbol.  Patterns without any id
    region are exempt: handle-less corpora match freely.
    """
    if not target.id_prefix_len and not target.id_suffix_len:
        return points
    rows = driving.rows
    related = set()
    for p in points:
        item = driving.unified[p.d_pos]
        target_is_id = target.is_id_position(p.t_pos)
        for r, pos in item.cells:
            if r == 0:
                continue
            if target_is_id or rows[r].pattern.is_id_position(pos):
                related.add(rows[r].pattern.pattern_id)
    kept = []
    for p in points:
        item = driving.unified[p.d_pos]
        ok = True
        if not target.is_id_position(p.t_pos):
            for r, pos in item.cells:
                if r == 0:
                    continue
                pattern = rows[r].pattern
                if pattern.is_id_position(pos):
                    continue
                if not pattern.id_prefix_len and not pattern.id_suffix_len:
                    continue
                if pattern.pattern_id not in related:
                    ok = False
                    break
        if ok:
            kept.append(p)
    return tuple(kept)


def match_pair(
    driving: Alignment,
    target: Pattern,
    params: MatchParams,
    model: CostModel,
    index: dict[int, list[int]] | None = None,
) -> list[Alignment]:
    """Extended alignments for the k best chains against one target."""
    hits = find_hits(driving, target, params, index)
    if not hits:
        return []
    out = []
    seen: set[tuple] = set()
    for chain in k_best_chains(hits, params, model):
        points = _filter_slot_fills(driving, target, chain.points)
        if len(points) < params.min_chain_length:
            continue
        pairs = [(p.d_pos, p.t_pos) for p in points]
        key = tuple(pairs)
        if key in seen:
            continue
        seen.add(key)
        try:
            out.append(extend_alignment(driving, target, pairs))
        except LegalityError:
            continue
    return out
