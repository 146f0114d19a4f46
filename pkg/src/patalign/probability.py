"""Absolute and relative probabilities of alignments and their inferences.

An alignment's absolute probability is 2**(-L) with L its encoded cost in
bits, so a shorter code means a likelier alignment.  Alignments matching the
same set of new symbols form a group; within a group the relative
probabilities normalise to one, and the probability of an inferred symbol is
the relative mass of the group members that infer it.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .alignment import Alignment
from .scoring import CostModel, ScoreBreakdown, encoded_cost


def absolute_probability(
    model: CostModel, a: Alignment, breakdown: ScoreBreakdown | None = None
) -> float:
    """p = 2**(-L), L the encoded cost (code plus residue) in bits."""
    bits = breakdown.encoded_cost if breakdown is not None else encoded_cost(model, a)
    return 2.0 ** (-bits)


def relative_probabilities(ps: list[float]) -> list[float]:
    """Normalise a group's absolute probabilities; order-preserving."""
    total = sum(ps)
    if total <= 0.0:
        return [0.0 for _ in ps]
    return [p / total for p in ps]


@dataclass
class ProbabilityGroup:
    """Alignments sharing one matched-new-position set."""

    coverage: frozenset[int]
    members: list[int]            # entry indices, ranked order
    relatives: list[float]
    pruned: list[int] = field(default_factory=list)


@dataclass
class ProbabilityReport:
    groups: list[ProbabilityGroup]
    maximal: int | None           # index of the widest-coverage group

    def maximal_group(self) -> ProbabilityGroup | None:
        return self.groups[self.maximal] if self.maximal is not None else None


def _row_set(a: Alignment) -> frozenset[int]:
    return frozenset(row.pattern.pattern_id for row in a.rows[1:])


def _dominated(entries, indices: list[int]) -> set[int]:
    """Members subsumed by a better-ranked group member.

    Walking the group best-first, a member is dropped when the set of
    patterns in its rows contains or is contained in a surviving member's:
    it restates that survivor with rows piled on, with detail stripped
    (e.g. a colour slot left unfilled when a filled variant scores higher),
    or as a worse gluing of the same material.  Mutually incomparable
    readings, such as two alternative classes for one object, all survive
    and share the mass.
    """
    out: set[int] = set()
    kept: list[int] = []
    rows = {i: _row_set(entries[i].alignment) for i in indices}
    for i in indices:  # ranked order: best score first
        a = rows[i]
        for j in kept:
            b = rows[j]
            if a <= b or b <= a:
                out.add(i)
                break
        else:
            kept.append(i)
    return out


def build_report(entries) -> ProbabilityReport:
    """Group entries by coverage, prune dominated members, normalise.

    Entries with empty coverage match nothing and join no group.  Each
    surviving member's ``relative`` and ``group_rank`` fields are filled in.
    """
    by_coverage: dict[frozenset[int], list[int]] = {}
    for i, entry in enumerate(entries):
        coverage = entry.alignment.new_coverage
        if coverage:
            by_coverage.setdefault(coverage, []).append(i)

    groups: list[ProbabilityGroup] = []
    order = sorted(by_coverage, key=lambda c: (-len(c), tuple(sorted(c))))
    for coverage in order:
        indices = by_coverage[coverage]
        pruned = _dominated(entries, indices)
        members = [i for i in indices if i not in pruned]
        relatives = relative_probabilities([entries[i].p for i in members])
        for rank, (i, r) in enumerate(zip(members, relatives)):
            entries[i].relative = r
            entries[i].group_rank = rank
        groups.append(
            ProbabilityGroup(
                coverage=coverage,
                members=members,
                relatives=relatives,
                pruned=sorted(pruned),
            )
        )
    return ProbabilityReport(groups=groups, maximal=0 if groups else None)


def symbol_probability(report: ProbabilityReport, entries, symbol: int) -> float:
    """Relative mass of maximal-group alignments inferring ``symbol``."""
    group = report.maximal_group()
    if group is None:
        return 0.0
    total = 0.0
    for i, r in zip(group.members, group.relatives):
        if symbol in entries[i].inferences:
            total += r
    return total


def inferred_symbol_probabilities(report: ProbabilityReport, entries) -> dict[int, float]:
    """Probability per symbol inferred by any maximal-group member."""
    group = report.maximal_group()
    if group is None:
        return {}
    out: dict[int, float] = {}
    for i, r in zip(group.members, group.relatives):
        for sid in set(entries[i].inferences):
            out[sid] = out.get(sid, 0.0) + r
    return out
