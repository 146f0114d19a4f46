"""Structure derivation: factor a two-row alignment into grammar fragments.

The matched runs of the alignment become shared segment patterns, the
unmatched stretches between them become disjunct patterns grouped under one
slot class, and an abstract pattern strings the segment and slot handles
together.  Generated handles (``%k`` class, ``#k`` terminator, bare ``k``
discriminator) are drawn from one counter and never collide with tokens
already interned.  Candidate grammars are compared by the total bits needed
for the grammar itself plus the data encoded through it.
"""

from __future__ import annotations

from dataclasses import dataclass

from .alignment import Alignment, extend_alignment
from .core import Corpus
from .matcher import MatchParams, find_hits, k_best_chains
from .scoring import build_cost_model, grammar_score


class NothingSharedError(ValueError):
    """The two rows have no matched column: nothing to factor out."""


@dataclass(frozen=True)
class PatternSpec:
    """A pattern as tokens plus segmentation, before interning."""

    tokens: tuple[str, ...]
    id_prefix_len: int = 0
    id_suffix_len: int = 0
    frequency: int = 1

    def contents(self) -> tuple[str, ...]:
        return self.tokens[self.id_prefix_len : len(self.tokens) - self.id_suffix_len]


@dataclass(frozen=True)
class GrammarCandidate:
    """A named set of pattern specs that can be scored as a grammar."""

    name: str
    patterns: tuple[PatternSpec, ...]

    def to_corpus(self) -> Corpus:
        corpus = Corpus()
        for spec in self.patterns:
            corpus.add_pattern(
                list(spec.tokens), spec.id_prefix_len, spec.id_suffix_len, spec.frequency
            )
        return corpus


@dataclass
class Slot:
    """One disjunction point: a class handle and one option per source row."""

    class_token: str
    end_token: str
    discriminators: tuple[str, str]
    options: tuple[tuple[str, ...], tuple[str, ...]]


@dataclass
class DerivedGrammar:
    """Factored form of a two-row alignment, with per-row selection codes."""

    abstract: PatternSpec
    segments: list[PatternSpec]
    slots: list[Slot]
    layout: list[str]
    codes: tuple[tuple[str, ...], tuple[str, ...]]
    sources: tuple[tuple[str, ...], tuple[str, ...]]

    def all_patterns(self) -> list[PatternSpec]:
        out = list(self.segments)
        for slot in self.slots:
            for disc, option in zip(slot.discriminators, slot.options):
                out.append(
                    PatternSpec(
                        tokens=(slot.class_token, disc) + option + (slot.end_token,),
                        id_prefix_len=2,
                        id_suffix_len=1,
                    )
                )
        out.append(self.abstract)
        return out

    def candidate(self, name: str = "factored") -> GrammarCandidate:
        return GrammarCandidate(name=name, patterns=tuple(self.all_patterns()))

    def expand(self, side: int) -> list[str]:
        """Regenerate one source row by walking segments and slot choices."""
        out: list[str] = []
        seg_iter = iter(self.segments)
        slot_iter = iter(self.slots)
        for kind in self.layout:
            if kind == "segment":
                out.extend(next(seg_iter).contents())
            else:
                out.extend(next(slot_iter).options[side])
        return out


class SymbolGen:
    """Fresh ``%k`` / ``#k`` / ``k`` handles that avoid existing tokens."""

    def __init__(self, corpus: Corpus):
        self._corpus = corpus
        self._k = 0

    def _fresh(self, spellings) -> int:
        while True:
            self._k += 1
            if all(tok not in self._corpus.symbols for tok in spellings(self._k)):
                return self._k

    def next_class(self) -> tuple[str, str]:
        k = self._fresh(lambda k: ("%%%d" % k, "#%d" % k))
        return "%%%d" % k, "#%d" % k

    def next_discriminator(self) -> str:
        k = self._fresh(lambda k: (str(k),))
        return str(k)


def align_pair(tokens_a, tokens_b, match_params: MatchParams | None = None):
    """Best two-row alignment of two token sequences (exhaustive beam).

    Returns (alignment, corpus); row 0 is ``tokens_a``.
    """
    corpus = Corpus()
    corpus.add_pattern(list(tokens_b))
    pattern_b = corpus.patterns[0]
    new = corpus.make_new_pattern(list(tokens_a))
    model = build_cost_model(corpus)
    params = match_params or MatchParams(beam=10_000, k_best=1)
    driving = Alignment.singleton(new)
    hits = find_hits(driving, pattern_b, params)
    chains = k_best_chains(hits, params, model)
    pairs = [(p.d_pos, p.t_pos) for p in chains[0].points] if chains else []
    return extend_alignment(driving, pattern_b, pairs), corpus


def derive_patterns(a: Alignment, corpus: Corpus, gen: SymbolGen | None = None) -> DerivedGrammar:
    """Factor a two-row alignment into segments, slots, and an abstract.

    Maximal runs of adjacent columns (adjacent in both rows) become shared
    segments with frequency 2; the stretches between runs become slots whose
    options are the two rows' unmatched material (possibly empty on one
    side).  Expanding the abstract through either row's choices reproduces
    that row exactly.
    """
    if len(a.rows) != 2:
        raise ValueError("derivation needs exactly two rows, got %d" % len(a.rows))
    if not a.columns:
        raise NothingSharedError("no matched column between the two rows")
    gen = gen or SymbolGen(corpus)

    def span_tokens(row: int, lo: int, hi: int) -> tuple[str, ...]:
        symbols = a.rows[row].pattern.symbols[lo:hi]
        return tuple(corpus.symbols.token(s) for s in symbols)

    # split columns into runs of cells adjacent in both rows
    runs: list[list[tuple[int, int]]] = [[]]
    prev = None
    for col in a.columns:
        cell = (col.cells[0][1], col.cells[1][1])
        if prev is not None and (cell[0] != prev[0] + 1 or cell[1] != prev[1] + 1):
            runs.append([])
        runs[-1].append(cell)
        prev = cell
    run_bounds = [(r[0], r[-1]) for r in runs]

    segments: list[PatternSpec] = []
    slots: list[Slot] = []
    layout: list[str] = []

    def add_slot(a_lo: int, a_hi: int, b_lo: int, b_hi: int) -> None:
        opt_a = span_tokens(0, a_lo, a_hi)
        opt_b = span_tokens(1, b_lo, b_hi)
        if not opt_a and not opt_b:
            return
        class_tok, end_tok = gen.next_class()
        discs = (gen.next_discriminator(), gen.next_discriminator())
        slots.append(Slot(class_tok, end_tok, discs, (opt_a, opt_b)))
        layout.append("slot")

    cursor = (0, 0)
    for first, last in run_bounds:
        add_slot(cursor[0], first[0], cursor[1], first[1])
        class_tok, end_tok = gen.next_class()
        segments.append(
            PatternSpec(
                tokens=(class_tok,) + span_tokens(0, first[0], last[0] + 1) + (end_tok,),
                id_prefix_len=1,
                id_suffix_len=1,
                frequency=2,
            )
        )
        layout.append("segment")
        cursor = (last[0] + 1, last[1] + 1)
    add_slot(cursor[0], len(a.rows[0]), cursor[1], len(a.rows[1]))

    abstract_tokens: list[str] = []
    seg_iter = iter(segments)
    slot_iter = iter(slots)
    for kind in layout:
        if kind == "segment":
            spec = next(seg_iter)
            abstract_tokens += [spec.tokens[0], spec.tokens[-1]]
        else:
            slot = next(slot_iter)
            abstract_tokens += [slot.class_token, slot.end_token]

    derived = DerivedGrammar(
        abstract=PatternSpec(tokens=tuple(abstract_tokens)),
        segments=segments,
        slots=slots,
        layout=layout,
        codes=(
            tuple(s.discriminators[0] for s in slots),
            tuple(s.discriminators[1] for s in slots),
        ),
        sources=(
            span_tokens(0, 0, len(a.rows[0])),
            span_tokens(1, 0, len(a.rows[1])),
        ),
    )
    for side in (0, 1):
        assert tuple(derived.expand(side)) == derived.sources[side]
    return derived


def rote_candidate(sequences, gen: SymbolGen | None = None,
                   name: str = "rote") -> GrammarCandidate:
    """The unfactored grammar: each sequence stored as one pattern.

    With a symbol generator, each pattern is wrapped in generated handles
    (shared class, per-pattern discriminator, terminator), the way this
    system stores anything it may later need to reference and encode
    against; without one the sequences are stored raw, which prices the
    grammar but leaves the data encoding degenerate (every datum encodes
    for free).
    """
    if gen is None:
        return GrammarCandidate(
            name=name,
            patterns=tuple(PatternSpec(tokens=tuple(seq)) for seq in sequences),
        )
    class_tok, end_tok = gen.next_class()
    patterns = []
    for seq in sequences:
        disc = gen.next_discriminator()
        patterns.append(
            PatternSpec(
                tokens=(class_tok, disc) + tuple(seq) + (end_tok,),
                id_prefix_len=2,
                id_suffix_len=1,
            )
        )
    return GrammarCandidate(name=name, patterns=tuple(patterns))


def handle_gen(sequences) -> SymbolGen:
    """A fresh-symbol generator over the tokens of some sequences."""
    scratch = Corpus()
    for seq in sequences:
        scratch.intern_tokens(list(seq))
    return SymbolGen(scratch)


def evaluate_grammars(
    candidates,
    data_sequences,
    min_cost: float = 1.0,
    gap_beta: float = 1.0,
    smoothing: float = 1.0,
    engine_params=None,
):
    """Rank candidate grammars ascending by G + E (ties: smaller G).

    Each candidate prices symbols with a cost model built from its own
    patterns (the grammar is its own codebook); the data symbols are
    interned into the candidate's table before the model is built so novel
    symbols get the unseen cost.  Returns [(candidate, G, E, G + E), ...].
    """
    results = []
    for cand in candidates:
        corpus = cand.to_corpus()
        data = [corpus.make_new_pattern(list(seq)) for seq in data_sequences]
        model = build_cost_model(corpus, min_cost, gap_beta, smoothing)
        g_bits, e_bits, total = grammar_score(model, corpus, data, engine_params)
        results.append((cand, g_bits, e_bits, total))
    results.sort(key=lambda r: (r[3], r[1], r[0].name))
    return results
