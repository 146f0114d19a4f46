"""Scenario regression harness over the bundled demo corpora.

Each scenario runs one engine invocation and reduces the result to a
structural fingerprint: the top alignment's rows, columns, code, coverage,
plus coverage-group shapes where probabilities matter.  Fingerprints are
compared against the committed expectations, so any drift in matching,
scoring, or search order fails loudly while incidental layout stays free.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .corpus_io import parse_corpus
from .engine import EngineParams, RunResult, run
from .matcher import MatchParams
from .core import Corpus

DATA_DIR = Path(__file__).parent / "data"
EXPECTED_FILE = DATA_DIR / "expected.json"


@dataclass(frozen=True)
class Scenario:
    name: str
    corpus: str
    new: str
    exact: bool = True
    driving_keep: int = 3
    max_iterations: int = 20
    keep_best: int = 10

    def params(self, workers: int = 1) -> EngineParams:
        return EngineParams(
            match=MatchParams(),
            driving_keep=self.driving_keep,
            max_iterations=self.max_iterations,
            exact_mode=self.exact,
            keep_best=self.keep_best,
            workers=workers,
        )


SCENARIOS = [
    Scenario("english_parse", "english.sp", "s i x o f t h e m d o"),
    Scenario("english_produce", "english.sp", "PL 1 2 Np 0 2",
             driving_keep=10, max_iterations=12),
    Scenario("unary_recognize", "unary.sp", "0 1 1 1 1"),
    Scenario("unary_produce", "unary.sp", "0"),
    Scenario("half_adder", "halfadder.sp", "A 0 1 S C", max_iterations=1),
    Scenario("not_xor", "notxor.sp", "NOTXOR 0 1 A #NX"),
    Scenario("syllogism", "syllogism.sp", "Socrates human true =>", driving_keep=6),
    Scenario("fuzzy_words", "words.sp", "i m f o r m t i x o n",
             exact=False, keep_best=5),
    Scenario("food_classes", "food.sp", "sustains_life long crusty"),
    Scenario("animal_forward", "animals.sp", "mammal Tibbs"),
    Scenario("animal_backward", "animals.sp", "Tibbs warm_blooded"),
    Scenario("whodunit", "whodunit.sp", "suspect motive", driving_keep=6),
    Scenario("route", "route.sp", "London Edinburgh", driving_keep=6),
    Scenario("framework", "framework.sp", "accused matches smoke the_barn",
             driving_keep=6),
    Scenario("baguette_default", "baguette.sp", "sustains_life long crusty"),
    Scenario("baguette_override", "baguette.sp", "sustains_life long crusty rustic"),
]


def _alignment_fingerprint(entry, corpus: Corpus) -> dict:
    a = entry.alignment
    order = a.canonical_row_order()
    rank_of = {row: i for i, row in enumerate(order)}
    rows = [
        " ".join(corpus.tokens_of(a.rows[r].pattern.symbols)) if r else "<new>"
        for r in order
    ]
    columns = sorted(
        "%s@%s" % (
            corpus.symbols.token(col.symbol),
            ",".join("%d:%d" % (rank_of[r], pos) for r, pos in sorted(col.cells, key=lambda c: rank_of[c[0]])),
        )
        for col in a.columns
    )
    return {
        "rows": rows,
        "columns": columns,
        "code": corpus.tokens_of(entry.code),
        "coverage": len(a.new_coverage),
    }


def scenario_fingerprint(scenario: Scenario, workers: int = 1) -> dict:
    corpus = parse_corpus((DATA_DIR / scenario.corpus).read_text(encoding="utf-8")).corpus
    new = corpus.make_new_pattern(scenario.new.split())
    result = run(corpus, new, scenario.params(workers))
    doc: dict = {"status": result.status}
    if result.entries:
        doc["top"] = _alignment_fingerprint(result.entries[0], corpus)
        doc["ranking"] = [
            [" ".join(corpus.tokens_of(e.code)), round(e.breakdown.score, 6)]
            for e in result.entries[: scenario.keep_best]
        ]
        doc["groups"] = [
            [len(g.coverage), len(g.members), [round(r, 6) for r in g.relatives]]
            for g in result.report.groups[:3]
        ]
    return doc


def run_regression(corpus_dir: str | None, out, workers: int = 1,
                   update: bool = False) -> int:
    directory = Path(corpus_dir) if corpus_dir else DATA_DIR
    available = {p.name for p in directory.glob("*.sp")}
    scenarios = [s for s in SCENARIOS if s.corpus in available]
    if not scenarios:
        out.write("no scenario corpora found in %s\n" % directory)
        return 2
    if update:
        expected = {s.name: scenario_fingerprint(s, workers) for s in scenarios}
        EXPECTED_FILE.write_text(json.dumps(expected, indent=2) + "\n", encoding="utf-8")
        out.write("wrote %s (%d scenarios)\n" % (EXPECTED_FILE, len(expected)))
        return 0
    expected = json.loads(EXPECTED_FILE.read_text(encoding="utf-8"))
    failures = 0
    for scenario in scenarios:
        actual = scenario_fingerprint(scenario, workers)
        want = expected.get(scenario.name)
        if want is None:
            out.write("FAIL %-18s (no expectation recorded)\n" % scenario.name)
            failures += 1
        elif actual != want:
            fields = [k for k in want if actual.get(k) != want.get(k)]
            out.write("FAIL %-18s (mismatch: %s)\n" % (scenario.name, ", ".join(fields)))
            failures += 1
        else:
            out.write("ok   %s\n" % scenario.name)
    out.write("%d/%d scenarios passed\n" % (len(scenarios) - failures, len(scenarios)))
    return 0 if failures == 0 else 2
