"""Command-line front end: align, compute, probabilities, learn, regress.

Every command is a pure function of its flags and input files; identical
invocations produce byte-identical output.  Exit codes: 0 when results were
produced, 2 when the run produced nothing (or a scenario failed), 1 for
usage or format errors.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .core import Corpus, CorpusError
from .corpus_io import CorpusFormatError, parse_corpus, parse_new_tokens
from .engine import EngineParams, RunResult, filter_exact, run
from .learn import (
    NothingSharedError,
    SymbolGen,
    align_pair,
    derive_patterns,
    evaluate_grammars,
    handle_gen,
    rote_candidate,
)
from .matcher import MatchParams
from .probability import inferred_symbol_probabilities
from .render import render_horizontal, render_structured, render_vertical
from .scoring import build_cost_model
from . import regress as regress_mod

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_EMPTY = 2


def add_engine_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--old", required=True, help="corpus file of stored patterns")
    group = parser.add_mutually_exclusive_group(required=True)
    group.add_argument("--new", help="incoming pattern as space-separated tokens")
    group.add_argument("--new-file", help="file containing the incoming pattern")
    parser.add_argument("--exact", action="store_true",
                        help="keep only alignments covering every new symbol")
    parser.add_argument("--keep-best", type=int, default=10)
    parser.add_argument("--beam", type=int, default=50)
    parser.add_argument("--k-best", type=int, default=4)
    parser.add_argument("--max-iterations", type=int, default=20)
    parser.add_argument("--driving-keep", type=int, default=3)
    parser.add_argument("--max-alignments", type=int, default=5000)
    parser.add_argument("--gap-beta", type=float, default=1.0)
    parser.add_argument("--min-cost", type=float, default=1.0)
    parser.add_argument("--smoothing", type=float, default=1.0)
    parser.add_argument("--workers", type=int, default=1)
    parser.add_argument("--format", choices=("horizontal", "vertical", "structured"),
                        default="horizontal")


def engine_params(args, exact: bool) -> EngineParams:
    return EngineParams(
        match=MatchParams(k_best=args.k_best, beam=args.beam),
        driving_keep=args.driving_keep,
        max_iterations=args.max_iterations,
        max_alignments_total=args.max_alignments,
        exact_mode=exact,
        keep_best=args.keep_best,
        workers=args.workers,
    )


def load_inputs(args) -> tuple[Corpus, list[str]]:
    text = Path(args.old).read_text(encoding="utf-8")
    corpus = parse_corpus(text).corpus
    if args.new is not None:
        tokens = parse_new_tokens(args.new)
    else:
        tokens = parse_new_tokens(Path(args.new_file).read_text(encoding="utf-8"))
    return corpus, tokens


def run_from_args(args, exact: bool) -> tuple[RunResult, Corpus]:
    corpus, tokens = load_inputs(args)
    new = corpus.make_new_pattern(tokens)  # interns novel symbols
    model = build_cost_model(corpus, args.min_cost, args.gap_beta, args.smoothing)
    result = run(corpus, new, engine_params(args, exact), model=model)
    return result, corpus


def print_alignments(result: RunResult, corpus: Corpus, args, out) -> None:
    if args.format == "structured":
        out.write(render_structured(result, corpus, keep_best=args.keep_best))
        return
    renderer = render_horizontal if args.format == "horizontal" else render_vertical
    for rank, entry in enumerate(result.entries[: args.keep_best]):
        b = entry.breakdown
        out.write(
            "alignment %d: score=%.3f raw=%.3f encoded=%.3f gaps=%.3f p=%.3g\n"
            % (rank + 1, b.score, b.raw_cost, b.encoded_cost, b.gap_penalty, entry.p)
        )
        out.write("  code: %s\n" % " ".join(corpus.tokens_of(entry.code)))
        out.write("  inferences: %s\n" % " ".join(corpus.tokens_of(entry.inferences)))
        if entry.residue:
            out.write("  residue: %s\n" % " ".join(corpus.tokens_of(entry.residue)))
        out.write(renderer(entry.alignment, corpus))
        out.write("\n")


def cmd_align(args, out) -> int:
    result, corpus = run_from_args(args, exact=args.exact)
    print_alignments(result, corpus, args, out)
    return EXIT_OK if result.entries else EXIT_EMPTY


def cmd_compute(args, out) -> int:
    result, corpus = run_from_args(args, exact=True)
    if not result.entries:
        out.write("new pattern not derivable from the stored patterns\n")
        return EXIT_EMPTY
    print_alignments(result, corpus, args, out)
    return EXIT_OK


def cmd_probabilities(args, out) -> int:
    result, corpus = run_from_args(args, exact=True)
    if args.format == "structured":
        out.write(render_structured(result, corpus, keep_best=args.keep_best))
        return EXIT_OK if result.entries else EXIT_EMPTY
    if not result.entries:
        out.write("no alignment covers the new pattern\n")
        return EXIT_EMPTY
    for gi, group in enumerate(result.report.groups):
        out.write("group %d: coverage=%s\n" % (gi, ",".join(map(str, sorted(group.coverage)))))
        for i, r in zip(group.members, group.relatives):
            entry = result.entries[i]
            out.write(
                "  alignment %d: p=%.6g relative=%.6f inferences: %s\n"
                % (i + 1, entry.p, r, " ".join(corpus.tokens_of(entry.inferences)))
            )
    probs = inferred_symbol_probabilities(result.report, result.entries)
    if probs:
        out.write("inferred symbol probabilities (widest coverage group):\n")
        tokens = sorted((corpus.symbols.token(s), p) for s, p in probs.items())
        for token, p in tokens:
            out.write("  %s: %.6f\n" % (token, p))
    return EXIT_OK


def cmd_learn(args, out) -> int:
    seq_a = parse_new_tokens(args.sequence_a)
    seq_b = parse_new_tokens(args.sequence_b)
    alignment, corpus = align_pair(seq_a, seq_b)
    try:
        derived = derive_patterns(alignment, corpus, SymbolGen(corpus))
    except NothingSharedError as exc:
        out.write("nothing shared: %s\n" % exc)
        return EXIT_EMPTY
    out.write("derived grammar:\n")
    for spec in derived.all_patterns():
        marks = list(spec.tokens)
        out.write("  %s\n" % " ".join(marks))
    out.write("codes: %s / %s\n" % (" ".join(derived.codes[0]) or "-",
                                    " ".join(derived.codes[1]) or "-"))
    rote = rote_candidate([seq_a, seq_b], handle_gen([seq_a, seq_b]))
    candidates = [derived.candidate("factored"), rote]
    ranking = evaluate_grammars(candidates, [seq_a, seq_b],
                                args.min_cost, args.gap_beta, args.smoothing)
    out.write("grammar ranking (ascending G+E):\n")
    for cand, g_bits, e_bits, total in ranking:
        out.write("  %-10s G=%.3f E=%.3f G+E=%.3f\n" % (cand.name, g_bits, e_bits, total))
    return EXIT_OK


def cmd_regress(args, out) -> int:
    return regress_mod.run_regression(
        args.corpus_dir, out, workers=args.workers, update=args.update
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="patalign",
        description="Compress a new symbol pattern against stored patterns "
                    "by building multiple alignments.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("align", help="rank alignments for a new pattern")
    add_engine_flags(p)
    p.set_defaults(func=cmd_align)

    p = sub.add_parser("compute", help="exact-coverage run: calculation and reasoning")
    add_engine_flags(p)
    p.set_defaults(func=cmd_compute)

    p = sub.add_parser("probabilities", help="coverage groups and inference probabilities")
    add_engine_flags(p)
    p.set_defaults(func=cmd_probabilities)

    p = sub.add_parser("learn", help="factor two sequences into a grammar fragment")
    p.add_argument("sequence_a", help="first token sequence")
    p.add_argument("sequence_b", help="second token sequence")
    p.add_argument("--gap-beta", type=float, default=1.0)
    p.add_argument("--min-cost", type=float, default=1.0)
    p.add_argument("--smoothing", type=float, default=1.0)
    p.set_defaults(func=cmd_learn)

    p = sub.add_parser("regress", help="run the bundled scenarios against expectations")
    p.add_argument("--corpus-dir", default=None,
                   help="directory of corpus files (default: bundled)")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--update", action="store_true",
                   help="rewrite the committed expectations (maintainers)")
    p.set_defaults(func=cmd_regress)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else 0
    try:
        return args.func(args, sys.stdout)
    except (CorpusError, CorpusFormatError, FileNotFoundError, ValueError) as exc:
        sys.stderr.write("error: %s\n" % exc)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
