"""Corpus file format: one pattern per line, with segmentation and frequency.

Grammar per line (tokens separated by whitespace):

    [prefix-tokens] ":" contents-tokens [":" suffix-tokens] ["*" freq]

A line without colons is all contents.  The frequency marker is a final
``*N`` token (default 1).  Lines whose first non-space character is ``#``
are comments, so ``#``-initial symbols like ``#N`` survive inside patterns;
blank lines are ignored.  ``#!`` comment lines carry optional config
overrides as ``key=value`` pairs.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .core import Corpus, CorpusError

HEADER_TAG = "#! patalign corpus v1"

_FREQ_RE = re.compile(r"^\*(\d+)$")


class CorpusFormatError(CorpusError):
    """Malformed corpus text; the message carries the line number."""


@dataclass
class CorpusDocument:
    """A parsed corpus plus any header config overrides."""

    corpus: Corpus
    config: dict[str, float] = field(default_factory=dict)


def _parse_config(line: str, config: dict[str, float], lineno: int) -> None:
    for part in line.split():
        if "=" not in part:
            continue
        key, _, value = part.partition("=")
        try:
            config[key] = float(value)
        except ValueError:
            raise CorpusFormatError(
                "line %d: bad config override %r" % (lineno, part)
            ) from None


def parse_pattern_line(line: str) -> tuple[list[str], int, int, int]:
    """Split one line into (tokens, id_prefix_len, id_suffix_len, frequency)."""
    tokens = line.split()
    frequency = 1
    if tokens and _FREQ_RE.match(tokens[-1]):
        frequency = int(tokens[-1][1:])
        tokens = tokens[:-1]
    segments: list[list[str]] = [[]]
    for tok in tokens:
        if tok == ":":
            segments.append([])
        else:
            segments.append(segments.pop() + [tok])
    if len(segments) == 1:
        prefix, contents, suffix = [], segments[0], []
    elif len(segments) == 2:
        prefix, contents, suffix = segments[0], segments[1], []
    elif len(segments) == 3:
        prefix, contents, suffix = segments
    else:
        raise CorpusFormatError("more than two ':' separators")
    if not contents:
        raise CorpusFormatError("empty contents field")
    return prefix + contents + suffix, len(prefix), len(suffix), frequency


def parse_corpus(text: str) -> CorpusDocument:
    corpus = Corpus()
    config: dict[str, float] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            if line.startswith("#!"):
                _parse_config(line[2:], config, lineno)
            continue
        try:
            tokens, prefix_len, suffix_len, frequency = parse_pattern_line(line)
            corpus.add_pattern(tokens, prefix_len, suffix_len, frequency)
        except CorpusError as exc:
            raise CorpusFormatError("line %d: %s" % (lineno, exc)) from exc
    return CorpusDocument(corpus=corpus, config=config)


def render_corpus(doc: CorpusDocument | Corpus) -> str:
    """Write a corpus back out; parse(render(c)) reproduces c."""
    if isinstance(doc, Corpus):
        doc = CorpusDocument(corpus=doc)
    lines = [HEADER_TAG]
    for key in sorted(doc.config):
        lines.append("#! %s=%s" % (key, doc.config[key]))
    for pattern in doc.corpus.patterns.values():
        tokens = doc.corpus.tokens_of(pattern.symbols)
        prefix = tokens[: pattern.id_prefix_len]
        suffix = tokens[len(tokens) - pattern.id_suffix_len :]
        contents = tokens[pattern.id_prefix_len : len(tokens) - pattern.id_suffix_len]
        if prefix or suffix:
            parts = prefix + [":"] + contents
            if suffix:
                parts += [":"] + suffix
        else:
            parts = contents
        if pattern.frequency != 1:
            parts.append("*%d" % pattern.frequency)
        lines.append(" ".join(parts))
    return "\n".join(lines) + "\n"


def parse_new_tokens(text: str) -> list[str]:
    """Tokens of an incoming pattern given as whitespace-separated text."""
    tokens = text.split()
    if not tokens:
        raise CorpusFormatError("empty new pattern")
    return tokens
