"""Symbol interning, patterns, and the store of old patterns.

Knowledge is represented as flat sequences of opaque symbols.  A pattern
may mark a leading and trailing stretch of its symbols as identification
symbols (its handle, used to tie patterns together and to encode data);
everything in between is its contents.  The corpus is the repository of
stored ("old") patterns, each with an occurrence frequency that feeds the
bit-cost model.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

#: pattern_id used for the incoming ("new") pattern, never stored in a corpus
NEW_PATTERN_ID = -1

RESERVED_CHARS = (":", "*")


class CorpusError(ValueError):
    """Base class for corpus construction errors."""


class TokenFormatError(CorpusError):
    """Raised for tokens that cannot be interned (whitespace, reserved chars)."""


class DuplicatePatternError(CorpusError):
    """Raised when a symbol-for-symbol identical pattern is added twice."""


class SegmentationError(CorpusError):
    """Raised when id-prefix/id-suffix lengths do not fit the pattern."""


@dataclass(frozen=True)
class Pattern:
    """An ordered sequence of symbol ids with id/contents segmentation.

    ``symbols[:id_prefix_len]`` and ``symbols[len - id_suffix_len:]`` are the
    identification symbols; the slice in between is the contents region.
    ``frequency`` is the pattern's occurrence count in its domain.
    """

    pattern_id: int
    symbols: tuple[int, ...]
    id_prefix_len: int = 0
    id_suffix_len: int = 0
    frequency: int = 1

    def __post_init__(self) -> None:
        if not self.symbols:
            raise SegmentationError("pattern must contain at least one symbol")
        if self.id_prefix_len < 0 or self.id_suffix_len < 0:
            raise SegmentationError("segmentation lengths must be >= 0")
        if self.id_prefix_len + self.id_suffix_len > len(self.symbols):
            raise SegmentationError(
                "id prefix (%d) + id suffix (%d) exceed pattern length %d"
                % (self.id_prefix_len, self.id_suffix_len, len(self.symbols))
            )
        if self.frequency < 1:
            raise CorpusError("frequency must be >= 1, got %d" % self.frequency)

    def __len__(self) -> int:
        return len(self.symbols)

    @property
    def contents_slice(self) -> slice:
        return slice(self.id_prefix_len, len(self.symbols) - self.id_suffix_len)

    def contents(self) -> tuple[int, ...]:
        return self.symbols[self.contents_slice]

    def is_id_position(self, pos: int) -> bool:
        return pos < self.id_prefix_len or pos >= len(self.symbols) - self.id_suffix_len


class SymbolTable:
    """Bijection between token strings and dense integer symbol ids."""

    def __init__(self) -> None:
        self.tokens: list[str] = []
        self._index: dict[str, int] = {}

    def __len__(self) -> int:
        return len(self.tokens)

    def __contains__(self, token: str) -> bool:
        return token in self._index

    def intern(self, token: str) -> int:
        if token in self._index:
            return self._index[token]
        if not token:
            raise TokenFormatError("empty token")
        if any(ch.isspace() for ch in token):
            raise TokenFormatError("whitespace in token %r" % token)
        for ch in RESERVED_CHARS:
            if ch in token:
                raise TokenFormatError("reserved character %r in token %r" % (ch, token))
        sid = len(self.tokens)
        self.tokens.append(token)
        self._index[token] = sid
        return sid

    def token(self, sid: int) -> str:
        return self.tokens[sid]

    def lookup(self, token: str) -> int | None:
        return self._index.get(token)


class Corpus:
    """The store of old patterns plus frequency-weighted symbol statistics.

    Mutable only while loading; once an engine run starts it is treated as
    read-only and may be shared freely.
    """

    def __init__(self) -> None:
        self.symbols = SymbolTable()
        self.patterns: dict[int, Pattern] = {}
        self.total_weighted_occurrences = 0
        self._weighted_counts: dict[int, int] = {}
        self._by_sequence: dict[tuple[int, ...], int] = {}
        self._next_pattern_id = 0

    def intern_symbol(self, token: str) -> int:
        return self.symbols.intern(token)

    def intern_tokens(self, tokens: Iterable[str]) -> tuple[int, ...]:
        return tuple(self.symbols.intern(t) for t in tokens)

    def add_pattern(
        self,
        tokens: Sequence[str],
        id_prefix_len: int = 0,
        id_suffix_len: int = 0,
        frequency: int = 1,
    ) -> int:
        symbols = self.intern_tokens(tokens)
        if symbols in self._by_sequence:
            raise DuplicatePatternError(
                "pattern %r already stored as pattern %d"
                % (" ".join(tokens), self._by_sequence[symbols])
            )
        pattern = Pattern(self._next_pattern_id, symbols, id_prefix_len, id_suffix_len, frequency)
        self.patterns[pattern.pattern_id] = pattern
        self._by_sequence[symbols] = pattern.pattern_id
        self._next_pattern_id += 1
        for sid in symbols:
            self._weighted_counts[sid] = self._weighted_counts.get(sid, 0) + frequency
        self.total_weighted_occurrences += frequency * len(symbols)
        return pattern.pattern_id

    def symbol_weighted_count(self, sid: int) -> int:
        """Occurrences of ``sid`` across old patterns, weighted by frequency."""
        if not 0 <= sid < len(self.symbols):
            raise CorpusError("symbol id %d not interned" % sid)
        return self._weighted_counts.get(sid, 0)

    def id_symbol_types(self) -> frozenset[int]:
        """Symbol ids that occur in some pattern's identification region.

        Symbols outside this set are pure contents symbols; filtering a
        unified sequence down to them recovers the substance of an alignment
        (e.g. the words of a parsed sentence) without the service symbols.
        """
        ids = set()
        for pattern in self.patterns.values():
            for pos, sid in enumerate(pattern.symbols):
                if pattern.is_id_position(pos):
                    ids.add(sid)
        return frozenset(ids)

    def make_new_pattern(self, tokens: Sequence[str]) -> Pattern:
        """Build the incoming pattern, interning its tokens into this table."""
        return Pattern(NEW_PATTERN_ID, self.intern_tokens(tokens))

    def tokens_of(self, symbols: Iterable[int]) -> list[str]:
        return [self.symbols.token(s) for s in symbols]
