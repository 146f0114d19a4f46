"""Multiple-alignment structure: rows, match columns, unification, codes.

An alignment arranges the new pattern (always row 0) above one or more
appearances of old patterns so that matching symbols share columns.  Columns
never cross (projection onto any row is strictly increasing) and no symbol
occurrence is ever matched with itself, which is enforced through origin
traces: every cell carries the (pattern_id, position) pairs it descends
from, and cells joined into a column must have disjoint origin sets.

Unifying an alignment collapses each column to a single item and interleaves
the unmatched cells, producing a plain sequence that can drive further
matching.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from .core import NEW_PATTERN_ID, Corpus, Pattern


class LegalityError(ValueError):
    """Raised when a match chain would produce an illegal alignment."""


@dataclass(frozen=True)
class Row:
    """One appearance of a source pattern inside an alignment.

    The same pattern may appear in several rows; ``appearance`` numbers the
    repeats.  Row 0 is always the new pattern.
    """

    row_index: int
    pattern: Pattern
    appearance: int = 0

    def __len__(self) -> int:
        return len(self.pattern.symbols)

    @property
    def is_new(self) -> bool:
        return self.row_index == 0


@dataclass(frozen=True)
class Column:
    """A set of mutually matched cells, one per row at most.

    ``cells`` holds (row_index, position) pairs sorted by row index; all
    cells carry the same symbol.
    """

    symbol: int
    cells: tuple[tuple[int, int], ...]

    @property
    def has_new(self) -> bool:
        return self.cells[0][0] == 0

    def row_indices(self) -> tuple[int, ...]:
        return tuple(r for r, _ in self.cells)


@dataclass(frozen=True)
class UnifiedItem:
    """One element of the unified sequence: a column or an unmatched cell."""

    symbol: int
    cells: tuple[tuple[int, int], ...]
    origins: frozenset[tuple[int, int]]
    matched: bool
    has_new: bool


class Alignment:
    """An immutable arrangement of rows and non-crossing match columns."""

    def __init__(self, rows: tuple[Row, ...], columns: tuple[Column, ...]):
        self.rows = rows
        self.columns = columns
        self.new_coverage = frozenset(
            pos for col in columns for r, pos in col.cells if r == 0
        )

    @staticmethod
    def singleton(new: Pattern) -> "Alignment":
        """The initial alignment: the new pattern alone, no columns."""
        return Alignment((Row(0, new),), ())

    def row_origin(self, row_index: int, pos: int) -> tuple[int, int]:
        return (self.rows[row_index].pattern.pattern_id, pos)

    @cached_property
    def unified(self) -> tuple[UnifiedItem, ...]:
        """Collapse columns and interleave unmatched cells into one sequence.

        Emission order: columns are taken left to right; before each column
        the member rows' not-yet-emitted earlier cells are emitted (rows
        ascending, positions ascending).  When a column is the last one an
        old row takes part in, that row's remaining cells follow the column
        immediately, so bracket-closing symbols stay next to the material
        they close over and remain matchable by later extensions.  Whatever
        is left (the new row's tail and column-less rows) is emitted at the
        end in row order.
        """
        last_column_of_row: dict[int, int] = {}
        for ci, col in enumerate(self.columns):
            for r, _ in col.cells:
                last_column_of_row[r] = ci

        cursor = [0] * len(self.rows)
        items: list[UnifiedItem] = []

        def emit_cell(r: int, pos: int) -> None:
            row = self.rows[r]
            items.append(
                UnifiedItem(
                    symbol=row.pattern.symbols[pos],
                    cells=((r, pos),),
                    origins=frozenset((self.row_origin(r, pos),)),
                    matched=False,
                    has_new=(r == 0),
                )
            )

        def drain(r: int, upto: int) -> None:
            while cursor[r] < upto:
                emit_cell(r, cursor[r])
                cursor[r] += 1

        for ci, col in enumerate(self.columns):
            for r, pos in col.cells:
                drain(r, pos)
            items.append(
                UnifiedItem(
                    symbol=col.symbol,
                    cells=col.cells,
                    origins=frozenset(self.row_origin(r, p) for r, p in col.cells),
                    matched=True,
                    has_new=col.has_new,
                )
            )
            for r, pos in col.cells:
                cursor[r] = pos + 1
            for r, _ in col.cells:
                if r != 0 and last_column_of_row[r] == ci:
                    drain(r, len(self.rows[r]))
        for r in range(len(self.rows)):
            drain(r, len(self.rows[r]))
        return tuple(items)

    def unified_symbols(self) -> list[int]:
        return [item.symbol for item in self.unified]

    @cached_property
    def canonical_key(self) -> tuple:
        """Content identity: row multiset plus the ordered column list.

        Rows are renumbered canonically (row 0 first, then by first-column
        participation, pattern id, appearance) so that alignments built along
        different extension orders compare equal when they agree cell for
        cell.  Column order is part of the identity: two alignments with the
        same cells but differently interleaved columns unify to different
        sequences and behave differently as driving patterns.
        """
        first_col: dict[int, int] = {}
        for ci, col in enumerate(self.columns):
            for r, _ in col.cells:
                first_col.setdefault(r, ci)
        order = [0] + sorted(
            range(1, len(self.rows)),
            key=lambda r: (
                first_col.get(r, len(self.columns)),
                self.rows[r].pattern.pattern_id,
                self.rows[r].appearance,
            ),
        )
        rank = {r: i for i, r in enumerate(order)}
        rows_key = tuple(self.rows[r].pattern.pattern_id for r in order)
        cols_key = tuple(
            tuple(sorted((rank[r], pos) for r, pos in col.cells)) for col in self.columns
        )
        return (rows_key, cols_key)

    def canonical_row_order(self) -> list[int]:
        """Row indices in display order (new first, then leftmost-anchored)."""
        first_col: dict[int, int] = {}
        for ci, col in enumerate(self.columns):
            for r, _ in col.cells:
                first_col.setdefault(r, ci)
        return [0] + sorted(
            range(1, len(self.rows)),
            key=lambda r: (
                first_col.get(r, len(self.columns)),
                self.rows[r].pattern.pattern_id,
                self.rows[r].appearance,
            ),
        )

    def check_invariants(self) -> None:
        """Assert order consistency and origin disjointness (for tests)."""
        positions: dict[int, int] = {}
        for col in self.columns:
            seen_rows = set()
            for r, _ in col.cells:
                if r in seen_rows:
                    raise LegalityError("column holds two cells of row %d" % r)
                seen_rows.add(r)
            for r, pos in col.cells:
                last = positions.get(r, -1)
                if pos <= last:
                    raise LegalityError(
                        "column projection not increasing on row %d (%d after %d)"
                        % (r, pos, last)
                    )
                positions[r] = pos
            origins = [self.row_origin(r, p) for r, p in col.cells]
            if len(set(origins)) != len(origins):
                raise LegalityError("column matches a symbol occurrence with itself")
        for pos_count in _new_position_counts(self).values():
            if pos_count > 1:
                raise LegalityError("a new position appears in two columns")


def _new_position_counts(a: Alignment) -> dict[int, int]:
    counts: dict[int, int] = {}
    for col in a.columns:
        for r, pos in col.cells:
            if r == 0:
                counts[pos] = counts.get(pos, 0) + 1
    return counts


def extend_alignment(
    driving: Alignment,
    target: Pattern,
    chain: list[tuple[int, int]],
    appearance: int | None = None,
) -> Alignment:
    """Add one row for ``target``, merging the chain's pairs into columns.

    ``chain`` pairs a driving unified-sequence index with a target position;
    it must be strictly increasing on both sides, pair equal symbols, and
    never join intersecting origin sets.
    """
    unified = driving.unified
    new_row_index = len(driving.rows)
    if appearance is None:
        appearance = sum(
            1 for row in driving.rows if row.pattern.pattern_id == target.pattern_id
        )
    row = Row(new_row_index, target, appearance)

    prev_d, prev_t = -1, -1
    chained: dict[int, int] = {}
    for d_idx, t_pos in chain:
        if d_idx <= prev_d or t_pos <= prev_t:
            raise LegalityError("crossing chain at (%d, %d)" % (d_idx, t_pos))
        item = unified[d_idx]
        if item.symbol != target.symbols[t_pos]:
            raise LegalityError("symbol mismatch at (%d, %d)" % (d_idx, t_pos))
        if (target.pattern_id, t_pos) in item.origins:
            raise LegalityError(
                "self-match of origin (%d, %d)" % (target.pattern_id, t_pos)
            )
        chained[d_idx] = t_pos
        prev_d, prev_t = d_idx, t_pos

    columns: list[Column] = []
    for idx, item in enumerate(unified):
        if idx in chained:
            cells = item.cells + ((new_row_index, chained[idx]),)
            columns.append(Column(item.symbol, cells))
        elif item.matched:
            columns.append(Column(item.symbol, item.cells))
    return Alignment(driving.rows + (row,), tuple(columns))


def derive_code(a: Alignment) -> list[int]:
    """Unmatched old-row symbols in unified order: the encoding of row 0."""
    return [
        item.symbol for item in a.unified if not item.matched and not item.has_new
    ]


def residue(a: Alignment) -> list[int]:
    """New symbols not matched by any column, in their own order."""
    return [
        item.symbol for item in a.unified if not item.matched and item.has_new
    ]


def extract_inferences(a: Alignment) -> list[int]:
    """Old-row symbols in no column containing a new cell, in unified order.

    Matched-between-old-rows symbols collapse to one entry per column.
    """
    return [item.symbol for item in a.unified if not item.has_new]


def unified_contents(a: Alignment, corpus: Corpus) -> list[int]:
    """The unified sequence restricted to pure contents symbol types."""
    id_types = corpus.id_symbol_types()
    return [item.symbol for item in a.unified if item.symbol not in id_types]


def symbol_accounting(a: Alignment) -> tuple[int, int, int, int]:
    """Counts of (code items, new columns, old-only columns, residue items).

    Every unified item falls in exactly one bucket, so the four counts sum to
    the unified length.
    """
    code = new_cols = old_cols = res = 0
    for item in a.unified:
        if item.matched and item.has_new:
            new_cols += 1
        elif item.matched:
            old_cols += 1
        elif item.has_new:
            res += 1
        else:
            code += 1
    return code, new_cols, old_cols, res
