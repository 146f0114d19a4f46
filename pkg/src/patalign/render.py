"""Output renderers: horizontal figures, rotated vertical figures, JSON.

The horizontal layout prints one text line per row with the new pattern on
top, assigning every column a single x position and drawing ``|`` connectors
between adjacent display rows.  The vertical layout rotates the picture:
one display column per row (new pattern leftmost), one text line per unified
item, with ``-`` runs joining matched symbols.  Both are deterministic down
to the byte.  The structured renderer emits a versioned JSON document with
stable key order for machine consumption.
"""

from __future__ import annotations

import json

from .alignment import Alignment, unified_contents
from .core import Corpus

STRUCTURED_SCHEMA = "patalign-result-v1"


def _display_rows(a: Alignment) -> list[int]:
    return a.canonical_row_order()


def render_horizontal(a: Alignment, corpus: Corpus) -> str:
    """Paper-style figure: rows of symbols with ``|`` connector lines."""
    order = _display_rows(a)
    display_of = {row: i for i, row in enumerate(order)}
    n = len(order)

    # x position per unified item: columns share one x across their span,
    # greedily packed left to right with one space between symbols
    cursor = [0] * n
    sym_at: list[dict[int, str]] = [dict() for _ in range(n)]  # x -> token per display row
    col_marks: list[tuple[int, int, int]] = []  # (x, top display row, bottom display row)
    for item in a.unified:
        token = corpus.symbols.token(item.symbol)
        spans = sorted(display_of[r] for r, _ in item.cells)
        lo, hi = spans[0], spans[-1]
        x = max(cursor[lo : hi + 1])
        for r, _ in item.cells:
            sym_at[display_of[r]][x] = token
        for d in range(lo, hi + 1):
            cursor[d] = x + len(token) + 1
        if item.matched:
            col_marks.append((x, lo, hi))

    width = max(cursor) if cursor else 0
    label_width = len(str(n - 1))
    lines = []
    for d in range(n):
        chars = [" "] * width
        for x, token in sym_at[d].items():
            chars[x : x + len(token)] = token
        label = str(d)
        body = "".join(chars).rstrip()
        lines.append("%*s %-*s %s" % (label_width, label, width, body, label))
        if d + 1 < n:
            marks = [" "] * width
            for x, lo, hi in col_marks:
                if lo <= d and d + 1 <= hi:
                    marks[x] = "|"
            lines.append("%*s %s" % (label_width, "", "".join(marks).rstrip()))
    return "\n".join(line.rstrip() for line in lines) + "\n"


def render_vertical(a: Alignment, corpus: Corpus) -> str:
    """Rotated figure: new pattern leftmost, ``-`` runs joining matches."""
    order = _display_rows(a)
    display_of = {row: i for i, row in enumerate(order)}
    n = len(order)
    widths = [0] * n
    rendered: list[list[tuple[int, str]]] = []
    for item in a.unified:
        token = corpus.symbols.token(item.symbol)
        cells = [(display_of[r], token) for r, _ in item.cells]
        rendered.append(sorted(cells))
        for d, _ in sorted(cells):
            widths[d] = max(widths[d], len(token))
    offsets = [0] * n
    for d in range(1, n):
        offsets[d] = offsets[d - 1] + widths[d - 1] + 3
    lines = []
    for cells in rendered:
        present = dict(cells)
        lo = min(present)
        hi = max(present)
        end = offsets[hi] + len(present[hi])
        chars = [" "] * end
        for d in range(lo, hi + 1):
            start = offsets[d]
            if d in present:
                token = present[d]
                chars[start : start + len(token)] = token
        # join matched symbols with dash runs through the gaps
        filled = "".join(chars)
        out = list(filled)
        inside = False
        for i in range(offsets[lo], end):
            ch = filled[i]
            if ch != " ":
                inside = True
            elif inside and any(c != " " for c in filled[i:]):
                out[i] = "-"
        lines.append("".join(out).rstrip())
    return "\n".join(lines) + "\n"


def _entry_document(entry, corpus: Corpus) -> dict:
    a = entry.alignment
    order = _display_rows(a)
    rank_of = {row: i for i, row in enumerate(order)}
    rows_doc = []
    for row_index in order:
        row = a.rows[row_index]
        rows_doc.append(
            {
                "pattern": "new" if row.is_new else row.pattern.pattern_id,
                "appearance": row.appearance,
                "symbols": corpus.tokens_of(row.pattern.symbols),
            }
        )
    columns_doc = [
        {
            "symbol": corpus.symbols.token(col.symbol),
            "cells": sorted([rank_of[r], pos] for r, pos in col.cells),
        }
        for col in a.columns
    ]
    doc = {
        "rows": rows_doc,
        "columns": columns_doc,
        "score": {
            "raw_cost": round(entry.breakdown.raw_cost, 9),
            "encoded_cost": round(entry.breakdown.encoded_cost, 9),
            "gap_penalty": round(entry.breakdown.gap_penalty, 9),
            "compression": round(entry.breakdown.score, 9),
            "matched_new": entry.breakdown.matched_new_count,
        },
        "code": corpus.tokens_of(entry.code),
        "inferences": corpus.tokens_of(entry.inferences),
        "residue": corpus.tokens_of(entry.residue),
        "contents": corpus.tokens_of(unified_contents(a, corpus)),
        "p": round(entry.p, 12),
    }
    if entry.relative is not None:
        doc["relative"] = round(entry.relative, 9)
    return doc


def render_structured(result, corpus: Corpus, keep_best: int | None = None) -> str:
    """Versioned JSON document for a run; reparses to equal values."""
    entries = result.entries if keep_best is None else result.entries[:keep_best]
    groups_doc = []
    for group in result.report.groups:
        groups_doc.append(
            {
                "coverage": sorted(group.coverage),
                "members": group.members,
                "relatives": [round(r, 9) for r in group.relatives],
                "pruned": group.pruned,
            }
        )
    doc = {
        "schema": STRUCTURED_SCHEMA,
        "status": result.status,
        "new": corpus.tokens_of(result.new.symbols),
        "alignments": [_entry_document(e, corpus) for e in entries],
        "groups": groups_doc,
        "stats": {
            "iterations": result.stats.iterations,
            "formed": result.stats.formed,
            "truncated": result.stats.truncated,
        },
    }
    return json.dumps(doc, indent=2) + "\n"
