import sys
from pathlib import Path

import pytest

SRC = Path(__file__).resolve().parent.parent / "src"
if str(SRC) not in sys.path:
    sys.path.insert(0, str(SRC))

from patalign.alignment import Alignment, extend_alignment  # noqa: E402
from patalign.corpus_io import parse_corpus  # noqa: E402

DATA = SRC / "patalign" / "data"


def load_corpus(name):
    return parse_corpus((DATA / name).read_text(encoding="utf-8")).corpus


def find_item(a, corpus, token, nth=0):
    """Index of the nth unified item carrying this token."""
    k = 0
    for i, item in enumerate(a.unified):
        if corpus.symbols.token(item.symbol) == token:
            if k == nth:
                return i
            k += 1
    raise KeyError(token)


def build_sentence_alignment(corpus):
    """The published parse of 's i x o f t h e m d o', built by hand."""
    pat = {
        " ".join(corpus.tokens_of(p.symbols)): p for p in corpus.patterns.values()
    }
    them = pat["N Np 0 t h e m #N"]
    six = pat["N Np 1 s i x #N"]
    of = pat["P 2 o f #P"]
    do = pat["V Vp 2 d o #V"]
    qp = pat["Q P #P N #N #Q"]
    np_ = pat["NP N #N Q #Q #NP"]
    spat = pat["S NP #NP V #V #S"]
    spl = pat["S PL NP Np Q Vp #S"]
    new = corpus.make_new_pattern("s i x o f t h e m d o".split())

    a = Alignment.singleton(new)
    a = extend_alignment(a, them, [(5, 3), (6, 4), (7, 5), (8, 6)])
    f = lambda tok, nth=0: find_item(a, corpus, tok, nth)
    a = extend_alignment(a, of, [(f("o"), 2), (f("f"), 3)])
    a = extend_alignment(a, six, [(f("s"), 3), (f("i"), 4), (f("x"), 5)])
    a = extend_alignment(a, qp, [(f("P"), 1), (f("#P"), 2), (f("N", 1), 3), (f("#N", 1), 4)])
    a = extend_alignment(a, np_, [(f("N"), 1), (f("#N"), 2), (f("Q"), 3), (f("#Q"), 4)])
    a = extend_alignment(a, do, [(f("d"), 3), (f("o", 1), 4)])
    a = extend_alignment(a, spat, [(f("NP"), 1), (f("#NP"), 2), (f("V"), 3), (f("#V"), 4)])
    a = extend_alignment(
        a, spl,
        [(f("S"), 0), (f("NP"), 2), (f("Np"), 3), (f("Q"), 4), (f("Vp"), 5), (f("#S"), 6)],
    )
    a.check_invariants()
    return new, a


def build_food_alignment(corpus):
    """The published class-hierarchy alignment over the food corpus.

    Built inside out: the deepest class binds the new attribute first, each
    outer class then wraps the previous one through its handle.
    """
    pats = list(corpus.patterns.values())
    food, bread, baguette = pats[0], pats[1], pats[2]
    new = corpus.make_new_pattern("sustains_life long crusty".split())
    a = Alignment.singleton(new)
    a = extend_alignment(a, food, [(0, 7)])                         # sustains_life
    f = lambda tok, nth=0: find_item(a, corpus, tok, nth)
    a = extend_alignment(
        a, bread,
        [(f("food"), 1), (f("fat"), 2), (f("#fat"), 4), (f("protein"), 5),
         (f("#protein"), 7), (f("carbohydrate"), 8), (f("#carbohydrate"), 10),
         (f("#food"), 11)],
    )
    a = extend_alignment(
        a, baguette,
        [(f("bread"), 1), (f("#bread"), 2), (f("long"), 3), (f("crusty"), 5)],
    )
    a.check_invariants()
    return new, a


@pytest.fixture(scope="session")
def english():
    return load_corpus("english.sp")


@pytest.fixture(scope="session")
def english_reference(english):
    return build_sentence_alignment(english)
