import math

from patalign.alignment import Alignment, extend_alignment
from patalign.core import Corpus
from patalign.engine import EngineParams, run
from patalign.probability import (
    absolute_probability,
    inferred_symbol_probabilities,
    relative_probabilities,
    symbol_probability,
)
from patalign.scoring import build_cost_model, encoded_cost

from conftest import load_corpus


def test_absolute_probability_formula():
    c = Corpus()
    c.add_pattern(["a", "b"])
    model = build_cost_model(c)
    new = c.make_new_pattern(["a", "b"])
    full = extend_alignment(Alignment.singleton(new), c.patterns[0], [(0, 0), (1, 1)])
    assert absolute_probability(model, full) == 1.0  # code and residue empty
    partial = extend_alignment(Alignment.singleton(new), c.patterns[0], [(0, 0)])
    bits = encoded_cost(model, partial)
    assert abs(absolute_probability(model, partial) - 2.0 ** (-bits)) < 1e-15
    assert absolute_probability(model, partial) < 1.0


def test_relative_probabilities_normalise():
    rs = relative_probabilities([0.25, 0.25])
    assert rs == [0.5, 0.5]
    rs = relative_probabilities([0.6, 0.3, 0.1])
    assert abs(sum(rs) - 1.0) < 1e-12
    assert rs == sorted(rs, reverse=True)


def test_singleton_group_probability_is_one():
    c = load_corpus("animals.sp")
    new = c.make_new_pattern("mammal Tibbs".split())
    result = run(c, new, EngineParams(exact_mode=True))
    group = result.report.maximal_group()
    assert len(group.members) == 1
    assert group.relatives == [1.0]


def test_closed_world_two_alternatives():
    c = load_corpus("animals.sp")
    new = c.make_new_pattern("Tibbs warm_blooded".split())
    result = run(c, new, EngineParams(exact_mode=True))
    group = result.report.maximal_group()
    assert len(group.members) == 2
    assert abs(sum(group.relatives) - 1.0) < 1e-9
    assert all(r > 0 for r in group.relatives)
    inferred = [
        set(c.tokens_of(result.entries[i].inferences)) for i in group.members
    ]
    assert any("furry" in s for s in inferred)
    assert any("wings" in s for s in inferred)


def test_group_order_matches_score_order():
    c = load_corpus("animals.sp")
    new = c.make_new_pattern("Tibbs warm_blooded".split())
    result = run(c, new, EngineParams(exact_mode=True))
    group = result.report.maximal_group()
    assert group.relatives == sorted(group.relatives, reverse=True)


def test_symbol_probability_defaults():
    c = load_corpus("baguette.sp")
    new = c.make_new_pattern("sustains_life long crusty".split())
    result = run(c, new, EngineParams(exact_mode=True))
    white = c.symbols.lookup("white")
    brown = c.symbols.lookup("brown")
    p_white = symbol_probability(result.report, result.entries, white)
    p_brown = symbol_probability(result.report, result.entries, brown)
    assert abs((p_white + p_brown) - 1.0) < 1e-9
    assert p_white > p_brown > 0
    never = c.intern_symbol("unheard_of")
    assert symbol_probability(result.report, result.entries, never) == 0.0


def test_override_forces_single_reading():
    c = load_corpus("baguette.sp")
    new = c.make_new_pattern("sustains_life long crusty rustic".split())
    result = run(c, new, EngineParams(exact_mode=True))
    probs = inferred_symbol_probabilities(result.report, result.entries)
    brown = c.symbols.lookup("brown")
    assert abs(probs[brown] - 1.0) < 1e-9
    white = c.symbols.lookup("white")
    assert probs.get(white, 0.0) == 0.0


def test_probability_monotone_in_code_length():
    c = Corpus()
    c.add_pattern(["k", "a"])
    c.add_pattern(["k", "k2", "a"])
    model = build_cost_model(c)
    new = c.make_new_pattern(["a"])
    short = extend_alignment(Alignment.singleton(new), c.patterns[0], [(0, 1)])
    long_ = extend_alignment(Alignment.singleton(new), c.patterns[1], [(0, 2)])
    assert encoded_cost(model, short) < encoded_cost(model, long_)
    assert absolute_probability(model, short) > absolute_probability(model, long_)
    assert math.isclose(
        absolute_probability(model, short),
        2 ** (-encoded_cost(model, short)),
    )
