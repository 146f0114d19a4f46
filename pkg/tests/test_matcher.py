import math
import random

from patalign.alignment import Alignment
from patalign.core import Corpus
from patalign.matcher import (
    MatchParams,
    chain_gain,
    find_hits,
    k_best_chains,
    match_pair,
)
from patalign.scoring import build_cost_model


def make_pair(driving_tokens, target_tokens):
    c = Corpus()
    c.add_pattern(list(target_tokens))
    target = c.patterns[0]
    new = c.make_new_pattern(list(driving_tokens))
    model = build_cost_model(c)
    return Alignment.singleton(new), target, model, c


def oracle_best_score(hits, model):
    """Exact optimum by plain quadratic dynamic programming, no pruning."""
    order = sorted(hits, key=lambda h: (h.d_pos, h.t_pos))
    best = []
    for i, h in enumerate(order):
        s = model.cost(h.symbol)
        for j in range(i):
            g = order[j]
            if g.d_pos < h.d_pos and g.t_pos < h.t_pos:
                pen = 0.0
                d_gap = h.d_pos - g.d_pos - 1
                t_gap = h.t_pos - g.t_pos - 1
                if d_gap:
                    pen += model.gap_beta * math.log2(1 + d_gap)
                if t_gap:
                    pen += model.gap_beta * math.log2(1 + t_gap)
                s = max(s, best[j] + model.cost(h.symbol) - pen)
        best.append(s)
    return max(best) if best else None


def enumerate_best_score(hits, model):
    """Exhaustive chain enumeration, for cross-checking the oracle itself."""
    order = sorted(hits, key=lambda h: (h.d_pos, h.t_pos))
    best = [None]

    def extend(chain, start):
        if chain:
            score = chain_gain(tuple(chain), model)
            if best[0] is None or score > best[0]:
                best[0] = score
        for i in range(start, len(order)):
            h = order[i]
            if not chain or (chain[-1].d_pos < h.d_pos and chain[-1].t_pos < h.t_pos):
                chain.append(h)
                extend(chain, i + 1)
                chain.pop()

    extend([], 0)
    return best[0]


def test_hits_exhaustive():
    driving, target, model, c = make_pair(["a", "b"], ["b", "a"])
    hits = find_hits(driving, target, MatchParams())
    got = {(h.d_pos, h.t_pos, c.symbols.token(h.symbol)) for h in hits}
    assert got == {(0, 1, "a"), (1, 0, "b")}


def test_self_match_excluded():
    c = Corpus()
    c.add_pattern(["X", "a", "0", "#X"], 2, 1)
    target = c.patterns[0]
    new = c.make_new_pattern(["0"])
    model = build_cost_model(c)
    base = Alignment.singleton(new)
    first = match_pair(base, target, MatchParams(), model)[0]
    hits = find_hits(first, target, MatchParams())
    # the axiom's own cells may not pair with themselves in a second appearance
    for h in hits:
        item = first.unified[h.d_pos]
        assert (target.pattern_id, h.t_pos) not in item.origins


def test_per_symbol_hit_cap():
    driving, target, model, _ = make_pair(["a"] * 100, ["a"] * 100)
    hits = find_hits(driving, target, MatchParams(max_hits_per_symbol=64))
    assert len(hits) == 64


def test_simple_bridge_chain():
    driving, target, model, _ = make_pair(["a", "c"], ["a", "b", "c"])
    hits = find_hits(driving, target, MatchParams())
    chains = k_best_chains(hits, MatchParams(), model)
    assert [(p.d_pos, p.t_pos) for p in chains[0].points] == [(0, 0), (1, 2)]


def test_no_hits_empty():
    driving, target, model, _ = make_pair(["a"], ["b"])
    assert find_hits(driving, target, MatchParams()) == []
    assert k_best_chains([], MatchParams(), model) == []


def test_misspelled_word_chain_matches_oracle():
    driving, target, model, _ = make_pair(
        "i m f o r m t i x o n".split(), "i n f o r m a t i o n".split()
    )
    hits = find_hits(driving, target, MatchParams())
    chains = k_best_chains(hits, MatchParams(beam=len(hits)), model)
    want = oracle_best_score(hits, model)
    assert abs(chains[0].score - want) < 1e-9
    # frozen from the enumeration oracle: the maximal-gain chain has 9 points
    assert len(chains[0].points) == 9


def test_oracle_agrees_with_enumeration_on_tiny_cases():
    rng = random.Random(5)
    for _ in range(40):
        n = rng.randint(1, 5)
        m = rng.randint(1, 5)
        alphabet = ["x", "y"]
        driving, target, model, _ = make_pair(
            [rng.choice(alphabet) for _ in range(n)],
            [rng.choice(alphabet) for _ in range(m)],
        )
        hits = find_hits(driving, target, MatchParams())
        if not hits:
            continue
        assert abs(oracle_best_score(hits, model) - enumerate_best_score(hits, model)) < 1e-9


def test_chains_strictly_monotone_random():
    rng = random.Random(9)
    for _ in range(60):
        alphabet = ["a", "b", "c", "d"][: rng.randint(2, 4)]
        driving, target, model, _ = make_pair(
            [rng.choice(alphabet) for _ in range(rng.randint(1, 10))],
            [rng.choice(alphabet) for _ in range(rng.randint(1, 10))],
        )
        hits = find_hits(driving, target, MatchParams())
        for chain in k_best_chains(hits, MatchParams(), model):
            for a, b in zip(chain.points, chain.points[1:]):
                assert a.d_pos < b.d_pos and a.t_pos < b.t_pos


def test_thoroughness_monotone():
    rng = random.Random(3)
    for _ in range(40):
        alphabet = ["a", "b", "c"]
        driving, target, model, _ = make_pair(
            [rng.choice(alphabet) for _ in range(10)],
            [rng.choice(alphabet) for _ in range(10)],
        )
        hits = find_hits(driving, target, MatchParams())
        if not hits:
            continue
        scores = []
        for beam in (1, 2, 5, len(hits)):
            chains = k_best_chains(hits, MatchParams(beam=beam), model)
            scores.append(chains[0].score)
        assert all(a <= b + 1e-12 for a, b in zip(scores, scores[1:]))


def test_arbitrary_gap_bridging():
    n = 10_000
    filler = ["x%d" % i for i in range(n)]
    driving, target, model, _ = make_pair(["a", "z"], ["a"] + filler + ["z"])
    hits = find_hits(driving, target, MatchParams())
    chains = k_best_chains(hits, MatchParams(beam=len(hits)), model)
    assert [(p.d_pos, p.t_pos) for p in chains[0].points] == [(0, 0), (1, n + 1)]


def test_match_pair_disjoint_alphabets():
    driving, target, model, _ = make_pair(["a", "b"], ["c", "d"])
    assert match_pair(driving, target, MatchParams(), model) == []
