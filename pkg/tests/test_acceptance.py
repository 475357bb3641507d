"""Acceptance suite: one test per criterion, each printing a PASS line.

All engines must agree with the exhaustive oracle on a seeded 200-context
corpus, the structural invariants of every data structure must hold, and the
large sparse benchmark must finish with lcm2 at least matching cbo.
Run with ``pytest tests/test_acceptance.py -v -s`` to see the PASS lines.
"""

import random

import pytest

from conceptmine import (
    EnumerationStats,
    FormalContext,
    build_complete_fptree,
    closure,
    down,
    enumerate_naive,
    intent_of_list,
    mine_concepts,
    preprocess,
)
from conceptmine.cli import bench, generate_context

from conftest import K1_CONCEPTS, K1_ROWS, concept_set

SUPPORTS = (0, 1, 2, 3)

ENGINES = [
    ("naive", {}),
    ("cbo", {}),
    ("lcm2 pruning", {"pruning": True}),
    ("lcm2 plain", {"pruning": False}),
    ("lcm3 width 0", {"dense_width": 0}),
    ("lcm3 width 4", {"dense_width": 4}),
    ("lcm3 width inf", {"dense_width": None}),
]


def corpus_context(i: int) -> FormalContext:
    m = 4 + (i * 7) % 27  # up to 30 objects
    n = 2 + (i * 5) % 11  # up to 12 attributes
    density = (0.05, 0.1, 0.25, 0.5)[i % 4]
    return generate_context(1000 + i, m, n, density)


@pytest.fixture(scope="module")
def corpus():
    """200 seeded contexts with the oracle's concept sets per support level."""
    entries = []
    for i in range(200):
        ctx = corpus_context(i)
        full = concept_set(enumerate_naive(ctx, 0))
        oracle = {s: {c for c in full if c[1] >= s} for s in SUPPORTS}
        entries.append((ctx, oracle))
    return entries


def run_engine(ctx, s, name, options):
    algorithm = name.split()[0]
    return concept_set(mine_concepts(ctx, s, algorithm=algorithm, **options))


def test_criterion_1_oracle_equivalence(corpus):
    for idx, (ctx, oracle) in enumerate(corpus):
        for s in SUPPORTS:
            for name, options in ENGINES:
                got = run_engine(ctx, s, name, options)
                assert got == oracle[s], f"context {idx}, min_support {s}, engine {name}"
    print("ACCEPTANCE 1: PASS - naive/cbo/lcm2(on,off)/lcm3(0,4,inf) identical "
          "on 200 contexts x 4 supports")


def test_criterion_2_k1_fixture():
    ctx = FormalContext(K1_ROWS)
    at_two = {((3,), 4), ((1, 3), 2), ((2, 3), 2)}
    for name, options in ENGINES:
        assert run_engine(ctx, 0, name, options) == K1_CONCEPTS, name
        assert run_engine(ctx, 2, name, options) == at_two, name
    print("ACCEPTANCE 2: PASS - K1 yields 6 concepts at support 0 and 3 at support 2 "
          "via every engine")


def test_criterion_3_closure_laws():
    rng = random.Random(20260810)
    cases = 0
    while cases < 10_000:
        ctx = generate_context(
            rng.randrange(1 << 30), rng.randint(1, 24), rng.randint(1, 12), rng.random()
        )
        n = ctx.num_attributes
        for _ in range(50):
            B = tuple(sorted(rng.sample(range(1, n + 1), rng.randint(0, n))))
            D = tuple(sorted(set(B) | set(rng.sample(range(1, n + 1), rng.randint(0, n)))))
            cB = closure(ctx, B)
            assert set(B) <= set(cB), "extensivity"
            assert set(cB) <= set(closure(ctx, D)), "monotony"
            assert closure(ctx, cB) == cB, "idempotency"
            cases += 1
    print(f"ACCEPTANCE 3: PASS - extensivity/monotony/idempotency on {cases} cases")


def test_criterion_4_pruning_soundness_and_effect(corpus):
    strict_somewhere = False
    for idx, (ctx, oracle) in enumerate(corpus):
        for s in SUPPORTS:
            on, off = EnumerationStats(), EnumerationStats()
            with_rules = concept_set(
                mine_concepts(ctx, s, algorithm="lcm2", pruning=True, check_pruning=True, stats=on)
            )
            without = concept_set(
                mine_concepts(ctx, s, algorithm="lcm2", pruning=False, stats=off)
            )
            assert with_rules == without == oracle[s], (idx, s)
            assert on.recursive_calls <= off.recursive_calls, (idx, s)
            if on.recursive_calls < off.recursive_calls:
                strict_somewhere = True
    # seeded fixture where a stored rule provably skips a call
    ctx = FormalContext([[1, 3, 4], [2, 3], [2], [1]])
    on, off = EnumerationStats(), EnumerationStats()
    a = concept_set(mine_concepts(ctx, 0, algorithm="lcm2", pruning=True,
                                  check_pruning=True, stats=on))
    b = concept_set(mine_concepts(ctx, 0, algorithm="lcm2", pruning=False, stats=off))
    assert a == b
    assert on.pruning_rule_hits > 0 and on.recursive_calls < off.recursive_calls
    assert strict_somewhere
    print("ACCEPTANCE 4: PASS - pruning never changes output, never adds calls, "
          "every skip rechecked sound, strict reduction observed")


def test_criterion_5_fptree_invariants():
    checked = 0
    for i in range(100):
        ctx = generate_context(3000 + i, 4 + (i * 3) % 24, 2 + i % 15, (0.4, 0.6, 0.8)[i % 3])
        rows = [r for r in ctx.rows if r]
        if not rows:
            continue
        sub = FormalContext(rows, num_attributes=ctx.num_attributes)
        tree = build_complete_fptree(rows, width=ctx.num_attributes)
        tree.validate()  # includes path_set <= inner on every node
        for a in tree.attributes():
            assert tree.list_weight(a) == sub.attr_cardinality[a]
            intent, support = intent_of_list(tree, a)
            assert intent == closure(sub, (a,))
            assert support == down(sub, (a,)).weighted_size
            checked += 1
    print(f"ACCEPTANCE 5: PASS - weight sums, path/inner containment, and "
          f"intent extraction on {checked} lists of 100 dense contexts")


def test_criterion_6_conditional_database_faithfulness():
    fixtures = [FormalContext(K1_ROWS)] + [corpus_context(i) for i in range(0, 60, 2)]
    nodes = 0
    for ctx in fixtures:
        for algorithm, width in (("lcm2", None), ("lcm3", 6)):
            seen = []
            kwargs = {"dense_width": width} if algorithm == "lcm3" else {}
            mine_concepts(
                ctx, 1, algorithm=algorithm,
                node_inspector=lambda intent, buckets: seen.append((intent, buckets)),
                **kwargs,
            )
            for intent, buckets in seen:
                for attr, weight in buckets.items():
                    assert weight == down(ctx, intent + (attr,)).weighted_size
                    nodes += 1
    print(f"ACCEPTANCE 6: PASS - bucket weights match weighted |A ∩ i↓| at "
          f"{nodes} node/attribute pairs")


def test_criterion_7_preprocessing_losslessness(corpus):
    from conceptmine import lcm2_enumerate

    for idx, (ctx, oracle) in enumerate(corpus):
        for s in (0, 1, 2):
            pre, remap, merge = preprocess(ctx, s)
            engine = list(lcm2_enumerate(pre, s, with_extents=True))
            # oracle property: every emitted concept is a concept of the
            # context it was mined from
            assert concept_set(engine) == concept_set(enumerate_naive(pre, s)), (idx, s)
            # concepts mapped through the remap and merge land in the raw set
            # (only the two boundary concepts are the pipeline's to patch up)
            for c in engine:
                intent = remap.to_original(c.intent)
                if c.support > 0 and intent != ():
                    assert (intent, c.support) in oracle[s], (idx, s)
                    assert merge.to_original(c.extent) == down(ctx, intent).members
            # end to end, the pipeline restores the raw concept set exactly
            assert concept_set(mine_concepts(ctx, s, algorithm="lcm2")) == oracle[s], (idx, s)
    print("ACCEPTANCE 7: PASS - preprocessed mining maps back to the raw "
          "concepts (200 contexts, intents and extents)")


def test_criterion_8_determinism_and_invariance(corpus):
    rng = random.Random(7)
    for idx in range(0, 200, 4):
        ctx, oracle = corpus[idx]
        reference = oracle[1]
        # shuffled rows
        order = list(range(ctx.num_objects))
        rng.shuffle(order)
        shuffled = FormalContext(
            [ctx.rows[x] for x in order], num_attributes=ctx.num_attributes
        )
        assert concept_set(mine_concepts(shuffled, 1)) == reference
        # relabeled attributes, unmapped afterwards
        n = ctx.num_attributes
        perm = list(range(1, n + 1))
        rng.shuffle(perm)
        relabeled = FormalContext(
            [[perm[a - 1] for a in row] for row in ctx.rows], num_attributes=n
        )
        unmapped = {
            (tuple(sorted(perm.index(a) + 1 for a in c.intent)), c.support)
            for c in mine_concepts(relabeled, 1)
        }
        assert unmapped == reference
    # identical seeds: bit-identical contexts and identical stats
    a = generate_context(77, 25, 11, 0.3)
    b = generate_context(77, 25, 11, 0.3)
    assert a.rows == b.rows
    s1, s2 = EnumerationStats(), EnumerationStats()
    r1 = mine_concepts(a, 1, algorithm="lcm2", stats=s1)
    r2 = mine_concepts(b, 1, algorithm="lcm2", stats=s2)
    assert r1 == r2 and s1.as_dict() == s2.as_dict()
    print("ACCEPTANCE 8: PASS - row shuffles and attribute relabelings unmapped "
          "to identical sets; equal seeds give identical contexts and stats")


def test_criterion_9_performance_smoke():
    ctx = generate_context(424242, 50_000, 500, 0.02)
    rows = bench(ctx, None, ["cbo", "lcm2"], 800, repeats=1)
    by_algo = {r["algorithm"]: r for r in rows}
    assert by_algo["cbo"]["concepts"] == by_algo["lcm2"]["concepts"]
    assert by_algo["lcm2"]["wall_ms_median"] <= by_algo["cbo"]["wall_ms_median"]
    print(
        "ACCEPTANCE 9: PASS - 50000x500 @ 2%: "
        f"lcm2 {by_algo['lcm2']['wall_ms_median']:.0f} ms <= "
        f"cbo {by_algo['cbo']['wall_ms_median']:.0f} ms, "
        f"{by_algo['lcm2']['concepts']} concepts"
    )
