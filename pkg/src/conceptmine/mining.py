"""End-to-end mining pipeline: preprocess, run an engine, restore original ids.

Preprocessing drops originally-empty rows and empty/infrequent attributes.
Both removals can only affect the two boundary concepts - the empty intent
(whose support must count the dropped empty rows) and, at min_support 0, the
full intent (which must span every original attribute) - so the pipeline
patches exactly those two after the engine run.  Everything in between maps
1:1 through the attribute remap and object merge.
"""

from __future__ import annotations

import hashlib
from typing import Iterable

from .cbo import EnumerationStats, cbo_enumerate
from .context import AttributeRemap, FormalContext, ObjectMerge, compose_remaps, preprocess
from .derive import Concept, enumerate_naive
from .fptree import DEFAULT_DENSE_WIDTH, lcm3_enumerate
from .lcm import lcm2_enumerate

ALGORITHMS = ("naive", "cbo", "lcm2", "lcm3")


def mine_concepts(
    ctx: FormalContext,
    min_support: int = 1,
    *,
    algorithm: str = "lcm2",
    pruning: bool = True,
    dense_width: int | float | None = DEFAULT_DENSE_WIDTH,
    naive_cap: int = 24,
    sort_attributes: bool = True,
    sort_objects: bool = False,
    merge_rows: bool = True,
    with_extents: bool = False,
    base_remap: AttributeRemap | None = None,
    stats: EnumerationStats | None = None,
    check_pruning: bool = False,
    node_inspector=None,
    reuse_arena: bool = True,
) -> list[Concept]:
    """Mine all closed attribute sets of ``ctx`` with weighted support >= min_support.

    Returns concepts with intents in the caller's original attribute ids
    (through ``base_remap`` when the context itself was densified at parse
    time) and extents, when requested, as original object indices.
    """
    if algorithm not in ALGORITHMS:
        raise ValueError(f"unknown algorithm {algorithm!r}; expected one of {ALGORITHMS}")
    if min_support < 0:
        raise ValueError("min_support must be non-negative")
    stats = stats if stats is not None else EnumerationStats()

    pre, remap, merge = preprocess(
        ctx,
        min_support,
        sort_attributes=sort_attributes,
        sort_objects=sort_objects,
        merge_rows=merge_rows,
    )
    full_remap = compose_remaps(base_remap, remap) if base_remap is not None else remap
    total_weight = ctx.total_weight
    dropped_weight = total_weight - pre.total_weight

    if algorithm == "naive":
        raw = enumerate_naive(
            pre, min_support, max_attributes=naive_cap, with_extents=with_extents, stats=stats
        )
        concepts = [_translate(c, full_remap, merge, with_extents) for c in raw]
    elif algorithm == "cbo":
        raw = cbo_enumerate(pre, min_support, with_extents=with_extents, stats=stats)
        concepts = [_translate(c, full_remap, merge, with_extents) for c in raw]
    elif algorithm == "lcm2":
        concepts = [
            _map_extent(c, merge, with_extents)
            for c in lcm2_enumerate(
                pre,
                min_support,
                pruning=pruning,
                stats=stats,
                remap=full_remap,
                with_extents=with_extents,
                check_pruning=check_pruning,
                node_inspector=node_inspector,
                reuse_arena=reuse_arena,
            )
        ]
    else:
        concepts = [
            _map_extent(c, merge, with_extents)
            for c in lcm3_enumerate(
                pre,
                min_support,
                dense_width,
                pruning=pruning,
                stats=stats,
                remap=full_remap,
                with_extents=with_extents,
                check_pruning=check_pruning,
                node_inspector=node_inspector,
                reuse_arena=reuse_arena,
            )
        ]

    if dropped_weight > 0 and total_weight >= min_support:
        # Empty rows were dropped, so the empty intent's support lost their
        # weight (and the concept disappears entirely when nothing else closes
        # to the empty set).
        all_objects = tuple(range(ctx.num_objects)) if with_extents else None
        for at, c in enumerate(concepts):
            if c.intent == ():
                concepts[at] = Concept((), total_weight, all_objects)
                break
        else:
            concepts.append(Concept((), total_weight, all_objects))

    if min_support == 0 and pre.num_attributes < ctx.num_attributes:
        # Some attribute was dropped, so no object can carry the full original
        # attribute set: the bottom concept is the whole of it with support 0.
        if base_remap is not None:
            bottom = tuple(sorted(base_remap.new_to_old))
        else:
            bottom = tuple(range(1, ctx.num_attributes + 1))
        concepts = [c for c in concepts if c.support > 0]
        concepts.append(Concept(bottom, 0, () if with_extents else None))

    return concepts


def _translate(
    c: Concept, remap: AttributeRemap, merge: ObjectMerge, with_extents: bool
) -> Concept:
    extent = merge.to_original(c.extent) if with_extents and c.extent is not None else None
    return Concept(remap.to_original(c.intent), c.support, extent)


def _map_extent(c: Concept, merge: ObjectMerge, with_extents: bool) -> Concept:
    if not with_extents or c.extent is None:
        return c
    return Concept(c.intent, c.support, merge.to_original(c.extent))


def concept_digest(concepts: Iterable[Concept]) -> str:
    """Order-independent hash of a concept set (intents plus supports)."""
    lines = sorted(f"{' '.join(map(str, c.intent))}:{c.support}" for c in concepts)
    digest = hashlib.sha256()
    for line in lines:
        digest.update(line.encode())
        digest.update(b"\n")
    return digest.hexdigest()
