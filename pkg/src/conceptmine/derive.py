"""Concept-forming operators and the exhaustive closed-set enumerator.

``up`` maps an object set to the attributes shared by all its rows, ``down``
maps an attribute set to the objects whose rows contain it, and their
composition is the closure operator.  ``enumerate_naive`` walks all 2^n
attribute subsets and keeps the closed ones; it is the deliberately simple
ground truth the fast engines are tested against.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator

from .cbo import EnumerationStats
from .context import FormalContext
from .errors import CapacityError


@dataclass(frozen=True)
class ObjectSet:
    """Ascending object indices plus the sum of their weights."""

    members: tuple[int, ...]
    weighted_size: int

    def __len__(self) -> int:
        return len(self.members)


@dataclass(frozen=True)
class Concept:
    intent: tuple[int, ...]
    support: int
    extent: tuple[int, ...] | None = None


def up(ctx: FormalContext, objects: Iterable[int]) -> tuple[int, ...]:
    """Attributes shared by every object in the set; the full set for no objects."""
    full = (1 << ctx.num_attributes) - 1
    inter = full
    masks = ctx.row_masks
    for x in objects:
        if not 0 <= x < ctx.num_objects:
            raise IndexError(f"object index {x} out of range")
        inter &= masks[x]
        if inter == 0:
            break
    return _ids_of(inter)


def down(ctx: FormalContext, attrs: Iterable[int]) -> ObjectSet:
    """Objects whose rows contain every given attribute; all objects for the empty set."""
    want = 0
    for a in attrs:
        if not 1 <= a <= ctx.num_attributes:
            raise IndexError(f"attribute id {a} out of range")
        want |= 1 << (a - 1)
    members = []
    weight = 0
    for x, mask in enumerate(ctx.row_masks):
        if mask & want == want:
            members.append(x)
            weight += ctx.weights[x]
    return ObjectSet(tuple(members), weight)


def closure(ctx: FormalContext, attrs: Iterable[int]) -> tuple[int, ...]:
    """up(down(attrs)); the full attribute set when the extent is empty."""
    return up(ctx, down(ctx, attrs).members)


def enumerate_naive(
    ctx: FormalContext,
    min_support: int = 0,
    *,
    max_attributes: int = 24,
    with_extents: bool = False,
    stats: EnumerationStats | None = None,
) -> Iterator[Concept]:
    """Visit every attribute subset recursively and emit the closed, frequent ones.

    Refuses contexts wider than ``max_attributes`` (the walk is 2^n).  No
    pruning, no memoization: this is the oracle every other engine must match.
    """
    n = ctx.num_attributes
    if n > max_attributes:
        raise CapacityError(
            f"context has {n} attributes; the exhaustive enumerator is capped at {max_attributes}"
        )
    st = stats if stats is not None else EnumerationStats()
    masks = ctx.row_masks
    weights = ctx.weights

    def visit(subset: int, y: int) -> Iterator[Concept]:
        st.recursive_calls += 1
        st.closure_computations += 1
        closed = (1 << n) - 1  # empty extent closes to the full attribute set
        weight = 0
        extent: list[int] = []
        for x, mask in enumerate(masks):
            if mask & subset == subset:
                closed &= mask
                weight += weights[x]
                if with_extents:
                    extent.append(x)
        if closed == subset and weight >= min_support:
            st.concepts_emitted += 1
            yield Concept(_ids_of(subset), weight, tuple(extent) if with_extents else None)
        for i in range(y + 1, n + 1):
            yield from visit(subset | (1 << (i - 1)), i)

    yield from visit(0, 0)


def _ids_of(mask: int) -> tuple[int, ...]:
    ids = []
    a = 1
    while mask:
        if mask & 1:
            ids.append(a)
        mask >>= 1
        a += 1
    return tuple(ids)
