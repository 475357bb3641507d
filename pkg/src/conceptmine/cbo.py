"""Close-by-One enumeration with the prefix canonicity test.

Each closed set is generated from exactly one parent: after adding attribute i
and closing, the result is kept only when no attribute below i sneaked into
the closure.  Children are explored in ascending attribute order, which gives
reproducible traces; the order does not affect the emitted set.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator

from .context import FormalContext


@dataclass
class EnumerationStats:
    """Traversal counters shared by every engine.

    For CbO and the LCM engines every recursive call either emits a concept or
    fails the canonicity test, so concepts_emitted + canonicity_failures equals
    recursive_calls.
    """

    concepts_emitted: int = 0
    recursive_calls: int = 0
    closure_computations: int = 0
    canonicity_failures: int = 0
    pruning_rule_hits: int = 0
    conditional_dbs_built: int = 0

    def as_dict(self) -> dict[str, int]:
        return {
            "concepts_emitted": self.concepts_emitted,
            "recursive_calls": self.recursive_calls,
            "closure_computations": self.closure_computations,
            "canonicity_failures": self.canonicity_failures,
            "pruning_rule_hits": self.pruning_rule_hits,
            "conditional_dbs_built": self.conditional_dbs_built,
        }


@dataclass(frozen=True)
class CanonicityOutcome:
    passed: bool
    violator: int | None = None


def canonicity_test(B: Iterable[int], D: Iterable[int], i: int) -> CanonicityOutcome:
    """Check D cut below i equals B cut below i; on failure report the smallest intruder.

    B must be a subset of D (D is the closure of B plus the attribute i).
    """
    b = set(B)
    smallest = None
    for a in D:
        if a < i and a not in b and (smallest is None or a < smallest):
            smallest = a
    if smallest is None:
        return CanonicityOutcome(True)
    return CanonicityOutcome(False, smallest)


def cbo_enumerate(
    ctx: FormalContext,
    min_support: int = 0,
    *,
    with_extents: bool = False,
    stats: EnumerationStats | None = None,
) -> Iterator:
    from .derive import Concept, _ids_of  # local import to avoid a cycle

    st = stats if stats is not None else EnumerationStats()
    if ctx.total_weight < min_support:
        return
    n = ctx.num_attributes
    masks = ctx.row_masks
    weights = ctx.weights
    columns = ctx.attribute_extents
    full = (1 << n) - 1

    def generate(extent: list[int], extent_weight: int, B: int, y: int) -> Iterator:
        st.recursive_calls += 1
        st.closure_computations += 1
        D = full
        for x in extent:
            D &= masks[x]
        below = (1 << (y - 1)) - 1 if y else 0  # attributes strictly under y
        if D & below != B & below:
            st.canonicity_failures += 1
            return
        st.concepts_emitted += 1
        yield Concept(_ids_of(D), extent_weight, tuple(extent) if with_extents else None)
        have = set(extent)
        for i in range(y + 1, n + 1):
            if D >> (i - 1) & 1:
                continue
            child: list[int] = []
            child_weight = 0
            for x in columns[i]:
                if x in have:
                    child.append(x)
                    child_weight += weights[x]
            if child_weight < min_support:
                continue
            yield from generate(child, child_weight, D | (1 << (i - 1)), i)

    yield from generate(list(range(ctx.num_objects)), ctx.total_weight, 0, 0)
