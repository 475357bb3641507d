"""The LCM2 engine: occurrence deliver, conditional databases, and rule pruning.

The recursion follows the same canonical generation tree as Close-by-One, but
closures and canonicity are decided from attribute frequencies: within the
current extent, an attribute belongs to the closure exactly when its weighted
frequency equals the extent weight.  Each node projects its data into a
conditional database - rows restricted to the extent, constant and infrequent
attributes dropped, attributes below the anchor kept only as interior
intersections of merged rows - and fills all child extents (buckets) in one
pass over that database.  Children are expanded right to left so bucket
storage can be reused across finished subtrees.

Pruning reuses failed canonicity tests: when descending into attribute i
forced some earlier attribute j into the closure, the rule "i adds j" skips
the closure for i again anywhere below the current node until j itself is
descended into or the node is left.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, Sequence

from .cbo import EnumerationStats
from .context import AttributeRemap, FormalContext
from .errors import PruningSoundnessError

# Below these sizes the conditional database is kept unmerged; splitting and
# merging such small row sets costs more than it saves.
SMALL_DB_ROWS = 6
SMALL_DB_ATTRS = 2


@dataclass
class ConditionalDatabase:
    """An extent-restricted, attribute-reduced projection of the context.

    Rows are split at the anchor: the suffix part holds live attributes above
    it (candidates for deeper recursion), the prefix part holds attributes
    below it.  When rows identical on the suffix are merged, the prefix part
    becomes the intersection of the merged originals (the interior
    intersection), which is exactly what later canonicity checks need.
    """

    anchor: int
    prefix_attrs: tuple[int, ...]
    suffix_attrs: tuple[int, ...]
    prefix_rows: list[Sequence[int]]
    suffix_rows: list[Sequence[int]]
    weights: list[int]
    extent_weight: int
    origins: list[Sequence[int]] | None = None  # context row indices, when extents are wanted

    @property
    def num_rows(self) -> int:
        return len(self.suffix_rows)

    def validate(self) -> None:
        counts: dict[int, int] = {}
        for prefix, suffix, w in zip(self.prefix_rows, self.suffix_rows, self.weights):
            assert w >= 1
            for a in prefix:
                assert a < self.anchor
                counts[a] = counts.get(a, 0) + w
            for a in suffix:
                assert a > self.anchor
                counts[a] = counts.get(a, 0) + w
        assert sum(self.weights) == self.extent_weight
        for a in self.suffix_attrs:
            assert 0 < counts.get(a, 0) < self.extent_weight, f"suffix attribute {a} full or empty"


class Bucket:
    """One delivered attribute extent: row indices into the database plus their weight."""

    __slots__ = ("rows", "weight")

    def __init__(self):
        self.rows: list[int] = []
        self.weight = 0

    def reset(self) -> None:
        self.rows.clear()
        self.weight = 0


class BucketArena:
    """Reusable bucket storage, keyed by attribute.

    With the right-to-left sweep, a subtree only ever delivers into buckets of
    attributes above its own anchor, all of which belong to subtrees that are
    already finished - so one arena per enumeration run is safe.
    """

    def __init__(self):
        self._buckets: dict[int, Bucket] = {}

    def acquire(self, attr: int) -> Bucket:
        bucket = self._buckets.get(attr)
        if bucket is None:
            bucket = self._buckets[attr] = Bucket()
        else:
            bucket.reset()
        return bucket


class Buckets:
    """The per-attribute extents produced by one occurrence-deliver pass."""

    def __init__(self, entries: dict[int, Bucket]):
        self._entries = entries

    def attributes(self) -> list[int]:
        return sorted(self._entries)

    def rows(self, attr: int) -> list[int]:
        return self._entries[attr].rows

    def weight(self, attr: int) -> int:
        return self._entries[attr].weight


def occurrence_deliver(
    db: ConditionalDatabase,
    targets: Iterable[int] | None = None,
    arena: BucketArena | None = None,
) -> Buckets:
    """Fill one bucket per target attribute in a single traversal of the rows.

    ``targets`` defaults to all suffix attributes.  Buckets come from the
    arena, overwriting storage left behind by already-finalized attributes.
    """
    if arena is None:
        arena = BucketArena()
    if targets is None:
        target_list: Iterable[int] = db.suffix_attrs
        wanted = None
    else:
        target_list = sorted(targets)
        wanted = set(target_list)
    entries = {a: arena.acquire(a) for a in target_list}
    weights = db.weights
    for idx, row in enumerate(db.suffix_rows):
        w = weights[idx]
        for a in row:
            if wanted is None or a in wanted:
                bucket = entries[a]
                bucket.rows.append(idx)
                bucket.weight += w
    return Buckets(entries)


def frequencies(
    db: ConditionalDatabase, extent: Iterable[int] | None = None
) -> tuple[dict[int, int], int]:
    """Weighted frequency of every live attribute (prefix and suffix) plus the extent weight.

    One traversal, restricted to ``extent`` row indices when given.
    """
    counts: dict[int, int] = {}
    weight = 0
    indices = range(db.num_rows) if extent is None else extent
    weights = db.weights
    prefix_rows = db.prefix_rows
    suffix_rows = db.suffix_rows
    for idx in indices:
        w = weights[idx]
        weight += w
        for a in prefix_rows[idx]:
            counts[a] = counts.get(a, 0) + w
        for a in suffix_rows[idx]:
            counts[a] = counts.get(a, 0) + w
    return counts, weight


def create_conditional_db(
    db: ConditionalDatabase,
    extent: Iterable[int],
    live: Iterable[int],
    anchor: int,
    min_support: int = 0,
    *,
    counts: dict[int, int] | None = None,
    small_db_rows: int = SMALL_DB_ROWS,
    small_db_attrs: int = SMALL_DB_ATTRS,
) -> ConditionalDatabase:
    """Project ``db`` onto an extent for recursion below ``anchor``.

    Full, empty, and infrequent attributes are dropped; live attributes below
    the anchor move into the prefix; rows identical on the suffix are merged
    with summed weights and intersected prefixes.  Merging is skipped when the
    restricted database is small (fewer than ``small_db_rows`` rows or fewer
    than ``small_db_attrs`` suffix attributes).
    """
    extent = list(extent)
    if counts is None:
        counts, extent_weight = frequencies(db, extent)
    else:
        extent_weight = sum(db.weights[idx] for idx in extent)
    threshold = max(1, min_support)
    keep_suffix = tuple(
        a for a in sorted(live) if a > anchor and threshold <= counts.get(a, 0) < extent_weight
    )
    keep_prefix_set = {
        a for a in live if a < anchor and threshold <= counts.get(a, 0) < extent_weight
    }
    suffix_set = set(keep_suffix)

    rows_prefix: list[Sequence[int]] = []
    rows_suffix: list[Sequence[int]] = []
    weights: list[int] = []
    origins: list[Sequence[int]] | None = [] if db.origins is not None else None
    for idx in extent:
        old_prefix = db.prefix_rows[idx]
        old_suffix = db.suffix_rows[idx]
        prefix = [a for a in old_prefix if a in keep_prefix_set]
        suffix = []
        for a in old_suffix:
            if a in suffix_set:
                suffix.append(a)
            elif a < anchor and a in keep_prefix_set:
                prefix.append(a)
        rows_prefix.append(prefix)
        rows_suffix.append(suffix)
        weights.append(db.weights[idx])
        if origins is not None:
            origins.append(db.origins[idx])

    merge = len(rows_suffix) >= small_db_rows and len(keep_suffix) >= small_db_attrs
    if merge:
        index_of: dict[tuple[int, ...], int] = {}
        m_prefix: list[Sequence[int]] = []
        m_suffix: list[Sequence[int]] = []
        m_weights: list[int] = []
        m_origins: list[list[int]] | None = [] if origins is not None else None
        for at, suffix in enumerate(rows_suffix):
            key = tuple(suffix)
            pos = index_of.get(key)
            if pos is None:
                index_of[key] = len(m_suffix)
                m_suffix.append(suffix)
                m_prefix.append(rows_prefix[at])
                m_weights.append(weights[at])
                if m_origins is not None:
                    m_origins.append(list(origins[at]))
            else:
                m_weights[pos] += weights[at]
                m_prefix[pos] = _intersect_sorted(m_prefix[pos], rows_prefix[at])
                if m_origins is not None:
                    m_origins[pos].extend(origins[at])
        rows_prefix, rows_suffix, weights = m_prefix, m_suffix, m_weights
        origins = m_origins

    live_prefix = sorted({a for row in rows_prefix for a in row})
    return ConditionalDatabase(
        anchor=anchor,
        prefix_attrs=tuple(live_prefix),
        suffix_attrs=keep_suffix,
        prefix_rows=rows_prefix,
        suffix_rows=rows_suffix,
        weights=weights,
        extent_weight=extent_weight,
        origins=origins,
    )


def _intersect_sorted(a: Sequence[int], b: Sequence[int]) -> list[int]:
    out = []
    i = j = 0
    while i < len(a) and j < len(b):
        if a[i] == b[j]:
            out.append(a[i])
            i += 1
            j += 1
        elif a[i] < b[j]:
            i += 1
        else:
            j += 1
    return out


class _Rule:
    __slots__ = ("left", "right", "alive")

    def __init__(self, left: int, right: int):
        self.left = left
        self.right = right
        self.alive = True


class PruneRuleStore:
    """Stack of "i adds j" rules with per-call frames.

    Rules die in two ways: the whole frame is popped when its call returns, or
    a rule is tombstoned early when some call descends with its right side as
    the anchor (the right side is then inside the closed set, so the recorded
    failure no longer applies).
    """

    def __init__(self):
        self._rules: list[_Rule] = []
        self._frames: list[int] = []
        self._left_alive: dict[int, int] = {}
        self._by_right: dict[int, list[_Rule]] = {}

    def __len__(self) -> int:
        return sum(1 for r in self._rules if r.alive)

    def push_frame(self) -> None:
        self._frames.append(len(self._rules))

    def pop_frame(self) -> None:
        mark = self._frames.pop()
        for rule in self._rules[mark:]:
            if rule.alive:
                rule.alive = False
                self._decrement(rule.left)
        del self._rules[mark:]

    def record_failure(self, left: int, right: int) -> None:
        if right >= left:
            raise ValueError("a rule's right side must be below its left side")
        rule = _Rule(left, right)
        self._rules.append(rule)
        self._left_alive[left] = self._left_alive.get(left, 0) + 1
        self._by_right.setdefault(right, []).append(rule)

    def remove_rules_by_right_side(self, right: int) -> None:
        for rule in self._by_right.pop(right, ()):
            if rule.alive:
                rule.alive = False
                self._decrement(rule.left)

    def should_skip(self, attr: int) -> bool:
        return self._left_alive.get(attr, 0) > 0

    def _decrement(self, left: int) -> None:
        remaining = self._left_alive[left] - 1
        if remaining:
            self._left_alive[left] = remaining
        else:
            del self._left_alive[left]


def root_database(ctx: FormalContext, with_origins: bool = False) -> ConditionalDatabase:
    """Wrap a context as the anchor-0 conditional database (rows are shared, not copied)."""
    live = tuple(a for a in range(1, ctx.num_attributes + 1) if ctx.attr_cardinality[a] > 0)
    empty: tuple[int, ...] = ()
    return ConditionalDatabase(
        anchor=0,
        prefix_attrs=(),
        suffix_attrs=live,
        prefix_rows=[empty] * ctx.num_objects,
        suffix_rows=ctx.rows,
        weights=ctx.weights,
        extent_weight=ctx.total_weight,
        origins=[(x,) for x in range(ctx.num_objects)] if with_origins else None,
    )


class _Runner:
    """State for one enumeration run: options, counters, rule store, bucket arena."""

    def __init__(
        self,
        ctx: FormalContext,
        min_support: int,
        *,
        pruning: bool,
        stats: EnumerationStats,
        remap: AttributeRemap | None,
        with_extents: bool,
        check_pruning: bool,
        node_inspector: Callable | None,
        reuse_arena: bool,
        small_db_rows: int,
        small_db_attrs: int,
        fp_engine=None,
    ):
        self.ctx = ctx
        self.min_support = min_support
        self.min_weight = max(1, min_support)
        self.stats = stats
        self.remap = remap
        self.with_extents = with_extents
        self.check_pruning = check_pruning
        self.node_inspector = node_inspector
        self.rules = PruneRuleStore() if pruning else None
        self.arena = BucketArena() if reuse_arena else None
        self.small_db_rows = small_db_rows
        self.small_db_attrs = small_db_attrs
        self.fp_engine = fp_engine

    def run(self) -> Iterator:
        from .derive import Concept  # avoid import cycle

        st = self.stats
        ctx = self.ctx
        if ctx.total_weight < self.min_support:
            return
        db = root_database(ctx, with_origins=self.with_extents)
        violator = yield from self._generate(db, range(db.num_rows), (), 0)
        assert violator == 0  # the root cannot fail the canonicity test
        if self.rules is not None:
            assert len(self.rules) == 0, "rule store not empty after the root call"
        if self.min_support == 0 and ctx.num_attributes > 0:
            n = ctx.num_attributes
            if not any(len(row) == n for row in ctx.rows):
                # No object carries every attribute, so the full intent closes the
                # lattice with an empty extent; counted as one (virtual) visit.
                st.recursive_calls += 1
                st.concepts_emitted += 1
                yield Concept(
                    self._original(range(1, n + 1)),
                    0,
                    () if self.with_extents else None,
                )

    def _generate(self, db: ConditionalDatabase, extent, closed: tuple[int, ...], anchor: int):
        st = self.stats
        st.recursive_calls += 1
        counts, extent_weight = frequencies(db, extent)
        st.closure_computations += 1
        live = sorted(counts)
        if self.rules is not None:
            self.rules.remove_rules_by_right_side(anchor)
        for a in live:
            if a >= anchor:
                break
            if counts[a] == extent_weight:
                st.canonicity_failures += 1
                return a
        closed = _merge_into(closed, (a for a in live if a > anchor and counts[a] == extent_weight))
        st.concepts_emitted += 1
        yield self._emit(closed, extent_weight, db, extent)

        child_db = create_conditional_db(
            db,
            extent,
            live,
            anchor,
            self.min_weight,
            counts=counts,
            small_db_rows=self.small_db_rows,
            small_db_attrs=self.small_db_attrs,
        )
        st.conditional_dbs_built += 1
        if not child_db.suffix_attrs:
            return 0
        if self.fp_engine is not None and self.fp_engine.accepts(child_db):
            yield from self.fp_engine.mine(child_db, closed, self)
            return 0
        buckets = occurrence_deliver(child_db, None, self.arena)
        if self.node_inspector is not None:
            self.node_inspector(
                self._original(closed),
                {self._original_id(a): buckets.weight(a) for a in child_db.suffix_attrs},
            )
        if self.rules is not None:
            self.rules.push_frame()
        for a in reversed(child_db.suffix_attrs):
            if self.rules is not None and self.rules.should_skip(a):
                st.pruning_rule_hits += 1
                if self.check_pruning:
                    self._assert_skip_sound(closed, a)
                continue
            violator = yield from self._generate(
                child_db, buckets.rows(a), _insert(closed, a), a
            )
            if violator and self.rules is not None:
                self.rules.record_failure(a, violator)
        if self.rules is not None:
            self.rules.pop_frame()
        return 0

    def _emit(self, closed: tuple[int, ...], weight: int, db: ConditionalDatabase, extent):
        from .derive import Concept

        extent_ids = None
        if self.with_extents:
            if db.origins is not None:
                rows: list[int] = []
                for idx in extent:
                    rows.extend(db.origins[idx])
                extent_ids = tuple(sorted(rows))
            else:
                extent_ids = self._scan_extent(closed)
        return Concept(self._original(closed), weight, extent_ids)

    def _emit_intent(self, closed: tuple[int, ...], weight: int):
        # Emission path for the FP-tree engine, whose nodes carry no row origins.
        from .derive import Concept

        extent_ids = self._scan_extent(closed) if self.with_extents else None
        return Concept(self._original(closed), weight, extent_ids)

    def _scan_extent(self, closed: tuple[int, ...]) -> tuple[int, ...]:
        want = 0
        for a in closed:
            want |= 1 << (a - 1)
        return tuple(
            x for x, mask in enumerate(self.ctx.row_masks) if mask & want == want
        )

    def _original(self, ids: Iterable[int]) -> tuple[int, ...]:
        if self.remap is None:
            return tuple(ids)
        return self.remap.to_original(ids)

    def _original_id(self, a: int) -> int:
        return a if self.remap is None else self.remap.original_of(a)

    def _assert_skip_sound(self, closed: tuple[int, ...], attr: int) -> None:
        from .derive import closure as derive_closure

        result = derive_closure(self.ctx, closed + (attr,))
        in_closed = set(closed)
        if not any(a < attr and a not in in_closed for a in result):
            raise PruningSoundnessError(
                f"rule store skipped attribute {attr} under {closed}, "
                f"but its closure {result} passes the canonicity test"
            )


def _merge_into(closed: tuple[int, ...], extra: Iterable[int]) -> tuple[int, ...]:
    extra = tuple(extra)
    if not extra:
        return closed
    return tuple(sorted(closed + extra))


def _insert(closed: tuple[int, ...], a: int) -> tuple[int, ...]:
    return tuple(sorted(closed + (a,)))


def lcm2_enumerate(
    ctx: FormalContext,
    min_support: int = 0,
    *,
    pruning: bool = True,
    stats: EnumerationStats | None = None,
    remap: AttributeRemap | None = None,
    with_extents: bool = False,
    check_pruning: bool = False,
    node_inspector: Callable | None = None,
    reuse_arena: bool = True,
    small_db_rows: int = SMALL_DB_ROWS,
    small_db_attrs: int = SMALL_DB_ATTRS,
) -> Iterator:
    """Enumerate frequent closed attribute sets of a preprocessed context.

    Yields one Concept per closed set with weighted support >= min_support,
    intents translated through ``remap`` when given.  ``check_pruning``
    recomputes the closure for every rule-store skip and raises if the skip
    was unsound (slow; verification only).  ``node_inspector`` is called per
    inner node with the intent (original ids) and the delivered bucket weights.
    """
    runner = _Runner(
        ctx,
        min_support,
        pruning=pruning,
        stats=stats if stats is not None else EnumerationStats(),
        remap=remap,
        with_extents=with_extents,
        check_pruning=check_pruning,
        node_inspector=node_inspector,
        reuse_arena=reuse_arena,
        small_db_rows=small_db_rows,
        small_db_attrs=small_db_attrs,
    )
    yield from runner.run()
