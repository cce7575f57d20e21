"""Concept lattices: enumeration, Hasse diagram, reduced labels, statistics."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from ._bits import iter_bits
from .context import FormalContext, closure_intent, derive_extent
from .errors import IncompleteConceptSetError, OracleLimitError

__all__ = [
    "FormalConcept",
    "ConceptLabel",
    "ConceptStats",
    "ConceptLattice",
    "enumerate_concepts",
    "brute_force_concepts",
    "build_lattice",
    "object_concept",
    "attribute_concept",
    "concept_stats",
    "assemble_lattice",
]

BRUTE_FORCE_LIMIT = 20


@dataclass(frozen=True)
class FormalConcept:
    extent: frozenset
    intent: frozenset


@dataclass(frozen=True)
class ConceptLabel:
    own_objects: frozenset = frozenset()
    own_attributes: frozenset = frozenset()


@dataclass(frozen=True)
class ConceptStats:
    extent_count: int
    extent_percent: Fraction


def _canonical_key(extent_bits: int):
    # larger extents first, then lexicographic on object positions
    return (-extent_bits.bit_count(), tuple(iter_bits(extent_bits)))


def _cbo(ctx: FormalContext) -> list[tuple[int, int]]:
    """Close-by-One over the attribute order; yields (extent, intent) bitsets.

    A branch that adds attribute ``j`` is kept only if the closure adds no
    attribute below ``j`` that was absent before, so each concept is
    generated exactly once.
    """
    cols = ctx.columns
    m = len(cols)
    everything = ctx.all_attributes
    top_ext = ctx.all_objects
    out = []
    stack = [(top_ext, ctx.intent_bits(top_ext), 0)]
    while stack:
        extent, intent, start = stack.pop()
        out.append((extent, intent))
        for j in range(start, m):
            bit = 1 << j
            if intent & bit:
                continue
            sub = extent & cols[j]
            canonical = True
            for k in iter_bits((bit - 1) & ~intent):
                if cols[k] & sub == sub:
                    canonical = False
                    break
            if not canonical:
                continue
            closed = intent | bit
            for k in iter_bits(everything & ~(closed | ((bit << 1) - 1))):
                if cols[k] & sub == sub:
                    closed |= 1 << k
            stack.append((sub, closed, j + 1))
    return out


def _to_concepts(ctx: FormalContext, pairs) -> list[FormalConcept]:
    pairs = sorted(pairs, key=lambda p: _canonical_key(p[0]))
    return [FormalConcept(ctx.object_set(e), ctx.attribute_set(i)) for e, i in pairs]


def enumerate_concepts(ctx: FormalContext) -> list[FormalConcept]:
    """Every formal concept of ``ctx`` exactly once, in canonical order.

    Canonical order is extent size descending, then the extent's object
    positions compared lexicographically. The top concept is always first
    and the bottom concept last.
    """
    return _to_concepts(ctx, _cbo(ctx))


def brute_force_concepts(ctx: FormalContext, limit: int = BRUTE_FORCE_LIMIT) -> list[FormalConcept]:
    """Reference enumeration: close every attribute subset and deduplicate.

    Exponential in the number of attributes; refuses more than ``limit``.
    """
    attrs = ctx.attributes
    if len(attrs) > limit:
        raise OracleLimitError(
            f"brute force limited to {limit} attributes, context has {len(attrs)}"
        )
    seen = {}
    for mask in range(1 << len(attrs)):
        subset = [attrs[j] for j in range(len(attrs)) if mask >> j & 1]
        intent = closure_intent(ctx, subset)
        if intent not in seen:
            seen[intent] = derive_extent(ctx, intent)
    pairs = [(ctx.object_bits(e), ctx.attribute_bits(i)) for i, e in seen.items()]
    return _to_concepts(ctx, pairs)


@dataclass(frozen=True, eq=True)
class ConceptLattice:
    """All concepts of a context with their cover relation.

    ``covers`` holds ``(lower, upper)`` index pairs of the Hasse diagram.
    Index 0 is the top concept; the last index is the bottom concept.
    """

    context: FormalContext
    concepts: tuple
    covers: frozenset
    top_index: int
    bottom_index: int
    labels: tuple
    stats: tuple
    _extents: tuple = field(repr=False, compare=False)
    _intents: tuple = field(repr=False, compare=False)
    _index: dict = field(repr=False, compare=False)
    _upper: tuple = field(repr=False, compare=False, default=())
    _lower: tuple = field(repr=False, compare=False, default=())

    def __len__(self):
        return len(self.concepts)

    def __getitem__(self, i: int) -> FormalConcept:
        return self.concepts[i]

    def index_of_extent(self, extent: Iterable[str]) -> int:
        bits = self.context.object_bits(extent)
        try:
            return self._index[bits]
        except KeyError:
            raise KeyError(f"{sorted(extent)} is not a concept extent") from None

    def upper_covers(self, i: int) -> list[int]:
        return list(self._upper[i])

    def lower_covers(self, i: int) -> list[int]:
        return list(self._lower[i])

    def leq(self, i: int, j: int) -> bool:
        """Concept ``i`` is a sub-concept of (or equal to) concept ``j``."""
        a, b = self._extents[i], self._extents[j]
        return a & b == a

    def extent_bits(self, i: int) -> int:
        return self._extents[i]

    def intent_bits(self, i: int) -> int:
        return self._intents[i]

    def object_concept(self, o: str) -> int:
        ctx = self.context
        row = ctx.rows[ctx.object_position(o)]
        return self._index[ctx.extent_bits(row)]

    def attribute_concept(self, a: str) -> int:
        ctx = self.context
        return self._index[ctx.columns[ctx.attribute_position(a)]]

    def is_object_concept(self, i: int) -> bool:
        return bool(self.labels[i].own_objects)

    def is_attribute_concept(self, i: int) -> bool:
        return bool(self.labels[i].own_attributes)


def build_lattice(
    ctx: FormalContext, concepts: Sequence[FormalConcept] | None = None
) -> ConceptLattice:
    """Assemble the Hasse diagram, labels and stats for ``ctx``.

    ``concepts`` defaults to :func:`enumerate_concepts`. A supplied set is
    checked: every member must be a formal concept and the set must be
    closed under intersection with attribute extents (which, starting
    from the top, reaches every concept).
    """
    if concepts is None:
        pairs = _cbo(ctx)
    else:
        pairs = []
        for c in concepts:
            e, i = ctx.object_bits(c.extent), ctx.attribute_bits(c.intent)
            if ctx.intent_bits(e) != i or ctx.extent_bits(i) != e:
                raise IncompleteConceptSetError(
                    f"({sorted(c.extent)}, {sorted(c.intent)}) is not a formal concept"
                )
            pairs.append((e, i))
    pairs = sorted(set(pairs), key=lambda p: _canonical_key(p[0]))
    extents = tuple(e for e, _ in pairs)
    intents = tuple(i for _, i in pairs)
    index = {e: n for n, e in enumerate(extents)}
    if ctx.all_objects not in index:
        raise IncompleteConceptSetError("top concept missing")

    cols = ctx.columns
    covers = set()
    # lower covers of (A, B): maximal extents among A ∩ col(m), m ∉ B. A candidate
    # X is maximal iff it is produced by exactly |X' \ B| attributes.
    for upper, (extent, intent) in enumerate(pairs):
        produced = Counter(extent & cols[j] for j in iter_bits(ctx.all_attributes & ~intent))
        for sub, count in produced.items():
            lower = index.get(sub)
            if lower is None:
                raise IncompleteConceptSetError(
                    f"concept with extent {sorted(ctx.object_set(sub))} missing"
                )
            if count == (intents[lower] & ~intent).bit_count():
                covers.add((lower, upper))

    own_objects = [set() for _ in pairs]
    own_attrs = [set() for _ in pairs]
    for o, row in zip(ctx.objects, ctx.rows):
        own_objects[index[ctx.extent_bits(row)]].add(o)
    for a, col in zip(ctx.attributes, cols):
        own_attrs[index[col]].add(a)
    labels = tuple(
        ConceptLabel(frozenset(objs), frozenset(atts)) for objs, atts in zip(own_objects, own_attrs)
    )

    total = len(ctx.objects)
    stats = tuple(
        ConceptStats(e.bit_count(), Fraction(100 * e.bit_count(), total) if total else Fraction(0))
        for e in extents
    )
    return assemble_lattice(ctx, pairs, covers, labels, stats)


def assemble_lattice(ctx: FormalContext, pairs, covers, labels, stats) -> ConceptLattice:
    """Wrap precomputed parts; ``pairs`` are (extent, intent) bitsets in canonical order."""
    extents = tuple(e for e, _ in pairs)
    covers = frozenset(covers)
    upper = [[] for _ in pairs]
    lower = [[] for _ in pairs]
    for lo, up in sorted(covers):
        upper[lo].append(up)
        lower[up].append(lo)
    return ConceptLattice(
        context=ctx,
        concepts=tuple(FormalConcept(ctx.object_set(e), ctx.attribute_set(i)) for e, i in pairs),
        covers=covers,
        top_index=0,
        bottom_index=len(pairs) - 1,
        labels=tuple(labels),
        stats=tuple(stats),
        _extents=extents,
        _intents=tuple(i for _, i in pairs),
        _index={e: n for n, e in enumerate(extents)},
        _upper=tuple(map(tuple, upper)),
        _lower=tuple(map(tuple, lower)),
    )


def object_concept(lattice: ConceptLattice, o: str) -> int:
    """Index of the most specific concept whose extent contains ``o``."""
    return lattice.object_concept(o)


def attribute_concept(lattice: ConceptLattice, a: str) -> int:
    """Index of the most general concept whose intent contains ``a``."""
    return lattice.attribute_concept(a)


def concept_stats(lattice: ConceptLattice) -> tuple:
    return lattice.stats
