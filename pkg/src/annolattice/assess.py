"""Assessment findings read off a concept lattice.

Four kinds of evidence for domain experts:

* ``unused`` -- ontology concepts no note carries (they sink to the bottom
  concept);
* ``merged_group`` -- concepts tagging exactly the same notes, so they
  share one attribute concept;
* ``emergent_combination`` -- populated concepts that belong to no single
  ontology concept, i.e. combinations the annotators invented;
* ``isolation`` -- notes whose whole intent is one concept and its
  ancestors.

Counts for emergent combinations and isolation are *exact-usage* counts:
the notes whose closed tag set is precisely that combination. The full
concept extent is kept in ``detail``.
"""

from __future__ import annotations

import enum
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from .context import ActivityLog, FormalContext, Selector
from .errors import UnknownIdError
from .lattice import ConceptLattice
from .ontology import Taxonomy, up_closure

__all__ = [
    "FindingKind",
    "Finding",
    "AssessmentReport",
    "unused_concepts",
    "merged_groups",
    "emergent_combinations",
    "isolation_usage",
    "annotator_breakdown",
    "single_annotator_concepts",
    "build_report",
]


class FindingKind(str, enum.Enum):
    UNUSED = "unused"
    MERGED_GROUP = "merged_group"
    EMERGENT_COMBINATION = "emergent_combination"
    ISOLATION = "isolation"


_KIND_RANK = {k: n for n, k in enumerate(FindingKind)}


@dataclass(frozen=True)
class Finding:
    kind: FindingKind
    concepts: tuple
    supporting_extent: tuple
    count: int
    percent: Fraction
    detail: dict = field(default_factory=dict, hash=False)


def _percent(count: int, total: int) -> Fraction:
    return Fraction(100 * count, total) if total else Fraction(0)


def _attr_order(ctx: FormalContext, attrs) -> tuple:
    return tuple(ctx.sorted_attributes(attrs))


def _related(t: Taxonomy, a: str, b: str) -> bool:
    return a in t and b in t and t.related(a, b)


def unused_concepts(ctx: FormalContext) -> frozenset:
    """Attributes whose extent is empty."""
    return frozenset(a for a, col in zip(ctx.attributes, ctx.columns) if not col)


def _unused_findings(ctx: FormalContext, t: Taxonomy) -> list[Finding]:
    out = []
    for a in _attr_order(ctx, unused_concepts(ctx)):
        kind = t[a].kind.value if a in t else None
        out.append(Finding(FindingKind.UNUSED, (a,), (), 0, Fraction(0), {"concept_kind": kind}))
    return out


def merged_groups(
    lattice: ConceptLattice, t: Taxonomy, include_related: bool = True
) -> list[Finding]:
    """Groups of two or more attributes sharing a non-empty attribute concept.

    With ``include_related=False`` groups whose members are all linked by
    is-a are dropped: taxonomy closure alone explains them (a category with
    a single used type).
    """
    ctx = lattice.context
    total = len(ctx.objects)
    out = []
    for i, label in enumerate(lattice.labels):
        members = _attr_order(ctx, label.own_attributes)
        extent_bits = lattice.extent_bits(i)
        if len(members) < 2 or not extent_bits:
            continue
        related, unrelated = [], []
        for a, b in combinations(members, 2):
            (related if _related(t, a, b) else unrelated).append([a, b])
        if not unrelated and not include_related:
            continue
        extent = tuple(ctx.sorted_objects(lattice.concepts[i].extent))
        out.append(
            Finding(
                FindingKind.MERGED_GROUP,
                members,
                extent,
                len(extent),
                _percent(len(extent), total),
                {"concept": i, "related_pairs": related, "unrelated_pairs": unrelated},
            )
        )
    return out


def _most_specific(t: Taxonomy, attrs) -> set:
    attrs = set(attrs)
    return {
        a for a in attrs if not any(b != a and b in t and a in t and t.is_ancestor(a, b) for b in attrs)
    }


def _annotator_counts(ctx: FormalContext, notes) -> dict:
    counts = Counter(ctx.provenance[n][0] for n in notes if n in ctx.provenance)
    return dict(sorted(counts.items()))


def emergent_combinations(lattice: ConceptLattice, t: Taxonomy) -> list[Finding]:
    """Non-top concepts with a non-empty extent that are no attribute concept.

    ``concepts`` holds the generators: the most specific members of the
    intent. ``supporting_extent`` holds the notes tagged with exactly this
    combination (the concept's own objects).
    """
    ctx = lattice.context
    total = len(ctx.objects)
    out = []
    for i, label in enumerate(lattice.labels):
        if i == lattice.top_index or not lattice.extent_bits(i) or label.own_attributes:
            continue
        concept = lattice.concepts[i]
        exact = tuple(ctx.sorted_objects(label.own_objects))
        annotators = _annotator_counts(ctx, exact)
        out.append(
            Finding(
                FindingKind.EMERGENT_COMBINATION,
                _attr_order(ctx, _most_specific(t, concept.intent)),
                exact,
                len(exact),
                _percent(len(exact), total),
                {
                    "concept": i,
                    "intent": list(_attr_order(ctx, concept.intent)),
                    "extent": ctx.sorted_objects(concept.extent),
                    "extent_count": len(concept.extent),
                    "annotators": annotators,
                    "single_annotator": len(annotators) == 1,
                },
            )
        )
    return out


def isolation_usage(lattice: ConceptLattice, t: Taxonomy) -> list[Finding]:
    """Per attribute, the notes whose intent is exactly its upward closure."""
    ctx = lattice.context
    total = len(ctx.objects)
    out = []
    for a in ctx.attributes:
        closure = up_closure(t, [a]) if a in t else frozenset([a])
        if not closure <= set(ctx.attributes):
            continue
        target = ctx.attribute_bits(closure)
        notes = tuple(o for o, r in zip(ctx.objects, ctx.rows) if r == target)
        if not notes:
            continue
        out.append(
            Finding(
                FindingKind.ISOLATION,
                (a,),
                notes,
                len(notes),
                _percent(len(notes), total),
                {"closure": list(_attr_order(ctx, closure)), "concept": lattice.attribute_concept(a)},
            )
        )
    return out


def annotator_breakdown(lattice: ConceptLattice, log: ActivityLog) -> dict:
    """``{concept index: {annotator: count}}`` over each concept's extent."""
    out = {}
    for i, c in enumerate(lattice.concepts):
        counts = Counter()
        for note in c.extent:
            counts[log[note].annotator_id] += 1
        out[i] = dict(sorted(counts.items()))
    return out


def single_annotator_concepts(breakdown: dict) -> tuple:
    return tuple(i for i, counts in sorted(breakdown.items()) if len(counts) == 1)


@dataclass(frozen=True)
class AssessmentReport:
    taxonomy_id: str | None
    selector: Selector
    object_total: int
    findings: tuple
    annotator_breakdown: dict = field(hash=False)
    single_annotator: tuple = ()
    labels: dict = field(default_factory=dict, hash=False)
    lattice: ConceptLattice | None = field(default=None, compare=False, repr=False)

    def of_kind(self, kind) -> list[Finding]:
        kind = FindingKind(kind)
        return [f for f in self.findings if f.kind is kind]

    def label(self, cid: str) -> str:
        return self.labels.get(cid, cid)


def build_report(
    lattice: ConceptLattice,
    ctx: FormalContext,
    t: Taxonomy,
    log: ActivityLog,
    sel: Selector | None = None,
) -> AssessmentReport:
    if ctx is not lattice.context and ctx != lattice.context:
        raise ValueError("context does not match the lattice")
    for note in ctx.objects:
        if note not in log:
            raise UnknownIdError(f"note {note!r} is not in the log")
    sel = sel or ctx.selector or Selector.all()
    findings = (
        _unused_findings(ctx, t)
        + merged_groups(lattice, t, include_related=False)
        + emergent_combinations(lattice, t)
        + isolation_usage(lattice, t)
    )
    position = ctx.attribute_index
    findings.sort(
        key=lambda f: (-f.count, _KIND_RANK[f.kind], [position.get(c, -1) for c in f.concepts])
    )
    breakdown = annotator_breakdown(lattice, log)
    return AssessmentReport(
        taxonomy_id=t.id,
        selector=sel,
        object_total=len(ctx.objects),
        findings=tuple(findings),
        annotator_breakdown=breakdown,
        single_annotator=single_annotator_concepts(breakdown),
        labels={cid: t[cid].label for cid in t},
        lattice=lattice,
    )
