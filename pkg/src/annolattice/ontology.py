"""Taxonomical annotation ontologies.

A taxonomy is a set of single concepts arranged in an is-a hierarchy that
allows multiple inheritance. Leaves are *annotation types* (usable as tags),
inner nodes are *categories* (structure only). Values are immutable; every
edit returns a new :class:`Taxonomy`.
"""

from __future__ import annotations

import enum
import json
from collections import defaultdict, deque
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from types import MappingProxyType
from typing import Iterable, Mapping

import networkx as nx

from .errors import (
    DocumentSyntaxError,
    EditError,
    InputError,
    UnknownIdError,
    ValidationError,
)

__all__ = [
    "ConceptKind",
    "OntologyConcept",
    "Taxonomy",
    "TaxonomyEdit",
    "Violation",
    "load_taxonomy",
    "read_taxonomy",
    "dump_taxonomy",
    "validate_taxonomy",
    "up_closure",
    "annotation_types",
    "apply_edit",
]


class ConceptKind(str, enum.Enum):
    CATEGORY = "category"
    ANNOTATION_TYPE = "annotation_type"

    @property
    def document_name(self) -> str:
        return "type" if self is ConceptKind.ANNOTATION_TYPE else "category"

    @classmethod
    def from_document(cls, name: str) -> "ConceptKind":
        if name == "category":
            return cls.CATEGORY
        if name == "type":
            return cls.ANNOTATION_TYPE
        raise InputError(f"unknown concept kind {name!r} (expected 'category' or 'type')")


def _check_concept_id(value) -> str:
    if not isinstance(value, str) or not value:
        raise InputError(f"concept id must be a non-empty string, got {value!r}")
    if value != value.strip():
        raise InputError(f"concept id {value!r} has leading/trailing whitespace")
    return value


@dataclass(frozen=True)
class OntologyConcept:
    id: str
    label: str = ""
    kind: ConceptKind = ConceptKind.ANNOTATION_TYPE
    parents: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        _check_concept_id(self.id)
        if not self.label:
            object.__setattr__(self, "label", self.id)
        if not isinstance(self.kind, ConceptKind):
            object.__setattr__(self, "kind", ConceptKind(self.kind))
        parents = frozenset(self.parents)
        for p in parents:
            _check_concept_id(p)
        object.__setattr__(self, "parents", parents)

    @property
    def is_type(self) -> bool:
        return self.kind is ConceptKind.ANNOTATION_TYPE


class Taxonomy:
    """Immutable DAG of ontology concepts under is-a.

    Construction checks referential integrity only (unique ids, declared
    parents). Acyclicity and the leaf rule are reported by
    :func:`validate_taxonomy`.
    """

    def __init__(self, concepts: Iterable[OntologyConcept] = (), id: str | None = None):
        table: dict[str, OntologyConcept] = {}
        for c in concepts:
            if c.id in table:
                raise InputError(f"duplicate concept id {c.id!r}")
            table[c.id] = c
        for c in table.values():
            missing = sorted(p for p in c.parents if p not in table)
            if missing:
                raise InputError(
                    f"concept {c.id!r} references undeclared parent {missing[0]!r}"
                )
        self._concepts = table
        self.id = id
        children = defaultdict(set)
        for c in table.values():
            for p in c.parents:
                children[p].add(c.id)
        self._children = {k: frozenset(v) for k, v in children.items()}

    # -- mapping-ish access -------------------------------------------------

    @property
    def concepts(self) -> Mapping[str, OntologyConcept]:
        return MappingProxyType(self._concepts)

    def __contains__(self, cid) -> bool:
        return cid in self._concepts

    def __getitem__(self, cid) -> OntologyConcept:
        try:
            return self._concepts[cid]
        except KeyError:
            raise UnknownIdError(f"unknown concept {cid!r}") from None

    def __iter__(self):
        return iter(self._concepts)

    def __len__(self) -> int:
        return len(self._concepts)

    def __eq__(self, other):
        if not isinstance(other, Taxonomy):
            return NotImplemented
        return self._concepts == other._concepts

    def __hash__(self):
        return hash(frozenset(self._concepts.values()))

    def __repr__(self):
        return f"Taxonomy({len(self)} concepts, roots={sorted(self.roots)})"

    # -- structure ----------------------------------------------------------

    @property
    def roots(self) -> frozenset:
        return frozenset(c.id for c in self._concepts.values() if not c.parents)

    def parents(self, cid: str) -> frozenset:
        return self[cid].parents

    def children(self, cid: str) -> frozenset:
        self[cid]
        return self._children.get(cid, frozenset())

    def label(self, cid: str) -> str:
        return self[cid].label

    def edges(self) -> list[tuple[str, str]]:
        """(parent, child) pairs, sorted."""
        return sorted((p, c.id) for c in self._concepts.values() for p in c.parents)

    def graph(self) -> nx.DiGraph:
        g = nx.DiGraph()
        g.add_nodes_from(self._concepts)
        g.add_edges_from(self.edges())
        return g

    @cached_property
    def _ancestor_table(self) -> dict[str, frozenset]:
        table = {}
        for cid in self._concepts:
            seen = set()
            queue = deque(self._concepts[cid].parents)
            while queue:
                p = queue.popleft()
                if p in seen:
                    continue
                seen.add(p)
                queue.extend(self._concepts[p].parents)
            table[cid] = frozenset(seen)
        return table

    def ancestors(self, cid: str) -> frozenset:
        """Strict ancestors of ``cid`` (may contain ``cid`` itself on a cycle)."""
        self[cid]
        return self._ancestor_table[cid]

    def descendants(self, cid: str) -> frozenset:
        self[cid]
        return frozenset(c for c, anc in self._ancestor_table.items() if cid in anc)

    def is_ancestor(self, a: str, b: str) -> bool:
        """True if ``b ⊑ a`` strictly, i.e. ``a`` is reachable upward from ``b``."""
        return a in self.ancestors(b)

    def related(self, a: str, b: str) -> bool:
        return a == b or self.is_ancestor(a, b) or self.is_ancestor(b, a)

    @cached_property
    def is_acyclic(self) -> bool:
        return nx.is_directed_acyclic_graph(self.graph())

    def topological_order(self) -> list[str]:
        """Parents before children, ties broken by id."""
        if not self.is_acyclic:
            raise ValidationError("taxonomy contains a cycle", validate_taxonomy(self))
        return list(nx.lexicographical_topological_sort(self.graph()))

    def replace(self, concepts: Iterable[OntologyConcept]) -> "Taxonomy":
        return Taxonomy(concepts, id=self.id)


@dataclass(frozen=True)
class Violation:
    code: str
    severity: str  # "error" | "warning"
    concepts: tuple
    message: str

    @property
    def is_error(self) -> bool:
        return self.severity == "error"


# -- document format ----------------------------------------------------------

_TOP_KEYS = {"concepts", "id"}
_CONCEPT_KEYS = {"id", "label", "kind", "parents"}


def load_taxonomy(document: str, source: str | None = None) -> Taxonomy:
    """Parse a taxonomy JSON document.

    ``{"concepts": [{"id": ..., "label": ..., "kind": "category"|"type",
    "parents": [...]}, ...]}``. An empty or whitespace-only document is the
    empty taxonomy.
    """
    if not document.strip():
        return Taxonomy()
    try:
        data = json.loads(document)
    except json.JSONDecodeError as exc:
        raise DocumentSyntaxError(exc.msg, exc.lineno, exc.colno, source) from None
    if not isinstance(data, dict):
        raise DocumentSyntaxError("taxonomy document must be a JSON object", 1, 1, source)
    unknown = set(data) - _TOP_KEYS
    if unknown:
        raise InputError(f"unknown taxonomy keys: {sorted(unknown)}")
    entries = data.get("concepts", [])
    if not isinstance(entries, list):
        raise InputError("'concepts' must be a list")
    concepts = []
    for n, entry in enumerate(entries):
        if not isinstance(entry, dict):
            raise InputError(f"concept #{n} is not an object")
        unknown = set(entry) - _CONCEPT_KEYS
        if unknown:
            raise InputError(f"concept #{n}: unknown keys {sorted(unknown)}")
        if "id" not in entry:
            raise InputError(f"concept #{n}: missing 'id'")
        parents = entry.get("parents", [])
        if not isinstance(parents, list):
            raise InputError(f"concept {entry['id']!r}: 'parents' must be a list")
        concepts.append(
            OntologyConcept(
                id=_check_concept_id(entry["id"]),
                label=entry.get("label") or entry["id"],
                kind=ConceptKind.from_document(entry.get("kind", "type")),
                parents=frozenset(parents),
            )
        )
    tid = data.get("id")
    if tid is not None and not isinstance(tid, str):
        raise InputError("taxonomy 'id' must be a string")
    return Taxonomy(concepts, id=tid)


def read_taxonomy(path) -> Taxonomy:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read taxonomy {path}: {exc.strerror}") from None
    t = load_taxonomy(text, source=str(path))
    if t.id is None:
        t.id = path.stem
    return t


def dump_taxonomy(t: Taxonomy) -> str:
    order = t.topological_order() if t.is_acyclic else sorted(t)
    doc = {}
    if t.id is not None:
        doc["id"] = t.id
    doc["concepts"] = [
        {
            "id": c.id,
            "label": c.label,
            "kind": c.kind.document_name,
            "parents": sorted(c.parents),
        }
        for c in (t[cid] for cid in order)
    ]
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


# -- validation ---------------------------------------------------------------


def validate_taxonomy(t: Taxonomy) -> list[Violation]:
    """Collect every structural problem; never raises."""
    out: list[Violation] = []
    g = t.graph()
    for comp in sorted(nx.strongly_connected_components(g), key=lambda s: sorted(s)):
        if len(comp) > 1 or any(g.has_edge(c, c) for c in comp):
            members = tuple(sorted(comp))
            out.append(
                Violation("cycle", "error", members, f"is-a cycle through {', '.join(members)}")
            )
    for cid in sorted(t):
        c = t[cid]
        kids = t.children(cid)
        if c.is_type and kids:
            out.append(
                Violation(
                    "leaf_rule",
                    "error",
                    (cid, *sorted(kids)),
                    f"annotation type {cid!r} has children {sorted(kids)}",
                )
            )
        if not c.is_type and not any(t[d].is_type for d in t.descendants(cid)):
            out.append(
                Violation(
                    "category_without_types",
                    "warning",
                    (cid,),
                    f"category {cid!r} has no annotation type below it",
                )
            )
    by_label = defaultdict(list)
    for cid in t:
        by_label[t[cid].label].append(cid)
    for label, ids in sorted(by_label.items()):
        if len(ids) > 1:
            ids = tuple(sorted(ids))
            out.append(
                Violation(
                    "duplicate_label", "warning", ids, f"label {label!r} shared by {list(ids)}"
                )
            )
    return out


# -- queries ------------------------------------------------------------------


def up_closure(t: Taxonomy, cs: Iterable[str]) -> frozenset:
    """``cs`` together with every is-a ancestor of its members."""
    out = set()
    for cid in cs:
        out.add(cid)
        out |= t.ancestors(cid)
    return frozenset(out)


def annotation_types(t: Taxonomy) -> frozenset:
    return frozenset(cid for cid, c in t.concepts.items() if c.is_type)


# -- edits --------------------------------------------------------------------


class EditKind(str, enum.Enum):
    ADD = "add_concept"
    REMOVE = "remove_concept"
    RENAME = "rename_concept"
    MERGE = "merge_concepts"


@dataclass(frozen=True)
class TaxonomyEdit:
    """One structural refinement. Build with the classmethods."""

    kind: EditKind
    concept: OntologyConcept | None = None
    target: str | None = None
    label: str | None = None
    members: frozenset = frozenset()

    def __post_init__(self):
        if self.kind is EditKind.MERGE and len(self.members) < 2:
            raise EditError("merge_concepts needs at least two distinct concepts")

    @classmethod
    def add(cls, concept: OntologyConcept) -> "TaxonomyEdit":
        return cls(EditKind.ADD, concept=concept)

    @classmethod
    def remove(cls, target: str) -> "TaxonomyEdit":
        return cls(EditKind.REMOVE, target=target)

    @classmethod
    def rename(cls, target: str, label: str) -> "TaxonomyEdit":
        return cls(EditKind.RENAME, target=target, label=label)

    @classmethod
    def merge(cls, members: Iterable[str], into: str, label: str | None = None) -> "TaxonomyEdit":
        return cls(EditKind.MERGE, target=into, label=label, members=frozenset(members))


def _require(t: Taxonomy, cid: str):
    if cid not in t:
        raise UnknownIdError(f"unknown concept {cid!r}")


def apply_edit(t: Taxonomy, e: TaxonomyEdit) -> Taxonomy:
    """Return a new taxonomy with ``e`` applied; ``t`` is left untouched."""
    concepts = dict(t.concepts)

    if e.kind is EditKind.ADD:
        c = e.concept
        if c.id in concepts:
            raise EditError(f"concept {c.id!r} already exists")
        for p in c.parents:
            _require(t, p)
        concepts[c.id] = c

    elif e.kind is EditKind.REMOVE:
        _require(t, e.target)
        gone = concepts.pop(e.target)
        for cid, c in list(concepts.items()):
            if e.target in c.parents:
                parents = (c.parents - {e.target}) | gone.parents
                concepts[cid] = OntologyConcept(c.id, c.label, c.kind, parents)

    elif e.kind is EditKind.RENAME:
        _require(t, e.target)
        if not e.label:
            raise EditError("rename needs a non-empty label")
        c = concepts[e.target]
        concepts[e.target] = OntologyConcept(c.id, e.label, c.kind, c.parents)

    elif e.kind is EditKind.MERGE:
        members = e.members
        for m in sorted(members):
            _require(t, m)
        for a in members:
            for b in members:
                if a != b and t.is_ancestor(a, b):
                    raise EditError(f"cannot merge {b!r} with its ancestor {a!r}")
        into = _check_concept_id(e.target)
        if into in concepts and into not in members:
            raise EditError(f"replacement id {into!r} collides with an existing concept")
        merged = [concepts.pop(m) for m in sorted(members)]
        parents = frozenset().union(*(m.parents for m in merged)) - members
        kind = (
            ConceptKind.ANNOTATION_TYPE
            if all(m.is_type for m in merged)
            else ConceptKind.CATEGORY
        )
        label = e.label or next((m.label for m in merged if m.id == into), into)
        for cid, c in list(concepts.items()):
            if c.parents & members:
                concepts[cid] = OntologyConcept(
                    c.id, c.label, c.kind, (c.parents - members) | {into}
                )
        concepts[into] = OntologyConcept(into, label, kind, parents)

    else:  # pragma: no cover
        raise EditError(f"unsupported edit {e.kind!r}")

    # keep declaration order stable: original order, new concepts appended
    order = [cid for cid in t if cid in concepts]
    order += [cid for cid in concepts if cid not in t]
    result = Taxonomy((concepts[cid] for cid in order), id=t.id)
    if not result.is_acyclic:
        raise EditError("edit would create an is-a cycle")
    return result
