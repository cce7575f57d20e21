"""Formal contexts built from annotation activities.

Notes are objects and ontology concepts are attributes. Every note row is
closed upward under the taxonomy, so tagging a note with a type also
relates it to every category above that type.

The incidence is held as Python ints used as bitsets: ``rows[i]`` has bit
``j`` set when object ``i`` has attribute ``j``, ``columns[j]`` has bit
``i`` set for the same pair. The derivation operators work on those
bitsets; the public functions accept and return plain sets of ids.
"""

from __future__ import annotations

import csv
import enum
import io
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from ._bits import bits_of, full, iter_bits
from .errors import DocumentSyntaxError, InputError, UnknownIdError, ValidationError
from .ontology import Taxonomy, Violation

__all__ = [
    "Annotation",
    "ActivityLog",
    "Selector",
    "SelectorMode",
    "FormalContext",
    "build_context",
    "derive_intent",
    "derive_extent",
    "closure_extent",
    "closure_intent",
    "log_violations",
    "load_annotations",
    "read_annotations",
    "dump_annotations",
]


# -- annotations ----------------------------------------------------------------


@dataclass(frozen=True)
class Annotation:
    note_id: str
    annotator_id: str
    types: frozenset
    group_id: str | None = None
    body: str | None = None

    def __post_init__(self):
        if not isinstance(self.note_id, str) or not self.note_id:
            raise InputError(f"note id must be a non-empty string, got {self.note_id!r}")
        if not isinstance(self.annotator_id, str) or not self.annotator_id:
            raise InputError(f"note {self.note_id!r}: annotator must be a non-empty string")
        types = frozenset(self.types)
        if not types:
            raise InputError(f"note {self.note_id!r} has no types")
        object.__setattr__(self, "types", types)


def log_violations(
    taxonomy: Taxonomy, annotations: Iterable[Annotation], lenient_categories: bool = False
) -> list[Violation]:
    """Consistency problems between a set of annotations and a taxonomy."""
    out = []
    for a in annotations:
        for t in sorted(a.types):
            if t not in taxonomy:
                out.append(
                    Violation(
                        "unknown_concept",
                        "error",
                        (t,),
                        f"note {a.note_id!r} is tagged with unknown concept {t!r}",
                    )
                )
            elif not lenient_categories and not taxonomy[t].is_type:
                out.append(
                    Violation(
                        "category_tag",
                        "error",
                        (t,),
                        f"note {a.note_id!r} is tagged with category {t!r}",
                    )
                )
    return out


class ActivityLog:
    """A taxonomy plus the annotations made with it.

    With ``lenient_categories`` notes may be tagged with categories directly;
    by default only annotation types are accepted.
    """

    def __init__(
        self,
        taxonomy: Taxonomy,
        annotations: Iterable[Annotation] = (),
        lenient_categories: bool = False,
    ):
        annotations = tuple(annotations)
        seen = set()
        for a in annotations:
            if a.note_id in seen:
                raise InputError(f"duplicate note id {a.note_id!r}")
            seen.add(a.note_id)
        problems = log_violations(taxonomy, annotations, lenient_categories)
        if problems:
            raise ValidationError(problems[0].message, problems)
        self.taxonomy = taxonomy
        self.annotations = annotations
        self.lenient_categories = lenient_categories
        self._by_note = {a.note_id: a for a in annotations}

    def __len__(self):
        return len(self.annotations)

    def __iter__(self):
        return iter(self.annotations)

    def __getitem__(self, note_id: str) -> Annotation:
        try:
            return self._by_note[note_id]
        except KeyError:
            raise UnknownIdError(f"note {note_id!r} is not in the log") from None

    def __contains__(self, note_id):
        return note_id in self._by_note

    @property
    def annotators(self) -> frozenset:
        return frozenset(a.annotator_id for a in self.annotations)

    @property
    def groups(self) -> frozenset:
        return frozenset(a.group_id for a in self.annotations if a.group_id is not None)


class SelectorMode(str, enum.Enum):
    ALL = "all"
    BY_ANNOTATORS = "by_annotators"
    BY_GROUP = "by_group"


@dataclass(frozen=True)
class Selector:
    """Which notes of an activity enter the context."""

    mode: SelectorMode = SelectorMode.ALL
    ids: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "mode", SelectorMode(self.mode))
        object.__setattr__(self, "ids", frozenset(self.ids))
        if self.mode is not SelectorMode.ALL and not self.ids:
            raise InputError(f"selector {self.mode.value} needs at least one id")

    @classmethod
    def all(cls) -> "Selector":
        return cls()

    @classmethod
    def annotators(cls, ids: Iterable[str]) -> "Selector":
        return cls(SelectorMode.BY_ANNOTATORS, frozenset(ids))

    @classmethod
    def group(cls, ids) -> "Selector":
        if isinstance(ids, str):
            ids = [ids]
        return cls(SelectorMode.BY_GROUP, frozenset(ids))

    def accepts(self, a: Annotation) -> bool:
        if self.mode is SelectorMode.ALL:
            return True
        if self.mode is SelectorMode.BY_ANNOTATORS:
            return a.annotator_id in self.ids
        return a.group_id in self.ids

    def to_dict(self) -> dict:
        return {"mode": self.mode.value, "ids": sorted(self.ids)}


# -- formal context ---------------------------------------------------------------


class FormalContext:
    """Objects × attributes boolean relation stored as bitsets.

    Equality compares objects, attributes and incidence only.
    """

    def __init__(
        self,
        objects: Sequence[str],
        attributes: Sequence[str],
        rows: Sequence[int],
        provenance: Mapping[str, tuple] | None = None,
        selector: Selector | None = None,
    ):
        self.objects = tuple(objects)
        self.attributes = tuple(attributes)
        if len(set(self.objects)) != len(self.objects):
            raise InputError("duplicate object ids")
        if len(set(self.attributes)) != len(self.attributes):
            raise InputError("duplicate attribute ids")
        if len(rows) != len(self.objects):
            raise InputError("one row per object required")
        limit = full(len(self.attributes))
        self.rows = tuple(int(r) for r in rows)
        if any(r & ~limit for r in self.rows):
            raise InputError("row references an attribute position out of range")
        self.provenance = dict(provenance or {})
        self.selector = selector
        self.object_index = {o: i for i, o in enumerate(self.objects)}
        self.attribute_index = {a: j for j, a in enumerate(self.attributes)}
        cols = [0] * len(self.attributes)
        for i, r in enumerate(self.rows):
            for j in iter_bits(r):
                cols[j] |= 1 << i
        self.columns = tuple(cols)
        self.all_objects = full(len(self.objects))
        self.all_attributes = limit

    # -- constructors -------------------------------------------------------

    @classmethod
    def from_sets(cls, objects, attributes, rows, **kw) -> "FormalContext":
        """``rows`` is a sequence (or mapping by object) of attribute sets."""
        attributes = tuple(attributes)
        index = {a: j for j, a in enumerate(attributes)}
        if isinstance(rows, Mapping):
            rows = [rows.get(o, ()) for o in objects]
        bit_rows = []
        for r in rows:
            try:
                bit_rows.append(bits_of(index[a] for a in r))
            except KeyError as exc:
                raise UnknownIdError(f"unknown attribute {exc.args[0]!r}") from None
        return cls(objects, attributes, bit_rows, **kw)

    @classmethod
    def from_matrix(cls, matrix, objects=None, attributes=None) -> "FormalContext":
        m = np.asarray(matrix, dtype=bool)
        if m.ndim != 2:
            if m.size == 0:
                m = m.reshape(0, 0 if attributes is None else len(attributes))
            else:
                raise InputError("incidence matrix must be 2-D")
        n_obj, n_att = m.shape
        objects = objects if objects is not None else [f"g{i}" for i in range(n_obj)]
        attributes = attributes if attributes is not None else [f"m{j}" for j in range(n_att)]
        rows = [bits_of(np.flatnonzero(r).tolist()) for r in m]
        return cls(objects, attributes, rows)

    # -- views --------------------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.objects), len(self.attributes)

    @property
    def empty_selection(self) -> bool:
        return not self.objects

    @property
    def matrix(self) -> np.ndarray:
        m = np.zeros(self.shape, dtype=bool)
        for i, r in enumerate(self.rows):
            m[i, list(iter_bits(r))] = True
        return m

    @property
    def density(self) -> float:
        n, k = self.shape
        if not n or not k:
            return 0.0
        return sum(r.bit_count() for r in self.rows) / (n * k)

    def row(self, obj: str) -> frozenset:
        return self.attribute_set(self.rows[self.object_position(obj)])

    def column(self, attr: str) -> frozenset:
        return self.object_set(self.columns[self.attribute_position(attr)])

    def object_position(self, o) -> int:
        try:
            return self.object_index[o]
        except KeyError:
            raise UnknownIdError(f"unknown object {o!r}") from None

    def attribute_position(self, a) -> int:
        try:
            return self.attribute_index[a]
        except KeyError:
            raise UnknownIdError(f"unknown attribute {a!r}") from None

    def object_bits(self, objs: Iterable[str]) -> int:
        return bits_of(self.object_position(o) for o in objs)

    def attribute_bits(self, attrs: Iterable[str]) -> int:
        return bits_of(self.attribute_position(a) for a in attrs)

    def object_set(self, bits: int) -> frozenset:
        return frozenset(self.objects[i] for i in iter_bits(bits))

    def attribute_set(self, bits: int) -> frozenset:
        return frozenset(self.attributes[j] for j in iter_bits(bits))

    def sorted_objects(self, objs) -> list[str]:
        return sorted(objs, key=self.object_index.__getitem__)

    def sorted_attributes(self, attrs) -> list[str]:
        return sorted(attrs, key=self.attribute_index.__getitem__)

    # -- derivation on bitsets ----------------------------------------------

    def intent_bits(self, extent: int) -> int:
        """Attributes shared by every object in ``extent``."""
        out = 0
        for j, col in enumerate(self.columns):
            if col & extent == extent:
                out |= 1 << j
        return out

    def extent_bits(self, intent: int) -> int:
        """Objects having every attribute in ``intent``."""
        out = self.all_objects
        cols = self.columns
        while intent and out:
            low = intent & -intent
            out &= cols[low.bit_length() - 1]
            intent ^= low
        return out

    def __eq__(self, other):
        if not isinstance(other, FormalContext):
            return NotImplemented
        return (
            self.objects == other.objects
            and self.attributes == other.attributes
            and self.rows == other.rows
        )

    def __hash__(self):
        return hash((self.objects, self.attributes, self.rows))

    def __repr__(self):
        n, k = self.shape
        return f"FormalContext({n} objects × {k} attributes)"


def derive_intent(ctx: FormalContext, objs: Iterable[str]) -> frozenset:
    """Attributes common to all ``objs``; all attributes for the empty set."""
    return ctx.attribute_set(ctx.intent_bits(ctx.object_bits(objs)))


def derive_extent(ctx: FormalContext, attrs: Iterable[str]) -> frozenset:
    """Objects carrying all ``attrs``; all objects for the empty set."""
    return ctx.object_set(ctx.extent_bits(ctx.attribute_bits(attrs)))


def closure_extent(ctx: FormalContext, objs: Iterable[str]) -> frozenset:
    return ctx.object_set(ctx.extent_bits(ctx.intent_bits(ctx.object_bits(objs))))


def closure_intent(ctx: FormalContext, attrs: Iterable[str]) -> frozenset:
    return ctx.attribute_set(ctx.intent_bits(ctx.extent_bits(ctx.attribute_bits(attrs))))


# -- building -------------------------------------------------------------------


def build_context(log: ActivityLog, selector: Selector | None = None) -> FormalContext:
    """Taxonomy-closed context of the notes that pass ``selector``.

    Attributes are every taxonomy concept (used or not) in topological
    order with ties by id; objects keep log order.
    """
    selector = selector or Selector.all()
    if selector.mode is SelectorMode.BY_ANNOTATORS:
        missing = selector.ids - log.annotators
        if missing:
            raise UnknownIdError(f"unknown annotator(s): {', '.join(sorted(missing))}")
    elif selector.mode is SelectorMode.BY_GROUP:
        missing = selector.ids - log.groups
        if missing:
            raise UnknownIdError(f"unknown group(s): {', '.join(sorted(missing))}")

    t = log.taxonomy
    attributes = t.topological_order()
    index = {a: j for j, a in enumerate(attributes)}
    closed = {a: (1 << index[a]) | bits_of(index[p] for p in t.ancestors(a)) for a in attributes}

    objects, rows, provenance = [], [], {}
    for a in log.annotations:
        if not selector.accepts(a):
            continue
        r = 0
        for typ in a.types:
            r |= closed[typ]
        objects.append(a.note_id)
        rows.append(r)
        provenance[a.note_id] = (a.annotator_id, a.group_id)
    return FormalContext(objects, attributes, rows, provenance=provenance, selector=selector)


# -- annotation documents ---------------------------------------------------------

_LOG_KEYS = {"note", "annotator", "group", "types", "body"}


def _annotation_from_record(rec: dict, where: str) -> Annotation:
    unknown = set(rec) - _LOG_KEYS
    if unknown:
        raise InputError(f"{where}: unknown keys {sorted(unknown)}")
    for key in ("note", "annotator", "types"):
        if key not in rec:
            raise InputError(f"{where}: missing {key!r}")
    types = rec["types"]
    if isinstance(types, str) or not isinstance(types, list):
        raise InputError(f"{where}: 'types' must be a list")
    try:
        return Annotation(
            note_id=rec["note"],
            annotator_id=rec["annotator"],
            types=frozenset(types),
            group_id=rec.get("group"),
            body=rec.get("body"),
        )
    except InputError as exc:
        raise InputError(f"{where}: {exc}") from None


def load_annotations(text: str, fmt: str = "jsonl", source: str | None = None) -> list[Annotation]:
    """Parse annotations from JSON Lines (default) or CSV text.

    CSV columns: ``note, annotator, group, types`` with types separated by
    semicolons.
    """
    label = source or "<annotations>"
    out = []
    if fmt == "jsonl":
        for lineno, line in enumerate(text.splitlines(), 1):
            if not line.strip():
                continue
            try:
                rec = json.loads(line)
            except json.JSONDecodeError as exc:
                raise DocumentSyntaxError(exc.msg, lineno, exc.colno, source) from None
            if not isinstance(rec, dict):
                raise DocumentSyntaxError("expected a JSON object", lineno, 1, source)
            out.append(_annotation_from_record(rec, f"{label}:{lineno}"))
    elif fmt == "csv":
        reader = csv.DictReader(io.StringIO(text))
        if reader.fieldnames is None:
            return out
        missing = {"note", "annotator", "types"} - set(reader.fieldnames)
        if missing:
            raise InputError(f"{label}: CSV header lacks {sorted(missing)}")
        for rec in reader:
            rec = {k: v for k, v in rec.items() if k is not None}
            rec["types"] = [t.strip() for t in (rec.get("types") or "").split(";") if t.strip()]
            if not rec.get("group"):
                rec.pop("group", None)
            if not rec.get("body"):
                rec.pop("body", None)
            out.append(_annotation_from_record(rec, f"{label}:{reader.line_num}"))
    else:
        raise InputError(f"unknown annotation format {fmt!r}")
    return out


def read_annotations(path) -> list[Annotation]:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read annotations {path}: {exc.strerror}") from None
    fmt = "csv" if path.suffix.lower() == ".csv" else "jsonl"
    return load_annotations(text, fmt, source=str(path))


def dump_annotations(annotations: Iterable[Annotation]) -> str:
    lines = []
    for a in annotations:
        rec = {"note": a.note_id, "annotator": a.annotator_id}
        if a.group_id is not None:
            rec["group"] = a.group_id
        rec["types"] = sorted(a.types)
        if a.body is not None:
            rec["body"] = a.body
        lines.append(json.dumps(rec, ensure_ascii=False))
    return "".join(line + "\n" for line in lines)
