"""Serialization: lattice JSON, report JSON and Markdown."""

from __future__ import annotations

import json
import math
from fractions import Fraction

from .assess import AssessmentReport, Finding, FindingKind
from .context import FormalContext, Selector, SelectorMode
from .errors import DocumentSyntaxError, InputError
from .lattice import ConceptLabel, ConceptLattice, ConceptStats, assemble_lattice

__all__ = [
    "round_half_up",
    "format_percent",
    "lattice_to_dict",
    "lattice_to_json",
    "lattice_from_json",
    "report_to_dict",
    "report_to_json",
    "report_to_markdown",
]

LATTICE_FORMAT = "annolattice-lattice/1"
REPORT_FORMAT = "annolattice-report/1"


def round_half_up(value: Fraction) -> int:
    """Nearest integer, halves rounded up. Exact on fractions."""
    return math.floor(Fraction(value) + Fraction(1, 2))


def format_percent(count: int, total: int) -> str:
    if not total:
        return "0%"
    return f"{round_half_up(Fraction(100 * count, total))}%"


def _fraction(f: Fraction) -> dict:
    return {"numerator": f.numerator, "denominator": f.denominator}


def _dumps(doc) -> str:
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


# -- lattice --------------------------------------------------------------------


def lattice_to_dict(lattice: ConceptLattice) -> dict:
    ctx = lattice.context
    concepts = []
    for i, (c, label, st) in enumerate(zip(lattice.concepts, lattice.labels, lattice.stats)):
        concepts.append(
            {
                "index": i,
                "extent": ctx.sorted_objects(c.extent),
                "intent": ctx.sorted_attributes(c.intent),
                "own_objects": ctx.sorted_objects(label.own_objects),
                "own_attributes": ctx.sorted_attributes(label.own_attributes),
                "count": st.extent_count,
                "percent": _fraction(st.extent_percent),
            }
        )
    return {
        "format": LATTICE_FORMAT,
        "objects": list(ctx.objects),
        "attributes": list(ctx.attributes),
        "top": lattice.top_index,
        "bottom": lattice.bottom_index,
        "concepts": concepts,
        "covers": [list(p) for p in sorted(lattice.covers)],
    }


def lattice_to_json(lattice: ConceptLattice) -> str:
    return _dumps(lattice_to_dict(lattice))


def lattice_from_json(text: str) -> ConceptLattice:
    """Inverse of :func:`lattice_to_json`.

    The incidence is recovered from the object concepts: an object's row
    is the intent of the concept that carries it in its reduced label.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentSyntaxError(exc.msg, exc.lineno, exc.colno) from None
    if not isinstance(doc, dict) or doc.get("format") != LATTICE_FORMAT:
        raise InputError("not a lattice document")
    try:
        objects, attributes = doc["objects"], doc["attributes"]
        entries = sorted(doc["concepts"], key=lambda c: c["index"])
        row_of = {}
        for c in entries:
            for o in c["own_objects"]:
                row_of[o] = c["intent"]
        ctx = FormalContext.from_sets(objects, attributes, [row_of.get(o, ()) for o in objects])
        pairs = [(ctx.object_bits(c["extent"]), ctx.attribute_bits(c["intent"])) for c in entries]
        labels = [
            ConceptLabel(frozenset(c["own_objects"]), frozenset(c["own_attributes"]))
            for c in entries
        ]
        stats = [
            ConceptStats(
                c["count"], Fraction(c["percent"]["numerator"], c["percent"]["denominator"])
            )
            for c in entries
        ]
        covers = [tuple(p) for p in doc["covers"]]
    except (KeyError, TypeError) as exc:
        raise InputError(f"malformed lattice document: {exc}") from None
    lattice = assemble_lattice(ctx, pairs, covers, labels, stats)
    if lattice.top_index != doc["top"] or lattice.bottom_index != doc["bottom"]:
        raise InputError("top/bottom indices disagree with concept order")
    return lattice


# -- report ---------------------------------------------------------------------


def _finding_to_dict(f: Finding) -> dict:
    return {
        "kind": f.kind.value,
        "concepts": list(f.concepts),
        "count": f.count,
        "percent": _fraction(f.percent),
        "percent_rounded": round_half_up(f.percent),
        "supporting_extent": list(f.supporting_extent),
        "detail": f.detail,
    }


def _concept_nodes(report: AssessmentReport) -> list[dict]:
    lattice = report.lattice
    if lattice is None:
        return []
    ctx = lattice.context
    nodes = []
    for i, (c, label, st) in enumerate(zip(lattice.concepts, lattice.labels, lattice.stats)):
        nodes.append(
            {
                "index": i,
                "own_attributes": ctx.sorted_attributes(label.own_attributes),
                "own_objects": ctx.sorted_objects(label.own_objects),
                "intent": ctx.sorted_attributes(c.intent),
                "extent": ctx.sorted_objects(c.extent),
                "count": st.extent_count,
                "percent": _fraction(st.extent_percent),
                "percent_rounded": round_half_up(st.extent_percent),
                "upper_covers": lattice.upper_covers(i),
                "lower_covers": lattice.lower_covers(i),
                "annotators": report.annotator_breakdown.get(i, {}),
            }
        )
    return nodes


def report_to_dict(report: AssessmentReport) -> dict:
    n_concepts = len(report.lattice) if report.lattice is not None else None
    return {
        "format": REPORT_FORMAT,
        "activity": {
            "taxonomy": report.taxonomy_id,
            "selector": report.selector.to_dict(),
            "objects": report.object_total,
            "concepts": n_concepts,
            "empty_selection": report.object_total == 0,
        },
        "findings": [_finding_to_dict(f) for f in report.findings],
        "single_annotator_concepts": list(report.single_annotator),
        "concepts": _concept_nodes(report),
    }


def report_to_json(report: AssessmentReport) -> str:
    return _dumps(report_to_dict(report))


def _names(report: AssessmentReport, ids) -> str:
    return " + ".join(report.label(c) for c in ids)


def _usage(count: int, total: int) -> str:
    return f"{count}/{total} notes ({format_percent(count, total)})"


def _selector_text(sel: Selector) -> str:
    if sel.mode is SelectorMode.ALL:
        return "all notes"
    who = "annotators" if sel.mode is SelectorMode.BY_ANNOTATORS else "groups"
    return f"{who} {', '.join(sorted(sel.ids))}"


def report_to_markdown(report: AssessmentReport) -> str:
    total = report.object_total
    out = ["# Annotation assessment", ""]
    out.append(f"- Taxonomy: {report.taxonomy_id or '(unnamed)'}")
    out.append(f"- Selection: {_selector_text(report.selector)}")
    out.append(f"- Notes: {total}")
    if report.lattice is not None:
        out.append(f"- Formal concepts: {len(report.lattice)}")
    out.append("")

    unused = report.of_kind(FindingKind.UNUSED)
    out += ["## Unused", ""]
    if unused:
        for f in unused:
            kind = "category" if f.detail.get("concept_kind") == "category" else "annotation type"
            out.append(f"- {_names(report, f.concepts)} ({kind})")
    else:
        out.append("None.")
    out.append("")

    merged = report.of_kind(FindingKind.MERGED_GROUP)
    out += ["## Merged concepts", ""]
    if merged:
        for f in merged:
            line = f"- {_names(report, f.concepts)} — {_usage(f.count, total)}"
            unrelated = f.detail.get("unrelated_pairs", [])
            if unrelated:
                pairs = ", ".join(f"{report.label(a)}/{report.label(b)}" for a, b in unrelated)
                line += f"; unrelated in the taxonomy: {pairs}"
            else:
                line += "; all pairs related by is-a"
            out.append(line)
    else:
        out.append("None.")
    out.append("")

    emergent = report.of_kind(FindingKind.EMERGENT_COMBINATION)
    out += ["## Emergent combinations", ""]
    if emergent:
        for f in emergent:
            line = f"- {_names(report, f.concepts)} — {_usage(f.count, total)}"
            extent_count = f.detail.get("extent_count", f.count)
            if extent_count != f.count:
                line += f"; contained in {_usage(extent_count, total)}"
            annotators = f.detail.get("annotators", {})
            if f.count > 1 and len(annotators) == 1:
                line += f"; all by {next(iter(annotators))}"
            out.append(line)
    else:
        out.append("None.")
    out.append("")

    isolated = report.of_kind(FindingKind.ISOLATION)
    out += ["## Isolation usage", ""]
    if isolated:
        for f in isolated:
            out.append(f"- {_names(report, f.concepts)} — {_usage(f.count, total)}")
    else:
        out.append("None.")
    out.append("")

    nodes = _concept_nodes(report)
    if nodes:
        out += ["## Concepts", ""]
        out.append("| # | Introduces | Intent | Notes | Annotators | Covers |")
        out.append("|---|---|---|---|---|---|")
        for node in nodes:
            own = ", ".join(report.label(a) for a in node["own_attributes"]) or "-"
            intent = ", ".join(report.label(a) for a in node["intent"]) or "∅"
            who = ", ".join(f"{k}: {v}" for k, v in node["annotators"].items()) or "-"
            up = ", ".join(str(u) for u in node["upper_covers"]) or "-"
            out.append(
                f"| {node['index']} | {own} | {intent} | {_usage(node['count'], total)} "
                f"| {who} | {up} |"
            )
        out.append("")
    return "\n".join(out)
