"""Graphviz DOT rendering of Hasse diagrams."""

from __future__ import annotations

from dataclasses import dataclass

from .assess import AssessmentReport, FindingKind
from .formats import format_percent
from .lattice import ConceptLattice

__all__ = ["RenderOptions", "render_dot"]

HIGHLIGHT_COLORS = {
    "unused": "#f4cccc",
    "merged": "#fce5cd",
    "emergent": "#d9ead3",
}


@dataclass(frozen=True)
class RenderOptions:
    show_percent: bool = True
    show_counts: bool = True
    highlight: frozenset = frozenset(HIGHLIGHT_COLORS)

    def __post_init__(self):
        hl = frozenset(self.highlight)
        unknown = hl - set(HIGHLIGHT_COLORS)
        if unknown:
            raise ValueError(f"unknown highlight classes {sorted(unknown)}")
        object.__setattr__(self, "highlight", hl)


def _quote(lines) -> str:
    # one DOT string, lines separated by the \n escape
    esc = (t.replace("\\", "\\\\").replace('"', '\\"') for t in lines)
    return '"' + "\\n".join(esc) + '"'


def _highlighted(report: AssessmentReport | None, lattice: ConceptLattice, opts: RenderOptions) -> dict:
    """concept index -> highlight class (first match in unused, merged, emergent)."""
    if report is None:
        return {}
    marks = {}
    if "unused" in opts.highlight and report.of_kind(FindingKind.UNUSED):
        marks[lattice.bottom_index] = "unused"
    if "merged" in opts.highlight:
        for f in report.of_kind(FindingKind.MERGED_GROUP):
            marks.setdefault(f.detail["concept"], "merged")
    if "emergent" in opts.highlight:
        for f in report.of_kind(FindingKind.EMERGENT_COMBINATION):
            marks.setdefault(f.detail["concept"], "emergent")
    return marks


def render_dot(
    lattice: ConceptLattice,
    report: AssessmentReport | None = None,
    opts: RenderOptions | None = None,
) -> str:
    """One node per concept, one upward edge per cover pair.

    Node ids are canonical concept indices. Attribute concepts get a bold
    border, object concepts a double border; highlight classes are filled.
    """
    opts = opts or RenderOptions()
    ctx = lattice.context
    total = len(ctx.objects)
    name = (lambda a: report.label(a)) if report is not None else (lambda a: a)
    marks = _highlighted(report, lattice, opts)

    lines = [
        "digraph lattice {",
        "  rankdir=BT;",
        '  node [shape=box, style="rounded", fontname="Helvetica"];',
        "  edge [arrowhead=none];",
    ]
    for i, (label, st) in enumerate(zip(lattice.labels, lattice.stats)):
        parts = [name(a) for a in ctx.sorted_attributes(label.own_attributes)]
        if label.own_objects:
            parts.append(f"+{len(label.own_objects)} own notes")
        figures = []
        if opts.show_counts:
            figures.append(str(st.extent_count))
        if opts.show_percent:
            figures.append(format_percent(st.extent_count, total))
        if figures:
            parts.append(" / ".join(figures))
        attrs = [f"label={_quote(parts or [' '])}"]
        styles = ["rounded"]
        if label.own_attributes:
            attrs.append("penwidth=2")
        if label.own_objects:
            attrs.append("peripheries=2")
        if i in marks:
            styles.append("filled")
            attrs.append(f'fillcolor="{HIGHLIGHT_COLORS[marks[i]]}"')
            attrs.append(f'class="{marks[i]}"')
        attrs.append(f'style="{",".join(styles)}"')
        lines.append(f"  c{i} [{', '.join(attrs)}];")
    for lower, upper in sorted(lattice.covers):
        lines.append(f"  c{lower} -> c{upper};")
    lines.append("}")
    return "\n".join(lines) + "\n"
