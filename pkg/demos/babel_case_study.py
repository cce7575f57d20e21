"""
Assessing a literary annotation activity
========================================

75 notes on a short story, tagged by six annotators with a five-category
taxonomy. The report surfaces unused types, combinations the taxonomy did
not anticipate, and concepts used on their own.
"""

from annolattice import assess, Selector
from annolattice import datasets
from annolattice.dot import RenderOptions, render_dot
from annolattice.formats import format_percent, report_to_markdown

log = datasets.load_babel()
print(len(log), "notes by", len(log.annotators), "annotators")

report = assess(log)
print(report_to_markdown(report))

# Combinations worth a closer look. Library + Present comes from one person.
for f in report.of_kind("emergent_combination"):
    who = f.detail["annotators"]
    flag = "  <- single annotator" if f.detail["single_annotator"] and f.count > 1 else ""
    print(
        " + ".join(f.concepts), f.count, format_percent(f.count, report.object_total), who, flag
    )

# A Graphviz view with the bottom node (unused concepts) filled in.
# Pipe into `dot -Tsvg` to draw it.
dot = render_dot(report.lattice, report, RenderOptions(highlight={"unused", "emergent"}))
print(dot.splitlines()[0], "...", len(dot.splitlines()), "lines")
