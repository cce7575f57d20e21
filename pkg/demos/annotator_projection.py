"""
Projecting the lattice on annotators
====================================

The same activity, restricted to one annotator and then to each group.
Comparing projections shows who drives which combinations.
"""

from annolattice import Selector, assess
from annolattice import datasets
from annolattice.formats import format_percent

log = datasets.load_babel()
everyone = assess(log)
print("all notes:", everyone.object_total, "concepts:", len(everyone.lattice))

# Annotator s1 wrote only three notes, all tagged Library + Present
s1 = assess(log, Selector.annotators(["s1"]))
print("s1 notes:", list(s1.lattice.context.objects))
# Inside s1's own notes the combination is no longer emergent: it is simply
# the top concept, shared by everything s1 wrote.
top = s1.lattice[s1.lattice.top_index]
print("  s1 top intent:", sorted(top.intent))

# Per group, the share of notes with a combination outside any single concept
for g in sorted(log.groups):
    r = assess(log, Selector.group(g))
    combined = sum(f.count for f in r.of_kind("emergent_combination"))
    print(f"group {g}: {r.object_total} notes, {format_percent(combined, r.object_total)} combined")

# Per concept, which annotators populate it
bd = everyone.annotator_breakdown
for i in everyone.single_annotator:
    c = everyone.lattice[i]
    if c.extent:
        print("single-annotator concept", i, sorted(c.intent), bd[i])
