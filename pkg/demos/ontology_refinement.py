"""
Refining the taxonomy after an assessment
=========================================

Experts act on the report: drop a type nobody used, rename a pair, add a
sub-type. Each edit returns a new taxonomy; we re-run the assessment on a
log remapped to it.
"""

from annolattice import (
    ActivityLog,
    Annotation,
    OntologyConcept,
    TaxonomyEdit,
    apply_edit,
    assess,
    validate_taxonomy,
)
from annolattice import datasets
from annolattice.ontology import ConceptKind

log = datasets.load_babel()
t = log.taxonomy

before = assess(log)
unused = [f.concepts[0] for f in before.of_kind("unused")]
print("unused before:", unused)

# Authorities was never used and sits outside any category
t2 = apply_edit(t, TaxonomyEdit.remove("Authorities"))
# Labels only; ids and structure stay
t2 = apply_edit(t2, TaxonomyEdit.rename("God", "Good"))
t2 = apply_edit(t2, TaxonomyEdit.rename("Devil", "Evil"))
# A finer type under Space for the Library + Present notes
t2 = apply_edit(
    t2,
    TaxonomyEdit.add(
        OntologyConcept(
            "Library Now", "Library (present day)", ConceptKind.ANNOTATION_TYPE,
            frozenset({"Space"}),
        )
    ),
)
print("problems:", validate_taxonomy(t2))
print("original untouched:", "Authorities" in t)

# Retag the three Library + Present notes with the new type
notes = []
for a in log:
    if a.types == {"Library", "Present"}:
        a = Annotation(a.note_id, a.annotator_id, {"Library Now", "Present"}, a.group_id, a.body)
    notes.append(a)
after = assess(ActivityLog(t2, notes))
print("unused after: ", [after.label(f.concepts[0]) for f in after.of_kind("unused")])
for f in after.of_kind("emergent_combination"):
    print("  ", " + ".join(after.label(c) for c in f.concepts), f.count)

# Merging two sibling categories
t3 = apply_edit(t, TaxonomyEdit.merge({"Time", "Space"}, "Setting", "Setting"))
print("Setting children:", sorted(t3.children("Setting")))
