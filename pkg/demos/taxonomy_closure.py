"""
From tagged notes to a concept lattice
======================================

A ten-resource activity over a small abstract taxonomy. We close every
note's tags under is-a, enumerate the formal concepts and read the lattice.
"""

from annolattice import (
    attribute_concept,
    brute_force_concepts,
    build_context,
    build_lattice,
    derive_intent,
    enumerate_concepts,
    object_concept,
)
from annolattice import datasets

# The log tags R9 and R10 with top-level categories, so it loads leniently.
log = datasets.load_f4()
t = log.taxonomy
print(len(t), "ontology concepts, roots:", sorted(t.roots))

# C-34-1 has two parents. Closing R5's tag pulls both in.
ctx = build_context(log)
print("R5 declared:", sorted(log["R5"].types))
print("R5 closed:  ", ctx.sorted_attributes(ctx.row("R5")))

# The incidence as a boolean matrix (objects x attributes)
print(ctx.matrix.astype(int))
print(f"density {ctx.density:.2f}")

# Shared tags of a set of notes
print("R1, R2 share", sorted(derive_intent(ctx, {"R1", "R2"})))

# Enumerate and cross-check against the exhaustive oracle
concepts = enumerate_concepts(ctx)
assert set(concepts) == set(brute_force_concepts(ctx))
print(len(concepts), "formal concepts")

lattice = build_lattice(ctx, concepts)
for i, c in enumerate(lattice.concepts):
    lab = lattice.labels[i]
    print(
        f"{i:2d}  {ctx.sorted_attributes(lab.own_attributes)!s:28} "
        f"{ctx.sorted_objects(c.extent)}  -> {lattice.upper_covers(i)}"
    )

# C-2 and C-5 always co-occur: one attribute concept for both
print("C-2 and C-5 share node", attribute_concept(lattice, "C-2"), attribute_concept(lattice, "C-5"))
print("R5 lives at node", object_concept(lattice, "R5"))
print("unused C-5-2 sinks to the bottom:", attribute_concept(lattice, "C-5-2") == lattice.bottom_index)
