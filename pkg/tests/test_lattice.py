from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from annolattice import (
    FormalContext,
    IncompleteConceptSetError,
    OracleLimitError,
    attribute_concept,
    brute_force_concepts,
    build_lattice,
    concept_stats,
    derive_extent,
    derive_intent,
    enumerate_concepts,
    object_concept,
)
from annolattice.lattice import FormalConcept

from oracles import concepts_by_object_subsets, transitive_reduction


def ctx_of(rows, attributes):
    return FormalContext.from_sets(sorted(rows), attributes, rows)


def descendants(lattice, i):
    seen, stack = {i}, [i]
    while stack:
        for lo in lattice.lower_covers(stack.pop()):
            if lo not in seen:
                seen.add(lo)
                stack.append(lo)
    return seen


def ascendants(lattice, i):
    seen, stack = {i}, [i]
    while stack:
        for up in lattice.upper_covers(stack.pop()):
            if up not in seen:
                seen.add(up)
                stack.append(up)
    return seen


class TestEnumerate:
    def test_f4_count(self, f4):
        assert len(enumerate_concepts(f4)) == 11

    def test_f4_brute_force_agrees(self, f4):
        assert brute_force_concepts(f4) == enumerate_concepts(f4)

    def test_empty_context(self):
        ctx = FormalContext.from_matrix(np.zeros((0, 0), dtype=bool))
        assert enumerate_concepts(ctx) == [FormalConcept(frozenset(), frozenset())]
        lat = build_lattice(ctx)
        assert lat.top_index == lat.bottom_index == 0
        assert lat.covers == frozenset()

    def test_single_incident_cell(self):
        ctx = ctx_of({"o": {"a"}}, ["a"])
        assert enumerate_concepts(ctx) == [FormalConcept(frozenset({"o"}), frozenset({"a"}))]

    def test_single_non_incident_cell(self):
        ctx = ctx_of({"o": set()}, ["a"])
        assert enumerate_concepts(ctx) == [
            FormalConcept(frozenset({"o"}), frozenset()),
            FormalConcept(frozenset(), frozenset({"a"})),
        ]

    def test_seeded_4x4(self):
        matrix = np.random.default_rng(4).random((4, 4)) < 0.5
        ctx = FormalContext.from_matrix(matrix)
        assert set(enumerate_concepts(ctx)) == set(brute_force_concepts(ctx))

    def test_canonical_order(self, babel):
        concepts = enumerate_concepts(babel)
        keys = [
            (-len(c.extent), sorted(babel.object_position(o) for o in c.extent)) for c in concepts
        ]
        assert keys == sorted(keys)
        assert concepts[0].extent == set(babel.objects)
        assert concepts[-1].intent == set(babel.attributes)

    def test_oracle_limit(self):
        ctx = FormalContext.from_matrix(np.zeros((1, 21), dtype=bool))
        with pytest.raises(OracleLimitError):
            brute_force_concepts(ctx)


class TestBuild:
    def test_f4_top_and_bottom(self, f4_lattice):
        assert f4_lattice.labels[f4_lattice.top_index].own_attributes == frozenset()
        assert f4_lattice.labels[f4_lattice.bottom_index].own_attributes == {"C-5-2"}

    def test_chain(self):
        ctx = ctx_of({"o1": {"a"}, "o2": {"a", "b"}, "o3": {"a", "b", "c"}}, ["a", "b", "c"])
        lat = build_lattice(ctx)
        assert len(lat.covers) == len(lat) - 1
        assert sorted(lat.covers) == [(i + 1, i) for i in range(len(lat) - 1)]

    def test_small_node_by_paths(self, small_ctx):
        lat = build_lattice(small_ctx)
        node = lat.index_of_extent({"obj1", "obj2", "obj3"})
        below = set().union(*(lat.labels[i].own_objects for i in descendants(lat, node)))
        above = set().union(*(lat.labels[i].own_attributes for i in ascendants(lat, node)))
        assert below == {"obj1", "obj2", "obj3"}
        assert above == {"attr3", "attr5"}
        assert not lat.is_object_concept(node) and not lat.is_attribute_concept(node)

    def test_rejects_incomplete_set(self, f4):
        concepts = enumerate_concepts(f4)
        with pytest.raises(IncompleteConceptSetError):
            build_lattice(f4, concepts[:-3] + concepts[-2:])

    def test_rejects_non_concept(self, f4):
        bogus = FormalConcept(frozenset({"R1"}), frozenset({"C-2"}))
        with pytest.raises(IncompleteConceptSetError):
            build_lattice(f4, enumerate_concepts(f4) + [bogus])


class TestObjectAttributeConcepts:
    def test_small_concept_two(self, small_ctx):
        lat = build_lattice(small_ctx)
        two = lat.index_of_extent({"obj1", "obj3", "obj4"})
        assert lat[two].intent == {"attr1", "attr5"}
        assert object_concept(lat, "obj4") == two
        assert attribute_concept(lat, "attr1") == two

    def test_f4_r5(self, f4_lattice):
        c = f4_lattice[object_concept(f4_lattice, "R5")]
        assert c.extent == {"R5"} and c.intent == {"C-3", "C-4", "C-34-1"}

    def test_single_object_is_top(self):
        lat = build_lattice(ctx_of({"o": {"a"}}, ["a", "b"]))
        assert object_concept(lat, "o") == lat.top_index

    def test_f4_merged_attribute_concepts(self, f4_lattice):
        assert attribute_concept(f4_lattice, "C-2") == attribute_concept(f4_lattice, "C-5")
        assert attribute_concept(f4_lattice, "C-5-2") == f4_lattice.bottom_index

    def test_unknown_ids(self, f4_lattice):
        with pytest.raises(KeyError):
            object_concept(f4_lattice, "R99")
        with pytest.raises(KeyError):
            attribute_concept(f4_lattice, "C-99")


class TestStats:
    def test_top_is_hundred(self, f4_lattice):
        assert concept_stats(f4_lattice)[0].extent_percent == 100

    def test_god(self, babel_lattice):
        st_ = concept_stats(babel_lattice)[attribute_concept(babel_lattice, "God")]
        assert st_.extent_count == 4
        assert st_.extent_percent == Fraction(16, 3)

    def test_no_objects(self):
        ctx = FormalContext.from_matrix(np.zeros((0, 3), dtype=bool))
        assert all(s.extent_percent == 0 for s in concept_stats(build_lattice(ctx)))


# -- structural properties ---------------------------------------------------------

matrices = st.integers(0, 7).flatmap(
    lambda n: st.integers(0, 7).flatmap(lambda m: arrays(bool, (n, m)))
)


@settings(max_examples=150, deadline=None)
@given(matrices)
def test_lattice_structure(matrix):
    ctx = FormalContext.from_matrix(matrix)
    lat = build_lattice(ctx)
    # every concept is a fixed point of the derivation operators
    for c in lat.concepts:
        assert derive_intent(ctx, c.extent) == c.intent
        assert derive_extent(ctx, c.intent) == c.extent
    # set-equal to the object-subset oracle
    expected = {
        (frozenset(ctx.objects[i] for i in e), frozenset(ctx.attributes[j] for j in b))
        for e, b in concepts_by_object_subsets(matrix)
    }
    assert {(c.extent, c.intent) for c in lat.concepts} == expected
    # meets exist
    extents = {c.extent for c in lat.concepts}
    assert all(a & b in extents for a in extents for b in extents)
    # covers are the transitive reduction of extent inclusion
    idx = range(len(lat))
    assert lat.covers == transitive_reduction(idx, lambda i, j: lat[i].extent <= lat[j].extent)
    # labels partition objects and attributes
    own_o = [o for lab in lat.labels for o in lab.own_objects]
    own_a = [a for lab in lat.labels for a in lab.own_attributes]
    assert sorted(own_o) == sorted(ctx.objects)
    assert sorted(own_a) == sorted(ctx.attributes)
    for o in ctx.objects:
        assert lat[object_concept(lat, o)].extent == derive_extent(ctx, derive_intent(ctx, {o}))
    for a in ctx.attributes:
        assert lat[attribute_concept(lat, a)].extent == derive_extent(ctx, {a})
