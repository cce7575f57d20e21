"""Reference implementations used only by tests.

Each works from a plain numpy boolean matrix or an edge list and shares no
code with the package's bitset routines.
"""

from itertools import chain, combinations

import numpy as np


def subsets(items):
    items = list(items)
    return chain.from_iterable(combinations(items, r) for r in range(len(items) + 1))


def intent_of(matrix, objs):
    """Attributes (column indices) shared by all rows in ``objs``."""
    n_att = matrix.shape[1]
    keep = np.ones(n_att, dtype=bool)
    for o in objs:
        keep &= matrix[o]
    return frozenset(np.flatnonzero(keep).tolist())


def extent_of(matrix, attrs):
    n_obj = matrix.shape[0]
    keep = np.ones(n_obj, dtype=bool)
    for a in attrs:
        keep &= matrix[:, a]
    return frozenset(np.flatnonzero(keep).tolist())


def concepts_by_object_subsets(matrix):
    """All (extent, intent) pairs as index sets, by closing every object subset."""
    out = set()
    for objs in subsets(range(matrix.shape[0])):
        intent = intent_of(matrix, objs)
        out.add((extent_of(matrix, intent), intent))
    return out


def transitive_reduction(elements, leq):
    """Cover pairs (a, b): a < b with nothing strictly between."""
    lt = {(a, b) for a in elements for b in elements if a != b and leq(a, b)}
    return {
        (a, b)
        for (a, b) in lt
        if not any((a, c) in lt and (c, b) in lt for c in elements)
    }


def reachable(edges, start):
    """Nodes reachable from ``start`` following directed ``edges`` (excluding start unless on a cycle)."""
    succ = {}
    for u, v in edges:
        succ.setdefault(u, []).append(v)
    seen, stack = set(), list(succ.get(start, []))
    while stack:
        n = stack.pop()
        if n in seen:
            continue
        seen.add(n)
        stack.extend(succ.get(n, []))
    return seen


def has_cycle(nodes, edges):
    return any(n in reachable(edges, n) for n in nodes)


def ancestors(child_to_parents, node):
    return reachable([(c, p) for c, ps in child_to_parents.items() for p in ps], node)
