import numpy as np
import pytest

from annolattice import (
    ActivityLog,
    Annotation,
    FormalContext,
    OntologyConcept,
    Taxonomy,
    build_context,
    build_lattice,
)
from annolattice import datasets
from annolattice.ontology import ConceptKind, annotation_types

SMALL_ROWS = {
    "obj1": {"attr1", "attr3", "attr5"},
    "obj2": {"attr2", "attr3", "attr5"},
    "obj3": {"attr1", "attr3", "attr4", "attr5"},
    "obj4": {"attr1", "attr5"},
    "obj5": {"attr3", "attr4"},
}

DENSITIES = (0.1, 0.3, 0.5, 0.8)


@pytest.fixture(scope="session")
def t3():
    return datasets.load_t3()


@pytest.fixture(scope="session")
def f4_log():
    return datasets.load_f4()


@pytest.fixture(scope="session")
def f4(f4_log):
    return build_context(f4_log)


@pytest.fixture(scope="session")
def f4_lattice(f4):
    return build_lattice(f4)


@pytest.fixture(scope="session")
def t8():
    return datasets.load_t8()


@pytest.fixture(scope="session")
def babel_log():
    return datasets.load_babel()


@pytest.fixture(scope="session")
def babel(babel_log):
    return build_context(babel_log)


@pytest.fixture(scope="session")
def babel_lattice(babel):
    return build_lattice(babel)


@pytest.fixture(scope="session")
def small_ctx():
    objects = sorted(SMALL_ROWS)
    attributes = [f"attr{i}" for i in range(1, 6)]
    return FormalContext.from_sets(objects, attributes, SMALL_ROWS)


def random_context(seed, density, max_objects=12, max_attributes=10):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(0, max_objects + 1))
    m = int(rng.integers(0, max_attributes + 1))
    matrix = rng.random((n, m)) < density
    return FormalContext.from_matrix(matrix), matrix


def random_contexts(count_per_density=60):
    for density in DENSITIES:
        for seed in range(count_per_density):
            yield random_context(1000 * int(density * 10) + seed, density)


def random_taxonomy(rng, size, roots=3, multi=0.3):
    concepts = []
    for i in range(size):
        if i < roots:
            parents = []
        else:
            k = 2 if rng.random() < multi and i > 1 else 1
            parents = sorted({f"c{int(p)}" for p in rng.choice(i, size=min(k, i), replace=False)})
        concepts.append((f"c{i}", parents))
    kids = {p for _, ps in concepts for p in ps}
    return Taxonomy(
        OntologyConcept(
            cid,
            kind=ConceptKind.CATEGORY if cid in kids else ConceptKind.ANNOTATION_TYPE,
            parents=frozenset(ps),
        )
        for cid, ps in concepts
    )


def random_activity(
    seed, n_notes=12, n_concepts=8, annotators=3, mean_tags=1.0, roots=3, multi=0.3
):
    rng = np.random.default_rng(seed)
    t = random_taxonomy(rng, n_concepts, roots=roots, multi=multi)
    types = sorted(annotation_types(t))
    notes = []
    for n in range(n_notes):
        k = min(len(types), 1 + int(rng.poisson(mean_tags)))
        tags = rng.choice(types, size=k, replace=False).tolist()
        notes.append(Annotation(f"n{n}", f"a{n % annotators}", frozenset(tags), group_id=f"g{n % 2}"))
    return ActivityLog(t, notes)


# -- acceptance summary -------------------------------------------------------------

ACCEPTANCE_RESULTS = {}


@pytest.fixture
def criterion():
    """Marks a test as an acceptance criterion; its docstring's first line is the title."""


def _title(item):
    return (item.function.__doc__ or item.name).strip().splitlines()[0]


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    if "criterion" not in getattr(item, "fixturenames", ()):
        return
    if report.when == "call" or (report.when == "setup" and report.failed):
        ACCEPTANCE_RESULTS[_title(item)] = "PASS" if report.passed else "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for title, status in ACCEPTANCE_RESULTS.items():
        terminalreporter.write_line(f"{status}  {title}")
