"""Formal concept analysis for assessing semantic annotation activities."""

from .assess import (
    AssessmentReport,
    Finding,
    FindingKind,
    annotator_breakdown,
    build_report,
    emergent_combinations,
    isolation_usage,
    merged_groups,
    unused_concepts,
)
from .context import (
    ActivityLog,
    Annotation,
    FormalContext,
    Selector,
    build_context,
    closure_extent,
    closure_intent,
    derive_extent,
    derive_intent,
    load_annotations,
    read_annotations,
)
from .dot import RenderOptions, render_dot
from .errors import (
    AnnoLatticeError,
    DocumentSyntaxError,
    EditError,
    IncompleteConceptSetError,
    InputError,
    OracleLimitError,
    UnknownIdError,
    ValidationError,
)
from .formats import (
    lattice_from_json,
    lattice_to_json,
    report_to_json,
    report_to_markdown,
    round_half_up,
)
from .lattice import (
    ConceptLattice,
    FormalConcept,
    attribute_concept,
    brute_force_concepts,
    build_lattice,
    concept_stats,
    enumerate_concepts,
    object_concept,
)
from .ontology import (
    ConceptKind,
    OntologyConcept,
    Taxonomy,
    TaxonomyEdit,
    annotation_types,
    apply_edit,
    load_taxonomy,
    read_taxonomy,
    up_closure,
    validate_taxonomy,
)

__version__ = "0.1.0"


def assess(log: ActivityLog, selector: Selector | None = None) -> AssessmentReport:
    """Context, lattice and report for ``log`` in one call."""
    ctx = build_context(log, selector)
    lattice = build_lattice(ctx)
    return build_report(lattice, ctx, log.taxonomy, log, ctx.selector)
