"""Bundled example activities.

``t3`` / ``f4``: a small abstract taxonomy (five roots, one concept with two
parents) and ten resources tagged with it. Two resources are tagged with
categories directly, so the log loads in lenient mode.

``babel``: a literary-annotation taxonomy with five categories and
fourteen annotation types, and 75 notes by six annotators.
"""

from __future__ import annotations

from importlib import resources

from .context import ActivityLog, load_annotations
from .ontology import Taxonomy, load_taxonomy

__all__ = ["path", "load_t3", "load_f4", "load_t8", "load_babel"]


def path(name: str):
    """Filesystem path of a bundled data file, e.g. ``path("f4.jsonl")``."""
    return resources.files(__package__).joinpath("data", name)


def _taxonomy(name: str, tid: str) -> Taxonomy:
    t = load_taxonomy(path(name).read_text(encoding="utf-8"))
    t.id = t.id or tid
    return t


def load_t3() -> Taxonomy:
    return _taxonomy("t3.json", "t3")


def load_t8() -> Taxonomy:
    return _taxonomy("t8.json", "babel")


def load_f4() -> ActivityLog:
    annotations = load_annotations(path("f4.jsonl").read_text(encoding="utf-8"))
    return ActivityLog(load_t3(), annotations, lenient_categories=True)


def load_babel() -> ActivityLog:
    annotations = load_annotations(path("babel.jsonl").read_text(encoding="utf-8"))
    return ActivityLog(load_t8(), annotations)
