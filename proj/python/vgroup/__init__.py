"""Grouping hierarchies for vector graphics: inference, metrics and training."""

from ._vgroup import (
    Document,
    Tree,
    VGroupError,
    containment,
    cted,
    fmi,
    infer,
    load_svg,
    mean_node_overlap,
    node_overlap,
    parse_svg,
    realizes_containment,
    suggest,
    synthesize,
    train,
)

__all__ = [
    "Document",
    "Tree",
    "VGroupError",
    "containment",
    "cted",
    "fmi",
    "infer",
    "load_svg",
    "mean_node_overlap",
    "node_overlap",
    "parse_svg",
    "realizes_containment",
    "suggest",
    "synthesize",
    "train",
]
