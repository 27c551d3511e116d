"""Multiclass preferential attachment model of the AS-level Internet."""

from .analytic import MpaParams, Prediction, predict
from .generator import GeneratorConfig, run, seed_graph
from .graph import AnnotatedGraph, DegreeVector, LinkKind, NodeClass, validate

__all__ = [
    "AnnotatedGraph",
    "DegreeVector",
    "GeneratorConfig",
    "LinkKind",
    "MpaParams",
    "NodeClass",
    "Prediction",
    "predict",
    "run",
    "seed_graph",
    "validate",
]
