"""
MiniLang frontend: parsing, GSA transformation and static dependence analysis.
"""

from .cfg import ControlFlowGraph, build_cfg
from .dependence import (
    CONTROL, DATA, DependencyGraph, Edge, EquivalenceClasses, MethodFacts,
    analyze_method, build_dependence_graph, equivalence_classes,
)
from .gsa import temp_name, transform_gsa
from .parser import parse, parse_file, parse_suite, parse_suite_file
from .syntax import Method, OccurrenceKind, Program, SourceOrigin, TestCase, VarOccurrence

__all__ = [
    "CONTROL",
    "DATA",
    "ControlFlowGraph",
    "DependencyGraph",
    "Edge",
    "EquivalenceClasses",
    "Method",
    "MethodFacts",
    "OccurrenceKind",
    "Program",
    "SourceOrigin",
    "TestCase",
    "VarOccurrence",
    "analyze_method",
    "build_cfg",
    "build_dependence_graph",
    "equivalence_classes",
    "parse",
    "parse_file",
    "parse_suite",
    "parse_suite_file",
    "temp_name",
    "transform_gsa",
]
