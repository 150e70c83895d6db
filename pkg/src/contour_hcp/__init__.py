"""Contour-pair Hamiltonicity heuristic for graphs of maximum degree 3.

A graph is represented by two "basic objects": spanning cyclic contours whose
gaps (windows) are not graph edges, with disjoint sets of interior edges. Both
objects are weighted with +-0.5 node weights and compared. The package builds
the objects, evaluates the claimed decision rule, and checks it against an
exact Hamiltonian-cycle search over generated graph families.
"""

from .construction import ObjectPair, construct_first, construct_pair
from .decision import Verdict, decide, parameters, union_check
from .graph import Graph, fixture, parse_edge_list, serialize_edge_list
from .harness import run_pipeline, sweep
from .objects import BasicObject, apply_case, find_applicable, initial_object
from .oracle import find_hamiltonian

__version__ = "0.1.0"

__all__ = [
    "BasicObject", "Graph", "ObjectPair", "Verdict", "apply_case", "construct_first",
    "construct_pair", "decide", "find_applicable", "find_hamiltonian", "fixture",
    "initial_object", "parameters", "parse_edge_list", "run_pipeline",
    "serialize_edge_list", "sweep", "union_check",
]
