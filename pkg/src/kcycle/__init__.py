"""Algebraic K-Cycle detection and randomized O(k^3) compression over GF(2^64)."""

__version__ = "0.1.0"

from kcycle._backend import NAME as BACKEND
from kcycle.compress import CompressedInstance, deserialize, evaluate_compressed, serialize
from kcycle.graph import Graph, ReducedInstance, parse_instance, reduce_terminals
from kcycle.solver import Algorithm, Verdict, detect_2k, detect_4k, solve

__all__ = [
    "Algorithm",
    "BACKEND",
    "CompressedInstance",
    "Graph",
    "ReducedInstance",
    "Verdict",
    "deserialize",
    "detect_2k",
    "detect_4k",
    "evaluate_compressed",
    "parse_instance",
    "reduce_terminals",
    "serialize",
    "solve",
]
