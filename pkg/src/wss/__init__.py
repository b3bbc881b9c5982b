"""Exact weight-graded cohomology of moduli spaces of smooth pointed curves.

The engine computes the associated graded pieces gr_q H^r and gr_q H_c^r of
the rational cohomology of the moduli space of smooth n-pointed genus-g
curves (and of its compact-type and rational-tails variants), together with
the symmetric-group decomposition of each piece, by running the weight
spectral sequences attached to the boundary stratification of the stable
compactification.  All arithmetic is exact.

Typical entry points:

    compute_table   schedule and run one weight table end to end
    e2_table        the same table straight from the page layer, no cache
    basis           pairing-certified basis of one tautological degree
    psi_integral    exact intersection numbers feeding the pairings
"""

from wss.correlators import mixed_integral, psi_integral
from wss.engine import TableConfig, compute_table, run
from wss.formats import parse_result, result_document
from wss.graphs import StableGraph, enumerate_stable_graphs
from wss.pages import (
    WeightTable,
    build_page,
    duality_check,
    e2_table,
    euler_check,
)
from wss.ring import Symmetry, UnsupportedRingModel, basis, invariants

__all__ = [
    "StableGraph",
    "Symmetry",
    "TableConfig",
    "UnsupportedRingModel",
    "WeightTable",
    "basis",
    "build_page",
    "compute_table",
    "duality_check",
    "e2_table",
    "enumerate_stable_graphs",
    "euler_check",
    "invariants",
    "mixed_integral",
    "parse_result",
    "psi_integral",
    "result_document",
    "run",
]
