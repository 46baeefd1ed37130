"""Reduction graphs for numerical semigroups."""
from .errors import (DSLError, InconsistencyError, InternalError, InvalidAperyError,
                     NotNumericalError, NotTotalError, PreconditionError, ResourceError,
                     SemigroupError, ValidationError)
from .numcore import (apery_oracle, classify_symmetry, frobenius_oracle, gaps_oracle,
                      membership_table, minimal_generators, power_sum_oracle)
from .genpoly import HilbertSeries, Poly, direct_sum_certificate, gap_polynomial, gen_poly
from .graph import (ArithmeticFamily, ExplicitFinite, Monogenic, ReductionEdge, ReductionGraph,
                    ScaledRange, Semigroup, analyze, apery_from_graph, balance, build_graph,
                    canonical_form, is_total, semantic_verify_edge, to_dot, truncated_span, validate)
from .edges import (apery_edge, binary_edge, explicit_edge, graph_from_specs, infinite_arithmetic_edge,
                    linear_binary_edge, linear_edge, modified_arithmetic_edge, residue_edge, root_only)
from .transform import PartialScalePattern, add_artificial_node, compose, enrich, partial_scale, scale_graph
from .dsl import assemble, format_script, load, parse, script_from_graph

__version__ = "0.1.0"

__all__ = [
    "ArithmeticFamily",
    "DSLError",
    "ExplicitFinite",
    "HilbertSeries",
    "InconsistencyError",
    "InternalError",
    "InvalidAperyError",
    "Monogenic",
    "NotNumericalError",
    "NotTotalError",
    "PartialScalePattern",
    "Poly",
    "PreconditionError",
    "ReductionEdge",
    "ReductionGraph",
    "ResourceError",
    "ScaledRange",
    "Semigroup",
    "SemigroupError",
    "ValidationError",
    "add_artificial_node",
    "analyze",
    "apery_edge",
    "apery_from_graph",
    "apery_oracle",
    "assemble",
    "balance",
    "binary_edge",
    "build_graph",
    "canonical_form",
    "classify_symmetry",
    "compose",
    "direct_sum_certificate",
    "enrich",
    "explicit_edge",
    "format_script",
    "frobenius_oracle",
    "gap_polynomial",
    "gaps_oracle",
    "gen_poly",
    "graph_from_specs",
    "infinite_arithmetic_edge",
    "is_total",
    "linear_binary_edge",
    "linear_edge",
    "load",
    "membership_table",
    "minimal_generators",
    "modified_arithmetic_edge",
    "parse",
    "partial_scale",
    "power_sum_oracle",
    "residue_edge",
    "root_only",
    "scale_graph",
    "script_from_graph",
    "semantic_verify_edge",
    "to_dot",
    "truncated_span",
    "validate",
]

