from .checks import (
    CIStatement,
    FaithfulnessReport,
    MinimalityReport,
    ParentCheck,
    check_causal_minimality,
    check_faithfulness,
)
from .expr import Const, Max, Min, Noise, Not, Ref, Table, parse_expr, to_text
from .graph import d_separated
from .inference import (
    TOL,
    JointDistribution,
    ci_discrepancy,
    conditional_probability,
    enumerate_joint,
    is_independent,
)
from .library import m1, m2, observational_ay_table
from .model import DoAssignment, ScmSpec, intervene
from .spec_file import dump_model, load_bundled, load_model, parse_model

__all__ = [
    "CIStatement", "Const", "DoAssignment", "FaithfulnessReport", "JointDistribution",
    "Max", "Min", "MinimalityReport", "Noise", "Not", "ParentCheck", "Ref", "ScmSpec",
    "TOL", "Table", "check_causal_minimality", "check_faithfulness", "ci_discrepancy",
    "conditional_probability", "d_separated", "dump_model", "enumerate_joint", "intervene",
    "is_independent", "load_bundled", "load_model", "m1", "m2", "parse_expr", "parse_model",
    "observational_ay_table", "to_text",
]
