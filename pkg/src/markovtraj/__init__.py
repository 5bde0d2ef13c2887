"""Exact-rational Markov kernel algebra and finite-depth trajectory measures.

The package turns the classical construction of a process law from a
family of history-dependent transition kernels into finite, exact
computations: every identity it claims can be checked as literal equality
of rationals.  See the README for the model file format and the CLI.
"""
from .errors import (
    DomainError,
    InvariantError,
    MarkovTrajError,
    ModelFormatError,
    PreconditionError,
)
from .kernel import (
    Kernel,
    comp_kernel,
    comp_measure,
    comp_prod_kernel,
    comp_prod_measure,
    const_kernel,
    deterministic_kernel,
    id_kernel,
    map_kernel,
    prod_kernel,
)
from .measure import (
    Dist,
    FiniteSpace,
    SubsetOf,
    TupleSpace,
    dirac,
    product_dist,
    pushforward_dist,
    section_subset,
    uniform,
)
from .model_io import LoadedModel, load_model, model_from_dict
from .product import (
    check_const_chain_law,
    check_partial_traj_const,
    check_product_projection,
    check_product_split,
    const_chain,
    initial_prefix_dist,
    product_prefix_dist,
)
from .rational import Rat, format_rational, parse_rational
from .report import Report
from .trajectory import (
    ChainModel,
    Cylinder,
    check_cond_exp,
    check_content_additivity,
    check_traj_split,
    cond_exp,
    content_at_depth,
    cylinder,
    cylinder_content,
    cylinder_from_constraints,
    diff_cylinders,
    disjoint_union_cylinders,
    expectation_table,
    extract_witness,
    intersect_cylinders,
    is_sub_cylinder,
    lift_cylinder,
    restrict_prefix,
    sample_trajectory,
    traj_marginal,
    union_cylinders,
)
from .verify import run_verify

__all__ = [
    "ChainModel",
    "Cylinder",
    "Dist",
    "DomainError",
    "FiniteSpace",
    "InvariantError",
    "Kernel",
    "LoadedModel",
    "MarkovTrajError",
    "ModelFormatError",
    "PreconditionError",
    "Rat",
    "Report",
    "SubsetOf",
    "TupleSpace",
    "check_cond_exp",
    "check_const_chain_law",
    "check_content_additivity",
    "check_partial_traj_const",
    "check_product_projection",
    "check_product_split",
    "check_traj_split",
    "comp_kernel",
    "comp_measure",
    "comp_prod_kernel",
    "comp_prod_measure",
    "cond_exp",
    "const_chain",
    "const_kernel",
    "content_at_depth",
    "cylinder",
    "cylinder_content",
    "cylinder_from_constraints",
    "deterministic_kernel",
    "diff_cylinders",
    "dirac",
    "disjoint_union_cylinders",
    "expectation_table",
    "extract_witness",
    "format_rational",
    "id_kernel",
    "initial_prefix_dist",
    "intersect_cylinders",
    "is_sub_cylinder",
    "lift_cylinder",
    "load_model",
    "map_kernel",
    "model_from_dict",
    "parse_rational",
    "prod_kernel",
    "product_dist",
    "product_prefix_dist",
    "pushforward_dist",
    "restrict_prefix",
    "run_verify",
    "sample_trajectory",
    "section_subset",
    "traj_marginal",
    "uniform",
]
