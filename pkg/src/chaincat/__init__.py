"""Exact and numeric verification toolkit for chain-polynomial
singularity categories: grading groups, Ext algebras, exceptional
collections and their helix recursion, Koszul factorization oracles, and
root localization for the perturbed fibrations."""

from .chain import (
    Chain,
    canonical_weights,
    chain_product,
    dual_milnor,
    homogeneity_weights,
    milnor_number,
    parity_product_sum,
    serre_shift,
    socle_degree,
    winding_sum,
)
from .exccol import (
    helix_recursion,
    helix_segment,
    left_dual,
    right_dual,
    serre_operator,
    shift_equivalent,
    verify_recursion,
)
from .extalgebra import ExtAlgebra, collection_gram, perfect_pairing_check, structure_report
from .grading import (
    ExtendedGrading,
    GradingGroup,
    GroupElement,
    ef_degree_offset,
    extended_grading,
    generator_degree,
    maximal_grading,
)
from .koszul import (
    ext_dim,
    ext_table,
    object_E,
    object_F,
    stab,
    vgit_weights,
    window_check,
    window_intervals,
    window_object,
)
from .rootlab import (
    chain_family,
    coil_paths,
    critical_curve_roots,
    curve_constant,
    dart_report,
    g_critical_points,
    lift_critical_point,
    lifts_at_zero,
    merge_report,
    rotation_equivariance,
    solve_family,
)

__version__ = "0.1.0"
