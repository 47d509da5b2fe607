"""chebnet: compile polynomial approximations into exact deep RePU networks.

The library covers the full pipeline: approximate a smooth function by a
Chebyshev (or Legendre) expansion, rewrite the coefficients in a
hierarchical product basis, compile the result into a network of rectified
power units that evaluates the polynomial exactly, then optionally
fine-tune the network on data.  Conditioning diagnostics explain why the
Chebyshev route is numerically stable while the power-series route is not.
"""

from .chebyshev import (
    ChebExpansion,
    LegendreExpansion,
    MonomialExpansion,
    MultisectionIdentity,
    chebyshev_interpolate,
    eval_chebyshev,
    eval_legendre,
    eval_monomial,
    legendre_power_matrix,
    legendre_project,
    legendre_to_monomial,
    multisection_identity,
)
from .conditioning import (
    CoefficientReport,
    CondRow,
    coefficient_magnitudes,
    cond_table,
    cond_table_s2,
    condition_number,
    hierarchical_transform_condition,
    legendre_power_condition,
)
from .construct import (
    ConstructionReceipt,
    build_chebnet_1d,
    build_chebnet_1d_general,
    build_chebnet_downward_closed,
    build_chebnet_tensor,
    build_chebnet_total_degree,
    build_powernet_1d,
)
from .hierarchy import (
    HierarchicalChebExpansion,
    chebyshev_to_hierarchical,
    eval_hierarchical,
    hierarchical_basis_value,
    leading_transform_block,
    parent_level,
    section_transform_matrix,
    section_transform_matrix_general,
)
from .indexsets import (
    IndexSet,
    hyperbolic_cross_index_set,
    tensor_index_set,
    total_degree_index_set,
    validate_downward_closed,
)
from .multivariate import ChebExpansionND, eval_chebyshev_nd, hierarchical_coefficients_nd
from .network import (
    ComplexityReport,
    Layer,
    RepuNetwork,
    backward,
    complexity,
    concat,
    forward,
    identity_carry,
    load_network,
    network_from_dict,
    network_to_dict,
    parallelize,
    repu,
    save_network,
)
from .training import (
    Dataset,
    TrainConfig,
    TrainTrace,
    loss_mse,
    rmsprop_step,
    test_function,
    train,
    uniform_grid_dataset,
)

__version__ = "0.1.0"

__all__ = [
    "ChebExpansion",
    "LegendreExpansion",
    "MonomialExpansion",
    "MultisectionIdentity",
    "HierarchicalChebExpansion",
    "ChebExpansionND",
    "IndexSet",
    "RepuNetwork",
    "Layer",
    "ComplexityReport",
    "ConstructionReceipt",
    "CondRow",
    "CoefficientReport",
    "Dataset",
    "TrainConfig",
    "TrainTrace",
    "build_chebnet_1d",
    "build_chebnet_1d_general",
    "build_chebnet_downward_closed",
    "build_chebnet_tensor",
    "build_chebnet_total_degree",
    "build_powernet_1d",
    "backward",
    "chebyshev_interpolate",
    "chebyshev_to_hierarchical",
    "coefficient_magnitudes",
    "complexity",
    "concat",
    "cond_table",
    "cond_table_s2",
    "condition_number",
    "eval_chebyshev",
    "eval_chebyshev_nd",
    "eval_hierarchical",
    "eval_legendre",
    "eval_monomial",
    "forward",
    "hierarchical_basis_value",
    "hierarchical_coefficients_nd",
    "hierarchical_transform_condition",
    "hyperbolic_cross_index_set",
    "identity_carry",
    "leading_transform_block",
    "legendre_power_condition",
    "legendre_power_matrix",
    "legendre_project",
    "legendre_to_monomial",
    "load_network",
    "loss_mse",
    "multisection_identity",
    "network_from_dict",
    "network_to_dict",
    "parallelize",
    "parent_level",
    "repu",
    "rmsprop_step",
    "save_network",
    "section_transform_matrix",
    "section_transform_matrix_general",
    "tensor_index_set",
    "test_function",
    "total_degree_index_set",
    "train",
    "uniform_grid_dataset",
    "validate_downward_closed",
]
