"""genspear: generalized Spearman correlation for non-monotonic dependence.

Tools for measuring, bounding, and modelling dependence between random
variables whose association is not monotone: orthonormal correlation bases
on the unit interval, matrices of generalized Spearman coefficients,
attainable-range and support-set analysis, stochastic inversion of
piecewise-monotone transformations, copula construction and simulation,
rank-based estimation, and maximum-likelihood fitting.
"""

from .basis import (
    MAX_ORDER,
    BasisFunction,
    BasisOrderError,
    CorrelationBasis,
    CosineBasis,
    FourierBasis,
    LegendreBasis,
    eval_basis,
    eval_basis_derivative,
    get_basis,
    integral_basis,
    turning_points,
)
from .copulas import (
    ClaytonCopula,
    ComonotoneCopula,
    Copula,
    CountermonotoneCopula,
    FrankCopula,
    GaussianCopula,
    GumbelCopula,
    IndependenceCopula,
    StudentTCopula,
    bvn_cdf,
    from_family,
)
from .estimate import (
    EstimatedMatrix,
    RankedSample,
    asymptotic_equivalence_check,
    estimate,
    estimate_matrix,
    matrix_distance,
    rank,
    simulation_study,
)
from .population import (
    BasisCorrMatrix,
    BoundsResult,
    basis_corr_matrix,
    bounds,
    gen_spearman,
    maximize_gen_spearman,
    support_set,
    symmetry_report,
)
from .transform import (
    CosineUdp,
    IdentityUdp,
    PiecewiseMonotone,
    PushforwardUdp,
    RegularUdp,
    VTransformUdp,
    build_udp,
    piecewise_from_basis,
    preimage_roots,
    transform_from_spec,
    transform_to_spec,
    u_shape,
    v_transform,
)
from .udpinv import (
    InvertedCopula,
    ThresholdKernel,
    cosine_inverted_cdf,
    fit_ml,
    inverted_density,
    jointly_symmetric_44,
    prohibition_sign,
    sample_inverted,
    stochastic_inverse,
)

__version__ = "0.1.0"

__all__ = [
    "MAX_ORDER",
    "BasisFunction",
    "BasisOrderError",
    "CorrelationBasis",
    "CosineBasis",
    "FourierBasis",
    "LegendreBasis",
    "eval_basis",
    "eval_basis_derivative",
    "get_basis",
    "integral_basis",
    "turning_points",
    "Copula",
    "IndependenceCopula",
    "ComonotoneCopula",
    "CountermonotoneCopula",
    "GaussianCopula",
    "StudentTCopula",
    "FrankCopula",
    "ClaytonCopula",
    "GumbelCopula",
    "bvn_cdf",
    "from_family",
    "PiecewiseMonotone",
    "RegularUdp",
    "IdentityUdp",
    "VTransformUdp",
    "CosineUdp",
    "PushforwardUdp",
    "build_udp",
    "piecewise_from_basis",
    "preimage_roots",
    "transform_from_spec",
    "transform_to_spec",
    "u_shape",
    "v_transform",
    "BasisCorrMatrix",
    "BoundsResult",
    "basis_corr_matrix",
    "bounds",
    "gen_spearman",
    "maximize_gen_spearman",
    "support_set",
    "symmetry_report",
    "stochastic_inverse",
    "sample_inverted",
    "inverted_density",
    "InvertedCopula",
    "ThresholdKernel",
    "cosine_inverted_cdf",
    "jointly_symmetric_44",
    "prohibition_sign",
    "fit_ml",
    "RankedSample",
    "EstimatedMatrix",
    "rank",
    "estimate",
    "estimate_matrix",
    "matrix_distance",
    "simulation_study",
    "asymptotic_equivalence_check",
]
