"""sobstab: numerical toolkit for the stability of the (fractional) Sobolev
inequality on finite superpositions of Talenti bubbles.

The package evaluates the stability quotient

    E(f) = (|f|_{Hs}^2 - S_d |f|_{2*}^2) / dist(f, M)^2

for f a finite linear combination of bubbles, where M is the optimizer
manifold and the distance is computed through the derivative-free
reformulation dist^2 = |f|^2 - S_d * sup_{h in M1} (f, h^{2*-1})^2.  All
Sobolev-side quantities reduce to convolution-free pairings, so no fractional
Laplacian is ever discretized.
"""

from .bubbles import (
    BubbleParam,
    Geometry,
    Superposition,
    hs_inner,
    hs_norm_sq,
    lp_norm,
    pair_against_bubble,
    superposition_from_dict,
    superposition_to_dict,
)
from .constants import (
    Ambient,
    SharpConstants,
    appendix_constants,
    beta_half_line,
    normalization_c,
    sharp_constant,
    sharp_constants,
    sphere_area,
)
from .errors import (
    GeometryError,
    HypothesisError,
    OptimizerError,
    ParameterError,
    QuadratureNonConvergence,
    SchemaError,
    SobstabError,
)
from .expansion import (
    DerivativeCheck,
    ExpansionPoint,
    ExpansionReport,
    F_of,
    G_of,
    H_of,
    default_lambda_grid,
    derivative_check,
    sweep,
    sweep_point,
    threshold_value,
    two_bubble,
)
from .functional import (
    FunctionalReport,
    MOptimum,
    be_quotient,
    dist_sq,
    functional_report,
    m_value,
    sobolev_quotient,
)
from .inequalities import (
    QuotientSextuple,
    QuotientVerdict,
    convex_g,
    monotone_quotient,
    quotient_compare,
)
from .quadrature import (
    DEFAULT_CONFIG,
    QuadratureConfig,
    QuadratureResult,
    integrate_axisymmetric,
    integrate_half_line,
    integrate_real_line,
)
from .thresholds import (
    Binding,
    CrossoverScan,
    ThresholdReport,
    compare,
    crossover_scan,
    spectral_threshold,
    two_peak_threshold,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # constants
    "Ambient",
    "SharpConstants",
    "appendix_constants",
    "beta_half_line",
    "normalization_c",
    "sharp_constant",
    "sharp_constants",
    "sphere_area",
    # quadrature
    "DEFAULT_CONFIG",
    "QuadratureConfig",
    "QuadratureResult",
    "integrate_axisymmetric",
    "integrate_half_line",
    "integrate_real_line",
    # bubbles
    "BubbleParam",
    "Geometry",
    "Superposition",
    "hs_inner",
    "hs_norm_sq",
    "lp_norm",
    "pair_against_bubble",
    "superposition_from_dict",
    "superposition_to_dict",
    # functional
    "FunctionalReport",
    "MOptimum",
    "be_quotient",
    "dist_sq",
    "functional_report",
    "m_value",
    "sobolev_quotient",
    # expansion
    "DerivativeCheck",
    "ExpansionPoint",
    "ExpansionReport",
    "F_of",
    "G_of",
    "H_of",
    "default_lambda_grid",
    "derivative_check",
    "sweep",
    "sweep_point",
    "threshold_value",
    "two_bubble",
    # thresholds
    "Binding",
    "CrossoverScan",
    "ThresholdReport",
    "compare",
    "crossover_scan",
    "spectral_threshold",
    "two_peak_threshold",
    # inequalities
    "QuotientSextuple",
    "QuotientVerdict",
    "convex_g",
    "monotone_quotient",
    "quotient_compare",
    # errors
    "SobstabError",
    "ParameterError",
    "SchemaError",
    "GeometryError",
    "HypothesisError",
    "OptimizerError",
    "QuadratureNonConvergence",
]
