"""Exact box splines, multiple Bernoulli series and semi-discrete convolution identities."""

from .arrangement import (
    AdmissibleSubspace,
    Configuration,
    Hyperplane,
    admissible_hyperplanes,
    admissible_subspaces,
    cocircuits,
    is_long,
    is_regular,
    random_regular_points,
    segment_breakpoints,
    subspace_spanned,
    tope_key,
    zonotope_contains,
    zonotope_volume,
)
from .bernoulli import (
    BernoulliExpr,
    TwistedBernoulli1D,
    bernoulli_poly,
    bernoulli_sum,
    w_eval,
    w_quotient,
    w_series,
    w_twisted_1d,
)
from .boxspline import (
    BernoulliTimesPoly,
    BoxEvaluator,
    CallableFn,
    EvaluableFn,
    PolyFn,
    box_convolve_eval,
    box_eval,
    box_pairing,
    box_quadrature_oracle,
)
from .cyclo import Cyclo
from .dm import DMBasis, dm_basis, is_in_dm
from .errors import *  # noqa: F401,F403
from .identity import (
    CharacterG,
    TheoremTerm,
    VerificationReport,
    continuous_conv_poly,
    dm_corollary_check,
    semidiscrete_eval,
    series_convolution,
    theorem1_check,
    theorem1_rhs,
    theorem2_check_1d,
    toric_vertices,
    twisted_corollary_check,
    twisted_semidiscrete_eval,
    x_of_g,
)
from .poly import Poly, Poly1D, format_poly, integral_operator, parse_poly, todd_apply

__version__ = "0.1.0"
