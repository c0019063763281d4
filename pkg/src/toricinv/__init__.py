"""Exact invariants of projective toric varieties.

The package computes, in exact arithmetic, the geometric and arithmetic
invariants attached to an integer exponent configuration with
radical-rational coefficients: degrees and multidegrees, binomial ideals,
obstruction indices, Chow weights, normalized heights and multiheights,
successive algebraic minima, and the Bezout identities for intersections
with monomial divisors.
"""

from .exactnum import (
    AlgScalar,
    CharacterNotRepresentable,
    LogLinear,
    PrecisionCapExceeded,
    Rational,
    ll_combine,
    ll_sign,
    parse_loglinear,
    scalar_log,
    scalar_valuation,
    set_precision_cap,
)
from .lattice import (
    Lattice,
    covolume_sq,
    hermite_normal_form,
    is_saturated,
    lattice_index,
    orthogonal_complement,
    saturate,
    smith_normal_form,
    successive_minima_l1,
)
from .polytope import Polytope, minkowski_sum, mixed_volume
from .roof import RoofFunction, mixed_integral, roof, sup_convolution
from .toric import (
    BinomialIdeal,
    ExponentConfig,
    ToricData,
    compare_embeddings,
    degree,
    from_binomial_ideal,
    ideal_generators,
    minkowski_sandwich,
    multidegree,
    obstruction_indices,
    pluecker,
    reduce_to_full_rank,
)
from .heights import (
    AdelicWeightSystem,
    HypothesisNotSatisfiedError,
    IntersectionCycle,
    MonomialDivisor,
    PaperIdentityError,
    adelic_weights,
    chow_bezout,
    chow_weight,
    chow_weight_cycle,
    chow_weight_hypersurface,
    essential_minimum,
    height_bezout,
    height_degree_bounds,
    hypersurface_minima,
    monomial_intersection,
    multiheight,
    normalized_height,
    point_height,
    successive_minima,
    theta_cell,
    weight_roof,
    zhang_check,
    zhang_family,
)

__version__ = "0.1.0"
