"""Certification of spherical 2-designs on lattice shells and height numerics.

Exact rational machinery establishes whether every layer of a lattice is a
spherical 2-design (which makes the lattice a stationary point of the torus
height); floating-point machinery evaluates the Epstein zeta continuation,
the height itself, and the stationarity residual on the determinant-1
manifold.
"""

from .gram import (
    ExpMapError,
    GramError,
    GramMatrix,
    LatticeDescriptor,
    ParityError,
    TangentDirection,
    adjugate,
    determinant,
    double,
    exp_map,
    gram_from_json,
    gram_from_text,
    gram_inverse,
    is_even,
    level,
    load_gram,
    normalized_to_det1,
    orthosum_A1,
    tangent_project,
)
from .shells import (
    EnumerationBudgetError,
    Layer,
    LayerSpectrum,
    cardinality_vector,
    dump_spectrum,
    enumerate_layers,
    half_layer,
    layer_cardinalities,
    layer_moments,
    lll_reduce,
    short_vectors_float,
)
from .design import (
    DesignComputationError,
    DesignVerdict,
    HarmonicPoly,
    IrrationalMomentError,
    design_constant,
    harm2_basis,
    harmonic_moment,
    is_2_design_moment,
    is_t_design,
    moment_matrix,
    pair_power_sum,
)
from .theta import QSeries, theta_product, theta_series, vanishing_report
from .certify import (
    FullyCriticalReport,
    VERDICT_CRITICAL,
    VERDICT_FAILURE,
    VERDICT_INCONCLUSIVE,
    conjecture_probe,
    dual_descriptor,
    fully_critical,
    gamma1_index,
    sturm_bound,
)
from .specfun import GammaDomainError, exp1, upper_gamma
from .height import (
    HeightReport,
    TruncationError,
    ZetaPoleError,
    completed_zeta,
    directional_derivative_fd,
    epstein_zeta,
    F_value,
    grad_F,
    height,
    height_constant,
    stationarity_residual,
)
from .catalog import Catalog, load_catalog, reproduce_tables

__version__ = "0.1.0"
