"""Exact finite-dimensional Riesz space toolkit.

Conditional expectations, Hahn-Jordan decompositions of component charges,
Riesz-Frechet representers and canonical partial inverses over ``Q^n``.
"""

from .exceptions import (
    DimensionMismatch,
    FunctionalViolation,
    HomogeneityViolation,
    InstanceError,
    NotInAlgebra,
    OracleBoundExceeded,
    PreconditionError,
    RangeViolation,
    RefinementError,
    RieszError,
)
from .expectation import ExpectationOperator, apply_t, holder_holds, t_norm1, t_norm2_squared
from .hahn_jordan import (
    ChargeTable,
    ComponentCharge,
    DecompositionTables,
    alpha,
    brute_force_hahn,
    charge_from_density,
    evaluate_charge,
    hahn_jordan,
    maximal_m,
    negative_part_witness,
    positive_piece,
    strongly_negative_witness,
)
from .instance import Instance, dump_instance, load_instance, parse_instance
from .lattice import ComponentMask, PartitionAlgebra, RieszElement, band_mask
from .partial_inverse import (
    canonical_inverse_exact,
    dyadic_bounds,
    spectral_inverse,
    spectral_inverse_upper,
    spectral_masks,
)
from .riesz_frechet import (
    dyadic_represent,
    exact_represent,
    functional_norm_squared,
    level_sets,
    make_density_functional,
    validate_matrix_functional,
)

__version__ = "0.1.0"
