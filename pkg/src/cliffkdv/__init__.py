"""Numerical laboratory for a coupled KdV system with Clifford-algebra-valued fields.

Pseudospectral integration of the lambda-family system, monitoring of all
of its conserved charges, and an independent reconstruction of the flow
from its constrained Hamiltonian structure.
"""

from .charges import (
    BoundCheck,
    ChargeReport,
    SupBoundCheck,
    bound_check,
    bound_constant,
    broken_charge_witness,
    charge_h1,
    charge_h3,
    charge_h5,
    charge_h_half,
    charge_nonlocal,
    charge_report,
    sobolev_sup_bound_check,
)
from .dynamics import (
    SolverConfig,
    decouple_lambda2,
    evolve,
    galileo_boost,
    rhs,
    step,
)
from .errors import (
    BlowUpError,
    CliffKdvError,
    ConfigError,
    DegenerateParametersError,
    DomainTooSmallError,
    GridShapeError,
    InternalConsistencyError,
    InvalidPhasePointError,
    NonIntegrableInputError,
    UnsupportedOrderError,
    UnsupportedShapeError,
)
from .fields import (
    FieldState,
    body_p,
    l2_norm_sq,
    load_state,
    save_state,
    sobolev_h1_norm_sq,
    zero_state,
)
from .grid import (
    Grid,
    antideriv,
    cumulative_integral,
    dealiased_product,
    deriv,
    integrate,
    shift,
)
from .hamiltonian import (
    ConstraintPair,
    constraint_bracket_matrix_check,
    dirac_rhs,
    functional_derivative_phi,
    functional_derivative_u,
    lagrangian_density,
    legendre_hamiltonian,
    lift_to_potentials,
    potentials_to_state,
)
from .solitons import (
    SolitonSpec,
    kdv_two_soliton,
    one_soliton,
    oracle_velocity,
    residual_check,
    two_soliton_time_deriv,
    velocity_arbitration,
)

__version__ = "0.1.0"
