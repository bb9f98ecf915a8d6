"""Quantum dynamics of a free particle with time-dependent mass.

Invariant-operator construction of squeezed eigenstates, their geometric and
dynamical phases, exact wave-function solutions, and the closed-form Wigner
distribution of a two-packet superposition, all cross-checked against
independent numerical oracles (Crank-Nicolson propagation, quadrature Wigner
transform).
"""

from .errors import (
    ConsistencyError,
    DomainTooSmallError,
    NonDiagonalizableError,
    ProfileDomainError,
    QuadratureError,
    SingularCoefficientError,
    TdemassError,
)
from .invariant import (
    CoefficientState,
    DerivationTerms,
    InvariantParams,
    auxiliary_residual,
    coefficient_rates,
    coefficients_at,
    constraint_residual,
    derivation_terms_at,
    validate_params,
)
from .observables import UncertaintyRecord, expectation, is_instantaneously_coherent, uncertainty_at
from .oracle import (
    GridSpec,
    PropagationReport,
    PropagationResult,
    invariant_expectation_series,
    overlap,
    packet_norm,
    propagate,
    quadrature_axis,
    tdse_residual,
)
from .profiles import ConstantMass, MassProfile, QuadraticMass, TabulatedMass
from .states import (
    PhaseTriple,
    WavePacket,
    apply_momentum,
    apply_position,
    berry_connection,
    dynamical_phase,
    eigenstate,
    energy_expectation,
    full_solution,
    geometric_phase,
    lower_state,
    lowering_map,
    phase_triple,
    raise_state,
    raising_map,
    vacuum,
)
from .verify import run_battery
from .wigner import (
    CatState,
    PhaseSpaceGrid,
    cat_state,
    density,
    marginal_density,
    wigner_closed,
    wigner_closed_kernel,
    wigner_grid,
    wigner_numeric,
)

__version__ = "0.1.0"
