"""detforge: self-consistent-field electronic structure as sequential
QUSO/QUBO/MaxCut optimization."""

from .hamiltonian import (
    DiagonalHamiltonian,
    PenaltySpec,
    apply_penalties,
    build_diagonal_hamiltonian,
    energy_of_state,
    jw_map,
    number_penalty,
    s2_diagonal,
    spin_penalty_closed_shell,
)
from .integral_io import (
    IntegralBundle,
    MoHamiltonianData,
    load_bundle,
    load_fcidump,
    load_model,
    save_bundle,
    save_model,
)
from .mappings import (
    export_xorsat,
    quso_to_maxcut,
    quso_to_qubo,
    qubo_to_quso,
    recover_state,
    rosenberg_quadratize,
)
from .models import FockState, MaxCutInstance, PuboModel, QuboModel, QusoModel, aufbau_state
from .orbital_rotation import (
    ao_to_mo,
    rotation_matrix,
    skew_from_kappa,
    transform_one_electron,
    transform_two_electron_diagonal,
    transform_two_electron_full,
)
from .solvers import SolverBudget, SolverResult, solve

__version__ = "0.1.0"
