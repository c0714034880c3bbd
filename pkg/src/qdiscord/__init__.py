"""Quantum discord of bipartite density matrices."""
from .discord import (
    ClassicalJoint,
    DiscordReport,
    classical_mutual_information,
    conditional_entropy,
    minimize_discord,
    mutual_information_i,
    mutual_information_j,
    proposition_residuals,
    von_neumann_entropy,
)
from .linalg import BACKEND
from .measurement import (
    ProjectiveMeasurement,
    classical_decomposition,
    condition,
    dephase,
    qubit_basis,
    superselection_residual,
)
from .separability import ppt_test
from .states import (
    BipartiteState,
    SeparableSpec,
    bell_state,
    decohered_cnot,
    from_separable_spec,
    load_state,
    pre_measurement,
    random_state,
    validate,
    werner,
)

__version__ = "0.1.0"
