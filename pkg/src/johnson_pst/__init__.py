"""Coupling design and verification for perfect GHZ transfer on Johnson networks J(2m, m)."""

__version__ = "0.1.0"

from .design import (  # noqa: E402
    DesignInput,
    PSTDesign,
    design_couplings,
    design_johnson,
    hamiltonian_in_adjacency_basis,
    phase_targets,
)
from .evolution import (  # noqa: E402
    DenseSectorOracle,
    dense_sector_evolution,
    fidelity_sweep,
    heisenberg_oracle,
    spectral_amplitudes,
)
from .graph import (  # noqa: E402
    antipode,
    build_johnson,
    distance_matrices,
    intersection_numbers,
    stratify,
)
from .spectral import (  # noqa: E402
    eigenmatrix,
    eigenvalue_support,
    eval_polys,
    gauss_weights,
    johnson_qd,
    qd_from_intersection,
    stieltjes_value,
)

__all__ = [
    "DesignInput",
    "PSTDesign",
    "DenseSectorOracle",
    "antipode",
    "build_johnson",
    "dense_sector_evolution",
    "design_couplings",
    "design_johnson",
    "distance_matrices",
    "eigenmatrix",
    "eigenvalue_support",
    "eval_polys",
    "fidelity_sweep",
    "gauss_weights",
    "hamiltonian_in_adjacency_basis",
    "heisenberg_oracle",
    "intersection_numbers",
    "johnson_qd",
    "phase_targets",
    "qd_from_intersection",
    "spectral_amplitudes",
    "stieltjes_value",
    "stratify",
]
