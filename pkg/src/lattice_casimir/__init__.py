"""Vacuum interaction energy of parallel delta-scatterer lattices.

Scattering-theory (TGTG) evaluation of the Casimir interaction between
two parallel 1D chains or 2D square lattices of contact scatterers,
plus the limiting cases (isolated pair, dense wire, continuous sheet,
sphere and cylinder oracles) and a pairwise-summation comparison.
"""

from .errors import (
    ConvergenceError,
    DomainError,
    MatrixConditionError,
    SingularCouplingError,
    UsageError,
    ValidityError,
)
from .special import (
    QuadratureSpec,
    bessel_i,
    bessel_k,
    dilog,
    integrate_semiinfinite,
)
from .lattice import (
    ChainPairConfig,
    Lattice2DPairConfig,
    MomentumDecomposition,
    TruncationSpec,
    effective_area_coupling,
    j1_lattice_sum,
    lattice_offset_constant,
    phi_tilde_1d,
    phi_tilde_2d,
    reduce_displacement,
)
from .energy import (
    EnergyResult,
    FiniteLatticeSpec,
    chain_sites,
    energy_1d,
    energy_2d,
    finite_lattice_energy,
    kernel_h_1d,
    kernel_h_2d,
    richardson_per_cell,
)
from .limits import (
    CylinderPairConfig,
    SphereConfig,
    casimir_polder_closed_form,
    casimir_polder_gradient,
    casimir_polder_two_point,
    cylinder_asymptote,
    cylinder_energy_per_length,
    lifshitz_delta_planes,
    pairwise_energy_chain,
    pairwise_energy_lattice2d,
    pairwise_force_chain,
    sphere_large_separation_energy,
    sphere_phi_inverse,
    wire_limit_asymptote,
    wire_limit_energy,
)

__version__ = "0.1.0"

__all__ = [
    "ChainPairConfig",
    "ConvergenceError",
    "CylinderPairConfig",
    "DomainError",
    "EnergyResult",
    "FiniteLatticeSpec",
    "Lattice2DPairConfig",
    "MatrixConditionError",
    "MomentumDecomposition",
    "QuadratureSpec",
    "SingularCouplingError",
    "SphereConfig",
    "TruncationSpec",
    "UsageError",
    "ValidityError",
    "bessel_i",
    "bessel_k",
    "casimir_polder_closed_form",
    "casimir_polder_gradient",
    "casimir_polder_two_point",
    "chain_sites",
    "cylinder_asymptote",
    "cylinder_energy_per_length",
    "dilog",
    "effective_area_coupling",
    "energy_1d",
    "energy_2d",
    "finite_lattice_energy",
    "integrate_semiinfinite",
    "j1_lattice_sum",
    "kernel_h_1d",
    "kernel_h_2d",
    "lattice_offset_constant",
    "lifshitz_delta_planes",
    "pairwise_energy_chain",
    "pairwise_energy_lattice2d",
    "pairwise_force_chain",
    "phi_tilde_1d",
    "phi_tilde_2d",
    "reduce_displacement",
    "richardson_per_cell",
    "sphere_large_separation_energy",
    "sphere_phi_inverse",
    "wire_limit_asymptote",
    "wire_limit_energy",
]
