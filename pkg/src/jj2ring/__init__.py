"""Exact diagonalization toolkit for the J-J2 Heisenberg ring.

The four-site ring is solved in closed form by coupling the sublattice
pairs (1,3) and (2,4); every closed-form result is cross-checked against
brute-force diagonalization in the Sz-sector product basis.
"""

from .errors import CapacityError, NumericalValidityError
from .basis import ProductState, SzSector, enumerate_sectors, apply_spin_dot
from .coupled import (
    CoupledLabel,
    all_labels,
    build_split_basis,
    coupled_to_product,
    energy_closed_form,
    enumerate_multiplets,
    ground_state_regime,
)
from .hamiltonian import RingCouplings, SymMatrix, build_dense, six_site_energy_alpha1
from .spectrum import SymSpectrum, eigh, degeneracy_groups, sweep, find_crossings
from .observables import corr_bruteforce, corr_closed_form
from .entanglement import (
    DensityMatrix,
    density_from_state,
    partial_trace,
    von_neumann_entropy,
    is_pure,
    entropy_profile,
)

__version__ = "0.1.0"

__all__ = [
    "CapacityError",
    "NumericalValidityError",
    "ProductState",
    "SzSector",
    "enumerate_sectors",
    "apply_spin_dot",
    "CoupledLabel",
    "all_labels",
    "build_split_basis",
    "coupled_to_product",
    "energy_closed_form",
    "enumerate_multiplets",
    "ground_state_regime",
    "RingCouplings",
    "SymMatrix",
    "build_dense",
    "six_site_energy_alpha1",
    "SymSpectrum",
    "eigh",
    "degeneracy_groups",
    "sweep",
    "find_crossings",
    "corr_bruteforce",
    "corr_closed_form",
    "DensityMatrix",
    "density_from_state",
    "partial_trace",
    "von_neumann_entropy",
    "is_pure",
    "entropy_profile",
]
