"""Exact computations around Weyl-group invariants of Laurent rings,
their differential forms, and Hochschild/Tor comparisons."""

from .lattice import (
    AbelianInvariants,
    IntMatrix,
    LatticeSolver,
    cokernel_invariants,
    hermite_normal_form,
    integer_kernel,
    smith_normal_form,
)
from .poly import (
    MalformedRing,
    Polynomial,
    RingMap,
    RingPresentation,
    Variable,
    hypersurface_ring,
    laurent_ring,
    polynomial_ring,
)
from .weyl import GroupAction, WeightBox, weyl_psu3, weyl_su
from .modules import FPModule, UnsupportedGrading, graded_piece, omega, torsion_graded
from .homological import ChainComplex, koszul_complex, resolution_check, tor_self
from .suites import Bounds, SuiteReport

__all__ = [
    "AbelianInvariants", "IntMatrix", "LatticeSolver", "cokernel_invariants", "hermite_normal_form",
    "integer_kernel", "smith_normal_form", "MalformedRing", "Polynomial", "RingMap", "RingPresentation",
    "Variable", "hypersurface_ring", "laurent_ring", "polynomial_ring", "GroupAction", "WeightBox",
    "weyl_psu3", "weyl_su", "FPModule", "UnsupportedGrading", "graded_piece", "omega", "torsion_graded",
    "ChainComplex", "koszul_complex", "resolution_check", "tor_self", "Bounds", "SuiteReport",
]
