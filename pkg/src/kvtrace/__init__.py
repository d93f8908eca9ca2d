"""Exact algebra of cyclic words for surface trace algebras."""

__version__ = "0.1.0"

from .kernels import IMPLEMENTATION
from .freetensor import Alphabet, Derivation, Polynomial, bracket, multiply
from .traces import TracePolynomial, TraceTensor2, necklace_basis, trace_project
from .omega import omega, quotient_model, omega_preserving_lift, commutator_solve
from .rewrite import irregularity, normal_form, basis_XY, holonomy_data
from .hopfkernel import kernel_reduced_coproduct, canonical_subspaces
from .kvdiv import (
    necklace_bracket,
    hamiltonian_derivation,
    turaev_cobracket_gr,
    krv_closed_membership,
    krv_fr_membership,
    kv_fr_membership,
)
