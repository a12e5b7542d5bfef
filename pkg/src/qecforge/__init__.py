"""qecforge: stabilizer, subsystem and Floquet code toolkit with decoders and bounds."""

from __future__ import annotations

from .gf2 import BitMatrix, kernel_basis, rank, rref, solve
from .pauli import PauliOperator, pauli_mul, symplectic_product
from .stabilizer import (
    ClassicalCode,
    CodeError,
    MinusIdentityGenerated,
    NonCommuting,
    NotCSS,
    StabilizerCode,
    SubsystemCode,
    build_stabilizer_group,
    classical_analyze,
    css_distances,
    distance_bruteforce,
    kl_check,
    logical_operators,
    subsystem_analyze,
)

__version__ = "0.1.0"

__all__ = [
    "BitMatrix",
    "ClassicalCode",
    "CodeError",
    "MinusIdentityGenerated",
    "NonCommuting",
    "NotCSS",
    "PauliOperator",
    "StabilizerCode",
    "SubsystemCode",
    "build_stabilizer_group",
    "classical_analyze",
    "css_distances",
    "distance_bruteforce",
    "kernel_basis",
    "kl_check",
    "logical_operators",
    "pauli_mul",
    "rank",
    "rref",
    "solve",
    "subsystem_analyze",
    "symplectic_product",
]
