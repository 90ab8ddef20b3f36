"""Mutually unbiased bases for qudits from one quadratic Fourier formula."""

from .mub import (
    Basis,
    MubReport,
    basis_b0a,
    check_unbiased,
    complete_set_prime,
    computational_basis,
    triple_set,
    verify_set,
    w_bases,
)
from .phasering import ExactAmplitude, ExactArray, GroupRingElement, cyclotomic_polynomial
from .qdft import gauss_sum, hadamard
from .report import Report
from .weylpauli import PauliOperator, partition, x_matrix, z_matrix

__all__ = [
    "Basis",
    "ExactAmplitude",
    "ExactArray",
    "GroupRingElement",
    "MubReport",
    "PauliOperator",
    "Report",
    "basis_b0a",
    "check_unbiased",
    "complete_set_prime",
    "computational_basis",
    "cyclotomic_polynomial",
    "gauss_sum",
    "hadamard",
    "partition",
    "triple_set",
    "verify_set",
    "w_bases",
    "x_matrix",
    "z_matrix",
]

__version__ = "0.1.0"
