"""Exact linear algebra over Q, F_p and Z."""
from .ring import Ring, QQ, ZZ, GF, ring_from_name
from .matrix import ExactMatrix, BudgetExceeded
from .linalg import (Echelon, rank, rank_of_vectors, rank_multimodular, rref, kernel_basis,
                     cokernel, Cokernel, image_basis, inverse, left_inverse, solve_in_span)
from .snf import snf, is_divisibility_chain
from .chain import ChainLayer, InvariantViolation
from .ss import DoubleComplex, SSPage, ss_pages, total_homology
