"""Exact and numerical computation in the matrix domains of the weighted-mean difference operator.

The domains are ``{x : τ(x) ∈ X}`` for ``X`` in c0, c, ℓ∞, where
``τ = riesz(q) · delta-minus`` and ``(delta-minus x)_k = x_{k-1} - x_k``.
"""
from .core import (Constant, Explicit, Geometric, InvalidWeightsError, Linear, Mode,
                   ModeMismatchError, NqDeltaError, Outcome, Power, RuleSequence, Scalar,
                   SequenceSpec, TruncationPolicy, Unit, Verdict, Weights, eval_sequence, finite,
                   ones, partial_sums)
from .triangle import (Matrix, SingularTriangleError, Triangle, apply, compose, diagonal,
                       explicit_matrix, identity, invert, make_composed_inverse, make_delta_minus,
                       make_delta_minus_inverse, make_nbar_delta, make_riesz, make_riesz_inverse,
                       unit_column, zero_matrix)
from .spaces import (SpaceTag, basis_vector, coefficients_and_reconstruct, limit_vector,
                     space_membership, space_norm, tau_transform)
from .duality import (Variant, beta_dual_membership, c_matrix, dual_norm, finite_subset_sup,
                      pairing_check)
from .classes import (ClassQuery, RowSumDivergenceError, UnsupportedClassError, class_membership, cond_Co1i,
                      cond_column_limits, cond_row_sum_limit, cond_row_tail, operator_norm)
from .mnc import Compactness, NotMemberError, a_norm_s, classify_compact, mnc_bounds
from .kernels import HAVE_EXTENSION

__version__ = "0.1.0"
