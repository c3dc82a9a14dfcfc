"""Third-order tensor algebra under the t-product, with perturbation bounds
for inverses, Moore-Penrose inverses, least squares and SMW updates."""

__version__ = "0.1.0"

from .algebra import face_singular_values, inner_product, spectral_norm, tprod, tprod_chain
from .errors import (ConditionsNotSatisfied, DimensionMismatch, ImaginaryResidualExceeded,
                     InfeasibleDims, ParseError, SingularTensor)
from .fourier import FourierFaces, dft_matrix, from_faces, to_faces
from .inverse import (MultiRank, RangeSplit, inv, multirank, pinv, range_projectors,
                      rank_tolerance, split_against_range)
from .io import read_tensor, write_tensor
from .perturb import (Applicability, BoundReport, MuLambda, MuLambdaCase, equation_perturb,
                      inv_perturb_posterior, inv_perturb_prior, lstsq_perturb, mu_lambda,
                      multilinear_smw_perturb, pinv_perturb_general,
                      pinv_perturb_rank_preserving, pinv_perturb_relative)
from .smw import (ConditionReport, SmwFactors, build_smw_factors, check_smw_conditions,
                  construct_conditioned_instance, smw_inverse, smw_pinv)
from .solve import SolveResult, lstsq_min_norm, solve_exact
from .tensor import (Tensor3, add, bcirc, fold, frobenius_norm, identity, scale, sub,
                     transpose, unfold, zeros)

__all__ = [name for name in dir() if not name.startswith("_")]
