"""Free-probability toolkit for the tetilla law and Wigner-chaos kernel moments."""

from .chaos import (fourth_moment_decomposition, iterated_contraction, sixth_moment_combination,
                    tetilla_moment_algorithm, wigner_moment)
from .combinatorics import (ContractionPath, NonCrossingPartition, Walk, catalan, count_even_block_nc,
                            enumerate_nc, enumerate_paths, enumerate_positive_paths, path_to_walk, walk_to_path)
from .errors import (CapacityError, GridMismatchError, InvalidWalkError, MirrorSymmetryWarning, PreconditionError,
                     RootSelectionError, TetillaError)
from .identities import nondegeneracy_check, verify_contr_link, verify_forbid_walks, verify_lm1
from .kernels import (Grid, Kernel, adjoint, contract, inner_product, norm, norm_sq, random_mirror_symmetric_kernel,
                      reference_tetilla_kernel)
from .rmt import SimConfig, alternative_representation_moments, sample_gue, tetilla_trace_moments
from .theorem import builtin_families, check_condition_i, check_condition_ii, check_condition_iii, sweep
from .transforms import (TETILLA_EDGE, cauchy_transform_tetilla, cumulants_from_moments, density_from_cauchy,
                         moments_from_cumulants, tetilla_cumulant, tetilla_density, tetilla_moment_closed)

__version__ = "0.1.0"
