"""Recover a graph from signals diffused on it.

Pipeline: covariance of the observed signals, eigendecomposition and 2K-th
root for ``|lambda(T)|``, an LP for the eigenvalue signs, rebuild of ``T``
and thresholding to an adjacency matrix.
"""
from .errors import (AttemptsExhausted, DimensionMismatch, GraphDiffError, Infeasible,
                     IsolatedNode, NotSymmetric, NumericalFailure, PerronNotFirst,
                     ShapeMismatch)
from .graph import (AdmissibilityReport, DiffusionMatrix, Graph, check_admissibility,
                    degrees, diffusion_matrix, erdos_renyi, generate_admissible,
                    normalized_laplacian, random_geometric, read_edge_list,
                    write_edge_list)
from .linalg import jacobi_eig, symmetric_eig
from .lp import (FeasibilityResult, LinearFeasibilityProblem, Status,
                 solve_feasibility)
from .recovery import (ConstraintSystem, Reconstruction, assemble_constraints,
                       oracle_threshold, rebuild, reconstruct, recover_signs, rmse,
                       threshold)
from .signals import SignalMatrix, diffuse, read_signals, sample_iid_normal, write_signals
from .spectral import (CovarianceMatrix, SpectralEstimate, empirical_covariance,
                       exact_covariance, spectral_estimate)

__version__ = "0.1.0"
