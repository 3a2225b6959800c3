"""Kirkwood-Dirac classicality, complete incompatibility and support
uncertainty for pairs of orthonormal bases in small dimension."""
from ._accel import BACKEND, set_threads
from .bases import (CATALOG, BasisStats, TransitionMatrix, catalog, dft, dumps_matrix, haar,
                    identity, is_mub, loads_matrix, matrix_from_dict, matrix_to_dict, mub4,
                    permute, rephase, spin1, stats, tao, tensor, u6)
from .coinc import (HierarchyReport, UncertaintyDiagram, coinc_diagram_equivalence, dim_table,
                    edge_region, hierarchy, is_coinc, sample_state, subspace_basis, subspace_dim,
                    uncertainty_diagram)
from .errors import (BoundsError, ConvergenceError, DegenerateSupportError, DimensionError,
                     FormatError, InapplicableError, KDCoincError, NoStateError,
                     NumericalFailure, SizeCapError, ValidationError)
from .kd import (KDDistribution, StateVector, SupportProfile, WitnessVerdict, basis_a, basis_b,
                 b_representation, classify_classical_constraint, dumps_state, entropies,
                 haar_state, is_kd_classical, kd_distribution, loads_state, support_profile,
                 witness)
from .linalg import (DEFAULT_TOL, MINOR_CAP, MinorReport, Tolerance, det, enumerate_minors,
                     is_unitary, kernel_basis, rank, submatrix)
from .oracle import ScanReport, classicality_scan, diagram_by_sampling, obtuse_bound_check
from .perturb import PerturbationTrace, coincify, mlemma_rotation, near_mub_coinc

__version__ = "0.1.0"
