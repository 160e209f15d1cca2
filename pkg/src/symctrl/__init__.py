"""Controllability analysis and sparse actuator placement for networked
systems with finite symmetry groups."""

from .control import (RANK_METHODS, ControlDesign, DesignStep,
                      EnumerationCapError,
                      RankReport, check_em_condition, controllability_matrix,
                      design_input_matrix, design_output_matrix,
                      enumerate_input_configs, geometric_multiplicity,
                      is_controllable, is_observable, n_gamma,
                      observability_matrix, pbh_rank)
from .isotypic import (BlockIsomorphyReport, BlockSpan, Component,
                       DecompositionError, IncompleteIrrepsError,
                       IsotypicDecomposition, basis_matrix_from_json,
                       basis_of_image, block_diagonalize, decompose,
                       decomposition_to_json, invariance_residual,
                       isotypic_projection, sa_projection,
                       verify_block_isomorphy, with_imported_basis)
from .network import (EquivarianceError, EquivarianceReport, EquivariantSystem,
                      NetworkError, NetworkSpec, assemble, check_equivariance,
                      induced_subset_permutation, lift, network_from_json,
                      network_to_json, petersen)
from .permgroup import (DegreeMismatchError, EnumerationOverflowError,
                        GroupElement, Permutation, PermutationGroup, closure,
                        compose, cyclic_group, dihedral_group, extend_by_words,
                        parse_cycles, perm_from_spec, symmetric_group,
                        word_permutation)
from .representations import (Character, IrrepInfo, MatrixRep,
                              RepresentationError, character_of, cyclic_irreps,
                              commutant_dimension, dihedral_irreps,
                              fs_indicator, import_irreps,
                              is_absolutely_irreducible, symmetric_irreps,
                              unitarize)
from .tolerances import DEFAULT_POLICY, TolerancePolicy

__version__ = "0.1.0"
