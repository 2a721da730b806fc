"""Exact-arithmetic isolating fusions of based algebras and association schemes."""

from .algebra import (
    BasedAlgebra,
    build_algebra,
    detect_star,
    left_regular_matrix,
    valency,
)
from .engine import (
    FusionOutcome,
    brute_force_minimal,
    fused_algebra,
    fused_coefficient,
    is_fusion,
    is_semifusion,
    minimal_isolating_fusion,
    minimal_isolating_semifusion,
    refine_step,
)
from .partitions import Partition, SeedFamily, is_refinement, meet, normalize, star_image
from .schemes import RelationMatrix, algebra_from_relations, fuse_relations, parse_relation_matrix
from .orbitals import (
    FiniteGroup,
    PermGroup,
    coset_permutation_action,
    orbital_configuration,
    regular_action,
    relation_of_element,
    semidirect_group,
)
from .eigen import cyclotomic_verdict, is_diagonalizable, minimal_polynomial
from .polynomials import Polynomial, divides, factor_over_rationals, parse_polynomial
from .lattice import (
    algebraic_automorphism_group,
    build_fusion_lattice,
    enumerate_seed_fusions,
    fingerprint,
    random_seed_search,
)

__version__ = "0.1.0"
