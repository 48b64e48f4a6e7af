"""Exact verification of projective limits of multi-matrix algebras, their
Hopf structure, and magic unitaries."""

from .checks import Check, VerificationError
from .hopf import (
    ActionSpec,
    HopfData,
    classical_hopf,
    classical_quantum_permutation_algebra,
    classical_tower,
    corner_surjection,
    limit_action,
    limit_hopf,
    natural_action,
    verify_action,
    verify_hopf,
    verify_hopf_system,
)
from .linalg import Mat, is_projection, kron, range_projection, rank
from .magic import (
    MagicUnitary,
    carrier_certificate,
    comultiply_grid,
    corner_embed,
    corner_restrict,
    gadget_append,
    pad_to,
    paper_block_unitary,
    require_magic,
    transpose_grid,
    verify_magic,
)
from .projective_limit import (
    ProjectiveSystem,
    build_truncated_limit,
    decompose_system,
    extend_family_homext,
    lift_family_antip,
    projective_system,
    section_iota,
)
from .report import Report, emit_report
from .scenario import ScenarioError, run_scenario
from .star_algebra import (
    MultiMatrixAlgebra,
    NotAProjection,
    StarHom,
    central_carrier,
    generated_algebra,
    kernel_central_projection,
    sup_projections,
    tensor_algebra,
    verify_star_hom,
)

__version__ = "0.1.0"
