"""roothk: exact verification toolkit for Weyl-group quotient constructions.

Builds root data and Weyl groups exactly, certifies that the invariant
two-form space on a doubled lattice span is one-dimensional, checks freeness
in codimension two by exhaustive enumeration, lists the group-stable lattices
between a root lattice and its dual, and reports symplectic-resolution
verdicts from the cited classification.
"""

__version__ = "0.1.0"

from .errors import (
    DiscriminantTooLargeError,
    FormSpaceError,
    GroupTooLargeError,
    LatticeActionError,
    NotExhaustiveError,
    RootHKError,
)
from .exact_linalg import (
    IntMatrix,
    RatMatrix,
    SmithForm,
    hermite_normal_form,
    rational_kernel,
    smith_normal_form,
    stack_and_common_kernel,
)
from .root_data import (
    Lattice,
    RootDatum,
    RootSystemSpec,
    build_root_datum,
    cartan_matrix,
    dual_lattice_quotient_check,
    simple_reflection,
    simple_reflections,
    standard_table,
)
from .weyl import (
    GroupCap,
    WeylGroup,
    check_signed_permutation_structure,
    element_iter,
    generate_group,
    group_order_formula,
)
from .invariant_theory import (
    InvariantReport,
    Representation,
    decomposition_check,
    invariant_bilinear_form,
    invariant_dim,
    invariant_dim_reynolds,
    invariant_report,
    irreducibility_check,
    rep_double,
    rep_explicit,
    rep_reflection,
    rep_sym2,
    rep_trivial,
    rep_wedge2,
)
from .lattice_tower import (
    DiscriminantGroup,
    IntermediateLattice,
    TowerReport,
    bc_tower,
    classify_up_to_rescaling,
    discriminant_group,
    dual_lattice,
    induced_discriminant_action,
    invariant_intermediate_lattices,
)
from .hk_analysis import (
    FixedLocusEntry,
    FreenessCheck,
    HKVerdict,
    ResolutionVerdict,
    analyze,
    brute_force_fixed_point_count,
    fixed_locus_on_abelian,
    freeness_codim_check,
    known_model,
    resolution_verdict,
    symplectic_form_dim,
)

__all__ = [name for name in dir() if not name.startswith("_")]
