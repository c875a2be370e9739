"""
Finite groupoids, their convolution C*-algebras, and the regular and
induced representations that compute norms, spectra and invertibility.
"""

from ok_groupoid._groupoid import (
    ActionSpec,
    Arrow,
    ExplicitSpec,
    Fibers,
    FiniteGroupoid,
    GroupSpec,
    OrbitDecomposition,
    PairSpec,
    UnionSpec,
    build_groupoid,
    isotropy_order,
)

from ok_groupoid._algebra import (
    AlgebraElement,
    adjoint,
    convolve,
    delta,
    element,
    unit,
    zero,
)

from ok_groupoid._spectral import (
    hermitian_eigensystem,
    hermitian_eigenvalues,
    inverse,
    min_singular_value,
    singular_values,
    spectral_norm,
)

from ok_groupoid._representations import (
    MatrixRep,
    full_regular,
    isotropy_left_regular,
    orbit_intertwiner,
    regular_representation,
    regular_representation_by_action,
    translation_unitary,
)

from ok_groupoid._induction import (
    InducedSpace,
    IsotropyRep,
    ModuleVector,
    act,
    basis_vector,
    character_rep,
    comparison_check,
    conjugated_rep,
    direct_sum_rep,
    embed_j,
    equivalence_unitary,
    fourier,
    induce,
    induced_space,
    left_regular_rep,
    main_identity_residual,
    module_norm,
    module_vector,
    star_inner,
    trivial_rep,
)

from ok_groupoid._analysis import (
    AnalysisOptions,
    InvertibilityReport,
    NormProfile,
    NormShift,
    family_invertibility,
    family_profile,
    induced_family,
    invertible_family,
    invertible_oracle,
    norm,
    norm_shift,
    oracle_norm,
    regular_family,
    roch_witness,
    spectrum,
)

from ok_groupoid._formats import (
    format_element,
    format_groupoid,
    load_element,
    load_groupoid,
    load_spec,
    parse_element,
    parse_groupoid,
)

from ok_groupoid._suite import (
    PropertyResult,
    SuiteOptions,
    SuiteReport,
    verify_induction,
    verify_suite,
)

from ok_groupoid._exceptions import (
    AxiomViolation,
    BaseUnitMismatch,
    GroupoidException,
    GroupoidMismatch,
    InvalidRep,
    MalformedSpec,
    NoConvergence,
    NotAUnit,
    NotHermitian,
    NotInIsotropy,
    NotSelfAdjoint,
    NotSquare,
    SingularMatrix,
    SpectralException,
    SupportOutsideIsotropy,
    UndefinedComposition,
    UnknownArrow,
)

import importlib.metadata

__all__ = [n for n in globals() if not n.startswith("_")]

__version__ = importlib.metadata.version(__package__)

for _name in __all__:
    globals()[_name].__module__ = "ok_groupoid"
