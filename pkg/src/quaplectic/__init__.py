"""Machine verification of the reciprocity-invariant oscillator algebra.

The package builds the unitary-relativistic bilinear algebra together with
its ladder extension in exact rational arithmetic, realizes it on a
truncated four-mode oscillator space, and checks every claimed identity:
structure constants, hermiticity, Casimir degeneracy, covariance-matrix
uncertainty bounds, symplectic diagonalization, determinant invariance
under the full transformation group, the indefinite oscillator spectrum,
and the large-parameter contraction limits.

Layout
------
``algebra``
    Exact structure constants, conjugation, tensor forms, contraction.
``fock``
    Truncated operator images, representation fidelity, Casimirs.
``gaussian``
    Covariance-level oracle: symplectic form, Williamson, closed forms.
``states``
    Squeezed-state construction, covariance measurement, uncertainty checks.
``invariants``
    Determinant-invariance sweeps, trace singlets, oscillator spectrum.
``units``
    Scale derivation from fundamental constants.
``kernels``
    Compiled/pure scan backend selection.
"""

from . import algebra, fock, gaussian, invariants, kernels, states, units
from .algebra import (
    AlgebraElement,
    GeneratorLabel,
    MetricTensor,
    METRIC,
    commutator,
    conjugate,
    contract,
    contraction_slopes,
    jacobi_report,
    quaplectic_basis,
    extended_basis,
    sp8_basis,
    spin_orbit_split,
    tensor_form,
    tensor_form_report,
)
from .errors import (
    CorrelatedStateError,
    DegeneracyError,
    DomainError,
    TruncationOverflowError,
)
from .fock import (
    FockOperator,
    FockSpace,
    GeneratorImages,
    InteriorProjector,
    build_generators,
    build_mode_ops,
    casimir_matrices,
    casimir_report,
    vacuum,
    verify_rep,
)
from .gaussian import (
    SymplecticForm,
    WilliamsonResult,
    gaussian_covariance,
    symplectic_eigenvalues,
    vacuum_covariance,
    williamson,
)
from .invariants import (
    InvariantReport,
    SweepConfig,
    born_green_spectrum,
    general_invariants,
    invariance_sweep,
    reciprocity_map,
    singlet_sweep,
)
from .states import (
    CovarianceData,
    SqueezeParameters,
    StateVector,
    apply_group_element,
    covariance_matrix,
    semiclassical_tensors,
    squeezed_state,
    sr_check,
    uncorrelated_bound,
)
from .units import ConstantSet, UnitScales, derive_scales, natural_scales

__version__ = "0.1.0"

__all__ = [
    "algebra", "fock", "gaussian", "invariants", "kernels", "states", "units",
    "AlgebraElement", "GeneratorLabel", "MetricTensor", "METRIC",
    "commutator", "conjugate", "contract", "contraction_slopes",
    "jacobi_report", "quaplectic_basis", "extended_basis", "sp8_basis",
    "spin_orbit_split", "tensor_form", "tensor_form_report",
    "CorrelatedStateError", "DegeneracyError", "DomainError", "TruncationOverflowError",
    "FockOperator", "FockSpace", "GeneratorImages", "InteriorProjector",
    "build_generators", "build_mode_ops", "casimir_matrices", "casimir_report",
    "vacuum", "verify_rep",
    "SymplecticForm", "WilliamsonResult", "gaussian_covariance",
    "symplectic_eigenvalues", "vacuum_covariance", "williamson",
    "InvariantReport", "SweepConfig", "born_green_spectrum", "general_invariants",
    "invariance_sweep", "reciprocity_map", "singlet_sweep",
    "CovarianceData", "SqueezeParameters", "StateVector", "apply_group_element",
    "covariance_matrix", "semiclassical_tensors", "squeezed_state",
    "sr_check", "uncorrelated_bound",
    "ConstantSet", "UnitScales", "derive_scales", "natural_scales",
    "__version__",
]
