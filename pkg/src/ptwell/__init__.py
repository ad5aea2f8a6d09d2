"""Discretized PT-symmetric square well: spectra, exceptional points, metrics."""

from .charpoly import RootSet, certify_real, char_poly, roots, tridiagonal_roots
from .chebyshev import cheb_t, cheb_u, cheb_u_mat
from .errors import (
    DegeneracyError,
    DomainError,
    InconsistencyError,
    NonConstructibleError,
    NumericFailure,
    PTSymmetryBrokenError,
    PTWellError,
    SingularPointError,
)
from .metric import (
    BiorthogonalBasis,
    MetricMatrix,
    ParityMatrix,
    biorthogonalize,
    build_metric,
    verify_pseudo_hermiticity,
    verify_quasi_hermiticity,
)
from .model import (
    Lattice,
    PotentialProfile,
    ScaledHamiltonian,
    WellModel,
    build_hamiltonian,
    potential_at,
    shifted_well,
    square_well,
    to_physical,
    to_scaled,
)
from .realform import build_real_system, real_system_determinant, verify_matrix_chebyshev
from .secular import (
    eigenvector,
    matching_det_even,
    matching_det_odd,
    robust_level_check,
    secular_roots,
    trig_map,
    trig_residual,
)
from .spectral import (
    CriticalReport,
    Spectrum,
    SweepTable,
    continuum_check,
    critical_coupling,
    critical_table,
    exceptional_points,
    imaginary_axis_crossing,
    spectrum,
    sweep,
)

__version__ = "0.1.0"
