"""Interference of forward and backward time-evolution paths.

The interference function I_{m,n}(z), its landmark features, an exact
small-dimension simulator of symmetric time evolution and the physical
validity-window arithmetic.
"""

from .errors import (
    BievolutionError,
    BracketError,
    ConfigError,
    DomainError,
    EnumerationCapExceeded,
    ModeError,
    NotHermitian,
    TableCapExceeded,
)
from .features import (
    FeatureReport,
    PeakWidths,
    SubsidiaryMaximum,
    feature_report,
    locate_extremum_numeric,
    peak_widths,
    quadratic_model_principal,
    quadratic_model_subsidiary,
    refine_subsidiary,
    subsidiary_maxima,
    unit_modulus_points,
    zero_locations,
)
from .interference import (
    PathCount,
    PhaseArg,
    interference_product,
    interference_qrecursion,
    interference_sum_oracle,
    log_interference,
    rescaled_interference,
    scaled_interference,
    scaling_function,
)
from .logcomplex import LogComplex, log_binomial
from .regime import (
    RegimeInputs,
    RegimeWindow,
    required_f_for_duration,
    subsidiary_vs_width_ratio,
    tau_scaling_check,
    upper_bound_total_time,
    validity_window,
)
from .toy import (
    ToyUniverse,
    bievolution_error,
    bievolution_reference,
    check_nonzero_eigenvalue_condition,
    commutator_spectrum,
    enumerate_S,
    pauli_universe,
    random_universe,
    reordered_S_approx,
    spectral_S,
    symmetric_evolve,
    time_reverse,
)

__version__ = "0.1.0"
