"""Random walks on the circle generated by rotations: exact distributions,
discrepancy, Fourier bounds and Diophantine approximation constants."""

from .alpha import AlphaSpecError, AlphaVector, make_alpha, plastic_number
from .diophantine import (
    ApproximationConstants,
    DMVerdict,
    beta_hat,
    davenport_mahler_check,
    dirichlet_b_hat,
    nearest_int_dist,
)
from .fourier import (
    BoundReport,
    TheoremConstants,
    erdos_turan_upper,
    optimize_et_M,
    paper_truncation_M,
    q_hat,
    su_lower_bound,
    theorem_constants,
)
from .measure import (
    AtomicMeasure,
    LatticeDistribution,
    SupportCapExceeded,
    atoms_on_circle,
    convolve_power,
    discrepancy_exact,
    discrepancy_oracle,
    sample_walk,
)

__version__ = "0.1.0"
