"""Average entanglement entropy of random bipartite pure states.

Exact (Page formula), Monte-Carlo, eigenvalue-density quadrature and
large-dimension asymptotic estimates, plus a command-line interface.
"""

__version__ = "0.1.0"

from .asymptotics import (
    AsymptoteConstants,
    ConvergenceRow,
    EmExpansion,
    GeometrySpec,
    asymptote_constants,
    avg_entropy_expansion,
    convergence_table,
    euler_maclaurin_page_sum,
    predicted_entropy_asymptote,
    section_dimension,
)
from .canonical_svd import ModifiedSvd, SchmidtSpectrum, canonical_svd, canonicalize, schmidt_spectrum
from .entropy_core import bernoulli_table, digamma, harmonic_range, shannon_entropy
from .errors import ConfigurationError, ConsistencyError, ConvergenceError, DomainError
from .laguerre import (
    gauss_laguerre_quadrature,
    laguerre_eval,
    laguerre_I,
    laguerre_J,
    laguerre_norm,
)
from .monte_carlo import McEstimate, RngStreamSpec, mc_average_entropy, mc_expectation, sample_state
from .page_exact import (
    PageParams,
    page_average_entropy,
    page_consistency,
    page_I1,
    page_I2,
    page_I2_via_laguerre,
)
from .spectral_density import (
    density_vs_sphere_check,
    eigen_density_unnormalized,
    simplex_expectation,
    vandermonde_sq,
)
