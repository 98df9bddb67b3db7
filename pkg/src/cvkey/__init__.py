"""Key-rate calculator for continuous-variable QKD with homodyne detection.

Exact Gaussian-state model of a coherent- or squeezed-state protocol over a
lossy, noisy channel, with key rates secure against general and collective
attacks, critical loss/noise solvers, and closed-form reference constants.
"""

from .bounds import (
    BOUND_KINDS,
    COLLECTIVE,
    DIRECT,
    DIRECTIONS,
    GENERAL,
    GENERAL_W,
    REVERSE,
    KeyRateReport,
    holevo,
    key_rate,
    key_rate_collective,
    key_rate_general,
    key_rate_general_w,
    mutual_information,
)
from .errors import (
    BracketError,
    CVKeyError,
    InfeasibleClonerError,
    NoPositiveRegionError,
    NumericalError,
)
from .gaussian import (
    GaussianState,
    QuadratureSelector,
    SymplecticSpectrum,
    SymplecticTransform,
    apply,
    beam_splitter,
    condition_on_quadrature,
    entropy_g,
    partial_trace,
    symplectic_eigenvalues,
    symplectic_form,
    two_mode_squeezed,
    vacuum_state,
    von_neumann_entropy,
)
from .protocol import (
    COHERENT,
    SQUEEZED,
    BivariateCov,
    ChannelParams,
    EntanglingCloner,
    ProtocolParams,
    alice_bob_quadrature_cov,
    build_global_state,
    cloner_from_channel,
    eve_marginal_entropy,
    eve_reduced_state,
    pm_modulation_variance,
)
from .solvers import (
    AnalyticConstants,
    CriticalPoint,
    OptimalModulation,
    RootBracket,
    analytic_constants,
    critical_noise,
    critical_transmission,
    direct_frontier_residual,
    direct_noise_frontier_residual,
    find_root,
    optimal_modulation,
)

__version__ = "0.1.0"

__all__ = [
    "AnalyticConstants",
    "BOUND_KINDS",
    "BivariateCov",
    "BracketError",
    "COHERENT",
    "COLLECTIVE",
    "CVKeyError",
    "ChannelParams",
    "CriticalPoint",
    "DIRECT",
    "DIRECTIONS",
    "EntanglingCloner",
    "GENERAL",
    "GENERAL_W",
    "GaussianState",
    "InfeasibleClonerError",
    "KeyRateReport",
    "NoPositiveRegionError",
    "NumericalError",
    "OptimalModulation",
    "ProtocolParams",
    "QuadratureSelector",
    "REVERSE",
    "RootBracket",
    "SQUEEZED",
    "SymplecticSpectrum",
    "SymplecticTransform",
    "alice_bob_quadrature_cov",
    "analytic_constants",
    "apply",
    "beam_splitter",
    "build_global_state",
    "cloner_from_channel",
    "condition_on_quadrature",
    "critical_noise",
    "critical_transmission",
    "direct_frontier_residual",
    "direct_noise_frontier_residual",
    "entropy_g",
    "eve_marginal_entropy",
    "eve_reduced_state",
    "find_root",
    "holevo",
    "key_rate",
    "key_rate_collective",
    "key_rate_general",
    "key_rate_general_w",
    "mutual_information",
    "optimal_modulation",
    "partial_trace",
    "pm_modulation_variance",
    "symplectic_eigenvalues",
    "symplectic_form",
    "two_mode_squeezed",
    "vacuum_state",
    "von_neumann_entropy",
    "__version__",
]
