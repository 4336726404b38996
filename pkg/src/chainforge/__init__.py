"""chainforge: design XX spin chains for high-fidelity quantum state transfer.

The toolkit covers the full design loop:

- build PST-capable energy spectra and inject boundary states by spectrum
  shifting (``chainforge.spectra``),
- reconstruct chain couplings from a spectrum with the orthogonal-polynomial
  inverse eigenvalue solver (``chainforge.solver``),
- evolve excitations exactly and analyze the weak-coupling effective model
  (``chainforge.dynamics``),
- quantify robustness against random static coupling disorder
  (``chainforge.disorder``).

A command-line front door lives in ``chainforge.cli`` and a local HTTP
service for the interactive designer UI in ``chainforge.service``.
"""

from .disorder import (
    BetaFit,
    DisorderConfig,
    DisorderReport,
    Histogram,
    fit_beta,
    histogram,
    perturb_couplings,
    run_experiment,
    sample_stream,
)
from .dynamics import (
    EffectiveModel,
    EffectiveModelValidityWarning,
    EigenSystem,
    StateVector,
    average_fidelity,
    central_splitting,
    effective_model,
    eigendecompose,
    evolve,
    overlap_trace,
    transfer_overlap,
    validate_effective_model,
)
from .errors import ChainDesignError, EigensolverError, InvalidSpectrumError, SolverOverflowError
from .solver import MAX_CHAIN_LENGTH, ChainCouplings, compute_weights, forward_eigenvalues, solve
from .spectra import (
    BandModel,
    Family,
    PstReport,
    Spectrum,
    band_condition,
    boundary_metric,
    generate_cosine,
    generate_inverted_quadratic,
    generate_linear,
    shift_spectrum,
    verify_pst,
)

__version__ = "0.1.0"

__all__ = [
    "BandModel",
    "BetaFit",
    "ChainCouplings",
    "ChainDesignError",
    "DisorderConfig",
    "DisorderReport",
    "EffectiveModel",
    "EffectiveModelValidityWarning",
    "EigenSystem",
    "EigensolverError",
    "Family",
    "Histogram",
    "InvalidSpectrumError",
    "MAX_CHAIN_LENGTH",
    "PstReport",
    "SolverOverflowError",
    "Spectrum",
    "StateVector",
    "average_fidelity",
    "band_condition",
    "boundary_metric",
    "central_splitting",
    "compute_weights",
    "effective_model",
    "eigendecompose",
    "evolve",
    "fit_beta",
    "forward_eigenvalues",
    "generate_cosine",
    "generate_inverted_quadratic",
    "generate_linear",
    "histogram",
    "overlap_trace",
    "perturb_couplings",
    "run_experiment",
    "sample_stream",
    "shift_spectrum",
    "solve",
    "transfer_overlap",
    "validate_effective_model",
    "verify_pst",
]
