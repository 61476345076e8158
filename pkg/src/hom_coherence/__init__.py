"""Coherence-optics simulation of the Hong-Ou-Mandel dip."""

from .ensemble import (
    CorrelationCurve,
    IntensitySummary,
    PairEnsemble,
    Shape,
    SpectrumConfig,
    analytic_dip,
    apply_q_weight,
    correlation_at,
    correlation_sweep,
    default_tau_grid,
    mean_intensities,
    pair_traces,
    sample_spectrum,
)
from .exceptions import ConfigError, DomainError, HomError
from .model import (
    ComplexAmp,
    Convention,
    ModelParams,
    SpdcPair,
    bs_transform,
    output_amplitudes,
    output_intensities,
    pair_coincidence,
    pair_input_fields,
    swapped_intensities,
)
from .oracle import DeviationReport, QuantumPairResult, compare_models, ensemble_dip, quantum_pair_coincidence

__version__ = "0.1.0"
