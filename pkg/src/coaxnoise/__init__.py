"""Thermal-noise standing waves on coaxial lines and splitter networks.

Modules
-------
waves    : reflection coefficients, wavenumbers, propagation phasors,
           Johnson-Nyquist source magnitudes
cable    : single-cable bounce series, closed-form voltage sum, matched
           power spectrum
splitter : 4-port splitter round trips, per-source noise contributions,
           summed power and its mirror limits, arm-length sweeps
display  : matched-reference normalization and the a + log10(p + sn)
           analyzer transform; synthetic spectra
fitting  : bounded Nelder-Mead recovery of lengths, delays, and display
           constants from spectra
cli      : simulate / sweep / fit / oracle-check commands over CSV
"""

from .cable import (
    CableSetup,
    bounce_series_oracle,
    bounce_term,
    cable_noise_spectrum,
    matched_source_power,
    source_divided_voltage,
    total_voltage_closed_form,
)
from .config import TopologyConfig, load_config, parse_config
from .display import (
    DisplayModel,
    NoiseSpectrum,
    apply_display_model,
    invert_display_model,
    normalize_to_matched,
    synth_spectrum,
)
from .errors import (
    CoaxNoiseError,
    ConfigError,
    ConfigParseError,
    ConfigValidationError,
    DegenerateSourceError,
    InsufficientDataError,
    NonMonotonicFrequencyError,
    NonPositiveArgumentError,
    ResonancePoleError,
    SpectrumFormatError,
    UnmatchedJ1Error,
    UnmatchedSourceError,
    ZeroReferenceError,
)
from .fitting import (
    FitConfig,
    FitProblem,
    FitResult,
    fit,
    fit_report,
    model_display_levels,
    residuals,
)
from .splitter import (
    LimitIndex,
    SplitterModel,
    SplitterSetup,
    arm_noise_contribution,
    j1_noise_contribution,
    limit_noise_power,
    matched_arm_power,
    reflected_wave_response,
    sweep_arm_length,
    total_noise_power,
    validate_splitter,
)
from .spectrum_io import read_spectrum_csv, write_spectrum_csv, write_sweep_csv
from .waves import (
    BOLTZMANN,
    C,
    MATCHED,
    OPEN,
    SHORT,
    CableSegment,
    PhysicalConstants,
    Termination,
    finite,
    propagation_phase,
    reflection_coefficient,
    thermal_source_power,
    wavenumber,
)

__version__ = "0.1.0"
