"""Exception types shared across the library."""


class CoaxNoiseError(Exception):
    """Base class for all library errors."""


class ResonancePoleError(CoaxNoiseError):
    """Closed-form voltage sum evaluated too close to a lossless resonance pole."""


class UnmatchedSourceError(CoaxNoiseError):
    """Operation requires a source impedance equal to the line impedance."""


class UnmatchedJ1Error(CoaxNoiseError):
    """Splitter round-trip response requires a matched J1 termination."""


class DegenerateSourceError(CoaxNoiseError):
    """Thermal source magnitude is identically zero (short or open resistor)."""


class ZeroReferenceError(CoaxNoiseError):
    """Normalization reference spectrum contains a zero at an included point."""


class NonPositiveArgumentError(CoaxNoiseError):
    """Display transform received power + sn <= 0."""


class InsufficientDataError(CoaxNoiseError):
    """Too few usable points, or the data carry no information on a free parameter."""


class SpectrumFormatError(CoaxNoiseError):
    """Malformed spectrum CSV; carries the offending row number when known."""

    def __init__(self, message, row=None):
        super().__init__(message if row is None else f"row {row}: {message}")
        self.row = row


class NonMonotonicFrequencyError(SpectrumFormatError):
    """Spectrum frequencies are not strictly increasing."""


class ConfigError(CoaxNoiseError):
    """Base class for configuration problems."""


class ConfigParseError(ConfigError):
    """Config document could not be parsed, or contains unknown keys."""


class ConfigValidationError(ConfigError):
    """Config parsed but violates an invariant; message names the invariant."""
