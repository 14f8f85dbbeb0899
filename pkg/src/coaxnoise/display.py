"""Measured-quantity model: normalization and the log-domain display transform.

Analyzer traces are plotted relative to the matched-termination reference
and fitted as level = a + log10(power + sn), where a absorbs gain and
absolute calibration and sn is an additive noise floor in relative power
units. Base-10 logs throughout; a re-fit under a different base only
rescales a.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NonPositiveArgumentError, ZeroReferenceError

LOG_BASE = 10


@dataclass(frozen=True)
class DisplayModel:
    """Offset a (display units) and noise floor sn (relative power)."""

    a: float = 0.0
    sn: float = 0.0

    def __post_init__(self):
        if self.sn < 0:
            raise ValueError("sn must be >= 0")


@dataclass(frozen=True)
class NoiseSpectrum:
    """A spectrum on a strictly increasing frequency grid.

    linear_power holds relative power when known (simulation path);
    display_level holds a + log10(power + sn). CSV-ingested spectra carry
    only display levels, so either array may be absent but not both.
    """

    frequencies: np.ndarray
    linear_power: np.ndarray | None
    display_level: np.ndarray | None
    excluded: np.ndarray

    def __post_init__(self):
        freqs = np.asarray(self.frequencies, dtype=float)
        object.__setattr__(self, "frequencies", freqs)
        if freqs.ndim != 1 or freqs.size == 0:
            raise ValueError("frequencies must be a non-empty 1-D array")
        if freqs.size > 1 and not np.all(np.diff(freqs) > 0):
            raise ValueError("frequencies must be strictly increasing")
        if self.linear_power is None and self.display_level is None:
            raise ValueError("need linear_power or display_level")
        for name in ("linear_power", "display_level"):
            arr = getattr(self, name)
            if arr is not None:
                arr = np.asarray(arr, dtype=float)
                object.__setattr__(self, name, arr)
                if arr.shape != freqs.shape:
                    raise ValueError(f"{name} length differs from frequencies")
        excl = np.asarray(self.excluded, dtype=bool)
        object.__setattr__(self, "excluded", excl)
        if excl.shape != freqs.shape:
            raise ValueError("excluded length differs from frequencies")

    @property
    def included(self) -> np.ndarray:
        return ~self.excluded

    @classmethod
    def from_linear(cls, frequencies, linear_power, excluded=None) -> "NoiseSpectrum":
        freqs = np.asarray(frequencies, dtype=float)
        if excluded is None:
            excluded = np.zeros(freqs.shape, dtype=bool)
        return cls(freqs, np.asarray(linear_power, dtype=float), None, excluded)

    @classmethod
    def from_display(cls, frequencies, display_level, excluded=None) -> "NoiseSpectrum":
        freqs = np.asarray(frequencies, dtype=float)
        if excluded is None:
            excluded = np.zeros(freqs.shape, dtype=bool)
        return cls(freqs, None, np.asarray(display_level, dtype=float), excluded)

    def with_display(self, model: DisplayModel) -> "NoiseSpectrum":
        """Attach display levels computed from linear power (nan where excluded)."""
        if self.linear_power is None:
            raise ValueError("no linear power to transform")
        levels = np.full(self.frequencies.shape, np.nan)
        inc = self.included
        levels[inc] = apply_display_model(self.linear_power[inc], model)
        return NoiseSpectrum(self.frequencies, self.linear_power, levels, self.excluded)


def normalize_to_matched(raw, reference):
    """Pointwise ratio of a raw power trace to the matched-termination trace."""
    raw = np.asarray(raw, dtype=float)
    ref = np.asarray(reference, dtype=float)
    if np.any(ref == 0.0):
        raise ZeroReferenceError("matched reference is zero at some frequency")
    return raw / ref


def apply_display_model(relative_power, model: DisplayModel):
    """a + log10(power + sn), the analyzer-domain level."""
    power = np.asarray(relative_power, dtype=float)
    shifted = power + model.sn
    if np.any(shifted <= 0.0):
        raise NonPositiveArgumentError("power + sn must be > 0 for the log transform")
    out = model.a + np.log10(shifted)
    return out if np.ndim(relative_power) else float(out)


def invert_display_model(levels, model: DisplayModel):
    """Inverse transform 10**(level - a) - sn."""
    levels = np.asarray(levels, dtype=float)
    out = 10.0 ** (levels - model.a) - model.sn
    return out if np.ndim(levels) else float(out)


def synth_spectrum(
    linear_truth,
    frequencies,
    model: DisplayModel,
    noise_sigma: float = 0.0,
    seed: int = 0,
) -> NoiseSpectrum:
    """Synthetic observed spectrum: model levels plus seeded Gaussian display noise.

    The stored linear power is the inverse transform of the noisy levels,
    so the pair stays consistent under the display model.
    """
    if noise_sigma < 0:
        raise ValueError("noise_sigma must be >= 0")
    freqs = np.asarray(frequencies, dtype=float)
    clean = apply_display_model(np.asarray(linear_truth, dtype=float), model)
    levels = np.asarray(clean, dtype=float)
    if noise_sigma > 0:
        rng = np.random.default_rng(seed)
        levels = levels + rng.normal(0.0, noise_sigma, size=freqs.shape)
    linear = invert_display_model(levels, model)
    return NoiseSpectrum(
        freqs, np.asarray(linear, dtype=float), levels, np.zeros(freqs.shape, bool)
    )
