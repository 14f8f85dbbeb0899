"""Single-cable noise model.

A source behind impedance Zb drives a lossless line of length L terminated
in Zl. The voltage at the line input is the superposition of the launched
wave and every double-bounce echo; the geometric sum has the closed form

    v_s / v_b = v0 * (e^{2ikL} + Gl) / (e^{2ikL} - Gl*Gb),   v0 = Z0/(Zb+Z0)

and for a matched source the delivered power reduces to

    v_s^2 = v_b^2 * (Zl^2 cos^2(kL) + Z0^2 sin^2(kL)) / (Z0 + Zl)^2.

The truncated bounce series is kept alongside as an independent oracle.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ResonancePoleError, UnmatchedSourceError
from .waves import (
    MATCHED,
    CableSegment,
    Termination,
    reflection_coefficient,
    wavenumber,
)

POLE_EPS = 1e-9  # |e^{2ikL} - Gl*Gb| below this counts as a lossless resonance


@dataclass(frozen=True)
class CableSetup:
    """Cable plus its two ends: load termination and source behind an impedance.

    source_power is the source voltage PSD v_b^2 in V^2/Hz; the voltage
    ratios returned by the functions below are all relative to v_b.
    """

    cable: CableSegment
    load: Termination
    source_impedance: Termination = MATCHED
    source_power: float = 1.0

    def __post_init__(self):
        if self.source_power < 0:
            raise ValueError("source_power must be >= 0")

    @property
    def gamma_load(self) -> complex:
        return reflection_coefficient(self.load, self.cable.z0)

    @property
    def gamma_source(self) -> complex:
        return reflection_coefficient(self.source_impedance, self.cable.z0)


def source_divided_voltage(setup: CableSetup) -> complex:
    """v0/vb = Z0/(Zb+Z0); exactly 1/2 for a matched source, 0 for open."""
    src = setup.source_impedance
    if src.kind == "matched":
        return 0.5 + 0.0j
    if src.kind == "short":
        return 1.0 + 0.0j
    if src.kind == "open":
        return 0.0 + 0.0j
    z0 = setup.cable.z0
    zb = complex(src.value)
    if zb + z0 == 0:
        raise ZeroDivisionError("degenerate divider: Zb + Z0 = 0")
    return z0 / (zb + z0)


def bounce_term(setup: CableSetup, f, index: int):
    """m-th entry of the bounce series, as a ratio to vb.

    Index 0 is the launched wave v0. Index m >= 1 is the m-th returning wave
    folded together with its immediate source-side re-reflection:

        v0 * Gl^m * Gb^(m-1) * e^{-2imkL} * (1 + Gb)
    """
    if index < 0:
        raise ValueError("index must be >= 0")
    v0 = source_divided_voltage(setup)
    if index == 0:
        return v0 * np.ones_like(np.asarray(f, dtype=float), dtype=complex) \
            if np.ndim(f) else v0
    gl = setup.gamma_load
    gb = setup.gamma_source
    echo = gl * np.exp(-2j * wavenumber(f, setup.cable.n) * setup.cable.length)
    return v0 * echo**index * gb ** (index - 1) * (1.0 + gb)


def bounce_series_oracle(setup: CableSetup, f, terms: int):
    """Partial sum of the first `terms` bounce-series entries (ratio to vb).

    Converges to the closed form when |Gl*Gb| < 1; truncation error scales
    like |Gl*Gb|**terms.
    """
    if terms < 1:
        raise ValueError("terms must be >= 1")
    v0 = source_divided_voltage(setup)
    gl = setup.gamma_load
    gb = setup.gamma_source
    fa = np.asarray(f, dtype=float)
    echo = gl * np.exp(-2j * wavenumber(fa, setup.cable.n) * setup.cable.length)
    total = v0 * np.ones_like(fa, dtype=complex)
    if terms > 1:
        m = np.arange(1, terms)
        # shape (..., terms-1); fine at this scale, callers cap terms ~ 200
        powers = echo[..., None] ** m * gb ** (m - 1)
        total = total + v0 * (1.0 + gb) * powers.sum(axis=-1)
    return total if np.ndim(f) else complex(total[()])


def _closed_form_grid(setup: CableSetup, f):
    """Vectorized closed form; returns (ratio, pole_mask) without raising."""
    fa = np.asarray(f, dtype=float)
    v0 = source_divided_voltage(setup)
    gl = setup.gamma_load
    gb = setup.gamma_source
    phase = np.exp(2j * wavenumber(fa, setup.cable.n) * setup.cable.length)
    den = phase - gl * gb
    poles = np.abs(den) < POLE_EPS
    safe_den = np.where(poles, 1.0, den)
    ratio = v0 * (phase + gl) / safe_den
    ratio = np.where(poles, np.nan + 0j, ratio)
    return ratio, poles


def total_voltage_closed_form(setup: CableSetup, f) -> complex:
    """v_s/v_b from the geometric bounce sum at a single frequency.

    Raises ResonancePoleError within POLE_EPS of a lossless double-mirror
    resonance, where the sum diverges.
    """
    ratio, poles = _closed_form_grid(setup, float(f))
    if poles[()]:
        raise ResonancePoleError(
            f"lossless resonance at f = {float(f):.6g} Hz: "
            f"|e^(2ikL) - Gl*Gb| < {POLE_EPS:g}"
        )
    return complex(ratio[()])


def matched_source_power(setup: CableSetup, f):
    """Power delivered to a matched source, v_b^2 scaled by the standing-wave ratio.

    Short and open loads use the analytic sin^2 / cos^2 limits so the nulls
    are exact zeros.
    """
    if not _is_matched(setup.source_impedance, setup.cable.z0):
        raise UnmatchedSourceError("matched_source_power requires Zb = Z0")
    vb2 = setup.source_power
    z0 = setup.cable.z0
    kl = wavenumber(f, setup.cable.n) * setup.cable.length
    load = setup.load
    if load.kind == "matched":
        return vb2 * 0.25 * np.ones_like(np.asarray(f, dtype=float)) \
            if np.ndim(f) else vb2 * 0.25
    if load.kind == "short":
        return vb2 * np.sin(kl) ** 2
    if load.kind == "open":
        return vb2 * np.cos(kl) ** 2
    zl = load.real_impedance(z0)
    return vb2 * (zl**2 * np.cos(kl) ** 2 + z0**2 * np.sin(kl) ** 2) / (z0 + zl) ** 2


def _is_matched(term: Termination, z0: float) -> bool:
    if term.kind == "matched":
        return True
    return term.kind == "finite" and complex(term.value) == complex(z0)


def cable_noise_spectrum(setup: CableSetup, grid):
    """Noise power in V^2/Hz over a frequency grid.

    Returns (power, excluded): matched sources take the analytic power
    expression everywhere; otherwise |closed form|^2 * v_b^2, with
    pole-adjacent points flagged excluded instead of failing the grid.
    """
    fa = np.asarray(grid, dtype=float)
    if fa.ndim != 1 or fa.size == 0:
        raise ValueError("grid must be a non-empty 1-D array")
    if fa.size > 1 and not np.all(np.diff(fa) > 0):
        raise ValueError("grid must be strictly increasing")
    if _is_matched(setup.source_impedance, setup.cable.z0):
        power = matched_source_power(setup, fa)
        return np.asarray(power, dtype=float), np.zeros(fa.shape, dtype=bool)
    ratio, poles = _closed_form_grid(setup, fa)
    power = setup.source_power * np.abs(ratio) ** 2
    power = np.where(poles, 0.0, power)
    return power, poles
