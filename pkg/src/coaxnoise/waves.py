"""Complex-phasor primitives for lossless coaxial lines.

Reflection coefficients, wavenumbers, one-way propagation phasors, and
Johnson-Nyquist source magnitudes. Everything here is a pure function;
frequency arguments accept scalars or numpy arrays.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.constants

C = scipy.constants.c                  # 2.99792458e8 m/s, exact
BOLTZMANN = scipy.constants.Boltzmann  # 1.380649e-23 J/K, exact

SHORT_KIND = "short"
OPEN_KIND = "open"
MATCHED_KIND = "matched"
FINITE_KIND = "finite"


@dataclass(frozen=True)
class PhysicalConstants:
    c: float = C
    k_boltzmann: float = BOLTZMANN


CODATA = PhysicalConstants()


@dataclass(frozen=True)
class Termination:
    """A port load: short, open, matched, or a finite complex impedance.

    Short and open are symbolic so their reflection coefficients are exactly
    -1 and +1; a huge finite stand-in for "open" would wreck the Z**4-order
    terms of the splitter power expression.
    """

    kind: str
    value: complex | None = None

    def __post_init__(self):
        if self.kind not in (SHORT_KIND, OPEN_KIND, MATCHED_KIND, FINITE_KIND):
            raise ValueError(f"unknown termination kind {self.kind!r}")
        if self.kind == FINITE_KIND:
            if self.value is None:
                raise ValueError("finite termination needs an impedance value")
            if complex(self.value).real < 0:
                raise ValueError("finite termination must have non-negative real part")
        elif self.value is not None:
            raise ValueError(f"{self.kind} termination carries no impedance value")

    @property
    def is_reflectionless(self) -> bool:
        return self.kind == MATCHED_KIND

    def impedance(self, z0: float) -> complex:
        """Impedance in ohms; raises for open (no finite representation)."""
        if self.kind == SHORT_KIND:
            return 0.0 + 0.0j
        if self.kind == MATCHED_KIND:
            return complex(z0)
        if self.kind == FINITE_KIND:
            return complex(self.value)
        raise ValueError("open termination has no finite impedance")

    def real_impedance(self, z0: float) -> float:
        """Real impedance in ohms; raises for open or complex-valued loads."""
        z = self.impedance(z0)
        if z.imag != 0.0:
            raise ValueError("termination impedance must be real here")
        return z.real


SHORT = Termination(SHORT_KIND)
OPEN = Termination(OPEN_KIND)
MATCHED = Termination(MATCHED_KIND)


def finite(z) -> Termination:
    return Termination(FINITE_KIND, complex(z))


@dataclass(frozen=True)
class CableSegment:
    """One coaxial run: length (m), characteristic impedance (ohm), index n."""

    length: float
    z0: float = 50.0
    n: float = 1.60

    def __post_init__(self):
        if self.length < 0:
            raise ValueError("length must be >= 0")
        if self.z0 <= 0:
            raise ValueError("z0 must be > 0")
        if self.n < 1:
            raise ValueError("refractive index must be >= 1")


def reflection_coefficient(load: Termination, z0: float) -> complex:
    """Gamma = (Z - z0) / (Z + z0) at a load; exact for short/open/matched."""
    if z0 <= 0:
        raise ValueError("z0 must be > 0")
    if load.kind == SHORT_KIND:
        return -1.0 + 0.0j
    if load.kind == OPEN_KIND:
        return 1.0 + 0.0j
    if load.kind == MATCHED_KIND:
        return 0.0 + 0.0j
    z = complex(load.value)
    return (z - z0) / (z + z0)


def wavenumber(f, n: float):
    """k = 2 pi f n / c, in rad/m."""
    return 2.0 * np.pi * np.asarray(f, dtype=float) * n / C


def propagation_phase(f, n: float, length: float):
    """One-way phasor exp(-i k L); unit magnitude on a lossless line."""
    if length < 0:
        raise ValueError("length must be >= 0")
    return np.exp(-1j * wavenumber(f, n) * length)


def thermal_source_power(temperature: float, impedance: float) -> float:
    """Johnson-Nyquist open-circuit voltage PSD, 4 kB T Z in V^2/Hz."""
    if temperature < 0:
        raise ValueError("temperature must be >= 0")
    if impedance < 0:
        raise ValueError("impedance must be >= 0")
    return 4.0 * BOLTZMANN * temperature * impedance
