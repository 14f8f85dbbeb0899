"""Four-port splitter network: round-trip response and thermal-noise power.

Topology: the pre-amplifier looks into a cable of length l_amp ending at
port J2 of a 4-port splitter. Ports J3 and J4 carry cables of lengths l3,
l4 with terminations Z3, Z4; J1 is terminated (matched in the reference
setup, preventing re-reflection). The splitter mixes the two inputs into
sum/difference outputs, so reflections off Z3 and Z4 interfere at the
detector and imprint standing-wave structure on the noise spectrum.

Total noise power sums four statistically independent thermal sources: the
pre-amplifier's own input resistance z2 (reflected back through the
network), the two arm terminations, and the J1 terminator. The closed-form
power expression is evaluated with every impedance-rational coefficient
normalized by (Z0+Z3)^2 (Z0+Z4)^2, which keeps each factor bounded and
makes the short/open limits exact instead of catastrophic.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .errors import DegenerateSourceError, UnmatchedJ1Error
from .waves import (
    BOLTZMANN,
    MATCHED,
    Termination,
    reflection_coefficient,
    thermal_source_power,
    wavenumber,
)

INV_SQRT2 = 1.0 / np.sqrt(2.0)

# Fitted port-pair propagation delays for the reference splitter hardware;
# the unused 1-2 and 3-4 pairs default to zero.
DELAY_PROFILES = {
    "H2979-fit": {(3, 1): 5.31e-9, (4, 1): 5.31e-9, (3, 2): 8.46e-9, (4, 2): 8.46e-9},
    "zero-delay": {},
}


def _default_s() -> np.ndarray:
    s = np.zeros((4, 4), dtype=complex)
    s[2, 1] = s[1, 2] = -INV_SQRT2          # s32 = s23
    for i, j in ((1, 3), (2, 0), (0, 2), (0, 3), (3, 0)):
        s[i, j] = INV_SQRT2                 # s24, s31, s13, s14, s41
    s[3, 1] = INV_SQRT2                     # s42
    return s


def delay_matrix(profile: str = "H2979-fit") -> np.ndarray:
    try:
        pairs = DELAY_PROFILES[profile]
    except KeyError:
        raise ValueError(f"unknown delay profile {profile!r}") from None
    tau = np.zeros((4, 4))
    for (i, j), value in pairs.items():
        tau[i - 1, j - 1] = tau[j - 1, i - 1] = value
    return tau


@dataclass(frozen=True)
class SplitterModel:
    """4x4 scattering amplitudes plus symmetric port-pair delays (seconds)."""

    s: np.ndarray = field(default_factory=_default_s)
    tau: np.ndarray = field(default_factory=delay_matrix)

    def __post_init__(self):
        object.__setattr__(self, "s", np.asarray(self.s, dtype=complex))
        object.__setattr__(self, "tau", np.asarray(self.tau, dtype=float))
        if self.s.shape != (4, 4) or self.tau.shape != (4, 4):
            raise ValueError("s and tau must be 4x4")

    def s_at(self, i: int, j: int) -> complex:
        """Scattering amplitude s_ij with 1-based port numbers."""
        return complex(self.s[i - 1, j - 1])

    def tau_at(self, i: int, j: int) -> float:
        """Propagation delay tau_ij with 1-based port numbers."""
        return float(self.tau[i - 1, j - 1])


@dataclass(frozen=True)
class ValidationReport:
    unitarity_defect: float
    tau_symmetry_defect: float
    passed: bool
    notes: tuple[str, ...]


# The closed-form total assumes the J1 terminator is the line impedance
# (its source magnitude enters as 4kT*Z0/4) and reduces to the short/open
# limit expression only when the detector-side z2 also equals Z0.
LIMIT_ASSUMPTIONS = (
    "closed-form total embeds Z1 = Z0 (matched J1 terminator)",
    "limit expression equals the closed-form limits only for z2 = Z0",
)


def validate_splitter(model: SplitterModel) -> ValidationReport:
    """Check the input->output block for unitarity and tau for symmetry."""
    block = np.array(
        [
            [model.s_at(1, 3), model.s_at(1, 4)],
            [model.s_at(2, 3), model.s_at(2, 4)],
        ]
    )
    defect = float(np.max(np.abs(block @ block.conj().T - np.eye(2))))
    tau_defect = float(np.max(np.abs(model.tau - model.tau.T)))
    notes = list(LIMIT_ASSUMPTIONS)
    if defect >= 1e-12:
        notes.append(f"input->output block unitarity defect {defect:.3e}")
    if tau_defect > 0.0:
        notes.append(f"tau asymmetry {tau_defect:.3e} s")
    return ValidationReport(
        unitarity_defect=defect,
        tau_symmetry_defect=tau_defect,
        passed=defect < 1e-12 and tau_defect == 0.0,
        notes=tuple(notes),
    )


@dataclass(frozen=True)
class SplitterSetup:
    """Splitter plus its cabling; all cables share one z0 and one n."""

    splitter: SplitterModel = field(default_factory=SplitterModel)
    l3: float = 0.0
    z3: Termination = MATCHED
    l4: float = 0.0
    z4: Termination = MATCHED
    l_amp: float = 0.0
    z0: float = 50.0
    n: float = 1.60
    j1_termination: Termination = MATCHED
    l1: float = 0.0
    source_impedance: Termination = MATCHED
    temperature: float = 290.0

    def __post_init__(self):
        for name in ("l3", "l4", "l_amp", "l1"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0")
        if self.z0 <= 0:
            raise ValueError("z0 must be > 0")
        if self.n < 1:
            raise ValueError("refractive index must be >= 1")
        if self.temperature < 0:
            raise ValueError("temperature must be >= 0")


@dataclass(frozen=True)
class LimitIndex:
    """Mirror-limit selector: m = 0 for a shorted arm, 1 for an open arm."""

    m3: int
    m4: int

    def __post_init__(self):
        if self.m3 not in (0, 1) or self.m4 not in (0, 1):
            raise ValueError("limit indices must be 0 (short) or 1 (open)")

    @classmethod
    def from_terminations(cls, z3: Termination, z4: Termination) -> "LimitIndex":
        def index(term):
            if term.kind == "short":
                return 0
            if term.kind == "open":
                return 1
            raise ValueError("limit form needs short or open terminations")

        return cls(index(z3), index(z4))


def reflected_wave_response(setup: SplitterSetup, f):
    """v2a/v20: detector-side wave plus its echoes off Z3 and Z4.

    Sum of the direct term and one splitter round trip per arm,

        1 + e^{-ikLa + iw*t32} s32 G3 e^{-2ikL3} e^{+iw*t23} s23 e^{-ikLa}
          + e^{-ikLa + iw*t42} s42 G4 e^{-2ikL4} e^{+iw*t24} s24 e^{-ikLa},

    valid while J1 is matched so nothing re-enters from that port.
    """
    if not setup.j1_termination.is_reflectionless:
        raise UnmatchedJ1Error("round-trip response derived for a matched J1 only")
    sp = setup.splitter
    k = wavenumber(f, setup.n)
    w = 2.0 * np.pi * np.asarray(f, dtype=float)
    g3 = reflection_coefficient(setup.z3, setup.z0)
    g4 = reflection_coefficient(setup.z4, setup.z0)
    amp = np.exp(-1j * k * setup.l_amp)
    term3 = (
        amp
        * np.exp(1j * w * sp.tau_at(3, 2))
        * sp.s_at(3, 2)
        * g3
        * np.exp(-2j * k * setup.l3)
        * np.exp(1j * w * sp.tau_at(2, 3))
        * sp.s_at(2, 3)
        * amp
    )
    term4 = (
        amp
        * np.exp(1j * w * sp.tau_at(4, 2))
        * sp.s_at(4, 2)
        * g4
        * np.exp(-2j * k * setup.l4)
        * np.exp(1j * w * sp.tau_at(2, 4))
        * sp.s_at(2, 4)
        * amp
    )
    out = 1.0 + term3 + term4
    return out if np.ndim(f) else complex(out)


def _source_magnitude(term: Termination, z0: float, temperature: float) -> float:
    """Launched thermal amplitude Z0/(Z+Z0) * sqrt(4 kB T Z) for a finite resistor."""
    if term.kind in ("short", "open"):
        raise DegenerateSourceError(
            f"{term.kind} termination sources no thermal wave; use the limit forms"
        )
    z = term.real_impedance(z0)
    return z0 / (z + z0) * np.sqrt(thermal_source_power(temperature, z))


def arm_noise_contribution(setup: SplitterSetup, f, arm: int):
    """Complex amplitude reaching the detector from one arm terminator.

    v_i0 e^{-ikL_i + iw*t2i} s_2i e^{-ikLa} for arm i in (3, 4).
    """
    if arm not in (3, 4):
        raise ValueError("arm must be 3 or 4")
    term = setup.z3 if arm == 3 else setup.z4
    length = setup.l3 if arm == 3 else setup.l4
    v0 = _source_magnitude(term, setup.z0, setup.temperature)
    sp = setup.splitter
    k = wavenumber(f, setup.n)
    w = 2.0 * np.pi * np.asarray(f, dtype=float)
    out = (
        v0
        * np.exp(-1j * k * length + 1j * w * sp.tau_at(2, arm))
        * sp.s_at(2, arm)
        * np.exp(-1j * k * setup.l_amp)
    )
    return out if np.ndim(f) else complex(out)


def j1_noise_contribution(setup: SplitterSetup, f):
    """Complex amplitude from the J1 terminator, via both arms.

    The noise launched at J1 splits toward arms 3 and 4, makes one cable
    round trip, reflects off the terminator, and exits through J2:

        v10 e^{-ikL1} [ e^{+iw*t31} s31 G3 e^{-2ikL3} s23 e^{-ikLa + iw*t23}
                      + e^{+iw*t41} s41 G4 e^{-2ikL4} s24 e^{-ikLa + iw*t24} ].

    The arm round-trip phasors e^{-2ikL} are required for the cross term of
    the summed power to carry its 2k(L3 - L4) dependence.
    """
    v10 = _source_magnitude(setup.j1_termination, setup.z0, setup.temperature)
    sp = setup.splitter
    k = wavenumber(f, setup.n)
    w = 2.0 * np.pi * np.asarray(f, dtype=float)
    g3 = reflection_coefficient(setup.z3, setup.z0)
    g4 = reflection_coefficient(setup.z4, setup.z0)
    amp = np.exp(-1j * k * setup.l_amp)
    path3 = (
        np.exp(1j * w * sp.tau_at(3, 1))
        * sp.s_at(3, 1)
        * g3
        * np.exp(-2j * k * setup.l3)
        * sp.s_at(2, 3)
        * amp
        * np.exp(1j * w * sp.tau_at(2, 3))
    )
    path4 = (
        np.exp(1j * w * sp.tau_at(4, 1))
        * sp.s_at(4, 1)
        * g4
        * np.exp(-2j * k * setup.l4)
        * sp.s_at(2, 4)
        * amp
        * np.exp(1j * w * sp.tau_at(2, 4))
    )
    out = v10 * np.exp(-1j * k * setup.l1) * (path3 + path4)
    return out if np.ndim(f) else complex(out)


def _impedance_ratios(term: Termination, z0: float):
    """(z0^2, z0*Z, Z^2), each over (z0 + Z)^2.

    Every monomial of the closed-form power polynomial factors into these
    bounded ratios; short and open take their exact limits here instead of
    being substituted as 0 or a large number downstream.
    """
    if term.kind == "short":
        return 1.0, 0.0, 0.0
    if term.kind == "open":
        return 0.0, 0.0, 1.0
    z = term.real_impedance(z0)
    den = (z0 + z) ** 2
    return z0 * z0 / den, z0 * z / den, z * z / den


# Monomial coefficients of the two impedance polynomials in the summed
# power, indexed by the (Z3, Z4) powers of each term after normalization.
_POLY_MUTUAL = {
    (0, 0): 1.0, (1, 0): 4.0, (2, 0): 1.0,
    (0, 1): 4.0, (1, 1): 12.0, (2, 1): 4.0,
    (0, 2): 1.0, (1, 2): 4.0, (2, 2): 1.0,
}
_POLY_DETECTOR = {
    (0, 0): 3.0, (1, 0): 4.0, (2, 0): 3.0,
    (0, 1): 4.0, (1, 1): 4.0, (2, 1): 4.0,
    (0, 2): 3.0, (1, 2): 4.0, (2, 2): 3.0,
}


def _poly(table, r3, r4) -> float:
    return sum(c * r3[a] * r4[b] for (a, b), c in table.items())


def _phases(setup: SplitterSetup, f):
    sp = setup.splitter
    k = wavenumber(f, setup.n)
    w = 2.0 * np.pi * np.asarray(f, dtype=float)
    kl3 = k * setup.l3
    kl4 = k * setup.l4
    kla = k * setup.l_amp
    t13 = w * sp.tau_at(1, 3)
    t14 = w * sp.tau_at(1, 4)
    t23 = w * sp.tau_at(2, 3)
    t24 = w * sp.tau_at(2, 4)
    phi_arm3 = 2.0 * (kla + kl3 - t23)
    phi_arm4 = 2.0 * (kla + kl4 - t24)
    phi_j1 = 2.0 * kl3 - 2.0 * kl4 - t13 + t14 - t23 + t24
    phi_diff = 2.0 * (-kl3 + kl4 + t23 - t24)
    return phi_arm3, phi_arm4, phi_j1, phi_diff


def total_noise_power(setup: SplitterSetup, f):
    """Summed thermal-noise PSD at the detector, in V^2/Hz.

    Closed form over the four independent sources (z2, Z3, Z4, and the
    matched J1 terminator), for real arm impedances including the exact
    short and open limits. Not valid for reactive arms.
    """
    r3 = _impedance_ratios(setup.z3, setup.z0)
    r4 = _impedance_ratios(setup.z4, setup.z0)
    g3 = reflection_coefficient(setup.z3, setup.z0).real
    g4 = reflection_coefficient(setup.z4, setup.z0).real
    if setup.z3.kind == "finite":
        setup.z3.real_impedance(setup.z0)  # reject reactive arms
    if setup.z4.kind == "finite":
        setup.z4.real_impedance(setup.z0)
    phi_arm3, phi_arm4, phi_j1, phi_diff = _phases(setup, f)
    mutual = _poly(_POLY_MUTUAL, r3, r4) - g3 * g4 * np.cos(phi_j1)
    detector = (
        _poly(_POLY_DETECTOR, r3, r4)
        + 2.0 * g3 * np.cos(phi_arm3)
        + 2.0 * g4 * np.cos(phi_arm4)
        + g3 * g4 * np.cos(phi_diff)
    )
    divider = 4.0 * _impedance_ratios(setup.source_impedance, setup.z0)[1]
    scale = 4.0 * BOLTZMANN * setup.temperature * setup.z0 / 8.0
    out = scale * (mutual + divider * detector)
    return out if np.ndim(f) else float(out)


def limit_noise_power(setup: SplitterSetup, f, limits: LimitIndex):
    """Noise PSD in the mirror limits Z_i -> 0 or infinity, in V^2/Hz.

    v^2(m3, m4) = (4 kB T Z0 / 8) * {4
        - 2 (-1)^m3 cos(2(kLa + kL3 - w t23))
        - 2 (-1)^m4 cos(2(kLa + kL4 - w t24))
        - (-1)^(m3+m4) cos(2kL3 - 2kL4 - w t13 + w t14 - w t23 + w t24)
        + (-1)^(m3+m4) cos(2(kL3 - kL4 - w t23 + w t24)) }
    """
    phi_arm3, phi_arm4, phi_j1, phi_diff = _phases(setup, f)
    s3 = -1.0 if limits.m3 else 1.0
    s4 = -1.0 if limits.m4 else 1.0
    braces = (
        4.0
        - 2.0 * s3 * np.cos(phi_arm3)
        - 2.0 * s4 * np.cos(phi_arm4)
        - s3 * s4 * np.cos(phi_j1)
        + s3 * s4 * np.cos(phi_diff)
    )
    out = 4.0 * BOLTZMANN * setup.temperature * setup.z0 / 8.0 * braces
    return out if np.ndim(f) else float(out)


def matched_arm_power(setup: SplitterSetup) -> float:
    """Frequency-flat PSD with both arms matched; the normalization reference."""
    flat = replace(setup, z3=MATCHED, z4=MATCHED)
    return float(total_noise_power(flat, 0.0))


def sweep_arm_length(setup: SplitterSetup, grid, arm: int, lengths):
    """Noise PSD over (length, frequency); rows follow the lengths order."""
    if arm not in (3, 4):
        raise ValueError("arm must be 3 or 4")
    lengths = np.asarray(lengths, dtype=float)
    if lengths.size == 0:
        raise ValueError("lengths must be non-empty")
    if np.any(lengths < 0):
        raise ValueError("lengths must be >= 0")
    fa = np.asarray(grid, dtype=float)
    surface = np.empty((lengths.size, fa.size))
    for row, length in enumerate(lengths):
        varied = replace(setup, **{"l3" if arm == 3 else "l4": float(length)})
        surface[row] = total_noise_power(varied, fa)
    return surface
