import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from coaxnoise.waves import (
    C,
    MATCHED,
    OPEN,
    SHORT,
    CableSegment,
    Termination,
    finite,
    propagation_phase,
    reflection_coefficient,
    thermal_source_power,
    wavenumber,
)


class TestTermination:
    def test_finite_rejects_negative_real_part(self):
        with pytest.raises(ValueError):
            finite(-1.0)

    def test_short_matched_convert_exactly(self):
        assert SHORT.impedance(50.0) == 0.0
        assert MATCHED.impedance(50.0) == 50.0
        assert MATCHED.impedance(75.0) == 75.0

    def test_open_has_no_finite_impedance(self):
        with pytest.raises(ValueError):
            OPEN.impedance(50.0)

    def test_complex_impedance_allowed(self):
        term = finite(30.0 + 10.0j)
        assert term.impedance(50.0) == 30.0 + 10.0j

    def test_unknown_kind_rejected(self):
        with pytest.raises(ValueError):
            Termination("lossy")


class TestReflectionCoefficient:
    def test_short_is_exactly_minus_one(self):
        assert reflection_coefficient(SHORT, 50.0) == -1.0 + 0.0j

    def test_open_is_exactly_plus_one(self):
        assert reflection_coefficient(OPEN, 50.0) == 1.0 + 0.0j

    def test_matched_is_exactly_zero(self):
        assert reflection_coefficient(MATCHED, 50.0) == 0.0 + 0.0j

    def test_finite_100_ohm(self):
        # (100 - 50) / (100 + 50)
        gamma = reflection_coefficient(finite(100.0), 50.0)
        assert gamma == pytest.approx(1.0 / 3.0, abs=1e-15)

    def test_finite_zero_equals_short(self):
        assert reflection_coefficient(finite(0.0), 50.0) == -1.0 + 0.0j

    def test_requires_positive_z0(self):
        with pytest.raises(ValueError):
            reflection_coefficient(SHORT, 0.0)

    @given(
        re=st.floats(0.0, 1e6),
        im=st.floats(-1e6, 1e6),
        z0=st.floats(1e-3, 1e4),
    )
    def test_passivity(self, re, im, z0):
        gamma = reflection_coefficient(finite(complex(re, im)), z0)
        assert abs(gamma) <= 1.0 + 1e-12

    @given(z=st.floats(1e-6, 1e6), z0=st.floats(1e-3, 1e4))
    def test_impedance_inversion_antisymmetry(self, z, z0):
        direct = reflection_coefficient(finite(z), z0)
        inverted = reflection_coefficient(finite(z0 * z0 / z), z0)
        assert direct.real == pytest.approx(-inverted.real, abs=1e-12)


class TestWavenumber:
    def test_zero_frequency(self):
        assert wavenumber(0.0, 1.60) == 0.0

    def test_half_wave_condition(self):
        # k L = pi at f = c / (2 n L) for L = 4.08 m
        f = C / (2 * 1.60 * 4.08)
        assert wavenumber(f, 1.60) * 4.08 == pytest.approx(math.pi, rel=1e-15)
        assert wavenumber(f, 1.60) == pytest.approx(math.pi / 4.08, rel=1e-15)

    def test_direct_evaluation(self):
        # 2 pi * 1e6 / c, checked by hand
        assert wavenumber(1e6, 1.0) == pytest.approx(0.020958450219516818, rel=1e-15)

    def test_vectorized(self):
        f = np.array([0.0, 1e6, 2e6])
        k = wavenumber(f, 1.0)
        assert k.shape == (3,)
        assert k[2] == pytest.approx(2 * k[1], rel=1e-15)


class TestPropagationPhase:
    def test_zero_length_is_unity(self):
        assert propagation_phase(37e6, 1.6, 0.0) == 1.0 + 0.0j

    def test_quarter_period_phase(self):
        f = C / (4 * 1.60 * 4.08)  # k L = pi/2
        phase = propagation_phase(f, 1.60, 4.08)
        assert phase == pytest.approx(-1j, abs=1e-12)

    def test_half_period_phase(self):
        f = C / (2 * 1.60 * 4.08)  # k L = pi
        phase = propagation_phase(f, 1.60, 4.08)
        assert phase == pytest.approx(-1.0 + 0.0j, abs=1e-12)

    def test_rejects_negative_length(self):
        with pytest.raises(ValueError):
            propagation_phase(1e6, 1.6, -1.0)

    @settings(max_examples=200)
    @given(
        f=st.floats(0.0, 1e9),
        n=st.floats(1.0, 3.0),
        length=st.floats(0.0, 100.0),
    )
    def test_unit_magnitude(self, f, n, length):
        assert abs(abs(propagation_phase(f, n, length)) - 1.0) <= 1e-15

    @given(
        f=st.floats(1e3, 1e9),
        n=st.floats(1.0, 3.0),
        l1=st.floats(0.0, 50.0),
        l2=st.floats(0.0, 50.0),
    )
    def test_phase_additivity(self, f, n, l1, l2):
        combined = propagation_phase(f, n, l1) * propagation_phase(f, n, l2)
        direct = propagation_phase(f, n, l1 + l2)
        assert abs(combined - direct) <= 1e-12 * abs(direct) + 1e-12


class TestThermalSourcePower:
    def test_zero_temperature(self):
        assert thermal_source_power(0.0, 50.0) == 0.0

    def test_room_temperature_50_ohm(self):
        # 4 * 1.380649e-23 * 290 * 50, multiplied out by hand
        assert thermal_source_power(290.0, 50.0) == pytest.approx(
            8.0077642e-19, rel=1e-12
        )

    def test_zero_impedance(self):
        assert thermal_source_power(290.0, 0.0) == 0.0

    def test_rejects_negative(self):
        with pytest.raises(ValueError):
            thermal_source_power(-1.0, 50.0)
        with pytest.raises(ValueError):
            thermal_source_power(290.0, -1.0)


class TestCableSegment:
    def test_defaults(self):
        seg = CableSegment(4.0)
        assert seg.z0 == 50.0
        assert seg.n == 1.60

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"length": -1.0},
            {"length": 1.0, "z0": 0.0},
            {"length": 1.0, "n": 0.5},
        ],
    )
    def test_invariants(self, kwargs):
        with pytest.raises(ValueError):
            CableSegment(**kwargs)
