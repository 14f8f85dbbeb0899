#!/usr/bin/env python3
"""Standing-wave structure of thermal noise on a single coaxial cable.

The pre-amplifier's 50 ohm input resistance sources Johnson noise into a
BNC cable whose far end is shorted or left open. Reflections set up a
standing-wave pattern, so the measured noise power oscillates with
frequency: nulls every c/(2nL), shorted and open terminations exactly half
a period apart, and + 6 dB peaks over the matched-termination reference.

Writes fig_single_cable.png when matplotlib is importable, and prints the
null positions either way.
"""
import numpy as np

from coaxnoise import (
    CableSegment,
    CableSetup,
    DisplayModel,
    MATCHED,
    OPEN,
    SHORT,
    apply_display_model,
    matched_source_power,
    normalize_to_matched,
)
from coaxnoise.waves import C

LENGTH_M = 4.08
INDEX = 1.60
DISPLAY = DisplayModel(a=-1.754, sn=1.91)


def spectrum(load, freqs):
    raw = matched_source_power(CableSetup(CableSegment(LENGTH_M, n=INDEX), load), freqs)
    reference = matched_source_power(
        CableSetup(CableSegment(LENGTH_M, n=INDEX), MATCHED), freqs
    )
    return normalize_to_matched(raw, reference)


def find_nulls(freqs, values):
    interior = (values[1:-1] < values[:-2]) & (values[1:-1] < values[2:])
    return freqs[1:-1][interior]


def main():
    freqs = np.linspace(1e6, 100e6, 20_001)
    short_ratio = spectrum(SHORT, freqs)
    open_ratio = spectrum(OPEN, freqs)

    period = C / (2 * INDEX * LENGTH_M)
    print(f"cable: {LENGTH_M} m, n = {INDEX}")
    print(f"free spectral range c/(2nL) = {period / 1e6:.3f} MHz")
    print(f"peak relative power: {short_ratio.max():.3f} (expect 4 = +6 dB)")

    nulls_short = find_nulls(freqs, short_ratio)
    nulls_open = find_nulls(freqs, open_ratio)
    print("\nshorted-end nulls (MHz):", np.round(nulls_short / 1e6, 2))
    print("open-end nulls    (MHz):", np.round(nulls_open / 1e6, 2))
    print("\nshort + open relative power is flat:",
          float(np.max(np.abs(short_ratio + open_ratio - 4.0))), "max deviation from 4")

    try:
        import matplotlib

        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
    except ImportError:
        print("\nmatplotlib not available; skipping the figure")
        return

    fig, ax = plt.subplots(figsize=(8, 4.5))
    ax.plot(freqs / 1e6, apply_display_model(short_ratio, DISPLAY),
            "r-", label="shorted end (0 ohm)")
    ax.plot(freqs / 1e6, apply_display_model(open_ratio, DISPLAY),
            "b--", label="open end")
    ax.axhline(apply_display_model(1.0, DISPLAY), color="gray", lw=0.8,
               label="matched reference")
    ax.set_xlabel("frequency (MHz)")
    ax.set_ylabel("display level  a + log10(P/P_matched + sn)")
    ax.set_title(f"Thermal-noise standing waves, {LENGTH_M} m cable")
    ax.legend()
    fig.tight_layout()
    fig.savefig("fig_single_cable.png", dpi=150)
    print("\nwrote fig_single_cable.png")


if __name__ == "__main__":
    main()
