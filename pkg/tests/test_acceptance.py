"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

Run with `pytest tests/test_acceptance.py -v -s` to see the per-criterion
summary lines alongside the pytest verdicts.
"""
import json
import time

import numpy as np
import pytest

from coaxnoise.cable import (
    CableSetup,
    bounce_series_oracle,
    matched_source_power,
    source_divided_voltage,
    total_voltage_closed_form,
)
from coaxnoise.cli import main
from coaxnoise.display import DisplayModel, synth_spectrum
from coaxnoise.fitting import SINGLE_CABLE, FitProblem, fit
from coaxnoise.splitter import (
    BOLTZMANN,
    LimitIndex,
    SplitterModel,
    SplitterSetup,
    delay_matrix,
    limit_noise_power,
    total_noise_power,
    validate_splitter,
)
from coaxnoise.waves import C, MATCHED, OPEN, SHORT, CableSegment, finite


def report(number: int, name: str, ok: bool, detail: str) -> None:
    print(f"criterion {number} ({name}): {'PASS' if ok else 'FAIL'} - {detail}")
    assert ok, f"criterion {number} ({name}): {detail}"


def gamma_to_termination(gamma, z0=50.0):
    if abs(gamma - 1.0) < 1e-12:
        return OPEN
    z = z0 * (1.0 + gamma) / (1.0 - gamma)
    if z.real < 0:
        z = complex(0.0, z.imag)
    return finite(z)


def test_criterion_1_oracle_equivalence():
    """Bounce series vs closed form over draws covering |Gl*Gb| <= 0.9.

    NOTE: the stated tolerance (1e-10 at 200 terms) is tighter than the
    200-term geometric remainder at the stated draw boundary, which is
    |Gl*Gb|**199 = 0.9**199 ~ 7.8e-10 before any null-proximity
    amplification. Draws that actually reach the boundary therefore exceed
    1e-10 as a matter of series arithmetic, not implementation error; the
    diagnostics below separate the two effects.
    """
    rng = np.random.default_rng(2024)
    n_draws = 10_000
    terms = 200
    t0 = time.perf_counter()
    worst = 0.0
    worst_inside = 0.0  # restricted to |Gl*Gb| <= 0.85
    worst_vs_tail = 0.0  # deviation over the analytic truncation remainder
    for _ in range(n_draws):
        product = rng.uniform(0.0, 0.9)
        gl_mag = rng.uniform(product, 1.0)
        gb_mag = product / gl_mag if gl_mag > 0 else 0.0
        gl = gl_mag * np.exp(1j * rng.uniform(0, 2 * np.pi))
        gb = gb_mag * np.exp(1j * rng.uniform(0, 2 * np.pi))
        setup = CableSetup(
            CableSegment(rng.uniform(0.1, 10.0)),
            gamma_to_termination(gl),
            gamma_to_termination(gb),
        )
        f = rng.uniform(1e6, 1e8)
        closed = total_voltage_closed_form(setup, f)
        series = bounce_series_oracle(setup, f, terms)
        deviation = abs(series - closed) / abs(closed)
        worst = max(worst, deviation)
        if product <= 0.85:
            worst_inside = max(worst_inside, deviation)
        x = gl * np.exp(-2j * 2 * np.pi * f * 1.6 / C * setup.cable.length)
        v0 = source_divided_voltage(setup)
        remainder = abs(v0 * (1 + gb) * x**terms * gb ** (terms - 1) / (1 - x * gb))
        tail_bound = remainder / abs(closed) + 1e-13
        worst_vs_tail = max(worst_vs_tail, deviation / tail_bound)
    elapsed = time.perf_counter() - t0
    print(
        f"criterion 1 diagnostics: max deviation {worst:.3e}; "
        f"max over |Gl*Gb| <= 0.85 only: {worst_inside:.3e}; "
        f"max deviation / analytic 200-term remainder: {worst_vs_tail:.3f}; "
        f"runtime {elapsed:.2f} s"
    )
    report(
        1,
        "oracle equivalence",
        worst < 1e-10 and elapsed < 5.0,
        f"max relative deviation {worst:.3e} over {n_draws} draws "
        f"(tolerance 1e-10), runtime {elapsed:.2f} s",
    )


def test_criterion_2_complementarity():
    freqs = np.linspace(1e6, 500e6, 10_000)
    short = matched_source_power(CableSetup(CableSegment(4.08), SHORT), freqs)
    open_ = matched_source_power(CableSetup(CableSegment(4.08), OPEN), freqs)
    sum_err = np.max(np.abs(short + open_ - 1.0))
    matched = matched_source_power(CableSetup(CableSegment(4.08), MATCHED), freqs)
    matched_err = np.max(np.abs(matched - 0.25))
    report(
        2,
        "complementarity",
        sum_err < 1e-12 and matched_err < 1e-15,
        f"short+open deviation {sum_err:.2e} (tol 1e-12), "
        f"matched deviation {matched_err:.2e} (tol 1e-15)",
    )


def _null_spacing(length_m: float) -> float:
    freqs = np.linspace(1e6, 100e6, 40_001)  # 2.5 kHz steps
    power = matched_source_power(
        CableSetup(CableSegment(length_m, n=1.60), SHORT), freqs
    )
    interior = (power[1:-1] < power[:-2]) & (power[1:-1] < power[2:])
    minima = freqs[1:-1][interior]
    return float(np.mean(np.diff(minima)))


def test_criterion_3_null_spacing():
    spacing_4 = _null_spacing(4.08)
    spacing_8 = _null_spacing(7.93)
    ok = (
        abs(spacing_4 - C / (2 * 1.60 * 4.08)) < 0.05e6
        and abs(spacing_4 - 22.97e6) < 0.05e6
        and abs(spacing_8 - C / (2 * 1.60 * 7.93)) < 0.05e6
        and abs(spacing_8 - 11.82e6) < 0.05e6
    )
    report(
        3,
        "null spacing",
        ok,
        f"4.08 m: {spacing_4 / 1e6:.3f} MHz (expect 22.97 +/- 0.05); "
        f"7.93 m: {spacing_8 / 1e6:.3f} MHz (expect 11.82 +/- 0.05)",
    )


def test_criterion_4_limit_equivalence():
    rng = np.random.default_rng(8)
    freqs = rng.uniform(1e6, 1e8, 1000)
    table = {0: SHORT, 1: OPEN}
    t0 = time.perf_counter()
    worst = 0.0
    for m3 in (0, 1):
        for m4 in (0, 1):
            setup = SplitterSetup(
                l3=rng.uniform(0, 5), z3=table[m3],
                l4=rng.uniform(0, 5), z4=table[m4],
                l_amp=rng.uniform(0, 5),
                source_impedance=MATCHED,  # z2 = Z0
            )
            lim = limit_noise_power(setup, freqs, LimitIndex(m3, m4))
            full = total_noise_power(setup, freqs)
            worst = max(worst, float(np.max(np.abs(lim - full) / lim)))
    elapsed = time.perf_counter() - t0
    notes = " ".join(validate_splitter(SplitterModel()).notes)
    documented = "Z1 = Z0" in notes and "z2 = Z0" in notes
    report(
        4,
        "limit equivalence",
        worst < 1e-9 and elapsed < 2.0 and documented,
        f"max relative deviation {worst:.2e} (tol 1e-9) over 4 limit pairs x "
        f"1000 frequencies, runtime {elapsed:.2f} s; "
        f"(Z1, z2) assumptions documented in validation report: {documented}",
    )


def test_criterion_5_m_average_flatness():
    setup = SplitterSetup(l3=1.0, z3=OPEN, l4=4.0, z4=SHORT, l_amp=2.0)
    freqs = np.linspace(1e6, 500e6, 10_000)
    average = sum(
        limit_noise_power(setup, freqs, LimitIndex(m3, m4))
        for m3 in (0, 1)
        for m4 in (0, 1)
    ) / 4.0
    expected = 2 * BOLTZMANN * setup.temperature * setup.z0
    worst = float(np.max(np.abs(average - expected) / expected))
    report(
        5,
        "m-average flatness",
        worst < 1e-12,
        f"max deviation from 2*kB*T*Z0 is {worst:.2e} (tol 1e-12) "
        f"at 10^4 frequencies",
    )


def test_criterion_6_s_matrix_unitarity():
    result = validate_splitter(SplitterModel())
    report(
        6,
        "S-matrix validation",
        result.passed and result.unitarity_defect < 1e-15,
        f"unitarity defect {result.unitarity_defect:.2e} (tol 1e-15), "
        f"tau symmetry defect {result.tau_symmetry_defect:.2e}",
    )


def test_criterion_7_fit_recovery():
    truth = {"L": 4.08, "a": -1.754, "sn": 1.91}
    display = DisplayModel(a=truth["a"], sn=truth["sn"])
    grid = np.linspace(1e6, 120e6, 1000)  # > 5 spectral periods at 4.08 m
    relative = 4.0 * matched_source_power(
        CableSetup(CableSegment(truth["L"], n=1.60), SHORT), grid
    )
    t0 = time.perf_counter()

    def problem(observed, guess):
        return FitProblem(
            observed=observed,
            model_kind=SINGLE_CABLE,
            free_parameters=("L", "a", "sn"),
            bounds={"L": (2.0, 6.0), "a": (-5.0, 2.0), "sn": (0.0, 10.0)},
            initial_guess=guess,
            fixed={"n": 1.60},
            termination=SHORT,
        )

    noiseless = synth_spectrum(relative, grid, display, 0.0)
    start = {"L": truth["L"] * 1.05, "a": truth["a"] * 0.95, "sn": truth["sn"] * 1.05}
    result = fit(problem(noiseless, start))
    noiseless_errs = {
        k: abs(result.values[k] - truth[k]) / abs(truth[k]) for k in truth
    }
    noiseless_ok = result.converged and all(e < 1e-3 for e in noiseless_errs.values())

    relative_4m = 4.0 * matched_source_power(
        CableSetup(CableSegment(4.0, n=1.60), SHORT), grid
    )
    hits = 0
    for seed in range(50):
        noisy = synth_spectrum(relative_4m, grid, display, 0.05, seed)
        r = fit(problem(noisy, {"L": 4.1, "a": -1.6, "sn": 2.0}))
        if abs(r.values["L"] - 4.0) / 4.0 < 0.01:
            hits += 1
    elapsed = time.perf_counter() - t0
    report(
        7,
        "fit recovery",
        noiseless_ok and hits >= 45 and elapsed < 60.0,
        f"noiseless errors {max(noiseless_errs.values()):.2e} (tol 1e-3); "
        f"noisy trials within 1%: {hits}/50 (need >= 45); "
        f"runtime {elapsed:.1f} s (limit 60)",
    )


TRUTH_CONFIG = """
mode: single-cable
cable: {length_m: 4.08, n: 1.60, termination: short}
display: {a: -1.754, sn: 1.91}
grid: {start_hz: 1.0e6, stop_hz: 100.0e6, points: 4000}
"""

START_CONFIG = """
mode: single-cable
cable: {length_m: 4.2, n: 1.60, termination: short}
display: {a: -1.6, sn: 2.2}
grid: {start_hz: 1.0e6, stop_hz: 100.0e6, points: 4000}
"""


def test_criterion_8_pipeline_closure(tmp_path):
    truth_cfg = tmp_path / "truth.yaml"
    truth_cfg.write_text(TRUTH_CONFIG)
    start_cfg = tmp_path / "start.yaml"
    start_cfg.write_text(START_CONFIG)
    observed = tmp_path / "observed.csv"
    fit_out = tmp_path / "fit.json"
    sim_code = main(["simulate", "--config", str(truth_cfg), "--out", str(observed)])
    fit_code = main(
        ["fit", "--config", str(start_cfg), "--observed", str(observed),
         "--free", "L,a,sn", "--out", str(fit_out)]
    )
    values = json.loads(fit_out.read_text())["values"]
    truth = {"L": 4.08, "a": -1.754, "sn": 1.91}
    errs = {k: abs(values[k] - truth[k]) / abs(truth[k]) for k in truth}
    report(
        8,
        "pipeline closure",
        sim_code == 0 and fit_code == 0 and all(e < 1e-3 for e in errs.values()),
        f"simulate exit {sim_code}, fit exit {fit_code}, "
        f"max parameter error {max(errs.values()):.2e} (tol 1e-3)",
    )


FIG5_CONFIG = """
mode: splitter
splitter:
  profile: zero-delay
  arm3: {length_m: 1.0, termination: open}
  arm4: {length_m: 4.0, termination: short}
  amp_cable_m: 2.0
display: {a: -1.27, sn: 1.10}
grid: {start_hz: 1.0e6, stop_hz: 450.0e6, points: 8192}
"""


def _autocorrelation_peak_lag(row: np.ndarray, lag_window: range) -> int | None:
    """Lag of the autocorrelation maximum, or None for a constant row.

    A constant row is trivially periodic at every lag; it appears in the
    sweep whenever the open and shorted paths have equal total length and
    cancel to exact flatness.
    """
    x = row - row.mean()
    var = float(x @ x) / x.size
    if var < 1e-18:
        return None
    best_lag, best_r = 0, -np.inf
    for lag in lag_window:
        overlap = x[:-lag] @ x[lag:] / (x.size - lag)
        r = overlap / var
        if r > best_r:
            best_lag, best_r = lag, r
    return best_lag


def test_criterion_9_figure_shape(tmp_path):
    # Fig. 5 sweep: J3 = 1 m open, J4 swept shorted, L_A = 2 m. With the
    # zero-delay profile every integer-length row shares the exact period
    # c/(2n x 1 m); the fitted-delay profile makes the three cosine periods
    # incommensurate, so no exact common period exists to predict.
    config = tmp_path / "fig5.yaml"
    config.write_text(FIG5_CONFIG)
    out = tmp_path / "sweep.csv"
    code = main(
        ["sweep", "--config", str(config), "--out", str(out), "--arm", "4",
         "--from", "0", "--to", "4", "--steps", "5"]
    )
    assert code == 0
    rows = [line.split(",") for line in out.read_text().strip().split("\n")[1:]]
    levels = np.array([float(r[2]) for r in rows]).reshape(5, 8192)
    freqs = np.array([float(r[1]) for r in rows]).reshape(5, 8192)[0]
    df = freqs[1] - freqs[0]
    period = C / (2 * 1.60 * 1.0)  # 93.7 MHz
    predicted_lag = period / df
    window = range(int(predicted_lag * 0.75), int(predicted_lag * 1.25))
    peak_errors = []
    flat_rows = 0
    for row in levels:
        peak = _autocorrelation_peak_lag(row, window)
        if peak is None:  # equal-length paths cancel to a flat row
            flat_rows += 1
            peak_errors.append(0.0)
        else:
            peak_errors.append(abs(peak - predicted_lag) * df)
    periodic_ok = max(peak_errors) <= 2 * df

    # toggling J3 between short and open flips the sign of the single-arm
    # cosine, i.e. shifts that interference pattern by half its period
    # (arm 4 matched isolates the arm-3 term; H2979 delays included)
    setup_short = SplitterSetup(
        splitter=SplitterModel(tau=delay_matrix("H2979-fit")),
        l3=1.0, z3=SHORT, l4=4.0, z4=MATCHED, l_amp=2.0,
    )
    setup_open = SplitterSetup(
        splitter=SplitterModel(tau=delay_matrix("H2979-fit")),
        l3=1.0, z3=OPEN, l4=4.0, z4=MATCHED, l_amp=2.0,
    )
    u3 = 2 * 1.60 * (2.0 + 1.0) / C - 2 * 8.46e-9  # cosine rate vs frequency
    half_period = 0.5 / u3
    f_grid = np.linspace(1e6, 100e6, 5000)
    short_shifted = total_noise_power(setup_short, f_grid + half_period)
    open_here = total_noise_power(setup_open, f_grid)
    shift_err = float(np.max(np.abs(open_here - short_shifted) / open_here))
    shift_ok = shift_err < 1e-9
    report(
        9,
        "figure-shape reproduction",
        periodic_ok and shift_ok,
        f"autocorrelation peak offset <= {max(peak_errors) / df:.2f} grid steps "
        f"across 5 sweep rows (tol 2, {flat_rows} trivially-periodic flat row); "
        f"short<->open J3 toggle equals a half-period shift to "
        f"{shift_err:.2e} (tol 1e-9)",
    )
