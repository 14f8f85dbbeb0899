"""Command-line interface: simulate, sweep, fit, oracle-check.

Every command takes --config and writes plot-ready CSV or a JSON fit
report. Exit codes are part of the contract:

    0  success (fit: converged)
    1  configuration error
    2  input/output error
    3  fit did not converge (best-so-far report still written)
    4  insufficient or uninformative data for the requested fit
    5  oracle deviation above threshold
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from dataclasses import replace
from pathlib import Path

import numpy as np

from .cable import cable_noise_spectrum
from .config import (
    SINGLE_CABLE_MODE,
    SPLITTER_MODE,
    TopologyConfig,
    load_config,
)
from .display import NoiseSpectrum, apply_display_model, normalize_to_matched
from .errors import (
    CoaxNoiseError,
    ConfigError,
    InsufficientDataError,
    SpectrumFormatError,
)
from .fitting import (
    SINGLE_CABLE,
    SPLITTER_LIMIT,
    FitConfig,
    FitProblem,
    canonical_name,
    fit,
    fit_report,
)
from .splitter import LimitIndex, matched_arm_power, sweep_arm_length, total_noise_power
from .spectrum_io import read_spectrum_csv, write_spectrum_csv, write_sweep_csv
from .waves import MATCHED

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_IO = 2
EXIT_NOT_CONVERGED = 3
EXIT_INSUFFICIENT_DATA = 4
EXIT_ORACLE_DEVIATION = 5

ORACLE_TOLERANCE = 1e-10


def _relative_spectrum(config: TopologyConfig) -> NoiseSpectrum:
    """Model spectrum normalized to the matched-termination reference."""
    freqs = config.frequencies()
    if config.mode == SINGLE_CABLE_MODE:
        setup = config.cable_setup()
        power, excluded = cable_noise_spectrum(setup, freqs)
        reference, _ = cable_noise_spectrum(replace(setup, load=MATCHED), freqs)
        relative = np.where(excluded, np.nan, 0.0)
        inc = ~excluded
        relative[inc] = normalize_to_matched(power[inc], reference[inc])
        return NoiseSpectrum(freqs, relative, None, excluded)
    setup = config.splitter_setup()
    power = total_noise_power(setup, freqs)
    relative = normalize_to_matched(power, matched_arm_power(setup))
    return NoiseSpectrum.from_linear(freqs, relative)


def cmd_simulate(args) -> int:
    config = load_config(args.config)
    spectrum = _relative_spectrum(config).with_display(config.display)
    write_spectrum_csv(spectrum, args.out)
    if args.compare == "matched":
        # second trace: linear power ratio against the matched reference
        normalized = NoiseSpectrum(
            spectrum.frequencies, None, spectrum.linear_power, spectrum.excluded
        )
        write_spectrum_csv(normalized, _normalized_path(args.out))
    return EXIT_OK


def _normalized_path(out) -> Path:
    out = Path(out)
    return out.with_name(out.stem + ".normalized" + out.suffix)


def cmd_sweep(args) -> int:
    config = load_config(args.config)
    if config.mode != SPLITTER_MODE:
        raise ConfigError("sweep requires a splitter-mode config")
    if args.steps < 1:
        raise ConfigError("--steps must be >= 1")
    if args.length_to < args.length_from:
        raise ConfigError("--to must be >= --from")
    setup = config.splitter_setup()
    lengths = np.linspace(args.length_from, args.length_to, args.steps)
    freqs = config.frequencies()
    surface = sweep_arm_length(setup, freqs, args.arm, lengths)
    relative = surface / matched_arm_power(setup)
    levels = apply_display_model(relative, config.display)
    write_sweep_csv(lengths, freqs, levels, args.out)
    return EXIT_OK


_DEFAULT_TAU_BOUNDS = (0.0, 50e-9)


def _default_bounds(name: str, guess: float) -> tuple[float, float]:
    if name in ("L", "L_A", "L_3", "L_4"):
        return (0.5 * guess, 1.5 * guess) if guess > 0 else (0.0, 10.0)
    if name == "n":
        return (1.0, 3.0)
    if name == "a":
        return (guess - 3.0, guess + 3.0)
    if name == "sn":
        return (0.0, max(10.0, 10.0 * guess))
    if name.startswith("tau_"):
        return _DEFAULT_TAU_BOUNDS
    raise ConfigError(f"no default bounds for parameter {name!r}")


def _problem_from_config(config: TopologyConfig, observed, free_names) -> FitProblem:
    if config.mode == SINGLE_CABLE_MODE:
        kind = SINGLE_CABLE
        guesses = {
            "L": config.cable_length_m,
            "n": config.n,
            "a": config.display.a,
            "sn": config.display.sn,
        }
        extra = {"termination": config.cable_termination}
    else:
        kind = SPLITTER_LIMIT
        model = config.splitter_model()
        guesses = {
            "L_A": config.amp_cable_m,
            "L_3": config.arm3_length_m,
            "L_4": config.arm4_length_m,
            "n": config.n,
            "a": config.display.a,
            "sn": config.display.sn,
            "tau_23": model.tau_at(2, 3),
            "tau_24": model.tau_at(2, 4),
            "tau_13": model.tau_at(1, 3),
            "tau_14": model.tau_at(1, 4),
        }
        try:
            limits = LimitIndex.from_terminations(
                config.arm3_termination, config.arm4_termination
            )
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
        extra = {"limits": limits, "splitter": model}
    free = tuple(canonical_name(name, kind) for name in free_names)
    unknown = [p for p in free if p not in guesses]
    if unknown:
        raise ConfigError(f"unknown fit parameters {unknown} for mode {config.mode!r}")
    return FitProblem(
        observed=observed,
        model_kind=kind,
        free_parameters=free,
        bounds={p: _default_bounds(p, guesses[p]) for p in free},
        initial_guess={p: guesses[p] for p in free},
        fixed={p: v for p, v in guesses.items() if p not in free},
        z0=config.z0_ohm,
        **extra,
    )


def cmd_fit(args) -> int:
    config = load_config(args.config)
    observed = read_spectrum_csv(args.observed)
    free_names = [name.strip() for name in args.free.split(",") if name.strip()]
    if not free_names:
        raise ConfigError("--free must list at least one parameter")
    problem = _problem_from_config(config, observed, free_names)
    fit_cfg = FitConfig(max_iterations=args.max_iterations, multistart=args.multistart)
    result = fit(problem, fit_cfg)
    text, report = fit_report(result, problem)
    _write_json_atomic(Path(args.out), report)
    print(text)
    return EXIT_OK if result.converged else EXIT_NOT_CONVERGED


def _write_json_atomic(path: Path, payload: dict) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as stream:
            json.dump(payload, stream, indent=2, sort_keys=True)
            stream.write("\n")
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def cmd_oracle_check(args) -> int:
    from .cable import bounce_series_oracle, total_voltage_closed_form

    config = load_config(args.config)
    if config.mode != SINGLE_CABLE_MODE:
        raise ConfigError("oracle-check requires a single-cable config")
    setup = config.cable_setup()
    product = abs(setup.gamma_load * setup.gamma_source)
    if product >= 1.0 - 1e-12:
        raise ConfigError(
            f"|Gamma_l * Gamma_b| = {product:.6g}: bounce series does not converge"
        )
    rng = np.random.default_rng(args.seed)
    freqs = rng.uniform(config.grid.start_hz, config.grid.stop_hz, args.samples)
    worst = 0.0
    for f in freqs:
        closed = total_voltage_closed_form(setup, float(f))
        series = bounce_series_oracle(setup, float(f), args.terms)
        worst = max(worst, abs(series - closed) / abs(closed))
    print(f"max relative deviation over {args.samples} samples "
          f"({args.terms} terms): {worst:.3e}")
    if args.out:
        _write_json_atomic(
            Path(args.out),
            {
                "max_relative_deviation": worst,
                "terms": args.terms,
                "samples": args.samples,
                "gamma_product": product,
                "tolerance": ORACLE_TOLERANCE,
            },
        )
    return EXIT_OK if worst < ORACLE_TOLERANCE else EXIT_ORACLE_DEVIATION


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="coaxnoise",
        description="Thermal-noise standing-wave simulator and fitter "
        "for coaxial lines and 4-port splitter networks.",
    )
    parser.add_argument("--seed", type=int, default=0, help="RNG seed for sampling")
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="write a model spectrum CSV")
    sim.add_argument("--config", required=True)
    sim.add_argument("--out", required=True)
    sim.add_argument(
        "--compare",
        choices=["matched"],
        help="also write the linear power ratio against the matched reference",
    )
    sim.set_defaults(handler=cmd_simulate)

    sweep = sub.add_parser("sweep", help="write a (length, frequency) power surface")
    sweep.add_argument("--config", required=True)
    sweep.add_argument("--out", required=True)
    sweep.add_argument("--arm", type=int, choices=[3, 4], required=True)
    sweep.add_argument("--from", dest="length_from", type=float, required=True,
                       metavar="M", help="first arm length in meters")
    sweep.add_argument("--to", dest="length_to", type=float, required=True,
                       metavar="M", help="last arm length in meters")
    sweep.add_argument("--steps", type=int, required=True)
    sweep.set_defaults(handler=cmd_sweep)

    fit_cmd = sub.add_parser("fit", help="fit model parameters to an observed CSV")
    fit_cmd.add_argument("--config", required=True)
    fit_cmd.add_argument("--out", required=True)
    fit_cmd.add_argument("--observed", required=True)
    fit_cmd.add_argument("--free", required=True,
                         help="comma-separated free parameters, e.g. L,a,sn")
    fit_cmd.add_argument("--max-iterations", type=int, default=4000)
    fit_cmd.add_argument("--multistart", type=int, default=1)
    fit_cmd.set_defaults(handler=cmd_fit)

    oracle = sub.add_parser(
        "oracle-check",
        help="compare the bounce-series oracle against the closed form",
    )
    oracle.add_argument("--config", required=True)
    oracle.add_argument("--out")
    oracle.add_argument("--terms", type=int, default=200)
    oracle.add_argument("--samples", type=int, default=100)
    oracle.set_defaults(handler=cmd_oracle_check)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except InsufficientDataError as exc:
        print(f"insufficient data: {exc}", file=sys.stderr)
        return EXIT_INSUFFICIENT_DATA
    except (SpectrumFormatError, OSError) as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO
    except CoaxNoiseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
