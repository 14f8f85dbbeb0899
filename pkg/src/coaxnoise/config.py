"""Topology configuration: a small YAML schema mirroring the bench setup.

Two modes: "single-cable" (one line into the pre-amplifier) and "splitter"
(two terminated arms mixed into the detector cable). Unknown keys are
rejected by name; termination values are "short" | "open" | "matched" or a
number of ohms.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import yaml

from .cable import CableSetup
from .display import DisplayModel
from .errors import ConfigParseError, ConfigValidationError
from .splitter import DELAY_PROFILES, SplitterModel, SplitterSetup, delay_matrix
from .waves import MATCHED, OPEN, SHORT, CableSegment, Termination, finite

SINGLE_CABLE_MODE = "single-cable"
SPLITTER_MODE = "splitter"

_S_KEYS = ("s13", "s14", "s23", "s24", "s31", "s41", "s32", "s42")
_TAU_KEYS = ("tau_31", "tau_41", "tau_32", "tau_42", "tau_12", "tau_34")


@dataclass(frozen=True)
class GridSpec:
    start_hz: float = 1e6
    stop_hz: float = 100e6
    points: int = 2000

    def __post_init__(self):
        if self.points < 2:
            raise ConfigValidationError("grid points must be >= 2")
        if not self.start_hz >= 0:
            raise ConfigValidationError("grid start_hz must be >= 0")
        if not self.stop_hz > self.start_hz:
            raise ConfigValidationError("grid stop_hz must exceed start_hz")

    def frequencies(self) -> np.ndarray:
        return np.linspace(self.start_hz, self.stop_hz, self.points)


@dataclass(frozen=True)
class TopologyConfig:
    mode: str
    # single-cable section
    cable_length_m: float = 4.0
    cable_termination: Termination = SHORT
    cable_source: Termination = MATCHED
    z0_ohm: float = 50.0
    n: float = 1.60
    # splitter section
    profile: str = "H2979-fit"
    arm3_length_m: float = 1.0
    arm3_termination: Termination = OPEN
    arm4_length_m: float = 4.0
    arm4_termination: Termination = SHORT
    amp_cable_m: float = 2.0
    j1_termination: Termination = MATCHED
    j1_cable_m: float = 0.0
    temperature_k: float = 290.0
    s_overrides: dict = field(default_factory=dict)
    tau_overrides: dict = field(default_factory=dict)
    # shared
    display: DisplayModel = field(default_factory=DisplayModel)
    grid: GridSpec = field(default_factory=GridSpec)

    def frequencies(self) -> np.ndarray:
        return self.grid.frequencies()

    def cable_setup(self) -> CableSetup:
        return CableSetup(
            cable=CableSegment(length=self.cable_length_m, z0=self.z0_ohm, n=self.n),
            load=self.cable_termination,
            source_impedance=self.cable_source,
            source_power=1.0,
        )

    def splitter_model(self) -> SplitterModel:
        model = SplitterModel(tau=delay_matrix(self.profile))
        s = model.s.copy()
        for key, value in self.s_overrides.items():
            i, j = int(key[1]), int(key[2])
            s[i - 1, j - 1] = value
        tau = model.tau.copy()
        for key, value in self.tau_overrides.items():
            i, j = int(key[4]), int(key[5])
            tau[i - 1, j - 1] = tau[j - 1, i - 1] = value * 1e-9
        return SplitterModel(s=s, tau=tau)

    def splitter_setup(self) -> SplitterSetup:
        return SplitterSetup(
            splitter=self.splitter_model(),
            l3=self.arm3_length_m,
            z3=self.arm3_termination,
            l4=self.arm4_length_m,
            z4=self.arm4_termination,
            l_amp=self.amp_cable_m,
            z0=self.z0_ohm,
            n=self.n,
            j1_termination=self.j1_termination,
            l1=self.j1_cable_m,
            temperature=self.temperature_k,
        )


def parse_termination(value) -> Termination:
    if isinstance(value, str):
        name = value.strip().lower()
        if name == "short":
            return SHORT
        if name == "open":
            return OPEN
        if name == "matched":
            return MATCHED
        try:
            return finite(float(name))
        except ValueError:
            raise ConfigValidationError(
                f"termination must be short|open|matched or ohms, got {value!r}"
            ) from None
    if isinstance(value, (int, float)):
        if value < 0:
            raise ConfigValidationError("termination ohms must be >= 0")
        return finite(float(value))
    raise ConfigValidationError(f"cannot interpret termination {value!r}")


def _require_mapping(name: str, value) -> dict:
    if not isinstance(value, dict):
        raise ConfigParseError(f"section {name!r} must be a mapping")
    return value


def _known_keys(name: str, section: dict, allowed) -> None:
    for key in section:
        if key not in allowed:
            raise ConfigParseError(f"unknown key {name}{key!r}")


def _number(name: str, value, minimum=None, strict_min=False) -> float:
    if isinstance(value, str):
        # YAML 1.1 reads "1e6" as a string; accept it as a number anyway
        try:
            value = float(value)
        except ValueError:
            pass
    if not isinstance(value, (int, float)) or isinstance(value, bool):
        raise ConfigValidationError(f"{name} must be a number, got {value!r}")
    value = float(value)
    if minimum is not None:
        if strict_min and not value > minimum:
            raise ConfigValidationError(f"{name} must be > {minimum}")
        if not strict_min and not value >= minimum:
            raise ConfigValidationError(f"{name} must be >= {minimum} (length >= 0)"
                                        if "length" in name or name.endswith("_m")
                                        else f"{name} must be >= {minimum}")
    return value


def parse_config(text: str) -> TopologyConfig:
    """Parse and validate a YAML config document."""
    try:
        raw = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigParseError(f"invalid YAML: {exc}") from None
    if raw is None:
        raise ConfigParseError("empty config document")
    raw = _require_mapping("top level", raw)
    _known_keys("", raw, ("mode", "cable", "splitter", "display", "grid"))
    if "mode" not in raw:
        raise ConfigValidationError("config requires a mode")
    mode = raw["mode"]
    if mode not in (SINGLE_CABLE_MODE, SPLITTER_MODE):
        raise ConfigValidationError(
            f"mode must be {SINGLE_CABLE_MODE!r} or {SPLITTER_MODE!r}, got {mode!r}"
        )

    kwargs: dict = {"mode": mode}

    display = _require_mapping("display", raw.get("display", {}))
    _known_keys("display.", display, ("a", "sn"))
    kwargs["display"] = DisplayModel(
        a=_number("display.a", display.get("a", 0.0)),
        sn=_number("display.sn", display.get("sn", 0.0), minimum=0.0),
    )

    grid = _require_mapping("grid", raw.get("grid", {}))
    _known_keys("grid.", grid, ("start_hz", "stop_hz", "points"))
    points = grid.get("points", 2000)
    if not isinstance(points, int) or isinstance(points, bool):
        raise ConfigValidationError("grid.points must be an integer")
    kwargs["grid"] = GridSpec(
        start_hz=_number("grid.start_hz", grid.get("start_hz", 1e6), minimum=0.0),
        stop_hz=_number("grid.stop_hz", grid.get("stop_hz", 100e6), minimum=0.0),
        points=points,
    )

    if mode == SINGLE_CABLE_MODE:
        if "splitter" in raw:
            raise ConfigParseError("unknown key 'splitter' in single-cable mode")
        cable = _require_mapping("cable", raw.get("cable", {}))
        _known_keys("cable.", cable, ("length_m", "z0_ohm", "n", "termination", "source"))
        kwargs["cable_length_m"] = _number(
            "cable.length_m", cable.get("length_m", 4.0), minimum=0.0
        )
        kwargs["z0_ohm"] = _number("cable.z0_ohm", cable.get("z0_ohm", 50.0), 0.0, True)
        kwargs["n"] = _number("cable.n", cable.get("n", 1.60), minimum=1.0)
        kwargs["cable_termination"] = parse_termination(cable.get("termination", "short"))
        kwargs["cable_source"] = parse_termination(cable.get("source", "matched"))
    else:
        if "cable" in raw:
            raise ConfigParseError("unknown key 'cable' in splitter mode")
        sp = _require_mapping("splitter", raw.get("splitter", {}))
        _known_keys(
            "splitter.",
            sp,
            (
                "profile", "arm3", "arm4", "amp_cable_m", "j1_termination",
                "j1_cable_m", "temperature_k", "z0_ohm", "n", "s", "delays_ns",
            ),
        )
        profile = sp.get("profile", "H2979-fit")
        if profile not in DELAY_PROFILES:
            raise ConfigValidationError(
                f"unknown splitter profile {profile!r}; "
                f"known: {sorted(DELAY_PROFILES)}"
            )
        kwargs["profile"] = profile
        for arm, prefix in ((3, "arm3"), (4, "arm4")):
            section = _require_mapping(prefix, sp.get(prefix, {}))
            _known_keys(f"splitter.{prefix}.", section, ("length_m", "termination"))
            default_len = 1.0 if arm == 3 else 4.0
            default_term = "open" if arm == 3 else "short"
            kwargs[f"{prefix}_length_m"] = _number(
                f"splitter.{prefix}.length_m",
                section.get("length_m", default_len),
                minimum=0.0,
            )
            kwargs[f"{prefix}_termination"] = parse_termination(
                section.get("termination", default_term)
            )
        kwargs["amp_cable_m"] = _number(
            "splitter.amp_cable_m", sp.get("amp_cable_m", 2.0), minimum=0.0
        )
        kwargs["j1_termination"] = parse_termination(sp.get("j1_termination", "matched"))
        kwargs["j1_cable_m"] = _number(
            "splitter.j1_cable_m", sp.get("j1_cable_m", 0.0), minimum=0.0
        )
        kwargs["temperature_k"] = _number(
            "splitter.temperature_k", sp.get("temperature_k", 290.0), minimum=0.0
        )
        kwargs["z0_ohm"] = _number("splitter.z0_ohm", sp.get("z0_ohm", 50.0), 0.0, True)
        kwargs["n"] = _number("splitter.n", sp.get("n", 1.60), minimum=1.0)
        s_over = _require_mapping("splitter.s", sp.get("s", {}))
        _known_keys("splitter.s.", s_over, _S_KEYS)
        kwargs["s_overrides"] = {
            k: _number(f"splitter.s.{k}", v) for k, v in s_over.items()
        }
        tau_over = _require_mapping("splitter.delays_ns", sp.get("delays_ns", {}))
        _known_keys("splitter.delays_ns.", tau_over, _TAU_KEYS)
        kwargs["tau_overrides"] = {
            k: _number(f"splitter.delays_ns.{k}", v, minimum=0.0)
            for k, v in tau_over.items()
        }

    return TopologyConfig(**kwargs)


def load_config(path) -> TopologyConfig:
    with open(path, "r", encoding="utf-8") as stream:
        return parse_config(stream.read())
