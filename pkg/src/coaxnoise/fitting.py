"""Spectrum fitting by bounded derivative-free least squares.

The objective is the display-domain residual (observed minus model level)
summed over included grid points. Minimization uses a Nelder-Mead simplex
run in a reflection-folded coordinate space: each free parameter is mapped
through a triangle wave that folds the real line onto its bound interval,
so the simplex wanders freely while every evaluated point stays in bounds.
Parameters are scaled to order one before folding, which is what makes a
mix of meters, nanoseconds, and display decades workable for a simplex.

The standing-wave spectrum depends on cable length and refractive index
only through their product nL, so default problems fix n and fit L; the
report flags the degeneracy whenever both are left free.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize

from .cable import CableSetup, matched_source_power
from .display import DisplayModel, NoiseSpectrum, apply_display_model
from .errors import InsufficientDataError
from .splitter import BOLTZMANN, LimitIndex, SplitterModel, SplitterSetup, limit_noise_power
from .waves import SHORT, CableSegment, Termination

SINGLE_CABLE = "single-cable"
SPLITTER_LIMIT = "splitter-limit"

# Canonical parameter names per model; "L" is accepted as an alias for
# "L_A" on the single-cable model.
SINGLE_CABLE_PARAMS = ("L", "n", "a", "sn")
SPLITTER_LIMIT_PARAMS = (
    "L_A", "L_3", "L_4", "n", "a", "sn", "tau_23", "tau_24", "tau_13", "tau_14"
)
_SHAPE_PARAMS = frozenset(
    ("L", "L_A", "L_3", "L_4", "n", "tau_23", "tau_24", "tau_13", "tau_14")
)
_FLAT_DATA_PTP = 1e-10


def canonical_name(name: str, model_kind: str) -> str:
    if model_kind == SINGLE_CABLE and name == "L_A":
        return "L"
    return name


@dataclass(frozen=True)
class FitProblem:
    """Observed spectrum plus the parameter space to search.

    fixed supplies values for every model parameter not listed free;
    bounds and initial_guess cover exactly the free ones.
    """

    observed: NoiseSpectrum
    model_kind: str
    free_parameters: tuple[str, ...]
    bounds: dict[str, tuple[float, float]]
    initial_guess: dict[str, float]
    fixed: dict[str, float] = field(default_factory=dict)
    termination: Termination = SHORT
    limits: LimitIndex = LimitIndex(1, 0)
    splitter: SplitterModel = field(default_factory=SplitterModel)
    z0: float = 50.0

    def __post_init__(self):
        if self.model_kind not in (SINGLE_CABLE, SPLITTER_LIMIT):
            raise ValueError(f"unknown model kind {self.model_kind!r}")
        if self.observed.display_level is None:
            raise ValueError("observed spectrum needs display levels")
        names = SINGLE_CABLE_PARAMS if self.model_kind == SINGLE_CABLE else SPLITTER_LIMIT_PARAMS
        free = tuple(canonical_name(p, self.model_kind) for p in self.free_parameters)
        object.__setattr__(self, "free_parameters", free)
        for attr in ("bounds", "initial_guess", "fixed"):
            mapping = getattr(self, attr)
            object.__setattr__(
                self,
                attr,
                {canonical_name(k, self.model_kind): v for k, v in mapping.items()},
            )
        if not free:
            raise ValueError("need at least one free parameter")
        for p in free:
            if p not in names:
                raise ValueError(f"unknown parameter {p!r} for {self.model_kind}")
            if p not in self.bounds:
                raise ValueError(f"missing bounds for {p!r}")
            if p not in self.initial_guess:
                raise ValueError(f"missing initial guess for {p!r}")
            lo, hi = self.bounds[p]
            if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
                raise ValueError(f"bounds for {p!r} must be finite with lo < hi")
            if not lo <= self.initial_guess[p] <= hi:
                raise ValueError(f"initial guess for {p!r} outside bounds")
        if "sn" in free and self.bounds["sn"][0] < 0:
            raise ValueError("sn lower bound must be >= 0")
        if "n" in free and self.bounds["n"][0] < 1:
            raise ValueError("n lower bound must be >= 1")

    def parameter_values(self, candidate: dict[str, float]) -> dict[str, float]:
        names = SINGLE_CABLE_PARAMS if self.model_kind == SINGLE_CABLE else SPLITTER_LIMIT_PARAMS
        values = dict(self.fixed)
        values.update(candidate)
        missing = [p for p in names if p not in values]
        if missing:
            raise ValueError(f"no value for parameters {missing}")
        return values


@dataclass(frozen=True)
class FitResult:
    values: dict[str, float]
    rss: float
    iterations: int
    converged: bool
    excluded_points: int
    function_evaluations: int = 0


@dataclass(frozen=True)
class FitConfig:
    xtol_rel: float = 1e-6      # simplex size, relative per parameter
    ftol: float = 1e-12         # rss improvement floor
    max_iterations: int = 4000  # per start
    multistart: int = 1         # deterministic extra starts within bounds


def model_display_levels(problem: FitProblem, values: dict[str, float], frequencies):
    """Forward model: display levels on the grid for a full parameter set."""
    disp = DisplayModel(a=values["a"], sn=values["sn"])
    if problem.model_kind == SINGLE_CABLE:
        setup = CableSetup(
            cable=CableSegment(length=values["L"], z0=problem.z0, n=values["n"]),
            load=problem.termination,
            source_power=1.0,
        )
        relative = 4.0 * matched_source_power(setup, frequencies)
    else:
        tau = np.zeros((4, 4))
        for name, (i, j) in (
            ("tau_23", (2, 3)), ("tau_24", (2, 4)),
            ("tau_13", (1, 3)), ("tau_14", (1, 4)),
        ):
            tau[i - 1, j - 1] = tau[j - 1, i - 1] = values[name]
        setup = SplitterSetup(
            splitter=SplitterModel(s=problem.splitter.s, tau=tau),
            l3=values["L_3"],
            l4=values["L_4"],
            l_amp=values["L_A"],
            z0=problem.z0,
            n=values["n"],
            temperature=290.0,
        )
        flat = 2.0 * BOLTZMANN * setup.temperature * setup.z0
        relative = limit_noise_power(setup, frequencies, problem.limits) / flat
    return apply_display_model(relative, disp)


def residuals(problem: FitProblem, candidate: dict[str, float]) -> np.ndarray:
    """Observed minus model display level over the included grid points."""
    values = problem.parameter_values(candidate)
    inc = problem.observed.included
    freqs = problem.observed.frequencies[inc]
    model = model_display_levels(problem, values, freqs)
    return problem.observed.display_level[inc] - model


def _fold(u: np.ndarray, lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
    """Triangle-wave reflection of unbounded coordinates into [lo, hi]."""
    width = hi - lo
    t = np.mod(u - lo, 2.0 * width)
    return lo + np.where(t <= width, t, 2.0 * width - t)


def _halton(index: int, base: int) -> float:
    out, f = 0.0, 1.0
    while index > 0:
        f /= base
        out += f * (index % base)
        index //= base
    return out


_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29)


def _start_points(problem: FitProblem, count: int) -> list[np.ndarray]:
    """Initial guess plus a deterministic low-discrepancy lattice in bounds."""
    free = problem.free_parameters
    starts = [np.array([problem.initial_guess[p] for p in free])]
    for i in range(1, count):
        point = np.empty(len(free))
        for j, p in enumerate(free):
            lo, hi = problem.bounds[p]
            point[j] = lo + (hi - lo) * _halton(i, _PRIMES[j % len(_PRIMES)])
        starts.append(point)
    return starts


def fit(problem: FitProblem, config: FitConfig | None = None) -> FitResult:
    """Minimize the residual sum of squares over the free parameters.

    Raises InsufficientDataError when fewer than twice as many included
    points as free parameters remain, or when the observed trace is flat
    and a spectrum-shape parameter is free (flat data carry no length,
    index, or delay information).
    """
    config = config or FitConfig()
    free = problem.free_parameters
    inc = problem.observed.included
    n_included = int(np.count_nonzero(inc))
    excluded_points = int(problem.observed.excluded.sum())
    if n_included < 2 * len(free):
        raise InsufficientDataError(
            f"{n_included} included points cannot constrain {len(free)} parameters"
        )
    observed = problem.observed.display_level[inc]
    if np.ptp(observed) < _FLAT_DATA_PTP and _SHAPE_PARAMS & set(free):
        flat_free = sorted(_SHAPE_PARAMS & set(free))
        raise InsufficientDataError(
            f"observed spectrum is flat; {flat_free} are unidentifiable"
        )

    lo = np.array([problem.bounds[p][0] for p in free])
    hi = np.array([problem.bounds[p][1] for p in free])
    scale = np.maximum(np.abs([problem.initial_guess[p] for p in free]),
                       1e-3 * (hi - lo))

    def objective(u_scaled: np.ndarray) -> float:
        x = _fold(u_scaled * scale, lo, hi)
        res = residuals(problem, dict(zip(free, x)))
        return float(res @ res)

    best = None
    iterations = 0
    evaluations = 0
    converged = False
    for start in _start_points(problem, max(1, config.multistart)):
        out = minimize(
            objective,
            start / scale,
            method="Nelder-Mead",
            options={
                "xatol": config.xtol_rel,
                "fatol": config.ftol,
                "maxiter": config.max_iterations,
                "adaptive": len(free) > 2,
            },
        )
        iterations += int(out.nit)
        evaluations += int(out.nfev)
        if best is None or out.fun < best.fun:
            best = out
            converged = bool(out.success)

    values = dict(zip(free, _fold(best.x * scale, lo, hi)))
    return FitResult(
        values={k: float(v) for k, v in values.items()},
        rss=float(best.fun),
        iterations=iterations,
        converged=converged,
        excluded_points=excluded_points,
        function_evaluations=evaluations,
    )


def fit_report(result: FitResult, problem: FitProblem) -> tuple[str, dict]:
    """Human-readable summary plus a machine-readable dict of the same facts."""
    res = residuals(problem, result.values)
    bound_active = {}
    for p in problem.free_parameters:
        lo, hi = problem.bounds[p]
        tol = 1e-9 * (hi - lo)
        bound_active[p] = abs(result.values[p] - lo) < tol or abs(result.values[p] - hi) < tol
    degenerate = "n" in problem.free_parameters and bool(
        {"L", "L_A", "L_3", "L_4"} & set(problem.free_parameters)
    )
    report = {
        "model_kind": problem.model_kind,
        "log_base": 10,
        "converged": result.converged,
        "rss": result.rss,
        "iterations": result.iterations,
        "function_evaluations": result.function_evaluations,
        "excluded_points": result.excluded_points,
        "values": dict(result.values),
        "bound_active": bound_active,
        "residual_rms": float(np.sqrt(np.mean(res**2))),
        "residual_max_abs": float(np.max(np.abs(res))),
        "nl_degeneracy": degenerate,
    }
    lines = [
        f"model: {problem.model_kind}",
        f"converged: {result.converged} (rss = {result.rss:.6e}, "
        f"{result.iterations} iterations)",
    ]
    for p in problem.free_parameters:
        flag = "  [bound-active]" if bound_active[p] else ""
        lines.append(f"  {p} = {result.values[p]:.10g}{flag}")
    if result.excluded_points:
        lines.append(f"excluded points: {result.excluded_points}")
    if degenerate:
        lines.append("warning: n and a length are both free; only their product "
                     "n*L is identifiable")
    return "\n".join(lines), report
