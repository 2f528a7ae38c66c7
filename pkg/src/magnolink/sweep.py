"""Parameter grids over coupling-specified scenarios, figure presets, and
threshold / maximum location on the resulting data."""

import dataclasses
import datetime
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from magnolink.calibration import laser_frequency
from magnolink.constants import TWO_PI
from magnolink.entanglement import METRICS, evaluate_point
from magnolink.errors import ConfigError, MagnolinkError, ThresholdError
from magnolink.model import SystemParams
from magnolink.steadystate import operating_point_from_couplings

THREADS_ENV = "MAGNOLINK_THREADS"
GRID_2D = 81
GRID_1D = 201
THRESHOLD_RTOL = 1e-3


def baseline_params(**overrides):
    """Experimentally feasible operating parameters used for every figure."""
    values = dict(
        omega_a=TWO_PI * 10e9,
        omega_m=TWO_PI * 10e9,
        omega_c=laser_frequency(1550e-9),
        omega_b=TWO_PI * 40e6,
        kappa_a=TWO_PI * 1.5e6,
        kappa_m=TWO_PI * 1.5e6,
        kappa_c=TWO_PI * 2e6,
        gamma_b=TWO_PI * 100.0,
        g_a=TWO_PI * 4e6,
        g_m=TWO_PI * 20.0,
        g_c=TWO_PI * 2e3,
        temperature=0.01,
    )
    values.update(overrides)
    return SystemParams(**values)


@dataclass(frozen=True)
class Scenario:
    """A coupling-specified point: effective couplings and detunings given
    directly, with ``Delta_a = Delta_m_eff + delta_am``."""

    params: SystemParams
    G_m: float
    G_c: float
    delta_m_eff: float
    delta_c_eff: float
    delta_am: float = 0.0

    @property
    def delta_a(self):
        return self.delta_m_eff + self.delta_am

    def operating_point(self):
        return operating_point_from_couplings(
            self.G_m, self.G_c, self.delta_m_eff, self.delta_c_eff, self.delta_a, self.params
        )

    def evaluate(self):
        return evaluate_point(self.operating_point())

    def with_value(self, name, value):
        """Copy with sweepable parameter ``name`` set to ``value`` (SI units)."""
        return _parameter(name).setter(self, value)


def baseline_scenario(**overrides):
    """Optimal detunings ``Delta_c = -Delta_m = omega_b``, ``Delta_a = Delta_m``.

    ``overrides`` are sweepable parameter names with SI values.
    """
    params = baseline_params()
    scenario = Scenario(
        params=params,
        G_m=TWO_PI * 2e6,
        G_c=TWO_PI * 8e6,
        delta_m_eff=-params.omega_b,
        delta_c_eff=params.omega_b,
    )
    for name, value in overrides.items():
        scenario = scenario.with_value(name, value)
    return scenario


def _set_system(attr):
    def setter(scenario, value):
        return dataclasses.replace(scenario, params=dataclasses.replace(scenario.params, **{attr: value}))

    return setter


def _set_scenario(attr):
    def setter(scenario, value):
        return dataclasses.replace(scenario, **{attr: value})

    return setter


def _set_kappa_ratio(scenario, ratio):
    return _set_system("kappa_a")(scenario, ratio * scenario.params.kappa_m)


@dataclass(frozen=True)
class _Parameter:
    kind: str
    setter: object
    default_unit: str


_PARAMETERS = {
    "T": _Parameter("temperature", _set_system("temperature"), "K"),
    "g_a": _Parameter("rate", _set_system("g_a"), "MHz"),
    "g_m": _Parameter("rate", _set_system("g_m"), "Hz"),
    "g_c": _Parameter("rate", _set_system("g_c"), "kHz"),
    "kappa_a": _Parameter("rate", _set_system("kappa_a"), "MHz"),
    "kappa_m": _Parameter("rate", _set_system("kappa_m"), "MHz"),
    "kappa_c": _Parameter("rate", _set_system("kappa_c"), "MHz"),
    "gamma_b": _Parameter("rate", _set_system("gamma_b"), "Hz"),
    "omega_b": _Parameter("rate", _set_system("omega_b"), "MHz"),
    "G_m": _Parameter("rate", _set_scenario("G_m"), "MHz"),
    "G_c": _Parameter("rate", _set_scenario("G_c"), "MHz"),
    "delta_m": _Parameter("rate", _set_scenario("delta_m_eff"), "omega_b"),
    "delta_c": _Parameter("rate", _set_scenario("delta_c_eff"), "omega_b"),
    "delta_am": _Parameter("rate", _set_scenario("delta_am"), "MHz"),
    "kappa_a_over_kappa_m": _Parameter("ratio", _set_kappa_ratio, "1"),
}

_UNITS = {
    "rate": {"rad/s": 1.0, "Hz": TWO_PI, "kHz": TWO_PI * 1e3, "MHz": TWO_PI * 1e6, "GHz": TWO_PI * 1e9, "omega_b": None},
    "temperature": {"K": 1.0, "mK": 1e-3},
    "ratio": {"1": 1.0},
}

PARAMETER_NAMES = tuple(_PARAMETERS)


def _parameter(name):
    try:
        return _PARAMETERS[name]
    except KeyError:
        raise ConfigError(f"unknown sweep parameter {name!r}; valid: {', '.join(PARAMETER_NAMES)}") from None


def default_unit(name):
    return _parameter(name).default_unit


def unit_factor(name, unit, base):
    """Multiplier taking a value of ``name`` in ``unit`` to SI (rad/s, K)."""
    units = _UNITS[_parameter(name).kind]
    if unit not in units:
        raise ConfigError(f"unit {unit!r} not valid for {name}; valid: {', '.join(units)}")
    factor = units[unit]
    return base.params.omega_b if factor is None else factor


@dataclass(frozen=True)
class Axis:
    param: str
    start: float
    stop: float
    count: int
    scale: str = "linear"
    unit: str = None

    def __post_init__(self):
        spec = _parameter(self.param)
        if self.unit is None:
            object.__setattr__(self, "unit", spec.default_unit)
        if self.unit not in _UNITS[spec.kind]:
            raise ConfigError(f"unit {self.unit!r} not valid for {self.param}")
        if int(self.count) != self.count or self.count < 2:
            raise ConfigError(f"axis {self.param}: count must be an integer >= 2, got {self.count!r}")
        if not self.start < self.stop:
            raise ConfigError(f"axis {self.param}: need min < max, got [{self.start}, {self.stop}]")
        if self.scale not in ("linear", "log"):
            raise ConfigError(f"axis {self.param}: scale must be 'linear' or 'log', got {self.scale!r}")
        if self.scale == "log" and self.start <= 0:
            raise ConfigError(f"axis {self.param}: log scale needs min > 0")

    @property
    def column(self):
        if self.unit == "omega_b":
            return f"{self.param}_over_omega_b"
        if self.unit == "1":
            return self.param
        return f"{self.param}_{self.unit.replace('/', '_per_')}"

    def values(self):
        """Grid in display units; points within 1e-12 of the span of 0 snap to 0."""
        if self.scale == "log":
            return np.geomspace(self.start, self.stop, int(self.count))
        v = np.linspace(self.start, self.stop, int(self.count))
        v[np.abs(v) < 1e-12 * (self.stop - self.start)] = 0.0
        return v

    def apply(self, scenario, value, base=None):
        factor = unit_factor(self.param, self.unit, base if base is not None else scenario)
        return scenario.with_value(self.param, value * factor)


@dataclass(frozen=True)
class SweepSpec:
    axes: tuple
    base: Scenario
    outputs: tuple = METRICS
    name: str = None

    def __post_init__(self):
        object.__setattr__(self, "axes", tuple(self.axes))
        object.__setattr__(self, "outputs", tuple(self.outputs))
        if not 1 <= len(self.axes) <= 2:
            raise ConfigError(f"a sweep needs 1 or 2 axes, got {len(self.axes)}")
        if len({a.param for a in self.axes}) != len(self.axes):
            raise ConfigError("sweep axes must use distinct parameters")
        for name in self.outputs:
            if name not in METRICS:
                raise ConfigError(f"unknown output metric {name!r}; valid: {', '.join(METRICS)}")

    @property
    def shape(self):
        return tuple(int(a.count) for a in self.axes)

    def scenarios(self):
        """Row-major ``(coords, scenario)`` pairs; unit scaling uses the base."""
        grids = [a.values() for a in self.axes]
        for index in np.ndindex(*self.shape):
            coords = tuple(float(g[i]) for g, i in zip(grids, index))
            scenario = self.base
            for axis, value in zip(self.axes, coords):
                scenario = axis.apply(scenario, value, base=self.base)
            yield coords, scenario

    def with_counts(self, *counts):
        axes = tuple(dataclasses.replace(a, count=c) for a, c in zip(self.axes, counts))
        return dataclasses.replace(self, axes=axes)

    def fix(self, param, value):
        """1-axis cut: drop the ``param`` axis and pin it at ``value`` (axis units)."""
        keep = [a for a in self.axes if a.param != param]
        if len(keep) == len(self.axes):
            raise ConfigError(f"{param!r} is not an axis of this sweep")
        if not keep:
            raise ConfigError("cannot fix the only axis of a sweep")
        fixed = next(a for a in self.axes if a.param == param)
        return dataclasses.replace(self, axes=tuple(keep), base=fixed.apply(self.base, value))


@dataclass(frozen=True)
class SweepRecord:
    coords: tuple
    result: object


@dataclass(frozen=True)
class SweepResult:
    spec: SweepSpec
    records: tuple
    meta: dict = field(default_factory=dict)

    def metric(self, name):
        """Metric values reshaped onto the grid."""
        return np.array([r.result.metric(name) for r in self.records], dtype=float).reshape(self.spec.shape)

    def axis_values(self, i=0):
        return self.spec.axes[i].values()

    def argmax(self, name):
        """Axis coordinates of the largest value of ``name`` (first on ties)."""
        values = self.metric(name)
        index = np.unravel_index(int(np.nanargmax(values)), values.shape)
        return tuple(float(self.axis_values(i)[j]) for i, j in enumerate(index))


def _worker_count(workers):
    if workers is not None:
        return max(1, int(workers))
    raw = os.environ.get(THREADS_ENV)
    if not raw:
        return 1
    try:
        return max(1, int(raw))
    except ValueError:
        raise ConfigError(f"{THREADS_ENV} must be an integer, got {raw!r}") from None


def _evaluate(item):
    coords, scenario = item
    try:
        return SweepRecord(coords=coords, result=scenario.evaluate())
    except MagnolinkError as exc:
        exc.point = (coords, scenario)
        raise


def run_sweep(spec, workers=None):
    """Evaluate every grid point; records come back in row-major order."""
    # Building every scenario up front surfaces bad parameters before any solve.
    items = list(spec.scenarios())
    n_workers = _worker_count(workers)
    if n_workers == 1:
        records = [_evaluate(item) for item in items]
    else:
        with ThreadPoolExecutor(max_workers=n_workers) as pool:
            records = list(pool.map(_evaluate, items))
    return SweepResult(
        spec=spec,
        records=tuple(records),
        meta={
            "name": spec.name,
            "grid_shape": list(spec.shape),
            "unstable_points": sum(not r.result.stable for r in records),
            "timestamp": datetime.datetime.now(datetime.timezone.utc).isoformat(),
            "base": scenario_summary(spec.base),
        },
    )


def scenario_summary(scenario):
    params = dataclasses.asdict(scenario.params)
    return {
        "system": params,
        "G_m": scenario.G_m,
        "G_c": scenario.G_c,
        "delta_m_eff": scenario.delta_m_eff,
        "delta_c_eff": scenario.delta_c_eff,
        "delta_a": scenario.delta_a,
    }


def find_threshold(spec, metric, level=0.0, rtol=THRESHOLD_RTOL, result=None):
    """Axis value (display units) where ``metric`` crosses ``level``.

    The grid brackets the crossing, which is then refined by bisection on
    the predicate ``metric > level`` to a relative width of ``rtol``.
    """
    if len(spec.axes) != 1:
        raise ConfigError("find_threshold needs a 1-axis sweep")
    axis = spec.axes[0]
    if result is None:
        result = run_sweep(spec)
    above = result.metric(metric) > level
    brackets = [i for i in range(len(above) - 1) if above[i] != above[i + 1]]
    if not brackets:
        raise ThresholdError(f"{metric} never crosses {level} on the {axis.param} grid")
    if len(brackets) > 1:
        raise ThresholdError(
            f"{metric} crosses {level} {len(brackets)} times on the {axis.param} grid", brackets=brackets
        )
    grid = axis.values()
    i = brackets[0]
    lo, hi = float(grid[i]), float(grid[i + 1])
    lo_above = bool(above[i])

    def is_above(x):
        return axis.apply(spec.base, x).evaluate().metric(metric) > level

    while hi - lo > rtol * max(abs(lo), abs(hi)) and hi - lo > 0:
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        if is_above(mid) == lo_above:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


FIGURES = ("fig2a", "fig2b", "fig2c", "fig2d", "fig3a", "fig3b")


def figure_preset(name, base=None):
    """Sweep specification for one of the figure datasets.

    ``base`` replaces the baseline scenario (e.g. to change ``g_a``);
    the axes stay the same.
    """
    if base is None:
        base = baseline_scenario()
    detuning_axes = (
        Axis("delta_m", -2.0, 0.0, GRID_2D, unit="omega_b"),
        Axis("delta_c", 0.0, 2.0, GRID_2D, unit="omega_b"),
    )
    if name == "fig2a":
        return SweepSpec(detuning_axes, base, name=name)
    if name == "fig2b":
        return SweepSpec(detuning_axes, base, name=name)
    if name == "fig2c":
        return SweepSpec((Axis("g_a", 0.0, 12.0, GRID_1D, unit="MHz"),), base, name=name)
    if name == "fig2d":
        return SweepSpec((Axis("T", 1e-3, 0.5, GRID_1D, scale="log", unit="K"),), base, name=name)
    if name == "fig3a":
        axes = (
            Axis("delta_am", -10.0, 10.0, GRID_2D, unit="MHz"),
            Axis("kappa_a_over_kappa_m", 0.1, 3.0, GRID_2D),
        )
        return SweepSpec(axes, base, name=name)
    if name == "fig3b":
        axes = (
            Axis("T", 0.0, 0.5, GRID_2D, unit="K"),
            Axis("gamma_b", 10.0, 1e5, GRID_2D, scale="log", unit="Hz"),
        )
        return SweepSpec(axes, base, name=name)
    raise ConfigError(f"unknown figure {name!r}; valid: {', '.join(FIGURES)}")
