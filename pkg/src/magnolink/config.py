"""JSON run configuration: strict schema, unit conversion and construction of
the model objects for each evaluation mode.

Frequencies, rates and couplings are ordinary frequencies in Hz (the value
that multiplies 2 pi) unless ``"units": "rad/s"``. Temperatures are in K,
lengths in m, powers in W, fields in T.
"""

import copy
import json

import jsonschema

from magnolink.calibration import CrystalGeometry, field_from_power, laser_coupling, laser_frequency, rabi_frequency
from magnolink.constants import GYROMAGNETIC_RATIO, TWO_PI, YIG_SPIN_DENSITY
from magnolink.errors import ConfigError
from magnolink.model import SystemParams
from magnolink.steadystate import (
    DriveSpec,
    amplitudes_from_drives,
    operating_point_from_couplings,
    operating_point_from_state,
    selfconsistent_point,
)
from magnolink.sweep import METRICS, PARAMETER_NAMES, Axis, Scenario, SweepSpec, default_unit

MODES = ("coupling-specified", "effective-detuning", "bare-detuning")

_NONNEG = {"type": "number", "minimum": 0}
_POS = {"type": "number", "exclusiveMinimum": 0}
_REAL = {"type": "number"}

_SYSTEM_KEYS = {
    "omega_a": _POS,
    "omega_m": _POS,
    "omega_c": _POS,
    "omega_b": _POS,
    "kappa_a": _POS,
    "kappa_m": _POS,
    "kappa_c": _POS,
    "gamma_b": _POS,
    "g_a": _NONNEG,
    "g_m": _NONNEG,
    "g_c": _NONNEG,
    "G_m": _NONNEG,
    "G_c": _NONNEG,
    "temperature": _NONNEG,
    "delta_a": _REAL,
    "delta_m": _REAL,
    "delta_c": _REAL,
    "drive_omega0": _NONNEG,
    "drive_omegaL": _NONNEG,
}
# system keys that are frequencies and get the 2 pi factor in Hz units
_ANGULAR_SYSTEM = tuple(k for k in _SYSTEM_KEYS if k != "temperature")

SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "required": ["system"],
    "properties": {
        "units": {"enum": ["Hz", "rad/s"]},
        "mode": {"enum": list(MODES)},
        "system": {
            "type": "object",
            "additionalProperties": False,
            "properties": _SYSTEM_KEYS,
        },
        "drives": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "P_L": _NONNEG,
                "P_0": _NONNEG,
                "H_d": _NONNEG,
                "Omega": _NONNEG,
                "E": _NONNEG,
                "lambda_c": _POS,
                "gamma_gyro": _POS,
                "geometry": {
                    "type": "object",
                    "additionalProperties": False,
                    "required": ["length", "width", "height"],
                    "properties": {"length": _POS, "width": _POS, "height": _POS, "spin_density": _POS},
                },
                "targets": {
                    "type": "object",
                    "additionalProperties": False,
                    "required": ["G_m", "G_c"],
                    "properties": {"G_m": _NONNEG, "G_c": _NONNEG},
                },
            },
        },
        "sweep": {
            "type": "object",
            "additionalProperties": False,
            "required": ["axes"],
            "properties": {
                "axes": {
                    "type": "array",
                    "minItems": 1,
                    "maxItems": 2,
                    "items": {
                        "type": "object",
                        "additionalProperties": False,
                        "required": ["param", "min", "max", "count"],
                        "properties": {
                            "param": {"enum": list(PARAMETER_NAMES)},
                            "min": _REAL,
                            "max": _REAL,
                            "count": {"type": "integer", "minimum": 2},
                            "scale": {"enum": ["linear", "log"]},
                            "unit": {"type": "string"},
                        },
                    },
                },
                "outputs": {"type": "array", "items": {"enum": list(METRICS)}, "minItems": 1},
            },
        },
        "output": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "format": {"enum": ["json", "csv"]},
                "path": {"type": ["string", "null"]},
            },
        },
    },
}


def _where(error):
    path = ".".join(str(p) for p in error.absolute_path)
    return path or "<root>"


def _require(section, keys, context):
    missing = [k for k in keys if k not in section]
    if missing:
        raise ConfigError(f"{context} requires {', '.join(missing)}")


def normalize(doc, angular=False):
    """Validate ``doc`` and fill in derived defaults; idempotent."""
    validator = jsonschema.Draft202012Validator(SCHEMA)
    errors = sorted(validator.iter_errors(doc), key=lambda e: list(e.absolute_path))
    if errors:
        lines = [f"  at {_where(e)}: {e.message}" for e in errors]
        raise ConfigError("config schema violation:\n" + "\n".join(lines))

    doc = copy.deepcopy(doc)
    if "units" not in doc:
        doc["units"] = "rad/s" if angular else "Hz"
    elif angular and doc["units"] != "rad/s":
        raise ConfigError("--angular given but config declares units 'Hz'")
    doc.setdefault("mode", "coupling-specified")
    system = doc["system"]
    drives = doc.get("drives", {})

    _require(system, ("omega_a", "omega_b", "kappa_a", "kappa_m", "kappa_c", "gamma_b", "g_a", "temperature"), "system")
    system.setdefault("omega_m", system["omega_a"])
    if "omega_c" not in system:
        if "lambda_c" not in drives:
            raise ConfigError("system.omega_c or drives.lambda_c is required")
        omega_L = laser_frequency(drives["lambda_c"])
        system["omega_c"] = omega_L if doc["units"] == "rad/s" else omega_L / TWO_PI

    mode = doc["mode"]
    if mode == "coupling-specified":
        _require(system, ("G_m", "G_c", "delta_m", "delta_c"), "coupling-specified mode")
    elif mode == "effective-detuning":
        _require(system, ("g_m", "g_c", "delta_m", "delta_c"), "effective-detuning mode")
        _require_drives(drives, mode)
    else:
        _require(system, ("g_m", "g_c"), "bare-detuning mode")
        if "drive_omega0" not in system:
            _require(system, ("delta_a", "delta_m"), "bare-detuning mode (without drive_omega0)")
        if "drive_omegaL" not in system:
            _require(system, ("delta_c",), "bare-detuning mode (without drive_omegaL)")
        _require_drives(drives, mode)
    if mode != "bare-detuning":
        system.setdefault("delta_a", system["delta_m"])

    if "geometry" in drives:
        drives["geometry"].setdefault("spin_density", YIG_SPIN_DENSITY)
    if drives and "gamma_gyro" not in drives:
        drives["gamma_gyro"] = GYROMAGNETIC_RATIO if doc["units"] == "rad/s" else GYROMAGNETIC_RATIO / TWO_PI

    if "sweep" in doc:
        doc["sweep"].setdefault("outputs", list(METRICS))
        for axis in doc["sweep"]["axes"]:
            axis.setdefault("scale", "linear")
            axis.setdefault("unit", default_unit(axis["param"]))
    if "output" in doc:
        doc["output"].setdefault("format", "json")
        doc["output"].setdefault("path", None)
    return doc


def _require_drives(drives, mode):
    if not any(k in drives for k in ("Omega", "P_0", "H_d")):
        raise ConfigError(f"{mode} mode needs drives.Omega, drives.P_0 or drives.H_d")
    if not any(k in drives for k in ("E", "P_L")):
        raise ConfigError(f"{mode} mode needs drives.E or drives.P_L")
    if ("P_0" in drives or "H_d" in drives) and "Omega" not in drives and "geometry" not in drives:
        raise ConfigError(f"{mode} mode: drives.geometry is required to convert P_0/H_d")
    if "P_L" in drives and "E" not in drives and "lambda_c" not in drives:
        raise ConfigError(f"{mode} mode: drives.lambda_c is required to convert P_L")


class Config:
    """A validated, normalized configuration document."""

    def __init__(self, doc, angular=False):
        self.doc = normalize(doc, angular=angular)

    @classmethod
    def from_text(cls, text, angular=False, source="<config>"):
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{source}: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
        return cls(doc, angular=angular)

    @classmethod
    def from_file(cls, path, angular=False):
        try:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
        return cls.from_text(text, angular=angular, source=str(path))

    def dump(self):
        return json.dumps(self.doc, indent=2, sort_keys=True) + "\n"

    @property
    def mode(self):
        return self.doc["mode"]

    @property
    def _scale(self):
        return 1.0 if self.doc["units"] == "rad/s" else TWO_PI

    def system_value(self, key, default=None):
        s = self.doc["system"]
        if key not in s:
            return default
        return s[key] * self._scale if key in _ANGULAR_SYSTEM else s[key]

    def system_params(self):
        fields = dict(
            omega_a=self.system_value("omega_a"),
            omega_m=self.system_value("omega_m"),
            omega_c=self.system_value("omega_c"),
            omega_b=self.system_value("omega_b"),
            kappa_a=self.system_value("kappa_a"),
            kappa_m=self.system_value("kappa_m"),
            kappa_c=self.system_value("kappa_c"),
            gamma_b=self.system_value("gamma_b"),
            g_a=self.system_value("g_a"),
            g_m=self.system_value("g_m", 0.0),
            g_c=self.system_value("g_c", 0.0),
            temperature=self.system_value("temperature"),
            delta_a=self.system_value("delta_a", 0.0),
            drive_omega0=self.system_value("drive_omega0"),
            drive_omegaL=self.system_value("drive_omegaL"),
        )
        if self.mode == "bare-detuning":
            fields["delta_m_bare"] = self.system_value("delta_m", 0.0)
            fields["delta_c_bare"] = self.system_value("delta_c", 0.0)
        return SystemParams(**fields)

    @property
    def drives_doc(self):
        return self.doc.get("drives", {})

    def geometry(self):
        g = self.drives_doc.get("geometry")
        if g is None:
            raise ConfigError("drives.geometry is required")
        return CrystalGeometry(g["length"], g["width"], g["height"], g["spin_density"])

    def gamma_gyro(self):
        return self.drives_doc.get("gamma_gyro", GYROMAGNETIC_RATIO / self._scale) * self._scale

    def drive_spec(self):
        d = self.drives_doc
        params = self.system_params()
        if "Omega" in d:
            Omega = d["Omega"] * self._scale
        else:
            H_d = d["H_d"] if "H_d" in d else field_from_power(d["P_0"], self.geometry())
            Omega = rabi_frequency(H_d, self.geometry(), self.gamma_gyro())
        if "E" in d:
            E = d["E"] * self._scale
        else:
            E = laser_coupling(d["P_L"], d["lambda_c"], params.kappa_c)
        return DriveSpec(Omega=Omega, E_drive=E)

    def steady_state(self):
        """Mean-field solution in the two drive-based modes."""
        params = self.system_params()
        if self.mode == "effective-detuning":
            return amplitudes_from_drives(
                params, self.drive_spec(), self.system_value("delta_m"), self.system_value("delta_c")
            )
        if self.mode == "bare-detuning":
            return selfconsistent_point(params, self.drive_spec())
        raise ConfigError("coupling-specified mode has no mean-field drive solution")

    def operating_point(self):
        params = self.system_params()
        if self.mode == "coupling-specified":
            return operating_point_from_couplings(
                self.system_value("G_m"),
                self.system_value("G_c"),
                self.system_value("delta_m"),
                self.system_value("delta_c"),
                self.system_value("delta_a"),
                params,
            )
        return operating_point_from_state(self.steady_state(), params)

    def scenario(self):
        """Coupling-specified view of the point (drive modes: couplings solved once)."""
        op = self.operating_point()
        return Scenario(
            params=self.system_params(),
            G_m=op.G_m,
            G_c=op.G_c,
            delta_m_eff=op.delta_m_eff,
            delta_c_eff=op.delta_c_eff,
            delta_am=op.delta_a - op.delta_m_eff,
        )

    def sweep_spec(self):
        sweep = self.doc.get("sweep")
        if sweep is None:
            raise ConfigError("config has no sweep section")
        base = self.scenario()
        axes = []
        for a in sweep["axes"]:
            axes.append(Axis(a["param"], a["min"], a["max"], a["count"], scale=a["scale"], unit=a["unit"]))
        return SweepSpec(tuple(axes), base, outputs=tuple(sweep["outputs"]))

    def calibration_targets(self):
        t = self.drives_doc.get("targets")
        if t is None:
            raise ConfigError("calibrate needs drives.targets with G_m and G_c")
        return t["G_m"] * self._scale, t["G_c"] * self._scale


def baseline_document():
    """Configuration of the baseline operating point (Hz units)."""
    return {
        "units": "Hz",
        "mode": "coupling-specified",
        "system": {
            "omega_a": 10e9,
            "omega_m": 10e9,
            "omega_b": 40e6,
            "kappa_a": 1.5e6,
            "kappa_m": 1.5e6,
            "kappa_c": 2e6,
            "gamma_b": 100.0,
            "g_a": 4e6,
            "g_m": 20.0,
            "g_c": 2e3,
            "G_m": 2e6,
            "G_c": 8e6,
            "temperature": 0.01,
            "delta_m": -40e6,
            "delta_c": 40e6,
            "delta_a": -40e6,
        },
        "drives": {
            "lambda_c": 1550e-9,
            "geometry": {"length": 5e-6, "width": 2e-6, "height": 1e-6},
            "targets": {"G_m": 2e6, "G_c": 8e6},
        },
    }
