"""Experiment configuration: dataclasses plus the `key = value` file format.

All internal fields are SI (m, W, s, rad).  The text format uses bench units
(mm, MW, nm, um) so config files read like a lab notebook; the table at the
bottom of this module defines every key, its unit conversion, and the default.
Defaults reproduce the reference apparatus: 355 nm pulsed pump, 1 cm type-II
BBO, f = 10 cm far-field lens, 20 um pixels, eta = 0.80, read noise 4 e-.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, fields, replace

from .errors import ConfigError

NONCOLLINEAR = "noncollinear"
COLLINEAR = "collinear"


def _require(cond, key, msg):
    if not cond:
        raise ConfigError(f"{key}: {msg}")


@dataclass(frozen=True)
class PumpConfig:
    """Pulsed pump laser parameters."""

    wavelength: float = 355e-9        # m
    waist: float = 1.0e-3             # m, 1/e^2 amplitude radius w_p
    mean_pulse_power: float = 1.0     # W (mean power within the pulse)
    pulse_duration: float = 5e-9      # s
    power_fluct_frac: float = 0.20    # slow shot-to-shot power jitter (std/mean)
    mode_count_n: float = 25          # longitudinal modes; math.inf = coherent limit

    def __post_init__(self):
        _require(self.wavelength > 0, "pump.wavelength", "must be positive")
        _require(self.waist > 0, "pump.waist", "must be positive")
        _require(self.mean_pulse_power >= 0, "pump.mean_pulse_power", "must be >= 0")
        _require(self.pulse_duration > 0, "pump.pulse_duration", "must be positive")
        _require(0 <= self.power_fluct_frac < 1, "pump.power_fluct_frac", "must be in [0, 1)")
        _require(self.mode_count_n >= 1, "pump.mode_count_n", "must be >= 1")


@dataclass(frozen=True)
class CrystalConfig:
    """Nonlinear crystal and phase-matching parameters."""

    length: float = 1e-2                  # m
    degenerate_wavelength: float = 710e-9  # m, downconverted center wavelength
    emission_angle: float = 0.05          # rad, external ring angle theta_0
    gain_sigma: float = 2.53e-3           # (m^2/W)^(1/2); g = sigma * A_pump
    regime: str = NONCOLLINEAR
    sinc_prefactor: float = 2.78          # HWHM prefactor of the sinc^2 kernel

    def __post_init__(self):
        _require(self.length > 0, "crystal.length", "must be positive")
        _require(self.degenerate_wavelength > 0, "crystal.degenerate_wavelength", "must be positive")
        _require(self.emission_angle >= 0, "crystal.emission_angle", "must be >= 0")
        _require(self.gain_sigma > 0, "crystal.gain_sigma", "must be positive")
        _require(self.regime in (NONCOLLINEAR, COLLINEAR), "crystal.regime",
                 f"must be '{NONCOLLINEAR}' or '{COLLINEAR}'")
        _require(self.sinc_prefactor > 0, "crystal.sinc_prefactor", "must be positive")


@dataclass(frozen=True)
class DetectorConfig:
    """CCD and collection-optics parameters."""

    pixel_pitch: float = 20e-6      # m
    array_shape: tuple[int, int] = (400, 1340)  # (rows, cols) pixels
    quantum_efficiency: float = 0.80
    eta_fluct_std: float = 0.03     # fixed-pattern QE nonuniformity (std / eta)
    read_noise: float = 4.0         # electrons rms / pixel
    focal_length: float = 0.10      # m, far-field lens (f-f configuration)
    saturation: int = 65535         # counts
    shot_noise: bool = True         # debug switch: False disables Poisson sampling

    def __post_init__(self):
        _require(self.pixel_pitch > 0, "detector.pixel_pitch", "must be positive")
        _require(len(self.array_shape) == 2 and min(self.array_shape) > 0,
                 "detector.array_shape", "must be two positive integers")
        _require(0 < self.quantum_efficiency <= 1, "detector.quantum_efficiency",
                 "must be in (0, 1]")
        _require(self.eta_fluct_std >= 0, "detector.eta_fluct_std", "must be >= 0")
        _require(self.read_noise >= 0, "detector.read_noise", "must be >= 0")
        _require(self.focal_length > 0, "detector.focal_length", "must be positive")
        _require(self.saturation > 0, "detector.saturation", "must be positive")


@dataclass(frozen=True)
class SynthesisConfig:
    """Stochastic frame-generation parameters."""

    grid_size: int = 256        # near/far field samples per axis (power of two)
    oversample: int = 8         # far-field q-samples per detector pixel, per axis
    mode_count_min: int = 60    # per-shot temporal modes M, log-uniform bounds
    mode_count_max: int = 340
    apodize: bool = True        # apply |sinc(dk l / 2)| phase-matching envelope
    twin_correlated: bool = True  # debug switch: False decouples signal/idler

    def __post_init__(self):
        _require(self.grid_size >= 8 and (self.grid_size & (self.grid_size - 1)) == 0,
                 "synthesis.grid_size", "must be a power of two >= 8")
        _require(self.oversample >= 1, "synthesis.oversample", "must be >= 1")
        _require(self.grid_size % self.oversample == 0, "synthesis.oversample",
                 "must divide synthesis.grid_size")
        _require(self.mode_count_min >= 1, "synthesis.mode_count_min", "must be >= 1")
        _require(self.mode_count_max >= self.mode_count_min, "synthesis.mode_count_max",
                 "must be >= synthesis.mode_count_min")


@dataclass(frozen=True)
class AnalysisConfig:
    """Estimation-chain parameters."""

    max_displacement: int = 6   # autocorrelation sweep |xi| <= this, pixels
    region_fraction: float = 0.6  # auto analysis region side / half-plane side
    pixel_stride: int = 1       # decimation stride for spatial statistics

    def __post_init__(self):
        _require(self.max_displacement >= 4, "analysis.max_displacement", "must be >= 4")
        _require(0 < self.region_fraction <= 1, "analysis.region_fraction",
                 "must be in (0, 1]")
        _require(self.pixel_stride >= 1, "analysis.pixel_stride", "must be >= 1")


@dataclass(frozen=True)
class ExperimentConfig:
    """One complete simulated setup."""

    pump: PumpConfig = field(default_factory=PumpConfig)
    crystal: CrystalConfig = field(default_factory=CrystalConfig)
    detector: DetectorConfig = field(default_factory=DetectorConfig)
    synthesis: SynthesisConfig = field(default_factory=SynthesisConfig)
    analysis: AnalysisConfig = field(default_factory=AnalysisConfig)


# --- text format ------------------------------------------------------------
#
# One entry per key: (section, attribute, to_si, from_si, parse).
# `parse` turns the raw string into a python value; unit factors convert
# between file units and SI fields.

def _parse_float(s):
    return float(s)


def _parse_int(s):
    v = float(s)
    if v != int(v):
        raise ValueError(f"expected integer, got {s!r}")
    return int(v)


def _parse_count(s):
    # laser mode count: integer >= 1 or 'inf' for the coherent limit
    if s.strip().lower() in ("inf", "infinity"):
        return math.inf
    return _parse_int(s)


def _parse_bool(s):
    t = s.strip().lower()
    if t in ("true", "yes", "1", "on"):
        return True
    if t in ("false", "no", "0", "off"):
        return False
    raise ValueError(f"expected boolean, got {s!r}")


def _parse_str(s):
    return s.strip()


def _scaled(factor):
    return (lambda v: v * factor), (lambda v: v / factor)


_IDENT = (lambda v: v), (lambda v: v)

# key -> (section, attr, to_si, from_si, parser)
_KEYS: dict[str, tuple] = {}


def _key(name, section, attr, conv=_IDENT, parser=_parse_float):
    _KEYS[name] = (section, attr, conv[0], conv[1], parser)


_key("pump.wavelength_nm", "pump", "wavelength", _scaled(1e-9))
_key("pump.waist_mm", "pump", "waist", _scaled(1e-3))
_key("pump.mean_pulse_power_MW", "pump", "mean_pulse_power", _scaled(1e6))
_key("pump.pulse_duration_ns", "pump", "pulse_duration", _scaled(1e-9))
_key("pump.power_fluct_frac", "pump", "power_fluct_frac")
_key("pump.laser_mode_count_n", "pump", "mode_count_n", _IDENT, _parse_count)

_key("crystal.length_mm", "crystal", "length", _scaled(1e-3))
_key("crystal.degenerate_wavelength_nm", "crystal", "degenerate_wavelength", _scaled(1e-9))
_key("crystal.emission_angle_rad", "crystal", "emission_angle")
# printed unit (mm^2/W)^(1/2) -> SI (m^2/W)^(1/2)
_key("crystal.gain_sigma_sqrt_mm2_per_W", "crystal", "gain_sigma", _scaled(1e-3))
_key("crystal.regime", "crystal", "regime", _IDENT, _parse_str)
_key("crystal.sinc_prefactor", "crystal", "sinc_prefactor")

_key("detector.pixel_pitch_um", "detector", "pixel_pitch", _scaled(1e-6))
_key("detector.array_width_px", "detector", "_array_w", _IDENT, _parse_int)
_key("detector.array_height_px", "detector", "_array_h", _IDENT, _parse_int)
_key("detector.quantum_efficiency", "detector", "quantum_efficiency")
_key("detector.eta_fluct_std", "detector", "eta_fluct_std")
_key("detector.read_noise_electrons", "detector", "read_noise")
_key("detector.focal_length_mm", "detector", "focal_length", _scaled(1e-3))
_key("detector.saturation_counts", "detector", "saturation", _IDENT, _parse_int)
_key("detector.shot_noise", "detector", "shot_noise", _IDENT, _parse_bool)

_key("synthesis.grid_size", "synthesis", "grid_size", _IDENT, _parse_int)
_key("synthesis.oversample", "synthesis", "oversample", _IDENT, _parse_int)
_key("synthesis.mode_count_min", "synthesis", "mode_count_min", _IDENT, _parse_int)
_key("synthesis.mode_count_max", "synthesis", "mode_count_max", _IDENT, _parse_int)
_key("synthesis.apodize", "synthesis", "apodize", _IDENT, _parse_bool)
_key("synthesis.twin_correlated", "synthesis", "twin_correlated", _IDENT, _parse_bool)

_key("analysis.max_displacement_px", "analysis", "max_displacement", _IDENT, _parse_int)
_key("analysis.region_fraction", "analysis", "region_fraction")
_key("analysis.pixel_stride", "analysis", "pixel_stride", _IDENT, _parse_int)

_SECTIONS = {
    "pump": PumpConfig,
    "crystal": CrystalConfig,
    "detector": DetectorConfig,
    "synthesis": SynthesisConfig,
    "analysis": AnalysisConfig,
}


def _build_config(raw: dict[str, dict], origin: dict[str, str]) -> ExperimentConfig:
    """Assemble dataclasses from per-section attribute dicts."""
    out = {}
    for section, cls in _SECTIONS.items():
        attrs = dict(raw.get(section, {}))
        # array shape arrives as two scalar keys
        if section == "detector" and ("_array_w" in attrs or "_array_h" in attrs):
            w = attrs.pop("_array_w", DetectorConfig().array_shape[1])
            h = attrs.pop("_array_h", DetectorConfig().array_shape[0])
            attrs["array_shape"] = (h, w)
        try:
            out[section] = cls(**attrs)
        except ConfigError as exc:
            # re-raise naming the file key when the field came from a file
            msg = str(exc)
            internal = msg.split(":", 1)[0]
            key = origin.get(internal, internal)
            raise ConfigError(f"{key}: {msg.split(':', 1)[1].strip()}") from None
    return ExperimentConfig(**out)


def parse_config(text: str, source: str = "<string>") -> ExperimentConfig:
    """Parse `key = value` config text.  Unknown keys are hard errors."""
    raw: dict[str, dict] = {}
    origin: dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise ConfigError(f"{source}:{lineno}: expected 'key = value', got {line!r}")
        key, _, value = stripped.partition("=")
        key = key.strip()
        value = value.strip()
        if key not in _KEYS:
            raise ConfigError(f"{source}:{lineno}: unknown key {key!r}")
        section, attr, to_si, _, parser = _KEYS[key]
        try:
            parsed = parser(value)
        except ValueError as exc:
            raise ConfigError(f"{source}:{lineno}: {key}: {exc}") from None
        if parser in (_parse_float, _parse_int, _parse_count):
            parsed = to_si(parsed)
        raw.setdefault(section, {})[attr] = parsed
        origin[f"{section}.{attr}"] = key
    return _build_config(raw, origin)


def load_config(path) -> ExperimentConfig:
    """Load a config file; an empty file yields the full default setup."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}") from None
    return parse_config(text, source=str(path))


def format_config(cfg: ExperimentConfig) -> str:
    """Render every key in canonical order (exact round trip)."""
    lines = []
    for key, (section, attr, _, from_si, parser) in _KEYS.items():
        sub = getattr(cfg, section)
        if attr == "_array_w":
            value = sub.array_shape[1]
        elif attr == "_array_h":
            value = sub.array_shape[0]
        else:
            value = getattr(sub, attr)
        if parser is _parse_float:
            value = from_si(value)
            text = repr(float(value))
        elif parser is _parse_bool:
            text = "true" if value else "false"
        elif parser is _parse_count:
            text = "inf" if math.isinf(value) else str(int(value))
        elif parser is _parse_int:
            text = str(int(value))
        else:
            text = str(value)
        lines.append(f"{key} = {text}")
    return "\n".join(lines) + "\n"


def save_config(cfg: ExperimentConfig, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_config(cfg))


def set_config_value(cfg: ExperimentConfig, key: str, value: str) -> ExperimentConfig:
    """Return a copy of `cfg` with one file-format key overridden.

    Used by sweep specifications, so sweeps and config files share units.
    """
    if key not in _KEYS:
        raise ConfigError(f"unknown key {key!r}")
    section, attr, to_si, _, parser = _KEYS[key]
    try:
        parsed = parser(value)
        if parser in (_parse_float, _parse_int, _parse_count):
            parsed = to_si(parsed)
    except ValueError as exc:
        raise ConfigError(f"{key}: {exc}") from None
    sub = getattr(cfg, section)
    if attr == "_array_w":
        sub = replace(sub, array_shape=(sub.array_shape[0], parsed))
    elif attr == "_array_h":
        sub = replace(sub, array_shape=(parsed, sub.array_shape[1]))
    else:
        sub = replace(sub, **{attr: parsed})
    return replace(cfg, **{section: sub})


def config_keys() -> list[str]:
    """All recognized file keys, canonical order."""
    return list(_KEYS)
