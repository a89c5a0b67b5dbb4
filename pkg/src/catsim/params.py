"""Physical constants, experiment parameter records and derived quantities.

All frequencies are angular (rad/s) internally.  JSON configuration keys
carry explicit unit suffixes; ``_Hz`` keys are converted to rad/s once at
the boundary.  Quantities span ~1e-34 to ~1e16, so derived formulas are
evaluated ratio-first.
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass
from pathlib import Path

TWO_PI = 2.0 * math.pi

MASS_RATIO_FLOOR = 1e6
LAMB_DICKE_FLAG = 0.3


class ParameterError(ValueError):
    """A scenario field violates its domain (message names the field)."""


class ConfigError(ValueError):
    """Malformed scenario configuration document."""


@dataclass(frozen=True)
class PhysicalConstants:
    hbar: float = 1.054571817e-34       # J s
    c: float = 299792458.0              # m/s
    g_E: float = 9.81                   # m/s^2
    eps0: float = 8.8541878128e-12      # F/m
    q_e: float = 1.602176634e-19        # C

    def __post_init__(self):
        for name in ("hbar", "c", "g_E", "eps0", "q_e"):
            if getattr(self, name) <= 0:
                raise ParameterError(f"constant {name} must be positive")


CONSTANTS = PhysicalConstants()


@dataclass(frozen=True)
class AtomSpec:
    mass_kg: float
    transition_frequency_radps: float
    linewidth_radps: float
    dipole_moment_Cm: float

    def __post_init__(self):
        if self.mass_kg <= 0:
            raise ParameterError("atom mass_kg must be positive")
        if self.linewidth_radps <= 0:
            raise ParameterError("atom linewidth_radps must be positive")
        if self.transition_frequency_radps <= self.linewidth_radps:
            raise ParameterError(
                "atom transition_frequency_radps must exceed linewidth_radps")
        if self.dipole_moment_Cm <= 0:
            raise ParameterError("atom dipole_moment_Cm must be positive")


@dataclass(frozen=True)
class NanoparticleSpec:
    radius_m: float
    mass_kg: float

    def __post_init__(self):
        if self.radius_m <= 0:
            raise ParameterError("nanoparticle radius_m must be positive")
        if self.mass_kg <= 0:
            raise ParameterError("nanoparticle mass_kg must be positive")


@dataclass(frozen=True)
class TrapConfig:
    paul_frequency_stiff_radps: float
    paul_frequency_soft_radps: float
    wavelength_m: float
    intensity_W_per_m2: float
    detuning_radps: float
    raman_detuning_radps: float
    raman_wavevector_radpm: float
    separation_m: float
    radiation_pressure_force_N: float

    def __post_init__(self):
        positives = (
            "paul_frequency_stiff_radps", "paul_frequency_soft_radps",
            "wavelength_m", "intensity_W_per_m2", "detuning_radps",
            "raman_detuning_radps", "raman_wavevector_radpm", "separation_m",
        )
        for name in positives:
            if getattr(self, name) <= 0:
                raise ParameterError(f"trap {name} must be positive")
        if self.paul_frequency_soft_radps >= self.paul_frequency_stiff_radps:
            raise ParameterError(
                "trap paul_frequency_soft_radps must be below "
                "paul_frequency_stiff_radps")
        if self.radiation_pressure_force_N < 0:
            raise ParameterError(
                "trap radiation_pressure_force_N must be non-negative")


@dataclass(frozen=True)
class DisplacementBeam:
    intensity_W_per_m2: float
    duration_s: float

    def __post_init__(self):
        if self.intensity_W_per_m2 <= 0:
            raise ParameterError("beam intensity_W_per_m2 must be positive")
        if self.duration_s <= 0:
            raise ParameterError("beam duration_s must be positive")


@dataclass(frozen=True)
class ProtocolTimings:
    free_fall_duration_s: float
    freefall_force_N: float = 0.0
    superposition_size_m: float | None = None

    def __post_init__(self):
        if self.free_fall_duration_s <= 0:
            raise ParameterError("protocol free_fall_duration_s must be positive")
        if self.freefall_force_N < 0:
            raise ParameterError("protocol freefall_force_N must be non-negative")
        if self.superposition_size_m is not None and self.superposition_size_m < 0:
            raise ParameterError("protocol superposition_size_m must be non-negative")


@dataclass(frozen=True)
class PhysicalScenario:
    atom: AtomSpec
    nanoparticle: NanoparticleSpec
    trap: TrapConfig
    beam: DisplacementBeam
    protocol: ProtocolTimings
    constants: PhysicalConstants = CONSTANTS

    def __post_init__(self):
        check_mass_hierarchy(self)


def check_mass_hierarchy(scenario: PhysicalScenario) -> float:
    """Warn if m_n/m_a falls below the heavy-particle approximation floor."""
    ratio = scenario.nanoparticle.mass_kg / scenario.atom.mass_kg
    if ratio < MASS_RATIO_FLOOR:
        warnings.warn(
            f"nanoparticle/atom mass ratio {ratio:.3g} is below "
            f"{MASS_RATIO_FLOOR:.0e}; the heavy-particle approximation "
            "degrades", stacklevel=3)
    return ratio


@dataclass(frozen=True)
class DerivedQuantities:
    zero_point_com_m: float      # delta_R
    zero_point_rel_m: float      # delta_r
    total_mass_kg: float
    reduced_mass_kg: float
    lamb_dicke: float
    grav_coupling_radps: float
    wavevector_radpm: float


def grav_coupling(mass_kg: float, omega_radps: float,
                  constants: PhysicalConstants = CONSTANTS) -> float:
    """Gravitational drive frequency g = g_E sqrt(m / (2 hbar omega))."""
    if mass_kg <= 0:
        raise ParameterError("mass_kg must be positive")
    if omega_radps <= 0:
        raise ParameterError("omega_radps must be positive")
    return constants.g_E * math.sqrt(
        (mass_kg / constants.hbar) / (2.0 * omega_radps))


def zero_point_motion(mass_kg: float, omega_radps: float,
                      constants: PhysicalConstants = CONSTANTS) -> float:
    if mass_kg <= 0:
        raise ParameterError("mass_kg must be positive")
    if omega_radps <= 0:
        raise ParameterError("omega_radps must be positive")
    return math.sqrt((constants.hbar / mass_kg) / (2.0 * omega_radps))


def derive(scenario: PhysicalScenario, omega_n: float,
           omega_a: float | None = None) -> DerivedQuantities:
    """Derived quantities for the c.o.m. mode at trap frequency omega_n.

    omega_a defaults to the dipole-trap frequency computed from the
    scenario's trap laser parameters.
    """
    if omega_n <= 0:
        raise ParameterError("omega_n must be positive")
    const = scenario.constants
    m_a = scenario.atom.mass_kg
    m_n = scenario.nanoparticle.mass_kg
    total = m_n + m_a
    reduced = m_a * m_n / total
    if omega_a is None:
        from . import feasibility
        omega_a = feasibility.atom_trap_frequency(
            scenario.atom, scenario.trap, constants=const).omega_a_radps
    delta_R = zero_point_motion(total, omega_n, const)
    delta_r = zero_point_motion(reduced, omega_a, const)
    k = scenario.trap.raman_wavevector_radpm
    eta = k * delta_R
    g = grav_coupling(total, omega_n, const)
    return DerivedQuantities(
        zero_point_com_m=delta_R,
        zero_point_rel_m=delta_r,
        total_mass_kg=total,
        reduced_mass_kg=reduced,
        lamb_dicke=eta,
        grav_coupling_radps=g,
        wavevector_radpm=k,
    )


# --- JSON scenario ingestion -------------------------------------------------

_SCHEMA = {
    "atom": {
        "mass_kg", "transition_frequency_radps", "linewidth_radps",
        "dipole_moment_Cm",
    },
    "nanoparticle": {"radius_m", "mass_kg"},
    "trap": {
        "paul_frequency_stiff_radps", "paul_frequency_soft_radps",
        "wavelength_m", "intensity_W_per_m2", "detuning_radps",
        "raman_detuning_radps", "raman_wavevector_radpm", "separation_m",
        "radiation_pressure_force_N",
    },
    "beam": {"intensity_W_per_m2", "duration_s"},
    "protocol": {
        "free_fall_duration_s", "freefall_force_N", "superposition_size_m",
    },
}

_REQUIRED = {
    "atom": _SCHEMA["atom"],
    "nanoparticle": _SCHEMA["nanoparticle"],
    "trap": _SCHEMA["trap"],
    "beam": _SCHEMA["beam"],
    "protocol": {"free_fall_duration_s"},
}

_TYPES = {
    "atom": AtomSpec,
    "nanoparticle": NanoparticleSpec,
    "trap": TrapConfig,
    "beam": DisplacementBeam,
    "protocol": ProtocolTimings,
}


def _normalise_key(section: str, key: str, value) -> tuple[str, float]:
    """Map a ``_Hz`` suffixed key onto its rad/s twin."""
    if key.endswith("_Hz"):
        base = key[:-3] + "_radps"
        if base in _SCHEMA[section]:
            return base, float(value) * TWO_PI
    return key, value


def scenario_from_dict(doc: dict) -> PhysicalScenario:
    if not isinstance(doc, dict):
        raise ConfigError("scenario document must be a JSON object")
    unknown = set(doc) - set(_SCHEMA)
    if unknown:
        raise ConfigError(f"unknown scenario section(s): {sorted(unknown)}")
    missing = set(_REQUIRED) - set(doc)
    if missing:
        raise ConfigError(f"missing scenario section(s): {sorted(missing)}")
    kwargs = {}
    for section, allowed in _SCHEMA.items():
        raw = doc[section]
        if not isinstance(raw, dict):
            raise ConfigError(f"section '{section}' must be an object")
        fields = {}
        for key, value in raw.items():
            key, value = _normalise_key(section, key, value)
            if key not in allowed:
                raise ConfigError(f"unknown key '{section}.{key}'")
            if not isinstance(value, (int, float)) or isinstance(value, bool):
                raise ConfigError(f"key '{section}.{key}' must be a number")
            fields[key] = float(value)
        missing_keys = _REQUIRED[section] - set(fields)
        if missing_keys:
            raise ConfigError(
                f"missing key(s) in '{section}': {sorted(missing_keys)}")
        try:
            kwargs[section] = _TYPES[section](**fields)
        except ParameterError as exc:
            raise ConfigError(f"invalid '{section}': {exc}") from exc
    return PhysicalScenario(**kwargs)


def load_scenario(path: str | Path) -> PhysicalScenario:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: not valid JSON ({exc})") from exc
    return scenario_from_dict(doc)
