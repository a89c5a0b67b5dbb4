"""catsim: simulator and feasibility toolkit for the atom-nanoparticle
Schrodinger-cat protocol.

Modules:
    params       physical constants, scenario records, JSON ingestion
    classical    closed-form classical trajectories + RK4 oracle
    gaussian     coherent-state algebra and closed-form quantum evolutions
    fock_oracle  truncated number-basis brute-force oracle
    protocol     the 10-step interferometric protocol state machine
    feasibility  experimental design formulas and constraint grading
    verify       oracle-equivalence suite
    cli          command-line front end
"""

from .params import (
    CONSTANTS,
    AtomSpec,
    ConfigError,
    DerivedQuantities,
    DisplacementBeam,
    NanoparticleSpec,
    ParameterError,
    PhysicalConstants,
    PhysicalScenario,
    ProtocolTimings,
    TrapConfig,
    derive,
    grav_coupling,
    load_scenario,
    scenario_from_dict,
    zero_point_motion,
)
from .gaussian import CoherentBranch
from .protocol import (
    Coherent,
    HybridState,
    HyperfineLevel,
    ProtocolResult,
    ThermalSample,
    run_protocol,
)
from .feasibility import FeasibilityReport, constraint_check

__version__ = "1.0.0"

__all__ = [
    "CONSTANTS",
    "AtomSpec",
    "Coherent",
    "CoherentBranch",
    "ConfigError",
    "DerivedQuantities",
    "DisplacementBeam",
    "FeasibilityReport",
    "HybridState",
    "HyperfineLevel",
    "NanoparticleSpec",
    "ParameterError",
    "PhysicalConstants",
    "PhysicalScenario",
    "ProtocolResult",
    "ProtocolTimings",
    "ThermalSample",
    "TrapConfig",
    "constraint_check",
    "derive",
    "grav_coupling",
    "load_scenario",
    "run_protocol",
    "scenario_from_dict",
    "zero_point_motion",
]
