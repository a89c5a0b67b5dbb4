"""The interferometric cat-state protocol as an explicit state machine.

The working state is a hybrid of a two-level hyperfine qubit and a
motional coherent branch per populated level.  All motional amplitudes
are expressed in the stiff-trap mode basis; pulses are instantaneous
ideal maps; trap softening and release are merged into a single sudden
quench followed by transient free fall.

Displacement convention: an operator amplitude b (real) separates the
two branches by Delta x = 2 delta_R b in physical units, so the
gravitational phase picked up over a fall of duration t is
2 g1 t b = m g_E Delta x t / hbar.  Half of it accumulates in the
evolution prefactors and half is released by the composition phases of
the closing displacement, which is why the bookkeeping below never
drops a weight.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from . import feasibility
from .gaussian import (
    CoherentBranch,
    apply_displacement,
    branch_phase_difference,
    evolve_quench,
)
from .params import ParameterError, PhysicalScenario, derive, grav_coupling, \
    zero_point_motion

NORM_TOL = 1e-10
RECOMBINE_TOL = 1e-6
FREEFALL_FORCE_FRACTION = 0.1


class ProtocolError(ValueError):
    pass


class ConstraintViolation(ProtocolError):
    """Feasibility constraints failed and no override was requested."""


class HyperfineLevel(Enum):
    DOWN = "down"
    UP = "up"


@dataclass(frozen=True)
class HybridState:
    branches: tuple[tuple[HyperfineLevel, CoherentBranch], ...]

    def __post_init__(self):
        levels = [lvl for lvl, _ in self.branches]
        if not 1 <= len(levels) <= 2:
            raise ProtocolError("state must have one or two branches")
        if len(set(levels)) != len(levels):
            raise ProtocolError("at most one branch per hyperfine level")

    def get(self, level: HyperfineLevel) -> CoherentBranch | None:
        for lvl, br in self.branches:
            if lvl is level:
                return br
        return None

    def total_weight(self) -> float:
        return sum(abs(br.weight) ** 2 for _, br in self.branches)

    def check_norm(self, tol: float = NORM_TOL) -> None:
        if abs(self.total_weight() - 1.0) > tol:
            raise ProtocolError(
                f"state norm {self.total_weight():.12g} drifted beyond {tol:g}")

    @classmethod
    def pure(cls, level: HyperfineLevel, alpha: complex) -> "HybridState":
        return cls(((level, CoherentBranch(alpha)),))


@dataclass(frozen=True)
class TrapScheduleSegment:
    omega_n_radps: float
    force_N: float
    duration_s: float

    def __post_init__(self):
        if self.duration_s < 0:
            raise ParameterError("segment duration_s must be non-negative")


@dataclass(frozen=True)
class TrapSchedule:
    """Hold (stiff, balanced) -> fall (soft, released) -> recapture."""
    segments: tuple[TrapScheduleSegment, ...]

    @classmethod
    def from_scenario(cls, scenario: PhysicalScenario) -> "TrapSchedule":
        trap = scenario.trap
        proto = scenario.protocol
        hold = TrapScheduleSegment(
            trap.paul_frequency_stiff_radps,
            trap.radiation_pressure_force_N, 0.0)
        fall = TrapScheduleSegment(
            trap.paul_frequency_soft_radps,
            proto.freefall_force_N, proto.free_fall_duration_s)
        recapture = TrapScheduleSegment(
            trap.paul_frequency_stiff_radps,
            trap.radiation_pressure_force_N, 0.0)
        return cls((hold, fall, recapture))

    @property
    def fall(self) -> TrapScheduleSegment:
        return self.segments[1]


# --- Pulse operations ---------------------------------------------------------

# Beam-splitter map on (down, up) weights; columns are images of the basis
# kets |down>, |up>.
_PI_HALF = np.array([[1.0, -1.0], [1.0, 1.0]]) / math.sqrt(2.0)
_PI_HALF_INV = _PI_HALF.T
_PI = np.array([[0.0, -1.0], [1.0, 0.0]])

_LEVELS = (HyperfineLevel.DOWN, HyperfineLevel.UP)


def _apply_qubit_map(s: HybridState, mat: np.ndarray,
                     tol: float = RECOMBINE_TOL) -> HybridState:
    """Apply a 2x2 internal-state map, recombining branches per level.

    Branches landing on the same level must share their motional
    amplitude within ``tol``; the recombined amplitude is the
    weight-weighted mean.
    """
    contributions: dict[HyperfineLevel, list[tuple[complex, complex]]] = {
        lvl: [] for lvl in _LEVELS}
    for lvl, br in s.branches:
        col = 0 if lvl is HyperfineLevel.DOWN else 1
        for row, new_lvl in enumerate(_LEVELS):
            coeff = mat[row, col]
            if coeff != 0.0:
                contributions[new_lvl].append((br.alpha, coeff * br.weight))
    out = []
    for lvl in _LEVELS:
        entries = contributions[lvl]
        if not entries:
            continue
        weight = sum(w for _, w in entries)
        if abs(weight) ** 2 < 1e-24:
            continue
        alphas = [a for a, _ in entries]
        spread = max(abs(a - alphas[0]) for a in alphas)
        if spread > tol:
            raise ProtocolError(
                f"cannot recombine branches on level {lvl.value}: motional "
                f"amplitudes differ by {spread:.3g} > {tol:g}")
        alpha = sum(a * abs(w) for (a, w) in entries) / sum(
            abs(w) for _, w in entries)
        out.append((lvl, CoherentBranch(alpha, weight)))
    state = HybridState(tuple(out))
    state.check_norm()
    return state


def _with_laser_phase(mat: np.ndarray, phase: float) -> np.ndarray:
    if phase == 0.0:
        return mat
    out = np.array(mat, dtype=complex)
    out[1, 0] *= cmath.exp(1j * phase)      # down -> up transfer
    out[0, 1] *= cmath.exp(-1j * phase)     # up -> down transfer
    return out


def pi_half_pulse(s: HybridState, inverse: bool = False,
                  laser_phase: float = 0.0) -> HybridState:
    """Carrier pi/2 pulse: |down> -> (|up>+|down>)/sqrt2, |up> -> (|up>-|down>)/sqrt2.

    ``inverse`` applies the transposed (closing) beam splitter.
    ``laser_phase`` multiplies the level-transfer amplitudes by e^{+-i phase}
    (the optical phase at the atom, default 0).  Motional amplitudes are
    untouched.
    """
    mat = _PI_HALF_INV if inverse else _PI_HALF
    return _apply_qubit_map(s, _with_laser_phase(mat, laser_phase))


def pi_pulse(s: HybridState, laser_phase: float = 0.0) -> HybridState:
    """Carrier pi pulse: |down> -> |up>, |up> -> -|down>."""
    return _apply_qubit_map(s, _with_laser_phase(_PI, laser_phase))


def displacement_beam(s: HybridState, beta: complex,
                      target: HyperfineLevel,
                      eta: float | None = None) -> HybridState:
    """Displace the motional state of the ``target`` level by D(beta).

    The composition phase Im(beta alpha*) is carried on the displaced
    branch.  ``eta`` (if given) is checked against the sideband regime.
    """
    if eta is not None and eta > 0.3:
        warnings.warn(
            f"Lamb-Dicke parameter {eta:.3g} > 0.3; sideband displacement "
            "beam is only marginally selective", stacklevel=2)
    out = []
    for lvl, br in s.branches:
        out.append((lvl, apply_displacement(br, beta) if lvl is target else br))
    return HybridState(tuple(out))


@dataclass(frozen=True)
class FreeFallResult:
    state: HybridState
    relative_phase: float | None   # full branch phase m g_E dx t / hbar
    linear_map: tuple[complex, complex]
    squeeze_magnitude: float


def free_fall_segment(s: HybridState, scenario: PhysicalScenario,
                      omega2: float, dt: float,
                      include_cubic_correction: bool = False) -> FreeFallResult:
    """Quench to the soft trap and fall for ``dt``.

    Requires the residual radiation pressure to be far below gravity.
    Each branch evolves by the second-order quench map; the physically
    accumulated branch phase (including the part released later by the
    closing displacement) is exposed.
    """
    m_total = scenario.nanoparticle.mass_kg + scenario.atom.mass_kg
    weight_force = m_total * scenario.constants.g_E
    force = scenario.protocol.freefall_force_N
    if force >= FREEFALL_FORCE_FRACTION * weight_force:
        raise ProtocolError(
            f"not in free-fall regime: residual force {force:.3g} N is not "
            f"small against m g_E = {weight_force:.3g} N")
    omega1 = scenario.trap.paul_frequency_stiff_radps
    if omega2 * dt > 0.1:
        warnings.warn(f"omega2*dt = {omega2 * dt:.3g} not << 1; transient "
                      "free-fall approximation degrades", stacklevel=2)
    g2 = grav_coupling(m_total, omega2, scenario.constants)
    g1 = math.sqrt(omega2 / omega1) * g2
    evolved = []
    lin = None
    z_mag = 0.0
    for lvl, br in s.branches:
        res = evolve_quench(br, omega1, omega2, g2, dt)
        evolved.append((lvl, res.branch))
        lin = (res.c1, res.c2)
        z_mag = res.squeeze_magnitude
    state = HybridState(tuple(evolved))
    rel = None
    down = s.get(HyperfineLevel.DOWN)
    up = s.get(HyperfineLevel.UP)
    if down is not None and up is not None:
        separation = down.alpha - up.alpha
        rel = 2.0 * g1 * dt * separation.real
        if include_cubic_correction:
            # cubic term expressed with the paper-convention separation
            _, phi3 = branch_phase_difference(
                2.0 * separation.real, g2, dt, omega2)
            rel += phi3
            state = _phase_on_level(state, HyperfineLevel.DOWN, -phi3)
    return FreeFallResult(state=state, relative_phase=rel,
                          linear_map=lin, squeeze_magnitude=z_mag)


def _phase_on_level(s: HybridState, level: HyperfineLevel,
                    phase: float) -> HybridState:
    out = []
    for lvl, br in s.branches:
        out.append((lvl, br.rotated(phase) if lvl is level else br))
    return HybridState(tuple(out))


# --- Readout ------------------------------------------------------------------

@dataclass(frozen=True)
class ReadoutResult:
    p_down: float
    phi_grav: float
    visibility: float
    reduced_visibility: bool


def readout(s: HybridState, mismatch_tol: float = RECOMBINE_TOL) -> ReadoutResult:
    """Close the interferometer and project onto |down>.

    Takes the state after the disentangling displacement (step 7),
    applies the closing pi/2 pulse analytically and returns
    P_down = (|w_d|^2 + |w_u|^2)/2 + Re(w_d w_u* <a_u|a_d>).  When the
    motional amplitudes still differ beyond ``mismatch_tol`` the coherent
    overlap reduces the fringe visibility and the result is flagged.
    """
    down = s.get(HyperfineLevel.DOWN)
    up = s.get(HyperfineLevel.UP)
    if down is None or up is None:
        only = down or up
        p = abs(only.weight) ** 2 if down is not None else 0.0
        return ReadoutResult(p_down=p, phi_grav=0.0, visibility=1.0,
                             reduced_visibility=False)
    ov = _coherent_overlap(up.alpha, down.alpha)
    p_down = (0.5 * (abs(down.weight) ** 2 + abs(up.weight) ** 2)
              + (down.weight * up.weight.conjugate() * ov).real)
    phi = cmath.phase(up.weight * down.weight.conjugate())
    mismatch = abs(down.alpha - up.alpha)
    return ReadoutResult(
        p_down=float(p_down),
        phi_grav=phi,
        visibility=abs(ov),
        reduced_visibility=mismatch > mismatch_tol,
    )


def _coherent_overlap(a: complex, b: complex) -> complex:
    """<a|b> = exp(-|a-b|^2/2 + i Im(a* b)).

    The difference form avoids catastrophic cancellation between the
    |a|^2 and a* b terms when the amplitudes are large and nearly equal,
    which is exactly the regime after the disentangling displacement.
    """
    d = b - a
    # Im(a* b) = Im(a* (b - a)) since Im(|a|^2) = 0
    return cmath.exp(complex(-0.5 * (d.real * d.real + d.imag * d.imag),
                             (a.conjugate() * d).imag))


# --- Full protocol ------------------------------------------------------------

@dataclass(frozen=True)
class Coherent:
    alpha: complex


@dataclass(frozen=True)
class ThermalSample:
    nbar: float
    seed: int
    count: int


@dataclass(frozen=True)
class StepRecord:
    step: int
    label: str
    state: HybridState

    def to_json_dict(self) -> dict:
        return {
            "step": self.step,
            "label": self.label,
            "branches": [
                {"level": lvl.value,
                 "re_alpha": br.alpha.real, "im_alpha": br.alpha.imag,
                 "re_weight": br.weight.real, "im_weight": br.weight.imag}
                for lvl, br in self.state.branches
            ],
        }


@dataclass(frozen=True)
class ProtocolResult:
    final_state: HybridState
    phi_grav: float
    p_down: float
    visibility: float
    residual: float              # motional mismatch after disentangling
    log: tuple[StepRecord, ...] = field(repr=False, default=())


@dataclass(frozen=True)
class ProtocolDistribution:
    results: tuple[ProtocolResult, ...]

    @property
    def p_down_values(self) -> np.ndarray:
        return np.array([r.p_down for r in self.results])

    @property
    def phi_grav_values(self) -> np.ndarray:
        return np.array([r.phi_grav for r in self.results])


def beam_amplitude(scenario: PhysicalScenario,
                   delta_x: float | None = None) -> float:
    """Displacement-operator amplitude in the stiff-trap basis.

    Derived from the configured superposition size (or the displacement
    beam parameters) via b = Delta x / (2 delta_R(omega1)).
    """
    if delta_x is None:
        delta_x = scenario.protocol.superposition_size_m
    if delta_x is None:
        delta_x = feasibility.superposition_size(
            scenario, scenario.trap.paul_frequency_soft_radps,
            scenario.beam.duration_s)
    m_total = scenario.nanoparticle.mass_kg + scenario.atom.mass_kg
    delta_r1 = zero_point_motion(
        m_total, scenario.trap.paul_frequency_stiff_radps, scenario.constants)
    return delta_x / (2.0 * delta_r1)


def run_protocol(scenario: PhysicalScenario,
                 initial: Coherent | ThermalSample,
                 exact_phase: bool = True,
                 force: bool = False,
                 beta: float | None = None,
                 include_cubic_correction: bool = False,
                 ) -> ProtocolResult | ProtocolDistribution:
    """Execute protocol steps 2-9 (preparation and recapture are ideal).

    ``beta`` overrides the displacement-operator amplitude; otherwise it
    is derived from the scenario's superposition size.  ``exact_phase``
    selects whether the closing displacement reverses the evolved branch
    separation exactly or applies the plain -beta approximation.
    """
    report = feasibility.constraint_check(scenario)
    failed = [v.name for v in report.verdicts if v.status == "fail"]
    if failed and not force:
        raise ConstraintViolation(
            "feasibility constraints failed: " + ", ".join(failed)
            + " (pass force=True to override)")
    if isinstance(initial, ThermalSample):
        rng = np.random.default_rng(initial.seed)
        draws = (rng.normal(size=(initial.count, 2))
                 * math.sqrt(initial.nbar / 2.0))
        results = tuple(
            _run_single(scenario, complex(re, im), exact_phase, beta,
                        include_cubic_correction, with_log=False)
            for re, im in draws)
        return ProtocolDistribution(results)
    return _run_single(scenario, complex(initial.alpha), exact_phase, beta,
                       include_cubic_correction, with_log=True)


def _run_single(scenario: PhysicalScenario, alpha: complex,
                exact_phase: bool, beta: float | None,
                include_cubic_correction: bool,
                with_log: bool) -> ProtocolResult:
    if beta is None:
        beta = beam_amplitude(scenario)
    omega2 = scenario.trap.paul_frequency_soft_radps
    dt = scenario.protocol.free_fall_duration_s
    eta = derive(scenario, omega2).lamb_dicke

    log: list[StepRecord] = []

    def record(step: int, label: str, state: HybridState):
        state.check_norm()
        if with_log:
            log.append(StepRecord(step, label, state))

    s = HybridState.pure(HyperfineLevel.DOWN, alpha)
    record(1, "prepare", s)
    s = pi_half_pulse(s)
    record(2, "pi_half", s)
    s = displacement_beam(s, beta, HyperfineLevel.DOWN, eta=eta)
    record(4, "displace", s)
    fall = free_fall_segment(
        s, scenario, omega2, dt,
        include_cubic_correction=include_cubic_correction)
    s = fall.state
    record(6, "free_fall", s)
    if exact_phase:
        c1, c2 = fall.linear_map
        beta_back = -(c1 * beta + c2 * beta)
    else:
        beta_back = -beta
    s = displacement_beam(s, beta_back, HyperfineLevel.DOWN, eta=eta)
    record(7, "undisplace", s)
    down = s.get(HyperfineLevel.DOWN)
    up = s.get(HyperfineLevel.UP)
    residual = abs(down.alpha - up.alpha)
    result = readout(s)
    s_final = pi_half_pulse(s, inverse=True) if residual <= RECOMBINE_TOL else s
    record(8, "pi_half_close", s_final)
    return ProtocolResult(
        final_state=s_final,
        phi_grav=result.phi_grav,
        p_down=result.p_down,
        visibility=result.visibility,
        residual=residual,
        log=tuple(log),
    )
