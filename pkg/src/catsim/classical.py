"""Closed-form classical trajectories in a trap with gravity.

Covers the exact harmonic-plus-gravity solution, its free-fall and
second-order short-time limits, a fixed-step RK4 oracle for independent
verification, and the semiclassical action phases used for the
long-time phase-difference curves.

Sign convention: the Hamiltonian is H = p^2/2m + m w^2 x^2 / 2 + m g_E x,
so gravity pulls toward negative x and the displaced equilibrium sits at
x = -g_E/w^2.  Frame 2 is shifted so that the equilibrium is at its origin:
x2 = x1 + g_E/w^2, p2 = p1.

All phases are reported unwrapped (no mod 2*pi).
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, replace
from enum import Enum
from pathlib import Path

from .params import CONSTANTS, ParameterError

_RK4_STEP_FRACTION = 2.0 * math.pi / 50.0   # dt must stay below 2*pi/(50 w)


class Frame(Enum):
    TRAP_ORIGIN = 1   # frame 1: origin at the Paul-trap centre
    SHIFTED = 2       # frame 2: origin at the displaced equilibrium


@dataclass(frozen=True)
class PhaseSpacePoint:
    x: float
    p: float
    frame: Frame = Frame.TRAP_ORIGIN


def to_shifted_frame(s: PhaseSpacePoint, omega: float,
                     g_E: float = CONSTANTS.g_E) -> PhaseSpacePoint:
    if s.frame is Frame.SHIFTED:
        return s
    return PhaseSpacePoint(s.x + g_E / omega**2, s.p, Frame.SHIFTED)


def to_trap_frame(s: PhaseSpacePoint, omega: float,
                  g_E: float = CONSTANTS.g_E) -> PhaseSpacePoint:
    if s.frame is Frame.TRAP_ORIGIN:
        return s
    return PhaseSpacePoint(s.x - g_E / omega**2, s.p, Frame.TRAP_ORIGIN)


@dataclass(frozen=True)
class AdimensionalPoint:
    X: float
    P: float


def adimensionalise(s: PhaseSpacePoint, m: float, omega: float,
                    hbar: float = CONSTANTS.hbar) -> AdimensionalPoint:
    """X = x/delta_x, P = p/delta_p at the mode scales of (m, omega)."""
    delta_x = math.sqrt(hbar / (2.0 * m * omega))
    delta_p = math.sqrt(hbar * m * omega / 2.0)
    return AdimensionalPoint(s.x / delta_x, s.p / delta_p)


def evolve_harmonic_gravity(s0: PhaseSpacePoint, m: float, omega: float,
                            g_E: float, t: float) -> PhaseSpacePoint:
    """Exact trap-frame trajectory under harmonic confinement plus gravity."""
    if omega <= 0:
        raise ParameterError(
            "omega must be positive; use evolve_free_fall for omega = 0")
    if s0.frame is not Frame.TRAP_ORIGIN:
        raise ParameterError("s0 must be given in the trap frame (frame 1)")
    c, s = math.cos(omega * t), math.sin(omega * t)
    shift = g_E / omega**2
    x = s0.x * c + s0.p / (m * omega) * s + shift * (c - 1.0)
    p = -m * omega * s0.x * s + s0.p * c - m * omega * shift * s
    return PhaseSpacePoint(x, p, Frame.TRAP_ORIGIN)


def evolve_free_fall(s0: PhaseSpacePoint, m: float, g_E: float,
                     t: float) -> PhaseSpacePoint:
    x = s0.x + s0.p * t / m - 0.5 * g_E * t * t
    p = s0.p - m * g_E * t
    return PhaseSpacePoint(x, p, s0.frame)


def mode_exact(a0: complex, omega: float, g: float, t: float) -> complex:
    """Exact adimensional mode amplitude a(t) = a0 e^{-iwt} + (g/w)(e^{-iwt}-1)."""
    if omega <= 0:
        raise ParameterError("omega must be positive")
    rot = complex(math.cos(omega * t), -math.sin(omega * t))
    return a0 * rot + (g / omega) * (rot - 1.0)


@dataclass(frozen=True)
class QuadraticModeResult:
    amplitude: complex    # second-order short-time expansion
    exact: complex        # closed form, for comparison
    omega_t: float
    g_t: float
    guard_exceeded: bool


def evolve_mode_quadratic(a0: complex, omega: float, g: float, t: float,
                          guard: float = 0.1) -> QuadraticModeResult:
    """Second-order short-time mode amplitude.

    a(t) ~ a0 (1 - i w t - w^2 t^2 / 2) - i g t - w g t^2 / 2.  The source
    term carries -i g t (expanding the exact closed form; the sign is fixed
    by the exact solution and by the momentum kick p -> p - m g_E t).
    """
    wt = omega * t
    amplitude = (a0 * (1.0 - 1j * wt - 0.5 * wt * wt)
                 - 1j * g * t - 0.5 * omega * g * t * t)
    return QuadraticModeResult(
        amplitude=amplitude,
        exact=mode_exact(a0, omega, g, t),
        omega_t=wt,
        g_t=g * t,
        guard_exceeded=abs(wt) >= guard,
    )


# --- RK4 oracle ---------------------------------------------------------------

@dataclass(frozen=True)
class TimeDependentTrapSpec:
    """Piecewise-constant trap: (omega, linear acceleration) switching once.

    The equation of motion is x'' = -omega^2 x - accel, i.e. ``accel`` is
    the uniform acceleration from any linear potential term (gravity net of
    radiation pressure).
    """
    mass: float
    omega_initial: float
    omega_final: float
    accel_initial: float
    accel_final: float
    switch_time: float = 0.0

    @classmethod
    def constant(cls, mass: float, omega: float,
                 accel: float) -> "TimeDependentTrapSpec":
        return cls(mass, omega, omega, accel, accel, switch_time=0.0)

    @classmethod
    def sudden_quench(cls, mass: float, omega1: float, omega2: float,
                      g_E: float = CONSTANTS.g_E,
                      switch_time: float = 0.0) -> "TimeDependentTrapSpec":
        """Stiff balanced trap for t <= switch, soft trap with gravity after."""
        return cls(mass, omega1, omega2, 0.0, g_E, switch_time)

    def at(self, t: float) -> tuple[float, float]:
        if t <= self.switch_time:
            return self.omega_initial, self.accel_initial
        return self.omega_final, self.accel_final


def _rk4_segment(x: float, p: float, m: float, omega: float, accel: float,
                 duration: float, dt: float) -> tuple[float, float]:
    if duration <= 0:
        return x, p
    n = max(1, math.ceil(duration / dt))
    h = duration / n
    w2 = omega * omega
    for _ in range(n):
        # Hamilton's equations: dx/dt = p/m, dp/dt = -m w^2 x - m accel
        k1x = p / m
        k1p = -m * (w2 * x + accel)
        k2x = (p + 0.5 * h * k1p) / m
        k2p = -m * (w2 * (x + 0.5 * h * k1x) + accel)
        k3x = (p + 0.5 * h * k2p) / m
        k3p = -m * (w2 * (x + 0.5 * h * k2x) + accel)
        k4x = (p + h * k3p) / m
        k4p = -m * (w2 * (x + h * k3x) + accel)
        x += h * (k1x + 2 * k2x + 2 * k3x + k4x) / 6.0
        p += h * (k1p + 2 * k2p + 2 * k3p + k4p) / 6.0
    return x, p


def ode_oracle(s0: PhaseSpacePoint, spec: TimeDependentTrapSpec, t: float,
               dt: float) -> PhaseSpacePoint:
    """Fixed-step RK4 integration of Hamilton's equations, split at the switch."""
    if dt <= 0:
        raise ParameterError("dt must be positive")
    omega_max = max(spec.omega_initial, spec.omega_final)
    if omega_max > 0 and dt >= _RK4_STEP_FRACTION / omega_max:
        raise ParameterError(
            f"dt={dt:g} too large: must be below 2*pi/(50*omega) = "
            f"{_RK4_STEP_FRACTION / omega_max:g}")
    x, p = s0.x, s0.p
    m = spec.mass
    if 0.0 < spec.switch_time < t:
        x, p = _rk4_segment(x, p, m, spec.omega_initial, spec.accel_initial,
                            spec.switch_time, dt)
        x, p = _rk4_segment(x, p, m, spec.omega_final, spec.accel_final,
                            t - spec.switch_time, dt)
    else:
        omega, accel = spec.at(t)
        x, p = _rk4_segment(x, p, m, omega, accel, t, dt)
    return PhaseSpacePoint(x, p, s0.frame)


def hamiltonian_energy(s: PhaseSpacePoint, m: float, omega: float,
                       g_E: float) -> float:
    return s.p**2 / (2.0 * m) + 0.5 * m * omega**2 * s.x**2 + m * g_E * s.x


# --- Semiclassical action phases ----------------------------------------------

def action_phase(s0: PhaseSpacePoint, m: float, omega: float, t: float,
                 hbar: float = CONSTANTS.hbar) -> float:
    """Action phase of the harmonic path starting from s0 in frame 2.

    phi = sin(2wt) (p0^2 - (m w x0)^2) / (4 m w hbar) - (p0 x0 / hbar) sin^2(wt)
    """
    if s0.frame is not Frame.SHIFTED:
        raise ParameterError("action_phase expects a frame-2 point")
    x0, p0 = s0.x, s0.p
    return (math.sin(2.0 * omega * t) * (p0 * p0 - (m * omega * x0)**2)
            / (4.0 * m * omega * hbar)
            - (p0 * x0 / hbar) * math.sin(omega * t)**2)


def phase_difference_harmonic(x20: float, p20: float, dx: float, m: float,
                              omega: float, t: float,
                              hbar: float = CONSTANTS.hbar) -> float:
    """Action-phase difference between harmonic paths offset by dx in height."""
    if dx < 0:
        raise ParameterError("dx must be non-negative")
    return (dx * m * omega * (dx + 2.0 * x20) / (4.0 * hbar)
            * math.sin(2.0 * omega * t)
            + dx * p20 / hbar * math.sin(omega * t)**2)


def phase_difference_freefall(dx: float, m: float, g_E: float, t: float,
                              hbar: float = CONSTANTS.hbar) -> float:
    """Transient free-fall phase difference m g_E dx t / hbar."""
    return m * g_E * dx * t / hbar


def export_trajectory_csv(path: str | Path,
                          rows: list[tuple[float, float, float, float, float]]
                          ) -> None:
    """Write (t, x, p, phase, rel_error) rows with the canonical header."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["t_s", "x_m", "p_kgms", "phase_rad", "rel_error"])
        for row in rows:
            writer.writerow([format(v, ".17g") for v in row])
