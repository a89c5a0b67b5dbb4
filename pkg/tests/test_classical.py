import csv
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from catsim import classical
from catsim.classical import (
    Frame,
    PhaseSpacePoint,
    TimeDependentTrapSpec,
    action_phase,
    adimensionalise,
    evolve_free_fall,
    evolve_harmonic_gravity,
    evolve_mode_quadratic,
    export_trajectory_csv,
    hamiltonian_energy,
    mode_exact,
    ode_oracle,
    phase_difference_freefall,
    phase_difference_harmonic,
    to_shifted_frame,
    to_trap_frame,
)
from catsim.params import CONSTANTS, ParameterError

M = 1e-15
G_E = 9.81


def test_equilibrium_is_fixed_point():
    omega = 2.0
    s0 = PhaseSpacePoint(-G_E / omega**2, 0.0)
    s1 = evolve_harmonic_gravity(s0, M, omega, G_E, 0.7)
    assert s1.x == pytest.approx(s0.x, rel=1e-12)
    assert s1.p == pytest.approx(0.0, abs=1e-25)


def test_period_returns_initial():
    omega = 3.0
    s0 = PhaseSpacePoint(1e-6, 2e-21)
    s1 = evolve_harmonic_gravity(s0, M, omega, G_E, 2.0 * math.pi / omega)
    assert s1.x == pytest.approx(s0.x, rel=1e-12)
    assert s1.p == pytest.approx(s0.p, rel=1e-9, abs=1e-30)


def test_energy_conserved_along_exact_solution():
    omega = 2.0
    s0 = PhaseSpacePoint(1e-6, 2e-21)
    e0 = hamiltonian_energy(s0, M, omega, G_E)
    for t in (0.1, 0.5, 1.3, 2.9):
        st_ = evolve_harmonic_gravity(s0, M, omega, G_E, t)
        e = hamiltonian_energy(st_, M, omega, G_E)
        assert e == pytest.approx(e0, rel=1e-12)


def test_frame_round_trip():
    omega = 2.0
    s0 = PhaseSpacePoint(1e-6, 2e-21)
    s2 = to_shifted_frame(s0, omega)
    assert s2.frame is Frame.SHIFTED
    assert s2.x == pytest.approx(s0.x + G_E / omega**2, rel=1e-15)
    back = to_trap_frame(s2, omega)
    assert back.x == pytest.approx(s0.x, rel=1e-9, abs=1e-20)
    assert back.frame is Frame.TRAP_ORIGIN


def test_free_fall_kinematics():
    s0 = PhaseSpacePoint(1.0, 2e-16)
    s1 = evolve_free_fall(s0, M, G_E, 3.0)
    assert s1.x == pytest.approx(1.0 + (2e-16 / M) * 3.0 - 0.5 * G_E * 9.0)
    assert s1.p == pytest.approx(2e-16 - M * G_E * 3.0)


def test_rk4_matches_closed_form():
    omega = 2.0
    s0 = PhaseSpacePoint(1e-6, 2e-21)
    spec = TimeDependentTrapSpec.constant(M, omega, G_E)
    t = 2.0 * math.pi / omega
    num = ode_oracle(s0, spec, t, dt=t / 20000)
    ref = evolve_harmonic_gravity(s0, M, omega, G_E, t)
    scale = abs(s0.x) + G_E / omega**2
    assert abs(num.x - ref.x) / scale < 1e-9
    assert abs(num.p - ref.p) / (M * omega * scale) < 1e-9


def test_rk4_step_guard():
    spec = TimeDependentTrapSpec.constant(M, 100.0, G_E)
    with pytest.raises(ParameterError, match="dt"):
        ode_oracle(PhaseSpacePoint(0.0, 0.0), spec, 1.0, dt=0.01)
    with pytest.raises(ParameterError, match="dt"):
        ode_oracle(PhaseSpacePoint(0.0, 0.0), spec, 1.0, dt=0.0)


def test_rk4_through_switch():
    spec = TimeDependentTrapSpec.sudden_quench(M, 2.0, 0.5, G_E,
                                               switch_time=0.4)
    s0 = PhaseSpacePoint(1e-6, 0.0)
    num = ode_oracle(s0, spec, 1.0, dt=1e-5)
    mid = evolve_harmonic_gravity(s0, M, 2.0, 0.0, 0.4)
    ref = evolve_harmonic_gravity(mid, M, 0.5, G_E, 0.6)
    scale = abs(s0.x) + G_E / 0.5**2
    assert abs(num.x - ref.x) / scale < 1e-9


def test_mode_exact_matches_phase_space():
    """The adimensional mode amplitude reproduces the classical trajectory."""
    omega = 2.0
    hbar = CONSTANTS.hbar
    s0 = PhaseSpacePoint(1e-6, 2e-21)
    ad0 = adimensionalise(s0, M, omega)
    a0 = (ad0.X + 1j * ad0.P) / 2.0
    g = G_E * math.sqrt(M / (2.0 * hbar * omega))
    for t in (0.3, 1.1):
        a_t = mode_exact(a0, omega, g, t)
        ref = evolve_harmonic_gravity(s0, M, omega, G_E, t)
        ad = adimensionalise(ref, M, omega)
        assert a_t.real * 2.0 == pytest.approx(ad.X, rel=1e-9)
        assert a_t.imag * 2.0 == pytest.approx(ad.P, rel=1e-9)


def test_mode_quadratic_sign_and_guard():
    res = evolve_mode_quadratic(0.0j, 1.0, 0.5, 0.01)
    # the source term enters as -i g t at leading order
    assert res.amplitude.imag == pytest.approx(-0.5 * 0.01, rel=1e-2)
    assert not res.guard_exceeded
    assert evolve_mode_quadratic(0.0j, 1.0, 0.5, 0.2).guard_exceeded


def test_mode_quadratic_converges_cubically():
    errs = []
    for t in (0.02, 0.01):
        res = evolve_mode_quadratic(0.7 - 0.2j, 1.0, 0.3, t)
        errs.append(abs(res.amplitude - res.exact))
    assert errs[0] / errs[1] == pytest.approx(8.0, rel=0.15)


def test_action_phase_requires_frame2():
    with pytest.raises(ParameterError, match="frame-2"):
        action_phase(PhaseSpacePoint(1.0, 0.0, Frame.TRAP_ORIGIN),
                     M, 1.0, 1.0)


def test_phase_difference_short_time_equals_freefall():
    omega, dx = 5e-6, 1e-14
    x20 = G_E / omega**2
    t = 1e-3
    harm = phase_difference_harmonic(x20, 0.0, dx, M, omega, t)
    grav = phase_difference_freefall(dx, M, G_E, t)
    assert harm == pytest.approx(grav, rel=1e-8)


def test_phase_difference_relative_error_identity():
    omega, dx = 5e-6, 1e-14
    x20 = G_E / omega**2
    for frac in (0.05, 0.3, 0.7):
        t = frac * 2.0 * math.pi / omega
        harm = phase_difference_harmonic(x20, 0.0, dx, M, omega, t)
        grav = phase_difference_freefall(dx, M, G_E, t)
        rel = 1.0 - harm / grav
        assert rel == pytest.approx(
            1.0 - math.sin(2.0 * omega * t) / (2.0 * omega * t), abs=1e-9)


def test_phase_difference_from_action_phases():
    """The closed-form difference equals the difference of action phases."""
    omega, dx = 2.0, 1e-9
    x20, p20 = 1e-6, 2e-21
    t = 0.8
    lo = action_phase(PhaseSpacePoint(x20, p20, Frame.SHIFTED), M, omega, t)
    hi = action_phase(PhaseSpacePoint(x20 + dx, p20, Frame.SHIFTED),
                      M, omega, t)
    direct = phase_difference_harmonic(x20, p20, dx, M, omega, t)
    assert direct == pytest.approx(-(hi - lo), rel=1e-9)


def test_export_csv_round_trip(tmp_path):
    rows = [(0.1, 1.0 / 3.0, -2e-21, 0.930235366053317, 1e-20)]
    path = tmp_path / "traj.csv"
    export_trajectory_csv(path, rows)
    with open(path) as fh:
        reader = csv.reader(fh)
        header = next(reader)
        assert header == ["t_s", "x_m", "p_kgms", "phase_rad", "rel_error"]
        got = next(reader)
    assert [float(v) for v in got] == list(rows[0])


@settings(max_examples=50, deadline=None)
@given(
    x=st.floats(-1e-3, 1e-3),
    p=st.floats(-1e-18, 1e-18),
    omega=st.floats(0.1, 50.0),
    t=st.floats(0.0, 10.0),
)
def test_energy_conservation_property(x, p, omega, t):
    s0 = PhaseSpacePoint(x, p)
    s1 = evolve_harmonic_gravity(s0, M, omega, G_E, t)
    e0 = hamiltonian_energy(s0, M, omega, G_E)
    e1 = hamiltonian_energy(s1, M, omega, G_E)
    scale = abs(e0) + M * G_E**2 / omega**2
    assert abs(e1 - e0) <= 1e-9 * scale


@settings(max_examples=50, deadline=None)
@given(
    x=st.floats(-1e-3, 1e-3),
    p=st.floats(-1e-18, 1e-18),
    omega=st.floats(0.1, 50.0),
)
def test_frame_round_trip_property(x, p, omega):
    s0 = PhaseSpacePoint(x, p)
    back = to_trap_frame(to_shifted_frame(s0, omega), omega)
    assert back.x == pytest.approx(s0.x, abs=1e-12 * (abs(x) + G_E / omega**2))
    assert back.p == s0.p
