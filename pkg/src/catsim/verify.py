"""Oracle-equivalence suite: closed forms vs brute-force propagation.

Every check pits a closed-form result from ``classical`` or ``gaussian``
against an independent oracle (truncated Fock-space matrix exponentials,
or fixed-step RK4) and reports the measured deviation next to its
tolerance.  Checks always call through the module namespaces so a
deliberately injected fault in a formula is caught here.
"""

from __future__ import annotations

import inspect
import math
from dataclasses import dataclass

import numpy as np

from . import classical, fock_oracle, gaussian


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    measured: float
    tolerance: float
    detail: str = ""


def _result(name: str, measured: float, tolerance: float,
            detail: str = "") -> CheckResult:
    return CheckResult(name, measured <= tolerance, float(measured),
                       tolerance, detail)


# --- Quantum closed forms vs Fock oracle --------------------------------------

def check_displaced_oscillator_fidelity(dim: int = 60,
                                        quick: bool = False) -> CheckResult:
    """Exact coherent evolution vs expm of the mode Hamiltonian."""
    alpha, omega, g = 1.0 + 0.0j, 1.0, 0.1
    times = [0.1, 0.5] if quick else [0.05, 0.1, 0.2, 0.3, 0.4, 0.5]
    h = fock_oracle.mode_hamiltonian(omega, g, dim)
    psi0 = fock_oracle.coherent_to_fock(alpha, dim)
    worst = 0.0
    for t in times:
        numeric = fock_oracle.evolve_schrodinger(psi0, h, t)
        branch = gaussian.evolve_displaced_oscillator(
            gaussian.CoherentBranch(alpha), omega, g, t)
        reference = fock_oracle.coherent_to_fock(branch.alpha, dim)
        worst = max(worst, 1.0 - fock_oracle.fidelity(reference, numeric))
    return _result("displaced_oscillator_fidelity", worst, 1e-8,
                   f"dim={dim}, infidelity over t<=0.5")


def check_displaced_oscillator_phase(dim: int = 60,
                                     quick: bool = False) -> CheckResult:
    """Global phase prefactor of the exact evolution vs the oracle."""
    alpha, omega, g = 1.0 + 0.0j, 1.0, 0.1
    times = [0.5] if quick else [0.1, 0.3, 0.5]
    h = fock_oracle.mode_hamiltonian(omega, g, dim)
    psi0 = fock_oracle.coherent_to_fock(alpha, dim)
    worst = 0.0
    for t in times:
        numeric = fock_oracle.evolve_schrodinger(psi0, h, t)
        branch = gaussian.evolve_displaced_oscillator(
            gaussian.CoherentBranch(alpha), omega, g, t)
        reference = fock_oracle.coherent_to_fock(branch.alpha, dim)
        measured = fock_oracle.overlap_phase(reference, numeric)
        expected = math.atan2(branch.weight.imag, branch.weight.real)
        delta = abs(_wrap(measured - expected))
        worst = max(worst, delta)
    return _result("displaced_oscillator_phase", worst, 1e-6,
                   f"dim={dim}, phase error in rad")


def check_truncation_stability() -> CheckResult:
    """Doubling the basis moves the oracle fidelity by < 1e-9."""
    alpha, omega, g, t = 1.0 + 0.0j, 1.0, 0.1, 0.5
    fids = []
    for dim in (60, 120):
        h = fock_oracle.mode_hamiltonian(omega, g, dim)
        psi0 = fock_oracle.coherent_to_fock(alpha, dim)
        numeric = fock_oracle.evolve_schrodinger(psi0, h, t)
        branch = gaussian.evolve_displaced_oscillator(
            gaussian.CoherentBranch(alpha), omega, g, t)
        reference = fock_oracle.coherent_to_fock(branch.alpha, dim)
        fids.append(fock_oracle.fidelity(reference, numeric))
    return _result("truncation_stability", abs(fids[0] - fids[1]), 1e-9,
                   "fidelity shift under N -> 2N")


def check_boost_phase(dim: int = 60) -> CheckResult:
    """Second-order expansion phase (boost + translation) vs the oracle.

    Compares phase differences between two initial amplitudes so the
    alpha-independent global phase (zero-point, drift) cancels.
    """
    omega, g, t = 1.0, 0.2, 0.02
    h = fock_oracle.mode_hamiltonian(omega, g, dim)
    worst = 0.0
    for alpha in (1.5 + 0.0j, 0.0 + 1.5j, 1.0 - 1.0j):
        exact = gaussian.evolve_displaced_oscillator(
            gaussian.CoherentBranch(alpha), omega, g, t)
        approx = gaussian.quadratic_branch_expansion(
            gaussian.CoherentBranch(alpha), omega, g, t)
        # oracle phase relative to the alpha = 0 evolution
        psi = fock_oracle.evolve_schrodinger(
            fock_oracle.coherent_to_fock(alpha, dim), h, t)
        psi0 = fock_oracle.evolve_schrodinger(
            fock_oracle.coherent_to_fock(0.0j, dim), h, t)
        oracle_rel = (
            fock_oracle.overlap_phase(
                fock_oracle.coherent_to_fock(exact.alpha, dim), psi)
            - fock_oracle.overlap_phase(
                fock_oracle.coherent_to_fock(
                    gaussian.evolve_displaced_oscillator(
                        gaussian.CoherentBranch(0.0j), omega, g, t).alpha,
                    dim), psi0))
        closed_rel = (_phase(approx.branch.weight)
                      - _phase(gaussian.quadratic_branch_expansion(
                          gaussian.CoherentBranch(0.0j), omega, g, t
                          ).branch.weight))
        worst = max(worst, abs(_wrap(oracle_rel - closed_rel)))
    # third-order terms dominate the residual: ~ |alpha| (w t)^2 g t
    return _result("boost_phase", worst, 5e-6,
                   "relative phase, 2nd-order expansion vs oracle")


def check_quench_decomposition(dim: int = 80) -> CheckResult:
    """S(z) D(eps) R(phi) |alpha> vs expm of the quench Hamiltonian."""
    omega1, omega2, g2 = 1.0, 0.5, 0.2
    alpha = 0.5 + 0.3j
    g1 = math.sqrt(omega2 / omega1) * g2
    worst = 0.0
    for t in (0.01, 0.05):
        qp = gaussian.quench_params(omega1, omega2, g2 / omega2, t)
        psi = fock_oracle.coherent_to_fock(alpha, dim)
        psi = fock_oracle.apply_gate(psi, fock_oracle.Rotate(qp.phi))
        psi = fock_oracle.apply_gate(psi, fock_oracle.Displace(qp.epsilon))
        psi = fock_oracle.apply_gate(psi, fock_oracle.Squeeze(qp.z))
        h = fock_oracle.quadratic_hamiltonian(omega1, omega2, g1, dim)
        numeric = fock_oracle.evolve_schrodinger(
            fock_oracle.coherent_to_fock(alpha, dim), h, t)
        worst = max(worst, 1.0 - fock_oracle.fidelity(psi, numeric))
    return _result("quench_decomposition", worst, 1e-6,
                   "infidelity, decomposition vs direct propagation")


def check_commutation_identity(dim: int = 80) -> CheckResult:
    """S(z) D(xi) = D(gamma) S(z) as a vector-norm identity."""
    z = 0.3 * np.exp(0.7j)
    xi = 0.8 - 0.4j
    gamma = gaussian.commute_squeeze_displacement(z, xi)
    psi = fock_oracle.coherent_to_fock(0.2 + 0.1j, dim)
    lhs = fock_oracle.apply_gate(
        fock_oracle.apply_gate(psi, fock_oracle.Displace(xi)),
        fock_oracle.Squeeze(z))
    rhs = fock_oracle.apply_gate(
        fock_oracle.apply_gate(psi, fock_oracle.Squeeze(z)),
        fock_oracle.Displace(gamma))
    diff = float(np.linalg.norm(lhs.amps - rhs.amps))
    return _result("commutation_identity", diff, 1e-7, "vector norm")


def check_quench_second_order(quick: bool = False) -> CheckResult:
    """Second-order quench map vs the exact decomposition route.

    Both the coherent amplitude and the phase prefactor of the
    second-order map must approach the exact decomposition with an
    O(t^3) remainder; the measured value is the residual divided by t^3,
    which stays bounded by an O(1) constant at these unit-scale inputs.
    """
    omega1, omega2, g2 = 1.0, 0.5, 0.2
    alphas = [0.5 + 0.3j] if quick else [0.0j, 0.5 + 0.3j, 1.0 - 0.2j]
    worst = 0.0
    for alpha in alphas:
        for t in (0.001, 0.005, 0.01):
            approx = gaussian.evolve_quench(
                gaussian.CoherentBranch(alpha), omega1, omega2, g2, t)
            exact = gaussian.evolve_quench_exact(
                gaussian.CoherentBranch(alpha), omega1, omega2, g2, t)
            amp_err = abs(approx.branch.alpha - exact.gamma) / t**3
            phase_err = abs(_wrap(_phase(approx.branch.weight)
                                  - _phase(exact.branch.weight))) / t**3
            worst = max(worst, amp_err, phase_err)
    return _result("quench_second_order", worst, 5.0,
                   "O(t^3) remainder coefficient, amplitude and phase")


# --- Classical closed forms vs RK4 --------------------------------------------

def check_classical_period(quick: bool = False) -> CheckResult:
    """Closed-form trap trajectory vs RK4 over one full period."""
    m, omega, g_E = 1e-15, 2.0, 9.81
    s0 = classical.PhaseSpacePoint(1e-6, 2e-21)
    period = 2.0 * math.pi / omega
    spec = classical.TimeDependentTrapSpec.constant(m, omega, g_E)
    dt = period / (5000 if quick else 20000)
    worst = 0.0
    times = [period] if quick else [period / 4, period / 2, period]
    for t in times:
        num = classical.ode_oracle(s0, spec, t, dt)
        ref = classical.evolve_harmonic_gravity(s0, m, omega, g_E, t)
        scale_x = abs(s0.x) + g_E / omega**2
        scale_p = m * omega * scale_x
        worst = max(worst, abs(num.x - ref.x) / scale_x,
                    abs(num.p - ref.p) / scale_p)
    return _result("classical_period", worst, 1e-9, "relative error, RK4")


def check_freefall_limit() -> CheckResult:
    """omega = 0: RK4 recovers the free-fall kinematics exactly."""
    m, g_E = 1e-15, 9.81
    s0 = classical.PhaseSpacePoint(1e-6, 2e-21)
    spec = classical.TimeDependentTrapSpec.constant(m, 0.0, g_E)
    t = 0.37
    num = classical.ode_oracle(s0, spec, t, dt=1e-3)
    ref = classical.evolve_free_fall(s0, m, g_E, t)
    # RK4 is exact for polynomial dynamics up to machine rounding
    err = max(abs(num.x - ref.x) / max(abs(ref.x), 1e-300),
              abs(num.p - ref.p) / max(abs(ref.p), 1e-300))
    return _result("freefall_limit", err, 1e-12, "relative error at omega=0")


def check_quench_classical_switch() -> CheckResult:
    """Piecewise RK4 through a sudden quench vs composed closed forms."""
    m, omega1, omega2, g_E = 1e-15, 2.0, 0.5, 9.81
    s0 = classical.PhaseSpacePoint(1e-6, 0.0)
    t_switch, t_end = 0.3, 0.9
    spec = classical.TimeDependentTrapSpec.sudden_quench(
        m, omega1, omega2, g_E, switch_time=t_switch)
    num = classical.ode_oracle(s0, spec, t_end, dt=2e-5)
    mid = classical.evolve_harmonic_gravity(s0, m, omega1, 0.0, t_switch)
    ref = classical.evolve_harmonic_gravity(
        mid, m, omega2, g_E, t_end - t_switch)
    scale_x = abs(s0.x) + g_E / omega2**2
    err = max(abs(num.x - ref.x) / scale_x,
              abs(num.p - ref.p) / (m * omega2 * scale_x))
    return _result("quench_classical_switch", err, 1e-9,
                   "relative error through the switch")


def check_mode_quadratic() -> CheckResult:
    """Second-order mode amplitude vs the closed form, bounded ~ (wt)^3."""
    omega, g = 1.0, 0.3
    worst = 0.0
    for t in (0.001, 0.01, 0.05):
        res = classical.evolve_mode_quadratic(0.7 - 0.2j, omega, g, t)
        bound = ((abs(res.amplitude - res.exact))
                 / ((omega * t) ** 3 * (abs(0.7 - 0.2j) + g / omega)))
        worst = max(worst, bound)
    return _result("mode_quadratic", worst, 1.0,
                   "third-order remainder / analytic bound")


def check_action_phase_error() -> CheckResult:
    """Transient relative error follows 1 - sin(2wt)/(2wt)."""
    m, omega, g_E = 1e-15, 5e-6, 9.81
    dx = 1e-14
    x20 = g_E / omega**2
    worst = 0.0
    for frac in (0.01, 0.1, 0.25, 0.5, 0.9):
        t = frac * 2.0 * math.pi / omega
        harm = classical.phase_difference_harmonic(x20, 0.0, dx, m, omega, t)
        grav = classical.phase_difference_freefall(dx, m, g_E, t)
        rel = 1.0 - harm / grav
        expected = 1.0 - math.sin(2.0 * omega * t) / (2.0 * omega * t)
        worst = max(worst, abs(rel - expected))
    return _result("action_phase_error", worst, 1e-9,
                   "deviation from 1 - sin(2wt)/(2wt)")


_FULL = (
    check_displaced_oscillator_fidelity,
    check_displaced_oscillator_phase,
    check_truncation_stability,
    check_boost_phase,
    check_quench_decomposition,
    check_commutation_identity,
    check_quench_second_order,
    check_classical_period,
    check_freefall_limit,
    check_quench_classical_switch,
    check_mode_quadratic,
    check_action_phase_error,
)

_QUICK = (
    check_displaced_oscillator_fidelity,
    check_displaced_oscillator_phase,
    check_commutation_identity,
    check_quench_second_order,
    check_classical_period,
    check_freefall_limit,
    check_mode_quadratic,
    check_action_phase_error,
)


def run_all(quick: bool = False) -> list[CheckResult]:
    results = []
    for fn in (_QUICK if quick else _FULL):
        kwargs = {}
        if "quick" in inspect.signature(fn).parameters:
            kwargs["quick"] = quick
        results.append(fn(**kwargs))
    return results


def _wrap(phi: float) -> float:
    return (phi + math.pi) % (2.0 * math.pi) - math.pi


def _phase(w: complex) -> float:
    return math.atan2(w.imag, w.real)
