"""Coherent-state algebra and closed-form quantum evolutions.

Implements the displaced-oscillator evolution (exact and second order in
time), the sudden frequency-plus-equilibrium quench through its
squeeze-displace-rotate decomposition, and the branch phase differences
that make up the interferometric observable.

Global phases are never discarded: each branch carries a complex
``weight`` and every evolution multiplies it by the appropriate phase
prefactor.  The whole protocol's observable lives in these prefactors.

Conventions: D(a) = exp(a ad - a* a) (so a real displacement shifts the
adimensional position X = <a + ad> by 2a), S(z) = exp((z ad^2 - z* a^2)/2),
R(phi) = exp(i phi ad a).  The mode Hamiltonian is H/hbar = w ad a + g(ad + a)
with g = g_E sqrt(m / (2 hbar w)) > 0 for gravity along -x.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .params import ParameterError

UNITARITY_TOL = 1e-12


@dataclass(frozen=True)
class CoherentBranch:
    """A coherent amplitude plus its accumulated complex weight."""
    alpha: complex
    weight: complex = 1.0 + 0.0j

    def rotated(self, phase: float) -> "CoherentBranch":
        return CoherentBranch(self.alpha, self.weight * cmath.exp(1j * phase))


@dataclass(frozen=True)
class DisplaceComposition:
    gamma: complex
    phase: float


def displace_compose(alpha: complex, beta: complex) -> DisplaceComposition:
    """Compose D(alpha) D(beta) = e^{i Im(alpha beta*)} D(alpha + beta).

    The first argument is the operator applied last (leftmost).
    """
    return DisplaceComposition(alpha + beta, (alpha * beta.conjugate()).imag)


def apply_displacement(branch: CoherentBranch, beta: complex) -> CoherentBranch:
    """Left-apply D(beta) to the branch: D(beta)|alpha> = e^{i Im(beta a*)}|a+b>."""
    comp = displace_compose(beta, branch.alpha)
    return CoherentBranch(comp.gamma, branch.weight * cmath.exp(1j * comp.phase))


def evolve_displaced_oscillator(branch: CoherentBranch, omega: float, g: float,
                                t: float) -> CoherentBranch:
    """Exact evolution under H/hbar = w ad a + g (ad + a).

    |a> -> e^{(g/2w)[a*(1 - e^{iwt}) - a (1 - e^{-iwt})]}
           |a e^{-iwt} + (g/w)(e^{-iwt} - 1)>
    times the state-independent phase e^{i (g/w)^2 (wt - sin wt)} from the
    shifted ground-state energy -g^2/w (it cancels between interferometer
    branches but is kept so the evolution is exactly unitary-equivalent
    to the Schrodinger propagator).
    """
    if omega <= 0:
        raise ParameterError("omega must be positive")
    alpha = branch.alpha
    rot = cmath.exp(-1j * omega * t)
    amplitude = alpha * rot + (g / omega) * (rot - 1.0)
    phase = (g / omega) * (alpha.conjugate() * (1.0 - rot.conjugate())).imag
    phase += (g / omega) ** 2 * (omega * t - math.sin(omega * t))
    return CoherentBranch(amplitude, branch.weight * cmath.exp(1j * phase))


@dataclass(frozen=True)
class BranchExpansion:
    branch: CoherentBranch
    boost_phase: float          # -Re(alpha) g t; identifies as -m g_E x t/(2 hbar)
    translation_phase: float    # -Im(alpha) w g t^2 / 2; -g_E p t^2/(4 hbar)
    omega_t: float
    guard_exceeded: bool


def quadratic_branch_expansion(branch: CoherentBranch, omega: float, g: float,
                               t: float, guard: float = 0.1) -> BranchExpansion:
    """Second-order short-time evolution (boost plus translation picture).

    Amplitude a(1 - iwt - w^2 t^2/2) - i g t - w g t^2/2, with phase
    prefactors exp(-i(a*+a)gt/2) and exp((a*-a) w g t^2/4).
    """
    alpha = branch.alpha
    wt = omega * t
    boost = -alpha.real * g * t
    translation = -alpha.imag * omega * g * t * t / 2.0
    amplitude = (alpha * (1.0 - 1j * wt - 0.5 * wt * wt)
                 - 1j * g * t - 0.5 * omega * g * t * t)
    evolved = CoherentBranch(
        amplitude, branch.weight * cmath.exp(1j * (boost + translation)))
    return BranchExpansion(
        branch=evolved,
        boost_phase=boost,
        translation_phase=translation,
        omega_t=wt,
        guard_exceeded=abs(wt) >= guard,
    )


# --- Sudden frequency + equilibrium quench ------------------------------------

@dataclass(frozen=True)
class QuenchParams:
    z: complex          # dynamical squeeze, |z| e^{i theta}
    epsilon: complex    # displacement
    phi: float          # rotation angle
    r: float            # static squeeze, r = ln(w2/w1)/2


def quench_params(omega1: float, omega2: float, delta: float,
                  t: float) -> QuenchParams:
    """Time-dependent squeeze-displace-rotate parameters of the sudden quench.

    ``delta`` is the shifted equilibrium in adimensional units, g2/w2.
    The dynamical squeeze is recovered from e^{i theta} tanh|z| on the
    principal branch, theta in (-pi, pi].
    """
    if omega1 <= 0 or omega2 <= 0:
        raise ParameterError("omega1 and omega2 must be positive")
    r = 0.5 * math.log(omega2 / omega1)
    th = math.tanh(r)
    e_m2 = cmath.exp(-2j * omega2 * t)
    rhs = (e_m2 - 1.0) * th / (1.0 - e_m2 * th * th)
    mod = abs(rhs)
    if mod >= 1.0:
        raise ParameterError(
            f"squeeze relation |tanh z| = {mod:g} >= 1; quench parameters "
            "undefined for these inputs")
    z = 0.0j if mod == 0.0 else math.atanh(mod) * rhs / mod
    num = 1.0 - cmath.exp(2j * omega2 * t) * th * th
    eiphi = num / abs(num) * cmath.exp(-1j * omega2 * t)
    phi = cmath.phase(eiphi)
    epsilon = (delta * eiphi * (1.0 - cmath.exp(1j * omega2 * t))
               * (math.cosh(r) + cmath.exp(-1j * omega2 * t) * math.sinh(r)))
    return QuenchParams(z=z, epsilon=epsilon, phi=phi, r=r)


def commute_squeeze_displacement(z: complex, xi: complex) -> complex:
    """gamma such that S(z) D(xi) = D(gamma) S(z).

    gamma = xi cosh|z| - xi* sinh|z| e^{i(theta + pi)}, theta = arg z.
    """
    mod = abs(z)
    if mod == 0.0:
        return xi
    phase = z / mod
    return xi * math.cosh(mod) + xi.conjugate() * math.sinh(mod) * phase


@dataclass(frozen=True)
class ExactQuenchResult:
    branch: CoherentBranch      # |gamma> with accumulated phase
    gamma: complex
    residual_squeeze: complex   # z left-applied to the state, not folded in
    params: QuenchParams


def evolve_quench_exact(branch: CoherentBranch, omega1: float, omega2: float,
                        g2: float, t: float) -> ExactQuenchResult:
    """Quench evolution via the exact operator decomposition.

    |a> -> e^{i Im(eps (a e^{i phi})*)} D(gamma) S(z) |0>, valid at all t.
    The returned branch treats the state as the coherent |gamma>; the
    neglected squeeze z is reported so callers can judge the approximation.
    """
    if omega2 <= 0:
        raise ParameterError("omega2 must be positive")
    qp = quench_params(omega1, omega2, g2 / omega2, t)
    alpha_rot = branch.alpha * cmath.exp(1j * qp.phi)
    xi = qp.epsilon + alpha_rot
    gamma = commute_squeeze_displacement(qp.z, xi)
    phase = (qp.epsilon * alpha_rot.conjugate()).imag
    evolved = CoherentBranch(gamma, branch.weight * cmath.exp(1j * phase))
    return ExactQuenchResult(branch=evolved, gamma=gamma,
                             residual_squeeze=qp.z, params=qp)


def quench_linear_map(omega1: float, omega2: float,
                      t: float) -> tuple[complex, complex]:
    """Second-order homogeneous map (c1, c2): alpha -> c1 alpha + c2 alpha*.

    c1 = 1 - i (w1^2 + w2^2) t / (2 w1) - w2^2 t^2 / 2
    c2 = i (w1^2 - w2^2) t / (2 w1)
    (the alpha* term has no t^2 contribution at this order).
    """
    c1 = (1.0 - 1j * (omega1**2 + omega2**2) * t / (2.0 * omega1)
          - 0.5 * omega2**2 * t * t)
    c2 = 1j * (omega1**2 - omega2**2) * t / (2.0 * omega1)
    return c1, c2


@dataclass(frozen=True)
class QuenchEvolution:
    branch: CoherentBranch
    c1: complex                 # homogeneous map coefficients (on alpha)
    c2: complex                 # ... and on alpha*
    drift: complex              # -i g1 t - w1 g1 t^2 / 2
    boost_phase: float
    translation_phase: float
    squeeze_magnitude: float    # |z| of the neglected dynamical squeeze
    omega1_t: float
    guard_exceeded: bool


def evolve_quench(branch: CoherentBranch, omega1: float, omega2: float,
                  g2: float, t: float, guard: float = 0.1) -> QuenchEvolution:
    """Second-order quench evolution with squeezing neglected.

    Expressed in the stiff-trap mode basis with g1 = sqrt(w2/w1) g2:
    |a> -> e^{-i(a*+a)g1 t/2} e^{(a*-a) w1 g1 t^2/4}
           |c1 a + c2 a* - i g1 t - w1 g1 t^2/2>.
    For omega2 = omega1 this reduces to quadratic_branch_expansion exactly.
    """
    if omega1 <= 0 or omega2 <= 0:
        raise ParameterError("omega1 and omega2 must be positive")
    g1 = math.sqrt(omega2 / omega1) * g2
    alpha = branch.alpha
    c1, c2 = quench_linear_map(omega1, omega2, t)
    drift = -1j * g1 * t - 0.5 * omega1 * g1 * t * t
    boost = -alpha.real * g1 * t
    translation = -alpha.imag * omega1 * g1 * t * t / 2.0
    amplitude = c1 * alpha + c2 * alpha.conjugate() + drift
    evolved = CoherentBranch(
        amplitude, branch.weight * cmath.exp(1j * (boost + translation)))
    w1t = omega1 * t
    z_mag = abs(0.5 * (omega1**2 - omega2**2) * t / omega1)
    return QuenchEvolution(
        branch=evolved,
        c1=c1, c2=c2, drift=drift,
        boost_phase=boost,
        translation_phase=translation,
        squeeze_magnitude=z_mag,
        omega1_t=w1t,
        guard_exceeded=abs(w1t) >= guard,
    )


def branch_phase_difference(beta: float, g: float, t: float,
                            omega2: float) -> tuple[float, float]:
    """Leading gravitational phase g t beta and its cubic correction.

    ``beta`` is the adimensional branch separation Delta x / delta_R (twice
    the displacement-operator amplitude).  Returns (phi_grav, phi3) with
    phi3 = -(1/6) g w2^2 t^3 beta; |phi3/phi_grav| = (w2 t)^2 / 6.
    """
    phi_grav = g * t * beta
    phi3 = -(g * omega2**2 * t**3 * beta) / 6.0
    return phi_grav, phi3


def check_unitarity(branch: CoherentBranch,
                    tol: float = UNITARITY_TOL) -> None:
    if abs(abs(branch.weight) - 1.0) > tol:
        raise ParameterError(
            f"branch weight modulus {abs(branch.weight):.15g} deviates from "
            "unity beyond tolerance")
