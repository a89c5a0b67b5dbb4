"""Truncated number-basis simulator used as a brute-force oracle.

Everything here is dense and deliberately simple: the module exists to
verify the closed-form evolutions independently, not to be fast.  All
global-phase comparisons should go through ``overlap_phase`` (the phase
of <reference|state>) rather than per-component arguments.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

NORM_TOL = 1e-8
TAIL_TOL = 1e-10
MAX_DIM = 256


class TruncationError(ValueError):
    """Truncated basis too small for the requested state or operation."""


@dataclass(frozen=True)
class FockVector:
    amps: np.ndarray

    @property
    def dim(self) -> int:
        return self.amps.shape[0]

    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))

    def tail_mass(self) -> float:
        return float(abs(self.amps[-1]) ** 2)

    def check_health(self, norm_tol: float = NORM_TOL,
                     tail_tol: float = TAIL_TOL) -> None:
        n = self.norm()
        if abs(n - 1.0) > norm_tol:
            raise TruncationError(
                f"state norm {n:.12g} drifted beyond {norm_tol:g}; "
                "increase the basis size or the number of steps")
        if self.tail_mass() > tail_tol:
            raise TruncationError(
                f"top-level occupation {self.tail_mass():.3g} exceeds "
                f"{tail_tol:g}; increase the basis size")


def annihilation(dim: int) -> np.ndarray:
    a = np.zeros((dim, dim), dtype=complex)
    ns = np.arange(1, dim)
    a[ns - 1, ns] = np.sqrt(ns)
    return a


def creation(dim: int) -> np.ndarray:
    return annihilation(dim).conj().T


def required_dim(alpha: complex) -> int:
    return int(math.ceil(4.0 * abs(alpha) ** 2 + 25.0))


def coherent_to_fock(alpha: complex, dim: int) -> FockVector:
    """amps[n] = e^{-|a|^2/2} a^n / sqrt(n!), with the truncation rule
    dim > 4|a|^2 + 25."""
    need = required_dim(alpha)
    if dim <= need - 1:
        raise TruncationError(
            f"dim={dim} too small for |alpha|={abs(alpha):.3g}; "
            f"need at least {need}")
    amps = np.empty(dim, dtype=complex)
    amps[0] = 1.0
    for n in range(1, dim):
        amps[n] = amps[n - 1] * alpha / math.sqrt(n)
    amps *= math.exp(-0.5 * abs(alpha) ** 2)
    return FockVector(amps)


def coherent_overlap(alpha: complex, beta: complex) -> complex:
    """Analytic <alpha|beta> = exp(-(|a|^2 + |b|^2)/2 + a* b)."""
    return np.exp(-0.5 * (abs(alpha) ** 2 + abs(beta) ** 2)
                  + np.conj(alpha) * beta)


def overlap(reference: FockVector, state: FockVector) -> complex:
    return complex(np.vdot(reference.amps, state.amps))


def fidelity(reference: FockVector, state: FockVector) -> float:
    return abs(overlap(reference, state)) ** 2


def overlap_phase(reference: FockVector, state: FockVector) -> float:
    return float(np.angle(overlap(reference, state)))


# --- Gates --------------------------------------------------------------------

@dataclass(frozen=True)
class Displace:
    alpha: complex


@dataclass(frozen=True)
class Squeeze:
    z: complex


@dataclass(frozen=True)
class Rotate:
    phi: float


def displacement_matrix(alpha: complex, dim: int) -> np.ndarray:
    a = annihilation(dim)
    return expm(alpha * a.conj().T - np.conj(alpha) * a)


def squeeze_matrix(z: complex, dim: int) -> np.ndarray:
    a = annihilation(dim)
    ad = a.conj().T
    return expm(0.5 * (z * ad @ ad - np.conj(z) * a @ a))


def rotation_matrix(phi: float, dim: int) -> np.ndarray:
    return np.diag(np.exp(1j * phi * np.arange(dim)))


def apply_gate(psi: FockVector, gate: Displace | Squeeze | Rotate) -> FockVector:
    if isinstance(gate, Displace):
        mat = displacement_matrix(gate.alpha, psi.dim)
    elif isinstance(gate, Squeeze):
        mat = squeeze_matrix(gate.z, psi.dim)
    elif isinstance(gate, Rotate):
        mat = rotation_matrix(gate.phi, psi.dim)
    else:
        raise TypeError(f"unknown gate {gate!r}")
    out = FockVector(mat @ psi.amps)
    out.check_health()
    return out


# --- Hamiltonians and propagation ---------------------------------------------

def mode_hamiltonian(omega: float, g: float, dim: int) -> np.ndarray:
    """H/hbar = w ad a + g (ad + a), in rad/s."""
    a = annihilation(dim)
    ad = a.conj().T
    return omega * ad @ a + g * (ad + a)


def quadratic_hamiltonian(omega_basis: float, omega_trap: float, g_lin: float,
                          dim: int) -> np.ndarray:
    """Trap Hamiltonian in the mode basis of ``omega_basis``.

    H/hbar = (w_b/4) P^2 + (w^2 / 4 w_b) X^2 + g X with X = a + ad,
    P = i(ad - a); ``g_lin`` is the linear coupling (e.g. the gravitational
    drive) in rad/s.  Includes the zero-point offset, which only affects
    global phase.
    """
    a = annihilation(dim)
    ad = a.conj().T
    X = a + ad
    P = 1j * (ad - a)
    return (0.25 * omega_basis * P @ P
            + 0.25 * (omega_trap ** 2 / omega_basis) * X @ X
            + g_lin * X)


def evolve_schrodinger(psi: FockVector, hamiltonian: np.ndarray, t: float,
                       steps: int = 1) -> FockVector:
    """Propagate by expm(-i H t) applied in ``steps`` equal segments."""
    if steps < 1:
        raise ValueError("steps must be >= 1")
    herm_err = np.max(np.abs(hamiltonian - hamiltonian.conj().T))
    if herm_err > 0.0:
        raise ValueError(f"Hamiltonian not Hermitian (max dev {herm_err:g})")
    u = expm(-1j * hamiltonian * (t / steps))
    amps = psi.amps
    for _ in range(steps):
        amps = u @ amps
    out = FockVector(amps)
    out.check_health()
    return out
