"""Brute-force Dicke-basis reference implementation.

Dense (N+1) x (N+1) matrices over the basis |J, m>, m = -J..J ascending.
The twisting-plus-dephasing channel is applied exactly, element by
element, so every closed form in :mod:`twistsense.moments` can be checked
against an independent trace.  Correctness reference for small N, not a
performance path.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.linalg import expm

from .moments import SpinEnsemble

ORACLE_MAX_PARTICLES = 4096

#: |slope| below this multiple of J^2 is reported as a diverging sensitivity.
SLOPE_FLOOR = 1e-14


class DivergentSlopeError(ArithmeticError):
    """The signal slope is numerically zero; the sensitivity diverges."""


def m_values(particles: int) -> np.ndarray:
    """Dicke magnetic quantum numbers m = -J..J, ascending."""
    return np.arange(particles + 1) - particles / 2.0


@lru_cache(maxsize=64)
def _operators(particles: int) -> dict[str, np.ndarray]:
    """Dense collective-spin operators, keyed by name."""
    J = particles / 2.0
    m = m_values(particles)
    ladder = np.sqrt((J - m[:-1]) * (J + m[:-1] + 1.0))
    jp = np.zeros((particles + 1, particles + 1), dtype=complex)
    jp[np.arange(1, particles + 1), np.arange(particles)] = ladder
    jm = jp.conj().T
    jx = 0.5 * (jp + jm)
    jy = -0.5j * (jp - jm)
    jz = np.diag(m).astype(complex)
    ops = {"J+": jp, "Jz": jz, "Jx": jx, "Jy": jy}
    for name, op in list(ops.items()):
        ops[name + "2"] = op @ op
    return ops


@dataclass(frozen=True)
class DickeState:
    """Pure state as amplitudes over |J, m>, m ascending."""

    amplitudes: np.ndarray

    def __post_init__(self):
        norm2 = float(np.sum(np.abs(self.amplitudes) ** 2))
        if abs(norm2 - 1.0) > 1e-12:
            raise ValueError(f"state norm^2 = {norm2}, not 1 within 1e-12")

    @property
    def particles(self) -> int:
        return len(self.amplitudes) - 1

    def density_matrix(self) -> "DensityMatrix":
        return DensityMatrix(np.outer(self.amplitudes, self.amplitudes.conj()))


@dataclass(frozen=True)
class DensityMatrix:
    """rho_{m,n} = <J,m|rho|J,n> over the ascending-m Dicke basis."""

    entries: np.ndarray

    def __post_init__(self):
        rho = self.entries
        if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
            raise ValueError(f"density matrix must be square, got shape {rho.shape}")
        if np.max(np.abs(rho - rho.conj().T)) > 1e-12:
            raise ValueError("density matrix is not Hermitian within 1e-12")
        if abs(np.trace(rho).real - 1.0) > 1e-12 or abs(np.trace(rho).imag) > 1e-12:
            raise ValueError("density matrix trace differs from 1 by more than 1e-12")
        if np.min(np.diag(rho).real) < -1e-12:
            raise ValueError("density matrix has a diagonal entry below -1e-12")

    @property
    def particles(self) -> int:
        return self.entries.shape[0] - 1


def css_prepare(ens: SpinEnsemble, theta: float) -> DickeState:
    """Coherent spin state exp(-i theta Jy)|J, J>, by dense matrix exponential."""
    if not 0.0 < theta < np.pi:
        raise ValueError(f"theta must lie strictly inside (0, pi), got {theta}")
    if ens.particles > ORACLE_MAX_PARTICLES:
        raise ValueError(
            f"oracle limited to N <= {ORACLE_MAX_PARTICLES}, got N = {ens.particles}"
        )
    jy = _operators(ens.particles)["Jy"]
    rotation = expm(-1j * theta * jy)
    return DickeState(rotation[:, -1].copy())


def evolve(rho0: DensityMatrix, phi: float, gamma: float) -> DensityMatrix:
    """Exact twisting-plus-dephasing channel on the Dicke matrix elements.

    rho_{m,n}(phi) = rho_{m,n}(0) * exp[i (n^2 - m^2) phi - gamma (m - n)^2 phi].
    The diagonal is untouched, so trace and populations are preserved.
    gamma*phi < 0 would amplify coherences and is rejected.
    """
    if gamma * phi < 0.0:
        raise ValueError(f"gamma*phi = {gamma * phi} < 0: dephasing must not run backwards")
    m = m_values(rho0.particles)
    mm, nn = m[:, None], m[None, :]
    factor = np.exp(1j * (nn**2 - mm**2) * phi - gamma * (mm - nn) ** 2 * phi)
    return DensityMatrix(rho0.entries * factor)


def expect(rho: DensityMatrix, op_name: str) -> complex:
    """Tr(rho A) for A in {J+, J+2, Jz, Jz2, Jx, Jy, Jx2, Jy2}."""
    ops = _operators(rho.particles)
    if op_name not in ops:
        raise ValueError(f"unknown operator {op_name!r}; expected one of {sorted(ops)}")
    return complex(np.trace(rho.entries @ ops[op_name]))


def _transverse_stats_at(rho0: DensityMatrix, phi: float, gamma: float, axis: str):
    rho = evolve(rho0, phi, gamma)
    mean = expect(rho, "J" + axis).real
    second = expect(rho, "J" + axis + "2").real
    return mean, max(second - mean * mean, 0.0)


def sensitivity_fd(ens: SpinEnsemble, theta: float, phi: float, gamma: float,
                   axis: str, step: float | None = None) -> float:
    """Error-propagation sensitivity Delta Jv / |d<Jv>/dphi| with the slope
    from Richardson-extrapolated centered differences.  Test oracle only.

    With gamma > 0 the evolution cannot run to negative phases, so phi
    must exceed the stencil half-width.
    """
    if axis not in ("x", "y"):
        raise ValueError(f"axis must be 'x' or 'y', got {axis!r}")
    J = ens.J
    if step is None:
        step = 1e-6 * max(1.0, 1.0 / (2.0 * J))
    if gamma > 0.0 and phi < step:
        raise ValueError("phi must be >= step when gamma > 0 (no backwards dephasing)")
    rho0 = css_prepare(ens, theta).density_matrix()

    def mean_at(p):
        return expect(evolve(rho0, p, gamma), "J" + axis).real

    coarse = (mean_at(phi + step) - mean_at(phi - step)) / (2.0 * step)
    half = 0.5 * step
    fine = (mean_at(phi + half) - mean_at(phi - half)) / (2.0 * half)
    slope = (4.0 * fine - coarse) / 3.0
    if abs(slope) < SLOPE_FLOOR * J * J:
        raise DivergentSlopeError(
            f"|slope| = {abs(slope)} below {SLOPE_FLOOR * J * J}; sensitivity diverges"
        )
    _, var = _transverse_stats_at(rho0, phi, gamma, axis)
    return float(np.sqrt(var) / abs(slope))
