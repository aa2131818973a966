"""Closed-form spin moments of a twisted coherent spin state under collective dephasing.

A coherent spin state |theta, 0> of N spin-1/2 particles (total spin
J = N/2) accumulates a one-axis-twisting phase phi = chi*t while
collective Jz dephasing at relative rate gamma = Gamma/chi damps the
off-diagonal Dicke matrix elements as exp(-gamma*(m-n)^2*phi).  Every
first and second moment of the collective spin then has a closed form:

    <J+>   = J exp(-gamma*phi) sin(theta) (cos phi + i cos(theta) sin phi)^(2J-1)
    <J+^2> = J(J-1/2) exp(-4 gamma phi) sin^2(theta)
             * (cos 2phi + i cos(theta) sin 2phi)^(2J-2)
    <Jz>   = J cos(theta)
    <Jz^2> = J^2 - J(J-1/2) sin^2(theta)

The large powers are evaluated in log-polar form (modulus exponent plus
accumulated argument), which stays finite and accurate up to J ~ 1e6.
All functions broadcast over phi, so grid scans are cheap.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

SLOPE_MODES = ("exact", "eq4")

# A computed variance below -VARIANCE_SLACK * J^2 signals an inconsistent
# moment set rather than roundoff; milder underflows are clamped to zero.
VARIANCE_SLACK = 1e-12


class DegenerateVarianceError(ValueError):
    """A transverse variance came out more negative than roundoff allows."""


@dataclass(frozen=True)
class SpinEnsemble:
    """N spin-1/2 particles treated as a single collective spin J = N/2."""

    particles: int

    def __post_init__(self):
        if not isinstance(self.particles, (int, np.integer)) or self.particles < 1:
            raise ValueError(
                f"particle number must be a positive integer, got {self.particles!r}"
            )

    @property
    def J(self) -> float:
        return self.particles / 2.0


@dataclass(frozen=True)
class ProtocolParams:
    """Preparation angle theta, twisting phase phi = chi*t, dephasing gamma = Gamma/chi.

    theta = 0 and pi are rejected: the signal slope vanishes identically
    there and no phase information reaches the transverse spin readout.
    """

    theta: float
    phi: float = 0.0
    gamma: float = 0.0

    def __post_init__(self):
        if not 0.0 < self.theta < math.pi:
            raise ValueError(f"theta must lie strictly inside (0, pi), got {self.theta}")
        if self.gamma < 0.0:
            raise ValueError(f"gamma must be nonnegative, got {self.gamma}")


@dataclass(frozen=True)
class MomentSet:
    """First and second collective-spin moments at one parameter point."""

    jp: complex
    jp2: complex
    jz: float
    jz2: float
    djp_dphi: complex


@dataclass(frozen=True)
class TransverseStats:
    """Means and variances of Jx and Jy derived from a MomentSet.

    ``clamped`` counts variances that underflowed slightly below zero and
    were floored at zero.
    """

    mean_x: float
    mean_y: float
    var_x: float
    var_y: float
    clamped: int = 0


def _twist_kernel(theta, phi, power, harmonic=1):
    """(cos(h*phi) + i cos(theta) sin(h*phi))**power as a complex array.

    |z|^2 = 1 - sin(theta)^2 sin(h*phi)^2 <= 1, so the modulus is taken
    through log1p and the argument accumulated as power * atan2(...),
    never by repeated complex multiplication.
    """
    phi = np.asarray(phi, dtype=float)
    c, s = np.cos(harmonic * phi), np.sin(harmonic * phi)
    ct, st = math.cos(theta), math.sin(theta)
    log_mod = 0.5 * np.log1p(-np.square(st * s))
    ang = power * np.arctan2(ct * s, c)
    mag = np.exp(power * log_mod)
    return mag * (np.cos(ang) + 1j * np.sin(ang))


def jplus_value(J, theta, phi, gamma):
    """<J+> for collective spin J, broadcasting over phi."""
    phi = np.asarray(phi, dtype=float)
    kernel = _twist_kernel(theta, phi, 2.0 * J - 1.0)
    return J * math.sin(theta) * np.exp(-gamma * phi) * kernel


def jplus_squared_value(J, theta, phi, gamma):
    """<J+^2> for collective spin J, broadcasting over phi."""
    phi = np.asarray(phi, dtype=float)
    kernel = _twist_kernel(theta, phi, 2.0 * J - 2.0, harmonic=2)
    return J * (J - 0.5) * math.sin(theta) ** 2 * np.exp(-4.0 * gamma * phi) * kernel


def jz_moments_value(J, theta):
    """(<Jz>, <Jz^2>), independent of phi and gamma.

    <Jz^2> = J^2 - J(J-1/2) sin^2(theta), computed in the equivalent
    cancellation-free form J^2 cos^2(theta) + (J/2) sin^2(theta).
    """
    ct, st = math.cos(theta), math.sin(theta)
    return J * ct, J * J * ct * ct + 0.5 * J * st * st


def jplus_slope_value(J, theta, phi, gamma, mode="exact"):
    """d<J+>/dphi, broadcasting over phi.

    mode="exact" is the full derivative of <J+>, including the
    -gamma*<J+> term from the exp(-gamma*phi) decay.  mode="eq4" drops
    that term, keeping only

        J(2J-1) e^(-gamma phi) (i cos(theta) cos(phi) - sin(phi))
        * sin(theta) (cos phi + i cos(theta) sin phi)^(2J-2),

    which is the truncation conventionally quoted for this protocol and
    the one used for figure replication.  The two agree when gamma = 0.
    """
    if mode not in SLOPE_MODES:
        raise ValueError(f"slope mode must be one of {SLOPE_MODES}, got {mode!r}")
    phi = np.asarray(phi, dtype=float)
    kernel = _twist_kernel(theta, phi, 2.0 * J - 2.0)
    ct, st = math.cos(theta), math.sin(theta)
    rot = 1j * ct * np.cos(phi) - np.sin(phi)
    slope = J * (2.0 * J - 1.0) * np.exp(-gamma * phi) * rot * st * kernel
    if mode == "exact" and gamma != 0.0:
        slope = slope - gamma * jplus_value(J, theta, phi, gamma)
    return slope


def transverse_values(J, theta, phi, gamma):
    """(mean_x, mean_y, var_x, var_y) arrays from the closed-form moments.

    Uses the operator identities
        <Jx^2> = [J(J+1) - <Jz^2>]/2 + Re<J+^2>/2
        <Jy^2> = [J(J+1) - <Jz^2>]/2 - Re<J+^2>/2
    Variances are floored at zero; an underflow beyond VARIANCE_SLACK*J^2
    raises DegenerateVarianceError.
    """
    jp = jplus_value(J, theta, phi, gamma)
    jp2 = jplus_squared_value(J, theta, phi, gamma)
    _, jz2 = jz_moments_value(J, theta)
    half_perp = 0.5 * (J * (J + 1.0) - jz2)
    mean_x, mean_y = jp.real, jp.imag
    var_x = half_perp + 0.5 * jp2.real - mean_x * mean_x
    var_y = half_perp - 0.5 * jp2.real - mean_y * mean_y
    floor = -VARIANCE_SLACK * J * J
    if np.any(var_x < floor) or np.any(var_y < floor):
        raise DegenerateVarianceError(
            f"transverse variance below {floor} at J={J}, theta={theta}, gamma={gamma}"
        )
    return mean_x, mean_y, np.maximum(var_x, 0.0), np.maximum(var_y, 0.0)


def jplus(ens: SpinEnsemble, p: ProtocolParams) -> complex:
    """<J+> of the dephased twisted coherent spin state."""
    return complex(jplus_value(ens.J, p.theta, p.phi, p.gamma))


def jplus_squared(ens: SpinEnsemble, p: ProtocolParams) -> complex:
    """<J+^2>; identically zero for a single spin-1/2 (J = 1/2)."""
    return complex(jplus_squared_value(ens.J, p.theta, p.phi, p.gamma))


def jz_moments(ens: SpinEnsemble, p: ProtocolParams) -> tuple[float, float]:
    """(<Jz>, <Jz^2>); dephasing and twisting leave both intact."""
    return jz_moments_value(ens.J, p.theta)


def jplus_slope(ens: SpinEnsemble, p: ProtocolParams, mode: str = "exact") -> complex:
    """d<J+>/dphi; see jplus_slope_value for the two slope conventions."""
    return complex(jplus_slope_value(ens.J, p.theta, p.phi, p.gamma, mode=mode))


def moment_set(ens: SpinEnsemble, p: ProtocolParams, slope_mode: str = "exact") -> MomentSet:
    """All closed-form moments at one parameter point."""
    jz, jz2 = jz_moments(ens, p)
    return MomentSet(
        jp=jplus(ens, p),
        jp2=jplus_squared(ens, p),
        jz=jz,
        jz2=jz2,
        djp_dphi=jplus_slope(ens, p, mode=slope_mode),
    )


def transverse_stats(m: MomentSet, ens: SpinEnsemble) -> TransverseStats:
    """Jx/Jy means and variances from a MomentSet of the same ensemble."""
    J = ens.J
    half_perp = 0.5 * (J * (J + 1.0) - m.jz2)
    mean_x, mean_y = m.jp.real, m.jp.imag
    var_x = half_perp + 0.5 * m.jp2.real - mean_x * mean_x
    var_y = half_perp - 0.5 * m.jp2.real - mean_y * mean_y
    floor = -VARIANCE_SLACK * J * J
    clamped = 0
    if var_x < floor or var_y < floor:
        raise DegenerateVarianceError(
            f"transverse variance below {floor}: var_x={var_x}, var_y={var_y}"
        )
    if var_x < 0.0:
        var_x, clamped = 0.0, clamped + 1
    if var_y < 0.0:
        var_y, clamped = 0.0, clamped + 1
    return TransverseStats(mean_x=mean_x, mean_y=mean_y, var_x=var_x, var_y=var_y,
                           clamped=clamped)
