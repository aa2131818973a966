"""Phase sensitivities of the twisted, dephased coherent spin state.

The error-propagation sensitivity for a transverse spin readout is

    dphi_v = Delta(Jv) / |d<Jv>/dphi|,   v = x or y,

evaluated here three ways: exactly from the closed-form moments, through
the short-time expansion in alpha = 2 J phi cos(theta) and
beta = J phi^2 sin^2(theta) + gamma phi, and through the large-gamma
envelope curves.  Sensitivities oscillate in a fringe pattern and diverge
where the slope vanishes; diverging points are reported through explicit
flags, never as IEEE infinities, so optimizers can mask them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import moments
from .moments import ProtocolParams, SpinEnsemble

#: |slope| below this multiple of J^2 flags the point as divergent.
SLOPE_FLOOR = 1e-12

EQ9_MODES = ("corrected", "verbatim")

# Leading small-phi coefficient of the x envelope: the (2 J phi)^-2 form is
# the small-phi limit of the short-time formula and reproduces the known
# optimum; the (4 J phi)^-2 variant is kept for comparison.
_ENVELOPE_LEAD = {"corrected": 2.0, "verbatim": 4.0}


@dataclass(frozen=True)
class SensitivityPoint:
    """dphi_x and/or dphi_y at one phase, with divergence flags.

    A diverging axis carries value None and its flag set; an axis that was
    not requested carries value None with the flag clear.
    """

    phi: float
    dpx: float | None = None
    dpy: float | None = None
    divergent_x: bool = False
    divergent_y: bool = False
    kind: str = "exact"

    def value(self, axis: str) -> float | None:
        return self.dpx if axis == "x" else self.dpy

    def divergent(self, axis: str) -> bool:
        return self.divergent_x if axis == "x" else self.divergent_y


@dataclass(frozen=True)
class ShortTimeParams:
    """Expansion parameters alpha, beta and the eta coefficients."""

    alpha: float
    beta: float
    eta0: float
    eta1: float


def _point(phi, axis, value, divergent, kind):
    if axis == "x":
        return SensitivityPoint(phi=phi, dpx=value, divergent_x=divergent, kind=kind)
    return SensitivityPoint(phi=phi, dpy=value, divergent_y=divergent, kind=kind)


def exact_values(J, theta, gamma, phi, axis, slope_mode="exact"):
    """Exact dphi_v over an array of phases.

    Returns (values, divergent) with values NaN-filled where the flag is
    set.  The x slope is Re d<J+>/dphi, the y slope Im d<J+>/dphi.
    """
    phi = np.atleast_1d(np.asarray(phi, dtype=float))
    _, _, var_x, var_y = moments.transverse_values(J, theta, phi, gamma)
    slope = moments.jplus_slope_value(J, theta, phi, gamma, mode=slope_mode)
    if axis == "x":
        var, dsig = var_x, slope.real
    elif axis == "y":
        var, dsig = var_y, slope.imag
    else:
        raise ValueError(f"axis must be 'x' or 'y', got {axis!r}")
    divergent = np.abs(dsig) < SLOPE_FLOOR * J * J
    with np.errstate(divide="ignore", invalid="ignore"):
        values = np.sqrt(var) / np.abs(dsig)
    values = np.where(divergent, np.nan, values)
    return values, divergent


def exact(ens: SpinEnsemble, p: ProtocolParams, axis: str = "both",
          slope_mode: str = "exact") -> SensitivityPoint:
    """Exact error-propagation sensitivity built from the closed forms."""
    if axis not in ("x", "y", "both"):
        raise ValueError(f"axis must be 'x', 'y' or 'both', got {axis!r}")
    m = moments.moment_set(ens, p, slope_mode=slope_mode)
    stats = moments.transverse_stats(m, ens)
    floor = SLOPE_FLOOR * ens.J * ens.J
    dpx = dpy = None
    div_x = div_y = False
    if axis in ("x", "both"):
        slope = m.djp_dphi.real
        if abs(slope) < floor:
            div_x = True
        else:
            dpx = math.sqrt(stats.var_x) / abs(slope)
    if axis in ("y", "both"):
        slope = m.djp_dphi.imag
        if abs(slope) < floor:
            div_y = True
        else:
            dpy = math.sqrt(stats.var_y) / abs(slope)
    return SensitivityPoint(phi=p.phi, dpx=dpx, dpy=dpy,
                            divergent_x=div_x, divergent_y=div_y, kind="exact")


def short_time_params(ens: SpinEnsemble, p: ProtocolParams) -> ShortTimeParams:
    """alpha = 2 J phi cos(theta), beta = J phi^2 sin^2(theta) + gamma phi,
    and the eta coefficients of the short-time Jx variance."""
    J, theta, phi, gamma = ens.J, p.theta, p.phi, p.gamma
    ct, st = math.cos(theta), math.sin(theta)
    alpha = 2.0 * J * phi * ct
    beta = J * phi * phi * st * st + gamma * phi
    eta0 = 0.5 * (1.0 + math.exp(-4.0 * beta) * math.cos(2.0 * alpha))
    eta1 = (1.0 - math.exp(-2.0 * beta)) * (1.0 - math.exp(-2.0 * beta) * math.cos(2.0 * alpha))
    eta1 += 2.0 * phi * math.exp(-2.0 * beta) * ct * math.sin(2.0 * alpha)
    return ShortTimeParams(alpha=alpha, beta=beta, eta0=eta0, eta1=eta1)


def short_time_variance_x(ens: SpinEnsemble, p: ProtocolParams) -> float:
    """Short-time Jx variance (J/2)[1 - (eta0 - J*eta1) sin^2(theta)]."""
    st = short_time_params(ens, p)
    J = ens.J
    return 0.5 * J * (1.0 - (st.eta0 - J * st.eta1) * math.sin(p.theta) ** 2)


def _check_off_equator(theta):
    if theta == math.pi / 2:
        raise ValueError("short-time and envelope formulas assume theta != pi/2")


def short_time_x_values(J, theta, gamma, phi):
    """Short-time dphi_x over an array of phases; poles at alpha = s*pi."""
    _check_off_equator(theta)
    phi = np.atleast_1d(np.asarray(phi, dtype=float))
    ct, st = math.cos(theta), math.sin(theta)
    alpha = 2.0 * J * phi * ct
    denom = 2.0 * J**3 * math.sin(2.0 * theta) ** 2
    with np.errstate(divide="ignore", invalid="ignore"):
        cot = np.cos(alpha) / np.sin(alpha)
        dp2 = (1.0 + (ct * cot + 2.0 * J * phi * st * st) ** 2
               + 4.0 * gamma * J * phi * st * st) / denom
        values = np.sqrt(dp2)
    divergent = ~np.isfinite(values) | (dp2 <= 0.0)
    return np.where(divergent, np.nan, values), divergent


def short_time_y_values(J, theta, gamma, phi):
    """Short-time dphi_y over an array of phases; poles at alpha = (s+1/2)*pi."""
    _check_off_equator(theta)
    phi = np.atleast_1d(np.asarray(phi, dtype=float))
    ct, st = math.cos(theta), math.sin(theta)
    alpha = 2.0 * J * phi * ct
    denom = 2.0 * J**3 * math.sin(2.0 * theta) ** 2
    with np.errstate(divide="ignore", invalid="ignore"):
        tan = np.sin(alpha) / np.cos(alpha)
        dp2 = (1.0 + (ct * tan - 2.0 * J * phi * st * st) ** 2
               + 4.0 * gamma * J * phi * st * st) / denom
        values = np.sqrt(dp2)
    divergent = ~np.isfinite(values) | (dp2 <= 0.0)
    return np.where(divergent, np.nan, values), divergent


def short_time_x(ens: SpinEnsemble, p: ProtocolParams) -> SensitivityPoint:
    """Short-time dphi_x at one phase (theta != pi/2)."""
    values, divergent = short_time_x_values(ens.J, p.theta, p.gamma, p.phi)
    value = None if divergent[0] else float(values[0])
    return _point(p.phi, "x", value, bool(divergent[0]), "short_time")


def short_time_y(ens: SpinEnsemble, p: ProtocolParams) -> SensitivityPoint:
    """Short-time dphi_y at one phase (theta != pi/2)."""
    values, divergent = short_time_y_values(ens.J, p.theta, p.gamma, p.phi)
    value = None if divergent[0] else float(values[0])
    return _point(p.phi, "y", value, bool(divergent[0]), "short_time")


def envelope_values(J, theta, gamma, phi, axis, eq9_mode="corrected"):
    """Large-gamma envelope of dphi_v over an array of phases.

    x: [ (lead*J*phi)^-2 + 4 gamma J phi sin^2(theta) ] / (2 J^3 sin^2(2 theta))
    y: [ 1 + 4 gamma J phi sin^2(theta) ] / (2 J^3 sin^2(2 theta))
    """
    _check_off_equator(theta)
    if eq9_mode not in EQ9_MODES:
        raise ValueError(f"eq9 mode must be one of {EQ9_MODES}, got {eq9_mode!r}")
    phi = np.atleast_1d(np.asarray(phi, dtype=float))
    st = math.sin(theta)
    denom = 2.0 * J**3 * math.sin(2.0 * theta) ** 2
    damping = 4.0 * gamma * J * phi * st * st
    with np.errstate(divide="ignore", invalid="ignore"):
        if axis == "x":
            lead = _ENVELOPE_LEAD[eq9_mode]
            dp2 = ((lead * J * phi) ** -2.0 + damping) / denom
        elif axis == "y":
            dp2 = (1.0 + damping) / denom
        else:
            raise ValueError(f"axis must be 'x' or 'y', got {axis!r}")
        values = np.sqrt(dp2)
    divergent = ~np.isfinite(values) | (dp2 <= 0.0)
    return np.where(divergent, np.nan, values), divergent


def envelope(ens: SpinEnsemble, p: ProtocolParams, axis: str,
             eq9_mode: str = "corrected") -> SensitivityPoint:
    """Large-gamma envelope sensitivity at one phase (theta != pi/2)."""
    values, divergent = envelope_values(ens.J, p.theta, p.gamma, p.phi, axis,
                                        eq9_mode=eq9_mode)
    value = None if divergent[0] else float(values[0])
    return _point(p.phi, axis, value, bool(divergent[0]), "envelope")


def envelope_optimum(ens: SpinEnsemble, theta: float, gamma: float,
                     eq9_mode: str = "corrected") -> tuple[float, float]:
    """Analytic minimum (phi_star, dphi_min) of the x envelope.

    Balancing (lead*J*phi)^-2 against 4 gamma J phi sin^2(theta) gives
    phi_star^3 = 1 / (2 lead^2 gamma J^3 sin^2 theta) and an envelope value
    3 / (lead^2 J^2 phi_star^2) at the minimum.  For the corrected lead this
    collapses to dphi_min^2 = 3 gamma^(2/3) / (8 J^3 sin^(2/3) theta cos^2 theta).
    """
    _check_off_equator(theta)
    if gamma <= 0.0:
        raise ValueError("the x envelope has a finite minimum only for gamma > 0")
    J = ens.J
    lead = _ENVELOPE_LEAD[_require_eq9(eq9_mode)]
    st = math.sin(theta)
    phi_star = (2.0 * lead**2 * gamma * J**3 * st * st) ** (-1.0 / 3.0)
    dp2 = (3.0 / (lead**2 * J * J * phi_star * phi_star)) \
        / (2.0 * J**3 * math.sin(2.0 * theta) ** 2)
    return phi_star, math.sqrt(dp2)


def _require_eq9(eq9_mode):
    if eq9_mode not in EQ9_MODES:
        raise ValueError(f"eq9 mode must be one of {EQ9_MODES}, got {eq9_mode!r}")
    return eq9_mode
