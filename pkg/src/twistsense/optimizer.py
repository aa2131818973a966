"""Best-sensitivity phases, stationarity branches, and scaling exponents.

The sensitivity oscillates between divergences spaced by the fringe width
pi/(2 J |cos theta|), so derivative-based minimization is hopeless; the
optimum is located by a dense scan (masked at divergence flags) followed
by golden-section refinement inside the best bracket.  For gamma = 0 the
local minima of dphi_x satisfy either

    cos(theta) cot(alpha) + 2 J phi sin^2(theta) = 0     (transcendental)
    sin(alpha) = cot(theta)                              (sine branch)

with alpha = 2 J phi cos(theta); the global optimum hops between the two
families as theta crosses pi/4 or 3pi/4.  Scaling exponents are reported
as xi = -ln(sqrt(2) dphi_min) / ln(J), i.e. with prefactor kappa = 1/sqrt(2).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from . import sensitivity
from .moments import SpinEnsemble

BRANCHES = ("transcendental", "sine_branch", "envelope", "unresolved")

#: gamma at or above this is treated as the dephasing-dominated regime.
GAMMA_REGIME_THRESHOLD = 1.0

#: |cos theta| below this is handled as the equatorial special case.
_EQUATOR_EPS = 1e-9

_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class OptimumReport:
    """Result of one best-sensitivity search.

    branch is "unresolved" either when every scanned point diverged (all
    numeric fields are then None) or when the optimum could not be matched
    to an analytic stationarity family.
    """

    phi_min: float | None
    delta_phi_min: float | None
    branch: str
    xi: float | None
    fringe_index: int | None


def fringe_width(ens: SpinEnsemble, theta: float) -> float:
    """Spacing pi/(2 J |cos theta|) between sensitivity divergences."""
    c = abs(math.cos(theta))
    if c < _EQUATOR_EPS:
        return math.inf
    return math.pi / (2.0 * ens.J * c)


def scaling_exponent(delta_phi_min: float, ens: SpinEnsemble) -> float:
    """xi such that dphi_min = J^(-xi)/sqrt(2)."""
    if delta_phi_min is None or delta_phi_min <= 0.0:
        raise ValueError(f"delta_phi_min must be positive, got {delta_phi_min}")
    log_j = math.log(ens.J)
    if log_j == 0.0:
        raise ValueError("scaling exponent is undefined at J = 1")
    return -math.log(math.sqrt(2.0) * delta_phi_min) / log_j


def predicted_exponent(ens: SpinEnsemble, theta: float, gamma: float,
                       regime_threshold: float = GAMMA_REGIME_THRESHOLD) -> float:
    """Analytic scaling-exponent prediction.

    Below the gamma threshold: 3/2 + ln|sin 2theta| / ln J.  At or above
    it: 3/2 + ln[(2/sqrt(3)) gamma^(-1/3) sin^(1/3)theta |cos theta|] / ln J,
    whose maximum over theta sits at pi/6 (and its mirror 5pi/6).
    Returns -inf where the argument of the log vanishes (theta = pi/2).
    """
    log_j = math.log(ens.J)
    if log_j == 0.0:
        raise ValueError("scaling exponent is undefined at J = 1")
    if gamma < regime_threshold:
        arg = abs(math.sin(2.0 * theta))
    else:
        arg = (2.0 / math.sqrt(3.0)) * gamma ** (-1.0 / 3.0) \
            * math.sin(theta) ** (1.0 / 3.0) * abs(math.cos(theta))
    if arg == 0.0:
        return -math.inf
    return 1.5 + math.log(arg) / log_j


def stationarity_roots(ens: SpinEnsemble, theta: float,
                       alpha_max: float = 3.0 * math.pi) -> list[tuple[float, str]]:
    """Zero-dephasing local-minimum candidates of dphi_x, sorted by phi.

    Solves the transcendental condition by bisection inside every fringe
    (split at the extrema of the left-hand side so multiple crossings are
    all found) and lists the sine-branch solutions whenever
    |cot theta| <= 1.  The two families coincide only at the tangency
    alpha = pi/2 reached for theta = pi/4.
    """
    if not 0.0 < theta < math.pi:
        raise ValueError(f"theta must lie strictly inside (0, pi), got {theta}")
    theta_eff = min(theta, math.pi - theta)  # the phi-space roots are mirror symmetric
    if abs(math.cos(theta_eff)) < _EQUATOR_EPS:
        raise ValueError("stationarity branches are undefined at theta = pi/2")
    J = ens.J
    ct, st = math.cos(theta_eff), math.sin(theta_eff)
    cot_theta = ct / st
    # cot(pi/4) lands a few ulp above 1; keep the grazing tangency
    sine_branch_open = cot_theta <= 1.0 + 1e-12
    phi_of_alpha = 1.0 / (2.0 * J * ct)

    def g(alpha):
        return ct * math.cos(alpha) / math.sin(alpha) + alpha * st * st / ct

    roots: list[tuple[float, str]] = []
    eps = 1e-6 * math.pi
    fringes = int(math.ceil(alpha_max / math.pi))
    for s in range(fringes):
        lo, hi = s * math.pi + eps, (s + 1) * math.pi - eps
        knots = [lo, hi]
        if sine_branch_open:
            base = math.asin(min(cot_theta, 1.0))
            for candidate in (s * math.pi + base, (s + 1) * math.pi - base):
                if lo < candidate < hi:
                    knots.append(candidate)
        knots.sort()
        for a, b in zip(knots[:-1], knots[1:]):
            try:
                ga, gb = g(a), g(b)
            except ZeroDivisionError:  # knot exactly on a pole
                continue
            if ga == 0.0:
                roots.append((a * phi_of_alpha, "transcendental"))
            elif ga * gb < 0.0:
                root = brentq(g, a, b, xtol=1e-15, rtol=1e-14)
                roots.append((root * phi_of_alpha, "transcendental"))
        if sine_branch_open and s % 2 == 0:
            # sin(alpha) = cot(theta) has solutions only where sin > 0
            base = math.asin(min(cot_theta, 1.0))
            sine_roots = {s * math.pi + base, (s + 1) * math.pi - base}
            for alpha in sorted(sine_roots):
                if alpha <= alpha_max:
                    roots.append((alpha * phi_of_alpha, "sine_branch"))
    roots.sort(key=lambda item: item[0])
    return [(phi, branch) for phi, branch in roots
            if phi <= alpha_max * phi_of_alpha + eps]


def _golden_refine(f, a, b, rel_tol):
    """Golden-section minimization of f on [a, b]; returns (x, f(x)) best seen."""
    best_x, best_f = a, f(a)
    fb_edge = f(b)
    if fb_edge < best_f:
        best_x, best_f = b, fb_edge
    c = b - (b - a) * _INVPHI
    d = a + (b - a) * _INVPHI
    fc, fd = f(c), f(d)
    while (b - a) > rel_tol * max(abs(a), abs(b)):
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - (b - a) * _INVPHI
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + (b - a) * _INVPHI
            fd = f(d)
        for x, fx in ((c, fc), (d, fd)):
            if fx < best_f:
                best_x, best_f = x, fx
    return best_x, best_f


def _scan_window(ens, theta, gamma, axis, points_per_fringe, slope_mode):
    """Default scan window: three fringes, or a scan-doubled span at the equator."""
    J = ens.J
    width = fringe_width(ens, theta)
    if math.isfinite(width):
        lo = 1e-3 / (J * J) if axis == "y" else 0.0
        return lo, 3.0 * width, 3 * points_per_fringe
    # theta = pi/2: no fringes; widen c/J until the minimum is interior
    lo = 1e-3 / (J * J) if axis == "y" else 0.0
    span = 4.0 / J
    npts = 3 * points_per_fringe
    for _ in range(10):
        grid = np.linspace(lo if lo > 0.0 else span / npts, lo + span, npts)
        values, divergent = sensitivity.exact_values(J, theta, gamma, grid, axis,
                                                     slope_mode=slope_mode)
        if np.all(divergent):
            break
        idx = int(np.nanargmin(np.where(divergent, np.inf, values)))
        if idx < npts - max(2, npts // 50):
            break
        span *= 2.0
    return lo, lo + span, npts


def _classify_branch(ens, theta, gamma, axis, phi_min,
                     regime_threshold=GAMMA_REGIME_THRESHOLD):
    if gamma >= regime_threshold:
        return "envelope"
    if axis != "x" or abs(math.cos(theta)) < _EQUATOR_EPS:
        # the sine/transcendental families describe the x readout off the equator
        return "unresolved"
    # below the regime threshold the optimum still sits near a gamma = 0 root
    roots = stationarity_roots(ens, theta)
    if not roots:
        return "unresolved"
    width = fringe_width(ens, theta)
    phi_root, branch = min(roots, key=lambda item: abs(item[0] - phi_min))
    if abs(phi_root - phi_min) <= 0.25 * width:
        return branch
    return "unresolved"


def find_optimum(ens: SpinEnsemble, theta: float, gamma: float, axis: str = "x",
                 search_window: tuple[float, float] | None = None,
                 slope_mode: str = "exact", points_per_fringe: int = 400,
                 phi_tol_rel: float = 1e-10) -> OptimumReport:
    """Global minimum of the exact dphi over the window, deterministically.

    Dense scan with at least ``points_per_fringe`` samples per fringe
    width, divergences masked, then golden-section refinement of the best
    bracket down to a relative phi tolerance.  The reported minimum never
    exceeds any non-divergent scanned sample.
    """
    if axis not in ("x", "y"):
        raise ValueError(f"axis must be 'x' or 'y', got {axis!r}")
    J = ens.J
    if search_window is None:
        lo, hi, npts = _scan_window(ens, theta, gamma, axis, points_per_fringe,
                                    slope_mode)
    else:
        lo, hi = search_window
        if not hi > lo:
            raise ValueError(f"empty search window {search_window}")
        width = fringe_width(ens, theta)
        spans = (hi - lo) / width if math.isfinite(width) else 3.0
        npts = max(2 * points_per_fringe, int(math.ceil(spans * points_per_fringe)))
    grid = np.linspace(lo if lo > 0.0 else (hi - lo) / npts, hi, npts)
    values, divergent = sensitivity.exact_values(J, theta, gamma, grid, axis,
                                                 slope_mode=slope_mode)
    if bool(np.all(divergent)):
        return OptimumReport(phi_min=None, delta_phi_min=None,
                             branch="unresolved", xi=None, fringe_index=None)
    masked = np.where(divergent, np.inf, values)
    idx = int(np.argmin(masked))

    def objective(phi):
        vals, div = sensitivity.exact_values(J, theta, gamma, phi, axis,
                                             slope_mode=slope_mode)
        return math.inf if div[0] else float(vals[0])

    a = grid[idx - 1] if idx > 0 else grid[idx]
    b = grid[idx + 1] if idx + 1 < npts else grid[idx]
    phi_best, dp_best = _golden_refine(objective, a, b, phi_tol_rel)
    if masked[idx] < dp_best:
        phi_best, dp_best = float(grid[idx]), float(masked[idx])

    width = fringe_width(ens, theta)
    fringe = int(phi_best // width) if math.isfinite(width) else 0
    branch = _classify_branch(ens, theta, gamma, axis, phi_best)
    try:
        xi = scaling_exponent(dp_best, ens)
    except ValueError:
        xi = None
    return OptimumReport(phi_min=phi_best, delta_phi_min=dp_best, branch=branch,
                         xi=xi, fringe_index=fringe)


SWEEP_COLUMNS = ("N", "theta", "gamma", "axis", "phi_min", "delta_phi_min",
                 "branch", "xi", "fringe_index")


def sweep(particle_counts, thetas, gammas, axes, slope_mode: str = "exact",
          points_per_fringe: int = 400) -> list[dict]:
    """find_optimum over the full parameter grid, in deterministic row order.

    Rows follow itertools.product(particle_counts, thetas, gammas, axes);
    unresolved optima are kept as rows with None-valued numeric fields.
    """
    rows = []
    for n, theta, gamma, axis in itertools.product(particle_counts, thetas, gammas, axes):
        report = find_optimum(SpinEnsemble(n), theta, gamma, axis=axis,
                              slope_mode=slope_mode,
                              points_per_fringe=points_per_fringe)
        rows.append({
            "N": n, "theta": theta, "gamma": gamma, "axis": axis,
            "phi_min": report.phi_min, "delta_phi_min": report.delta_phi_min,
            "branch": report.branch, "xi": report.xi,
            "fringe_index": report.fringe_index,
        })
    return rows
