"""Acceptance suite: one test per release criterion, each printing a
PASS/FAIL line (visible under ``pytest -s`` or in failure output).

Three sub-assertions are expected to fail and are left failing on
purpose; each marks a spot where the quoted reference value cannot be met
by the exact error-propagation sensitivity at the requested system
size (see the failure messages and README for the measured numbers):

* criterion 4: phi_min at J=1e2 for theta=pi/4 sits 7 percent off the
  0.89*pi/(sqrt(2)J) fit (the fit is quoted as valid only above J=1e2),
  and at J=1e4 for theta=pi/3 the global optimum leaves the sine branch
  for a deeper transcendental minimum near the fringe edge;
* criterion 5: at J=1e3 the sine/transcendental bifurcation sits near
  theta = 0.955, not pi/4, so theta = 0.9 is still transcendental;
* criterion 6: at J=1e4 no phase reaches within 20 percent of
  1/(sqrt(2) J^1.5 |sin 2 theta|) for theta=pi/3 (x readout), so the
  measured exponent misses the prediction by 0.047; the same point
  passes at J=1e5 (test_optimizer covers that scale).
"""

import math

import numpy as np
import pytest

from twistsense import cli, moments, oracle, sensitivity
from twistsense.cli import fig3_theta_grid
from twistsense.moments import ProtocolParams, SpinEnsemble
from twistsense.optimizer import find_optimum, fringe_width, predicted_exponent, sweep

from conftest import oracle_transverse, rel_to_scale


def report(number, label, failures):
    status = "PASS" if not failures else "FAIL"
    print(f"ACCEPTANCE {number} [{status}] {label}")
    for line in failures:
        print(f"    {line}")
    assert not failures, f"criterion {number}: " + "; ".join(failures)


def test_criterion_1_oracle_equivalence():
    failures = []
    worst = 0.0
    thetas = (0.3, math.pi / 4, math.pi / 2, 2.5)
    phis = (0.0, 0.05, -0.05, 0.3, -0.3)
    gammas = (0.0, 0.5, 5.0)
    for n in tuple(range(1, 13)) + (20,):
        ens = SpinEnsemble(n)
        for theta in thetas:
            rho0 = oracle.css_prepare(ens, theta).density_matrix()
            jz, jz2 = moments.jz_moments_value(ens.J, theta)
            for phi in phis:
                for gamma in gammas:
                    if gamma * phi < 0:
                        # backwards dephasing is outside the channel's domain
                        with pytest.raises(ValueError):
                            oracle.evolve(rho0, phi, gamma)
                        continue
                    rho = oracle.evolve(rho0, phi, gamma)
                    _, _, var_x, var_y = moments.transverse_values(ens.J, theta, phi, gamma)
                    checks = {
                        "J+": (complex(moments.jplus_value(ens.J, theta, phi, gamma)),
                               oracle.expect(rho, "J+")),
                        "J+2": (complex(moments.jplus_squared_value(ens.J, theta, phi, gamma)),
                                oracle.expect(rho, "J+2")),
                        "Jz": (jz, oracle.expect(rho, "Jz").real),
                        "Jz2": (jz2, oracle.expect(rho, "Jz2").real),
                        "var_x": (float(var_x), oracle_transverse(rho, "x")[1]),
                        "var_y": (float(var_y), oracle_transverse(rho, "y")[1]),
                    }
                    for name, (closed, trace) in checks.items():
                        err = rel_to_scale(closed, trace)
                        worst = max(worst, err)
                        if err > 1e-10:
                            failures.append(
                                f"{name} rel err {err:.2e} at N={n} theta={theta} "
                                f"phi={phi} gamma={gamma}")
    report(1, f"closed forms match Dicke traces to 1e-10 (worst {worst:.2e})", failures)


def test_criterion_2_fringe_minimum_x():
    ens = SpinEnsemble(2000)
    result = find_optimum(ens, math.pi / 4, 0.0, axis="x")
    dp_ref = 1 / (math.sqrt(2) * ens.J**1.5)
    phi_ref = 0.89 * math.pi / (math.sqrt(2) * ens.J)
    failures = []
    if abs(result.delta_phi_min - dp_ref) / dp_ref > 0.10:
        failures.append(f"dp_min {result.delta_phi_min:.4e} vs {dp_ref:.4e}")
    if abs(result.phi_min - phi_ref) / phi_ref > 0.05:
        failures.append(f"phi_min {result.phi_min:.4e} vs {phi_ref:.4e}")
    report(2, f"x minimum {result.delta_phi_min:.3e} at phi {result.phi_min:.3e} (J=1e3)",
           failures)


def test_criterion_3_y_readout_at_small_phase():
    ens = SpinEnsemble(2000)
    point = sensitivity.exact(ens, ProtocolParams(theta=math.pi / 4, phi=1e-9), axis="y")
    dp_ref = 1 / (math.sqrt(2) * ens.J**1.5)
    failures = []
    if point.divergent_y or abs(point.dpy - dp_ref) / dp_ref > 0.05:
        failures.append(f"dpy(1e-9) = {point.dpy} vs {dp_ref:.4e}")
    report(3, f"y sensitivity at phi->0 is {point.dpy:.3e} (super-Heisenberg)", failures)


def test_criterion_4_best_phase_fits_over_J():
    failures = []
    for n in (200, 2000, 20000):
        ens = SpinEnsemble(n)
        result = find_optimum(ens, math.pi / 4, 0.0, axis="x")
        ref = 0.89 * math.pi / (math.sqrt(2) * ens.J)
        ratio = result.phi_min / ref
        if abs(ratio - 1) > 0.05:
            failures.append(f"theta=pi/4 J={ens.J:g}: phi_min/ref = {ratio:.4f} (>5%)")
        result = find_optimum(ens, math.pi / 3, 0.0, axis="x")
        ref = 0.2 * math.pi / ens.J
        ratio = result.phi_min / ref
        if abs(ratio - 1) > 0.10:
            failures.append(f"theta=pi/3 J={ens.J:g}: phi_min/ref = {ratio:.4f} (>10%)")
    report(4, "phi_min(J) follows 0.89pi/(sqrt2 J) and 0.2pi/J", failures)


def test_criterion_5_branch_bifurcation():
    ens = SpinEnsemble(2000)
    expectations = {0.3: "transcendental", 0.52: "transcendental", 2.7: "transcendental",
                    0.9: "sine_branch", 1.2: "sine_branch", 1.9: "sine_branch"}
    failures = []
    for theta, expected in sorted(expectations.items()):
        result = find_optimum(ens, theta, 0.0, axis="x")
        if result.branch != expected:
            failures.append(f"theta={theta}: branch {result.branch}, expected {expected} "
                            f"(phi_min={result.phi_min:.3e})")
    report(5, "optimum branch bifurcates between sine and transcendental", failures)


def test_criterion_6_exponents_without_dephasing_desk_scale():
    ens = SpinEnsemble(20000)  # J = 1e4
    failures = []
    for theta in (math.pi / 6, math.pi / 4, math.pi / 3, 3 * math.pi / 4):
        prediction = predicted_exponent(ens, theta, 0.0)
        for axis in ("x", "y"):
            result = find_optimum(ens, theta, 0.0, axis=axis)
            if abs(result.xi - prediction) > 0.02:
                failures.append(f"theta={theta:.4f} axis={axis}: xi={result.xi:.4f} "
                                f"vs {prediction:.4f} (|diff|>{0.02})")
    report(6, "measured exponents match the zero-dephasing prediction at J=1e4", failures)


def test_criterion_7_exponents_with_dephasing():
    ens = SpinEnsemble(200000)  # J = 1e5
    gamma = 1000.0
    grid = fig3_theta_grid()
    measured = {}
    for theta in grid:
        result = find_optimum(ens, theta, gamma, axis="x", slope_mode="eq4")
        measured[theta] = result.xi
    failures = []
    for theta in (math.pi / 6, math.pi / 4, 5 * math.pi / 6):
        prediction = predicted_exponent(ens, theta, gamma)
        if abs(measured[theta] - prediction) > 0.02:
            failures.append(f"theta={theta:.4f}: xi={measured[theta]:.4f} vs {prediction:.4f}")
    best = max(measured, key=measured.get)
    step = math.pi / 24
    if abs(best - math.pi / 6) > step * 1.5 and abs(best - 5 * math.pi / 6) > step * 1.5:
        failures.append(f"grid maximum at theta={best:.4f}, expected pi/6 +- one step")
    target = 1.5 - math.log(2 * gamma) / (3 * math.log(ens.J))
    if abs(measured[best] - target) > 0.02:
        failures.append(f"max xi {measured[best]:.4f} vs 3/2 - ln(2g)/(3 lnJ) = {target:.4f}")
    report(7, f"dephased exponent peaks at pi/6 with xi {measured[best]:.4f}", failures)


def test_criterion_8_dephased_optimum_closed_forms():
    ens = SpinEnsemble(20000)  # J = 1e4
    gamma = 100.0
    J = ens.J
    result = find_optimum(ens, math.pi / 6, gamma, axis="x")
    phi_ref = 1 / (J * (2 * gamma) ** (1 / 3))
    dp_ref = (2 * gamma) ** (1 / 3) / (math.sqrt(2) * J**1.5)
    failures = []
    if abs(result.phi_min - phi_ref) / phi_ref > 0.15:
        failures.append(f"phi_min {result.phi_min:.4e} vs {phi_ref:.4e}")
    if abs(result.delta_phi_min - dp_ref) / dp_ref > 0.15:
        failures.append(f"dp_min {result.delta_phi_min:.4e} vs {dp_ref:.4e}")
    # algebraic identity of the corrected envelope minimum
    for theta in (math.pi / 6, 0.4, 1.0):
        _, dp_min = sensitivity.envelope_optimum(ens, theta, gamma)
        identity = 3 * gamma ** (2 / 3) / (
            8 * J**3 * math.sin(theta) ** (2 / 3) * math.cos(theta) ** 2)
        if abs(dp_min**2 - identity) / identity > 1e-12:
            failures.append(f"envelope minimum identity off at theta={theta}")
    report(8, f"dephased optimum at phi {result.phi_min:.3e}, dp {result.delta_phi_min:.3e}",
           failures)


def test_criterion_9_property_suite(tmp_path):
    failures = []

    # theta -> pi - theta mirror symmetry
    for theta in (0.4, 1.1):
        for gamma in (0.0, 5.0):
            a = sensitivity.exact(SpinEnsemble(2000),
                                  ProtocolParams(theta=theta, phi=3e-4, gamma=gamma), axis="both")
            b = sensitivity.exact(SpinEnsemble(2000),
                                  ProtocolParams(theta=math.pi - theta, phi=3e-4, gamma=gamma),
                                  axis="both")
            if abs(a.dpx - b.dpx) / a.dpx > 1e-9 or abs(a.dpy - b.dpy) / a.dpy > 1e-9:
                failures.append(f"mirror asymmetry at theta={theta} gamma={gamma}")
    rows = sweep([2000], [0.6, math.pi - 0.6], [0.0], ["x"])
    if abs(rows[0]["phi_min"] - rows[1]["phi_min"]) / rows[0]["phi_min"] > 1e-6:
        failures.append("sweep mirror symmetry broken")

    # dephasing never helps, in the truncated-slope convention
    for theta in (0.4, 1.2):
        width = fringe_width(SpinEnsemble(200), theta)
        for frac in (0.1, 0.4):
            for axis in ("x", "y"):
                previous = 0.0
                for gamma in (0.0, 0.5, 2.0, 10.0):
                    vals, div = sensitivity.exact_values(100.0, theta, gamma, frac * width,
                                                         axis, slope_mode="eq4")
                    if div[0]:
                        continue
                    if vals[0] < previous * (1 - 1e-12):
                        failures.append(f"gamma monotonicity broken at theta={theta} axis={axis}")
                    previous = vals[0]

    # divergences sit at s*pi/(2J cos theta) for x, (s+1/2)*pi/(2J cos theta) for y
    J = 1000.0
    width = math.pi / (2 * J * math.cos(math.pi / 4))
    phis = np.linspace(width / 2000, 2 * width, 4000)
    x_vals, _ = sensitivity.exact_values(J, math.pi / 4, 0.0, phis, "x")
    y_vals, _ = sensitivity.exact_values(J, math.pi / 4, 0.0, phis, "y")
    x_base = np.nanmin(x_vals)
    y_base = np.nanmin(y_vals)
    point = sensitivity.exact(SpinEnsemble(2000), ProtocolParams(theta=math.pi / 4, phi=0.0),
                              axis="x")
    if not point.divergent_x:
        failures.append("x readout not flagged divergent at phi=0 (s=0 pole)")
    for s in (1, 2):
        near = np.abs(phis - s * width) < 0.05 * width
        if np.nanmax(np.where(near, x_vals, np.nan)) < 50 * x_base:
            failures.append(f"no x divergence peak at s={s}")
    for s in (0, 1):
        near = np.abs(phis - (s + 0.5) * width) < 0.05 * width
        if np.nanmax(np.where(near, y_vals, np.nan)) < 50 * y_base:
            failures.append(f"no y divergence peak at s={s}")

    # byte-for-byte deterministic sweep datasets
    a, b = tmp_path / "sweep_a.csv", tmp_path / "sweep_b.csv"
    args = ["fig2", "--theta-points", "6", "--N", "2000"]
    assert cli.main(args + ["--out", str(a)]) == 0
    assert cli.main(args + ["--out", str(b)]) == 0
    if a.read_bytes() != b.read_bytes():
        failures.append("sweep output bytes differ between identical runs")

    report(9, "symmetry, monotonicity, pole placement, determinism", failures)
