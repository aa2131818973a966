#!/usr/bin/env python3
"""Where the best operating phase sits, and which stationarity family owns it.

Without dephasing the local minima of the x-readout sensitivity satisfy
either a transcendental balance, cos(theta) cot(alpha) = -2 J phi
sin^2(theta), or the sine condition sin(alpha) = cot(theta), with
alpha = 2 J phi cos(theta).  For theta = pi/4 the optimum follows
0.89 pi/(sqrt(2) J); tipping past the bifurcation hands it to the sine
branch, e.g. 0.2 pi/J at theta = pi/3.

Note the global optimum hops branches slightly above pi/4 at finite J
(near theta = 0.955 for J = 1e3): close to the fringe edge the exact
sensitivity still undercuts the sine-branch minimum there.
"""

import math

from twistsense.moments import SpinEnsemble
from twistsense.optimizer import find_optimum, stationarity_roots

print("best phase versus J (x readout, gamma = 0)")
print(f"{'J':>8} {'theta':>8} {'phi_min':>12} {'x 0.89pi/(sqrt2 J)':>19} {'x 0.2pi/J':>10} {'branch':>15}")
for n in (200, 2000, 20000):
    ens = SpinEnsemble(n)
    for theta in (math.pi / 4, math.pi / 3):
        rep = find_optimum(ens, theta, 0.0, axis="x")
        r89 = rep.phi_min / (0.89 * math.pi / (math.sqrt(2) * ens.J))
        r02 = rep.phi_min / (0.2 * math.pi / ens.J)
        print(f"{ens.J:8g} {theta:8.4f} {rep.phi_min:12.4e} {r89:19.3f} {r02:10.3f} {rep.branch:>15}")

print("\nbranch ownership across theta (J = 1e3)")
ens = SpinEnsemble(2000)
previous = None
for i in range(28):
    theta = 0.30 + i * 0.09
    rep = find_optimum(ens, theta, 0.0, axis="x")
    marker = "  <- branch hop" if previous not in (None, rep.branch) else ""
    print(f"  theta = {theta:5.2f}: {rep.branch:15s} phi_min = {rep.phi_min:.3e}{marker}")
    previous = rep.branch

print("\nstationarity families at theta = pi/3 (first three fringes):")
for phi, branch in stationarity_roots(ens, math.pi / 3):
    alpha = 2 * ens.J * phi * math.cos(math.pi / 3)
    print(f"  phi = {phi:.4e}  alpha/pi = {alpha/math.pi:.4f}  {branch}")
