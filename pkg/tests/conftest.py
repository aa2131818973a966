import numpy as np

from twistsense import oracle


def rel_to_scale(value, reference, scale=1.0):
    """|value - reference| relative to max(scale, |reference|).

    Quantities like variances vanish exactly at special points (CSS along
    the measured axis), where a bare relative error is meaningless; the
    scale floor keeps the comparison finite there.
    """
    return abs(value - reference) / max(scale, abs(reference))


def oracle_transverse(rho, axis):
    """(mean, variance) of Jx or Jy from a Dicke-basis density matrix."""
    mean = oracle.expect(rho, "J" + axis).real
    second = oracle.expect(rho, "J" + axis + "2").real
    return mean, second - mean * mean


def evolved_css(n, theta, phi, gamma):
    from twistsense.moments import SpinEnsemble

    rho0 = oracle.css_prepare(SpinEnsemble(n), theta).density_matrix()
    return oracle.evolve(rho0, phi, gamma)
