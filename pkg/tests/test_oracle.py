import math

import numpy as np
import pytest

from twistsense import moments, oracle, sensitivity
from twistsense.moments import ProtocolParams, SpinEnsemble
from twistsense.oracle import (
    DensityMatrix,
    DickeState,
    DivergentSlopeError,
    css_prepare,
    evolve,
    expect,
    m_values,
    sensitivity_fd,
)


def test_css_single_spin_half_rotation():
    # exp(-i (pi/2) Jy) for J=1/2 maps |up> to (|up> + |down>)/sqrt(2);
    # amplitudes are stored with m ascending, physical check: <Jx> = +1/2
    state = css_prepare(SpinEnsemble(1), math.pi / 2)
    ratio = state.amplitudes[0] / state.amplitudes[1]
    assert ratio == pytest.approx(1.0, rel=1e-12)
    assert abs(state.amplitudes[1]) == pytest.approx(1 / math.sqrt(2), rel=1e-12)
    rho = state.density_matrix()
    assert expect(rho, "Jx").real == pytest.approx(0.5, rel=1e-12)


def test_css_small_angle_keeps_weight_on_top_state():
    state = css_prepare(SpinEnsemble(12), 1e-9)
    assert abs(state.amplitudes[-1]) ** 2 == pytest.approx(1.0, abs=1e-12)


def test_css_statistics_match_text_formulas():
    ens = SpinEnsemble(10)
    for theta in (math.pi / 4, 1.0, 2.2):
        rho = css_prepare(ens, theta).density_matrix()
        assert expect(rho, "Jz").real == pytest.approx(ens.J * math.cos(theta), abs=1e-12)
        jz2 = ens.J**2 - ens.J * (ens.J - 0.5) * math.sin(theta) ** 2
        assert expect(rho, "Jz2").real == pytest.approx(jz2, rel=1e-12)


def test_css_rejects_bad_inputs():
    with pytest.raises(ValueError):
        css_prepare(SpinEnsemble(4), 0.0)
    with pytest.raises(ValueError):
        css_prepare(SpinEnsemble(4), math.pi)
    with pytest.raises(ValueError):
        css_prepare(SpinEnsemble(5000), 1.0)


def test_state_and_density_invariants_enforced():
    with pytest.raises(ValueError):
        DickeState(np.array([1.0, 1.0], dtype=complex))
    good = css_prepare(SpinEnsemble(3), 0.7)
    rho = good.density_matrix()
    assert abs(np.trace(rho.entries) - 1.0) < 1e-14
    with pytest.raises(ValueError):
        DensityMatrix(rho.entries + 1e-6 * 1j)  # breaks Hermiticity
    with pytest.raises(ValueError):
        DensityMatrix(2.0 * rho.entries)  # breaks the trace


def test_evolve_identity_and_diagonal():
    rho0 = css_prepare(SpinEnsemble(8), 1.1).density_matrix()
    same = evolve(rho0, 0.0, 5.0)
    assert np.array_equal(same.entries, rho0.entries)
    moved = evolve(rho0, 0.7, 3.0)
    assert np.array_equal(np.diag(moved.entries), np.diag(rho0.entries))
    assert np.max(np.abs(moved.entries - moved.entries.conj().T)) < 1e-14
    assert abs(np.trace(moved.entries) - 1.0) < 1e-14


def test_evolve_rejects_backwards_dephasing():
    rho0 = css_prepare(SpinEnsemble(4), 0.9).density_matrix()
    with pytest.raises(ValueError):
        evolve(rho0, -0.1, 2.0)
    evolve(rho0, -0.1, 0.0)  # negative phase is fine without dephasing


def test_evolve_matches_pure_state_twisting_without_dephasing():
    ens = SpinEnsemble(8)
    state = css_prepare(ens, 1.0)
    phi = 0.37
    m = m_values(ens.particles)
    psi = np.exp(-1j * phi * m**2) * state.amplitudes
    direct = np.outer(psi, psi.conj())
    evolved = evolve(state.density_matrix(), phi, 0.0)
    assert np.max(np.abs(direct - evolved.entries)) < 1e-12


def test_evolved_states_stay_positive():
    worst = 0.0
    for n in (2, 5, 10, 20):
        for theta in (0.3, math.pi / 4, 2.0):
            rho0 = css_prepare(SpinEnsemble(n), theta).density_matrix()
            for phi in (0.1, 0.5, 1.0):
                for gamma in (0.1, 1.0, 10.0):
                    eig = np.linalg.eigvalsh(evolve(rho0, phi, gamma).entries)
                    worst = min(worst, float(eig.min()))
    assert worst >= -1e-10


def test_expect_highest_weight_state():
    n = 6
    amplitudes = np.zeros(n + 1, dtype=complex)
    amplitudes[-1] = 1.0  # |J, J>
    rho = DickeState(amplitudes).density_matrix()
    assert expect(rho, "Jz").real == pytest.approx(n / 2, rel=1e-15)
    assert abs(expect(rho, "J+")) == 0.0
    with pytest.raises(ValueError):
        expect(rho, "Jq")


def test_sensitivity_fd_matches_closed_form():
    cases = [(4, math.pi / 4, 0.3, 0.0, "x"), (8, math.pi / 3, 0.2, 1.0, "x"),
             (2, math.pi / 3, 0.2, 1.0, "y"), (12, 1.1, 0.15, 2.0, "y")]
    for n, theta, phi, gamma, axis in cases:
        ens = SpinEnsemble(n)
        fd = sensitivity_fd(ens, theta, phi, gamma, axis)
        point = sensitivity.exact(ens, ProtocolParams(theta=theta, phi=phi, gamma=gamma), axis=axis)
        assert not point.divergent(axis)
        assert abs(fd - point.value(axis)) / point.value(axis) < 1e-5


def test_sensitivity_fd_divergences():
    # theta -> 0: the transverse signal slope vanishes with sin(theta)
    with pytest.raises(DivergentSlopeError):
        sensitivity_fd(SpinEnsemble(4), 1e-15, 0.3, 0.0, "x")
    # on the equator <Jy> vanishes identically, for the oracle and the
    # closed forms alike
    with pytest.raises(DivergentSlopeError):
        sensitivity_fd(SpinEnsemble(2), math.pi / 2, 0.2, 1.0, "y")
    point = sensitivity.exact(SpinEnsemble(2), ProtocolParams(theta=math.pi / 2, phi=0.2, gamma=1.0), axis="y")
    assert point.divergent_y and point.dpy is None


def test_sensitivity_fd_input_checks():
    with pytest.raises(ValueError):
        sensitivity_fd(SpinEnsemble(4), 1.0, 0.3, 0.0, "z")
    with pytest.raises(ValueError):
        sensitivity_fd(SpinEnsemble(4), 1.0, 1e-9, 2.0, "x")  # stencil would cross phi=0
