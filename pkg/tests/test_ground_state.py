import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from mixdisp.errors import SignalError
from mixdisp.ground_state import (
    el_residual,
    hb_norm_sq,
    minimize_quotient,
    norm_equivalence,
    poincare_ratios,
    quotient,
)
from mixdisp.nls_evolution import HyperbolicSpace, energy

SIGMA, BETA, LAM = 1.0, 1.0, 1.0


@pytest.fixture(scope="module")
def space():
    return HyperbolicSpace(3, 20.0, 512, shifted=False)


@pytest.fixture(scope="module")
def ground(space):
    return minimize_quotient(space, SIGMA, BETA, LAM)


def test_norm_of_zero_and_term_isolation(space):
    assert hb_norm_sq(space, np.zeros(space.r.size), BETA, LAM) == 0.0
    u = np.exp(-space.r ** 2)
    assert hb_norm_sq(space, u, 0.0, 0.0) == pytest.approx(space.lap_sq(u), rel=1e-12)


# scipy quad of (|Delta u|^2 + |u'|^2 + u^2) 4 pi sinh^2 r for u = exp(-r^2) on [0, 20]
NORM_REFERENCE = 54.4877105897408


def test_norm_refinement_oracle():
    values = []
    for n in (1024, 2048):
        sp = HyperbolicSpace(3, 20.0, n, shifted=False)
        values.append(hb_norm_sq(sp, np.exp(-sp.r ** 2), 1.0, 1.0))
    coarse, fine = values
    # second-order cells: halving h cuts the error by four
    assert (NORM_REFERENCE - coarse) / (NORM_REFERENCE - fine) == pytest.approx(4.0, rel=0.05)
    extrapolated = (4 * fine - coarse) / 3
    assert extrapolated == pytest.approx(NORM_REFERENCE, rel=1e-6)


def test_indefinite_shift_rejected(space):
    with pytest.raises(SignalError) as err:
        hb_norm_sq(space, np.exp(-space.r ** 2), 1.0, -3.0)
    assert err.value.signal == "indefinite-norm"


def test_supercritical_power_rejected():
    sp = HyperbolicSpace(6, 10.0, 64, shifted=False)
    with pytest.raises(SignalError) as err:
        minimize_quotient(sp, 2.0, 1.0, 1.0)
    assert err.value.signal == "invalid-config"


def test_ground_state_identities(space, ground):
    Q = ground.Q
    p = 2 * SIGMA + 2
    h = hb_norm_sq(space, Q, BETA, LAM)
    power = space.power_integral(Q, p)
    assert h == pytest.approx(power, rel=1e-6)
    assert ground.E_Q == pytest.approx(SIGMA / (2 * SIGMA + 2) * h, rel=1e-6)
    assert ground.E_Q > 0
    assert ground.residual <= 1e-4
    assert ground.D == pytest.approx(power ** (-2 * SIGMA / p), rel=1e-12)


def test_residual_properties(space, ground):
    assert el_residual(space, np.zeros(space.r.size), SIGMA, BETA, LAM) == 0.0
    assert el_residual(space, 2 * ground.Q, SIGMA, BETA, LAM) > ground.residual


def test_restart_reaches_same_quotient(space, ground):
    rng = np.random.default_rng(7)
    bump = np.exp(-((space.r - rng.uniform(0.5, 2.0)) / 0.7) ** 2)
    init = np.exp(-space.r ** 2) * (1 + 0.1 * bump)
    again = minimize_quotient(space, SIGMA, BETA, LAM, init=init)
    assert again.quotient == pytest.approx(ground.quotient, rel=1e-4)


def test_ground_state_is_minimal(space, ground):
    for width in (0.5, 1.0, 2.0):
        assert quotient(space, np.exp(-space.r ** 2 / width ** 2), BETA, LAM, SIGMA) >= ground.quotient


def test_energy_matches_evolution_functional(ground):
    # with a shift of zero the trapping energy is the evolution energy on the unshifted space
    sp = HyperbolicSpace(3, 20.0, 512, shifted=False)
    u = np.exp(-sp.r ** 2)
    e_evolve = energy(sp, u, BETA, 1, SIGMA)
    e_direct = 0.5 * hb_norm_sq(sp, u, BETA, 0.0) - sp.power_integral(u, 4) / 4
    assert e_evolve == pytest.approx(e_direct, rel=1e-12)


@pytest.mark.parametrize("width", [0.5, 1.0, 2.0, 4.0])
def test_poincare_chain(space, width):
    rho2 = space.rho ** 2
    r = poincare_ratios(space, np.exp(-space.r ** 2 / width ** 2))
    assert r[(1, 0)] >= rho2 * (1 - 1e-10)
    assert r[(2, 0)] >= rho2 ** 2 * (1 - 1e-10)
    assert r[(2, 1)] >= rho2 * (1 - 1e-10)


@pytest.mark.parametrize("width", [0.5, 1.0, 2.0, 4.0])
def test_norm_equivalence_constants(space, width):
    ratio = norm_equivalence(space, np.exp(-space.r ** 2 / width ** 2), BETA, LAM)
    assert 0.1 < ratio <= 1.0 + 1e-12


@settings(max_examples=30, deadline=None)
@given(st.floats(0.05, 50.0), st.booleans())
def test_quotient_scale_invariance(t, flip):
    sp = HyperbolicSpace(3, 10.0, 64, shifted=False)
    u = np.exp(-sp.r ** 2)
    scale = -t if flip else t
    assert quotient(sp, scale * u, BETA, LAM, SIGMA) == pytest.approx(quotient(sp, u, BETA, LAM, SIGMA), rel=1e-12)
