import numpy as np
import pytest

from mixdisp.errors import SignalError
from mixdisp.kernel_lab import (
    ball_volume,
    bound_constant,
    decay_fit,
    dispersive_envelope,
    kernel,
    kernel_real_axis,
    lorentz_norm,
    sample_decay,
)

# layer-cake quadrature q * int mu(s)^(1/q) ds in mpmath (scratch oracle, 20 digits)
LORENTZ_REFERENCE = 37.6297369063378


def test_time_reversal_conjugates():
    a = kernel(0.7, 1.5, 1.0)
    b = kernel(-0.7, 1.5, 1.0)
    assert b.value == pytest.approx(np.conj(a.value), rel=1e-12)


@pytest.mark.parametrize("t, r, beta", [(1.0, 1.0, 1.0), (0.3, 2.0, 0.0), (2.0, 0.5, -1.0)])
def test_contour_route_matches_real_axis(t, r, beta):
    eps = 0.1
    rotated = kernel(t, r, beta, eps).value
    direct = kernel_real_axis(t, r, beta, eps, n_nodes=40001)
    assert abs(rotated - direct) <= 1e-7 * abs(direct)


def test_eps_refinement_converges():
    vals = [kernel(1.0, 1.0, 1.0, eps).value for eps in (1e-2, 5e-3, 2.5e-3, 1.25e-3)]
    diffs = np.abs(np.diff(vals))
    assert np.all(diffs[1:] < diffs[:-1])


def test_error_estimate_reported():
    s = kernel(5.0, 2.0, 1.0)
    assert s.error <= 1e-6 and s.nodes > 0


@pytest.mark.parametrize("kwargs", [{"t": 0.0}, {"eps": 0.0}, {"r": -1.0}])
def test_kernel_rejects_bad_input(kwargs):
    args = {"t": 1.0, "r": 1.0, "beta": 1.0, "eps": 1e-3}
    args.update(kwargs)
    with pytest.raises(SignalError) as err:
        kernel(**args)
    assert err.value.signal == "invalid-config"


def test_small_time_slope_four_dimensions():
    ts = np.geomspace(1e-2, 1e-1, 8)
    fit = decay_fit(ts, sample_decay(ts, 1.0, 4), "small_time", 4, 1.0)
    assert -1.15 <= fit.exponent <= -0.85
    assert fit.target == -1.0


def test_small_time_slope_three_dimensions_beta_zero():
    ts = np.geomspace(1e-2, 1e-1, 8)
    fit = decay_fit(ts, sample_decay(ts, 0.0, 3), "small_time", 3, 0.0)
    assert fit.exponent == pytest.approx(-0.75, abs=0.15)


def test_decay_fit_window_checks():
    with pytest.raises(SignalError):
        decay_fit(np.linspace(1, 2, 8), np.ones(8), "small_time", 3, 1.0)
    ts = np.geomspace(1, 100, 8)
    mags = ts ** -1.5
    mags[3] *= 5.0
    fit = decay_fit(ts, mags, "large_time", 3, 1.0)
    assert "oscillatory" in fit.flags and fit.target == -1.5
    assert fit.residual > 0


def test_decay_fit_exact_power():
    ts = np.geomspace(5, 200, 8)
    fit = decay_fit(ts, 3.0 * ts ** -0.75, "large_time", 3, 0.0)
    assert fit.exponent == pytest.approx(-0.75, abs=1e-12)
    assert fit.residual < 1e-12 and fit.flags == []


def test_pointwise_bound_constant():
    C, rows = bound_constant([0.05, 0.2, 1, 5, 20], [0.5, 2, 5, 10], beta=1.0)
    assert np.isfinite(C) and C < 1e3
    assert rows.shape == (20, 6)
    assert dispersive_envelope(4.0, 1.0, 3) == pytest.approx(4.0 ** -1.5 * np.exp(-1.0))


def test_ball_volume_general_dimension():
    r = np.array([0.5, 2.0])
    from mixdisp.manifold import ManifoldProfile

    np.testing.assert_allclose(ball_volume(r, 3, ManifoldProfile.hyperbolic(3)), ball_volume(r, 3), rtol=1e-12)


def test_lorentz_indicator_equals_lq():
    r = np.linspace(0.0, 3.0, 30001)
    f = (r <= 1.0).astype(float)
    q = 3.0
    assert lorentz_norm(r, f, q, q) == pytest.approx(ball_volume(1.0, 3) ** (1 / q), rel=1e-3)


def test_lorentz_zero_and_index_checks():
    r = np.linspace(0, 1, 11)
    assert lorentz_norm(r, np.zeros(11), 3.0, 1.0) == 0.0
    for q, theta in ((2.0, 1.0), (3.0, 0.5)):
        with pytest.raises(SignalError) as err:
            lorentz_norm(r, np.ones(11), q, theta)
        assert err.value.signal == "unsupported-index"


def test_lorentz_rearranged_profile_matches_layer_cake():
    r = np.linspace(0.0, 60.0, 6001)
    got = lorentz_norm(r, r ** (4 / 3) * np.exp(-r), 3.0, 1.0)
    assert got == pytest.approx(LORENTZ_REFERENCE, rel=1e-4)


def test_lorentz_weak_norm_dominated():
    r = np.linspace(0.0, 20.0, 2001)
    f = np.exp(-r)
    assert lorentz_norm(r, f, 3.0, np.inf) <= lorentz_norm(r, f, 3.0, 3.0) <= lorentz_norm(r, f, 3.0, 1.0)
