"""End-to-end acceptance checks, one group of tests per numbered criterion.

The conftest hook prints one [PASS]/[FAIL] line per criterion at the end of
the run; a criterion passes only if every test carrying its marker passes.
"""

import numpy as np
import pytest

from mixdisp.ground_state import el_residual, hb_norm_sq, minimize_quotient
from mixdisp.htransform import HelgasonTransform
from mixdisp.kernel_lab import decay_fit, kernel_lorentz_series, sample_decay
from mixdisp.manifold import ManifoldProfile
from mixdisp.nls_evolution import (
    ConjugatedSpace,
    EvolutionConfig,
    HyperbolicSpace,
    admissible,
    classify_trapping,
    evolve,
    scattering_cauchy,
    strichartz_quotient,
    trapping_energy,
    trapping_signs,
)
from mixdisp.rotsym_operator import (
    DEFAULT_SWEEP,
    DiscreteOperator,
    factorization_residual,
    mu_sweep,
    resolvent_split_check,
)
from mixdisp.special_functions import eigen_residual, spherical_table
from mixdisp.virial import (
    big_inequality_margins,
    blowup_drive,
    build_weight,
    coefficients,
    negative_energy_gaussian,
    rate_check,
)

C1 = pytest.mark.criterion(1, "Plancherel identity for N = 2..5 and three Gaussian widths")
C2 = pytest.mark.criterion(2, "spherical functions: eigen-residual and decay bound")
C3 = pytest.mark.criterion(3, "kernel small-time decay slope -N/4")
C4 = pytest.mark.criterion(4, "kernel large-time decay slopes for beta = 0, 1")
C5 = pytest.mark.criterion(5, "Lorentz L^{3,1} large-time decay slope")
C6 = pytest.mark.criterion(6, "split-step conservation and second-order convergence")
C7 = pytest.mark.criterion(7, "Strichartz quotient stability")
C8 = pytest.mark.criterion(8, "scattering Cauchy sum and small-data contraction")
C9 = pytest.mark.criterion(9, "ground state residual, identities and trapping signs")
C10 = pytest.mark.criterion(10, "conjugated operator algebra and resolvent sweep")
C11 = pytest.mark.criterion(11, "virial coefficients, margins and rate check")
C12 = pytest.mark.criterion(12, "blow-up detection and defocusing twin")


# 1 -----------------------------------------------------------------------------

@C1
@pytest.mark.parametrize("dim", [2, 3, 4, 5])
def test_plancherel(dim):
    tr = HelgasonTransform.build(dim, 9.0, 384, 24.0, 384)
    for width in (0.5, 1.0, 2.0):
        f = tr.field(np.exp(-tr.radial.r ** 2 / width ** 2))
        a, b = f.norm_sq(), tr.forward(f).norm_sq()
        assert abs(a - b) <= 1e-6 * a, (width, a, b)


# 2 -----------------------------------------------------------------------------

@C2
@pytest.mark.parametrize("dim", [2, 3, 4, 5])
def test_spherical_eigen_residual(dim):
    res = eigen_residual([0.5, 1.0, 2.0, 4.0], dim)
    assert np.all(res <= 1e-4), res


@C2
@pytest.mark.parametrize("dim", [2, 3, 4, 5])
def test_spherical_decay_bound(dim):
    rho = (dim - 1) / 2.0
    r = np.linspace(0.0, 30.0, 301)
    table = spherical_table([0.0, 0.5, 1.0, 2.0, 4.0], r, dim)
    zero = table[0]
    assert np.all(np.abs(table[1:]) <= zero * (1 + 1e-9) + 1e-12)
    envelope = zero * np.exp(rho * r) / (1 + r)
    # the scaled zero mode stays bounded and settles to a constant
    assert np.max(envelope) < 20.0
    tail = envelope[r >= 20.0]
    assert np.ptp(tail) < 0.05 * tail.mean()


# 3 -----------------------------------------------------------------------------

@C3
@pytest.mark.parametrize("dim", [3, 4, 5])
@pytest.mark.parametrize("beta", [0.0, 1.0])
def test_small_time_slope(dim, beta):
    ts = np.geomspace(1e-2, 1e-1, 8)
    fit = decay_fit(ts, sample_decay(ts, beta, dim), "small_time", dim, beta)
    assert abs(fit.exponent + dim / 4.0) <= 0.15, fit


# 4 -----------------------------------------------------------------------------

@C4
@pytest.mark.parametrize("beta, band", [(1.0, (-1.7, -1.3)), (0.0, (-0.95, -0.55))])
def test_large_time_slope(beta, band):
    ts = np.geomspace(5.0, 200.0, 8)
    fit = decay_fit(ts, sample_decay(ts, beta, 3), "large_time", 3, beta)
    assert band[0] <= fit.exponent <= band[1], fit


# 5 -----------------------------------------------------------------------------

@C5
def test_lorentz_slope():
    ts = np.geomspace(5.0, 100.0, 8)
    norms = kernel_lorentz_series(ts, 1.0, q=3.0, theta=1.0)
    slope = np.polyfit(np.log(ts), np.log(norms), 1)[0]
    assert -1.7 <= slope <= -1.3, slope


# 6 -----------------------------------------------------------------------------

COMBOS = [(1, 0.0), (1, 1.0), (-1, 0.0), (-1, 1.0)]


@pytest.fixture(scope="module")
def space_1024():
    return HyperbolicSpace(3, 30.0, 1024)


@C6
@pytest.mark.parametrize("lam_sign, beta", COMBOS)
def test_conservation(space_1024, lam_sign, beta):
    sp = space_1024
    traj = evolve(EvolutionConfig(sp, beta, lam_sign, 1.0, 5e-4, 1.0, np.exp(-sp.r ** 2 / 4) + 0j))
    m, e = np.array(traj.mass), np.array(traj.energy)
    assert np.max(np.abs(m / m[0] - 1)) <= 1e-8
    assert np.max(np.abs(e - e[0])) <= 1e-6 * abs(e[0])


@C6
@pytest.mark.parametrize("lam_sign, beta", COMBOS)
def test_strang_order(lam_sign, beta):
    sp = HyperbolicSpace(3, 30.0, 512)
    u0 = np.exp(-sp.r ** 2 / 4) + 0j
    final = {}
    for k in (256, 512, 4096):
        cfg = EvolutionConfig(sp, beta, lam_sign, 1.0, 1.0 / k, 1.0, u0, snapshot_stride=k)
        final[k] = evolve(cfg).snapshots[-1]
    coarse = np.sqrt(sp.mass(final[256] - final[4096]))
    fine = np.sqrt(sp.mass(final[512] - final[4096]))
    assert abs(coarse / fine - 4.0) <= 0.5, coarse / fine


# 7 -----------------------------------------------------------------------------

@C7
@pytest.mark.parametrize("p, q, dim", [(4.0, 4.0, 3), (np.inf, 2.0, 3), (8.0, 4.0, 2)])
def test_strichartz_stability(p, q, dim):
    assert admissible(p, q, dim)
    sp = HyperbolicSpace(dim, 30.0, 512)
    short, long_ = [], []
    for width in (0.5, 1.0, 2.0):
        for horizon, store in ((1.0, short), (2.0, long_)):
            cfg = EvolutionConfig(sp, 1.0, 1, 1.0, 1e-2, horizon, np.exp(-sp.r ** 2 / width ** 2) + 0j,
                                  snapshot_stride=1, nonlinearity=0.0)
            store.append(strichartz_quotient(evolve(cfg), p, q))
    short, long_ = np.array(short), np.array(long_)
    assert short.max() / short.min() < 2.0, short
    assert np.max(np.abs(long_ / short - 1)) < 0.2, (short, long_)


# 8 -----------------------------------------------------------------------------

def _cauchy_sum(sp, amplitude):
    psi0 = np.exp(-sp.r ** 2 / 4) + 0j
    psi0 *= amplitude / np.sqrt(sp.mass(psi0))
    traj = evolve(EvolutionConfig(sp, 1.0, -1, 1.0, 1e-2, 20.0, psi0, snapshot_stride=10))
    return float(scattering_cauchy(traj).sum())


@C8
def test_scattering(space_1024):
    full = _cauchy_sum(space_1024, 1e-2)
    half = _cauchy_sum(space_1024, 5e-3)
    assert full <= 1e-3 * 1e-2
    # cubic nonlinearity: halving the data should shrink the sum by about 8
    assert 4.0 <= full / half <= 16.0, full / half


# 9 -----------------------------------------------------------------------------

@pytest.fixture(scope="module")
def ground():
    sp = HyperbolicSpace(3, 20.0, 512, shifted=False)
    return sp, minimize_quotient(sp, 1.0, 1.0, 1.0)


@C9
def test_ground_state_identities(ground):
    sp, res = ground
    Q = res.Q
    assert el_residual(sp, Q, 1.0, 1.0, 1.0) <= 1e-4
    norm = hb_norm_sq(sp, Q, 1.0, 1.0)
    power = sp.power_integral(Q, 4)
    assert abs(norm - power) <= 1e-6 * norm
    assert abs(trapping_energy(sp, Q, 1.0, 1.0, 1.0) - 0.25 * norm) <= 1e-6 * norm


@C9
@pytest.mark.parametrize("scale, label", [(0.8, "below_negative"), (1.2, "below_positive")])
def test_trapping_sign_constant(ground, scale, label):
    sp, res = ground
    psi0 = scale * res.Q + 0j
    assert classify_trapping(sp, psi0, res.Q, 1.0, 1.0, 1.0) == label
    traj = evolve(EvolutionConfig(sp, 1.0, 1, 1.0, 1e-3, 1.0, psi0, snapshot_stride=10))
    signs = trapping_signs(traj, res.Q, 1.0, 1.0)
    assert np.all(signs == signs[0]) and signs[0] != 0


# 10 ----------------------------------------------------------------------------

@C10
def test_potentials():
    r = np.linspace(0.1, 50.0, 200)
    assert np.all(ManifoldProfile.euclidean(3).potential(r) == 0.0)
    assert abs(ManifoldProfile.hyperbolic(3).potential(np.array([40.0]))[0] + 1.0) <= 1e-10


@C10
def test_factorization_order():
    fn = lambda r: np.exp(-(r - 3.0) ** 2)
    errs = [factorization_residual(ManifoldProfile.hyperbolic(3), 1.0, fn, 10.0, n) for n in (200, 400, 800)]
    for a, b in zip(errs, errs[1:]):
        assert 3.5 <= a / b <= 4.5, errs


@C10
def test_resolvent_split():
    op = DiscreteOperator.build(ManifoldProfile.hyperbolic(3), 20.0, 200)
    rng = np.random.default_rng(0)
    for _ in range(20):
        mu = complex(rng.uniform(-10, 10), rng.choice([-1, 1]) * rng.uniform(0.1, 10))
        assert resolvent_split_check(op, 1.0, mu, rng.standard_normal(op.n)) <= 1e-10


@C10
def test_resolvent_sweep():
    op = DiscreteOperator.build(ManifoldProfile.euclidean(3), 40.0, 400)
    norms = mu_sweep(op, 1.0, DEFAULT_SWEEP)
    assert norms.max() / np.median(norms) <= 10.0, norms


# 11 ----------------------------------------------------------------------------

@C11
@pytest.mark.parametrize("dim", [3, 5])
def test_virial_euclidean(dim):
    R = 5.0
    weight = build_weight(ManifoldProfile.euclidean(dim), R)
    c = coefficients(weight, None, 1.0)
    inside = c.r <= R
    r = c.r[inside]
    assert np.max(np.abs(c.A[inside] - 2 * (dim - 1) / r)) <= 1e-10 * np.max(2 * (dim - 1) / r)
    assert np.max(np.abs(c.F1[inside] - 16 * (dim - 1) / r)) <= 1e-10 * np.max(16 * (dim - 1) / r)
    m = big_inequality_margins(c, R)
    assert m.star_inner <= 1e-10 and m.star2_inner <= 1e-10


@C11
@pytest.mark.parametrize("lam_sign, nonlinearity", [(1, 0.0), (-1, 1.0), (1, 1.0)])
def test_virial_rate(lam_sign, nonlinearity):
    profile = ManifoldProfile.euclidean(3)
    space = ConjugatedSpace(profile, 20.0, 1000)
    weight = build_weight(profile, 1.5)
    u0 = np.exp(-space.r ** 2) * np.exp(0.5j * space.r ** 2)
    traj = evolve(EvolutionConfig(space, 1.0, lam_sign, 1.0, 1e-4, 0.2, u0, snapshot_stride=20,
                                  nonlinearity=nonlinearity, weight=weight))
    rep = rate_check(traj, weight, lam_sign, 1.0, amplitude=nonlinearity)
    assert rep.mismatch <= 1e-2, rep.as_text()


# 12 ----------------------------------------------------------------------------

@pytest.fixture(scope="module")
def blowup_setup():
    profile = ManifoldProfile.euclidean(5)
    space = ConjugatedSpace(profile, 30.0, 6000)
    return space, build_weight(profile, 2.5, 5.0), negative_energy_gaussian(space, 1.0, 1.0, 4.0, 1.2)


@C12
def test_blowup_detected(blowup_setup):
    space, weight, psi0 = blowup_setup
    rep = blowup_drive(space, 1.0, 1.0, psi0, weight, 1, dt=1e-4, T_max=10.0, dt_min=1e-7)
    assert all(rep.hypotheses.values()), rep.hypotheses
    assert rep.first_nonpositive == rep.first_nonpositive, "virial never crossed zero"
    assert rep.monotone_after_crossing
    growth = rep.lap_norm.max() / rep.lap_norm[0]
    assert growth >= 1e3, f"||Delta u|| grew by {growth:.1f} before t = {rep.times[-1]:.4f} ({rep.trigger})"


@C12
def test_defocusing_twin(blowup_setup):
    space, weight, psi0 = blowup_setup
    rep = blowup_drive(space, 1.0, 1.0, psi0, weight, -1, dt=1e-3, T_max=10.0, dt_min=1e-7)
    assert rep.status == "no-blowup-detected"
    assert rep.times[-1] == pytest.approx(10.0)
    m, e = rep.mass, rep.energy
    assert np.max(np.abs(m / m[0] - 1)) <= 1e-8
    assert np.max(np.abs(e - e[0])) <= 1e-6 * abs(e[0])
