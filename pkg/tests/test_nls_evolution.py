import numpy as np
import pytest

from mixdisp.errors import SignalError
from mixdisp.ground_state import minimize_quotient
from mixdisp.manifold import ManifoldProfile
from mixdisp.nls_evolution import (
    ConjugatedSpace,
    EvolutionConfig,
    HyperbolicSpace,
    admissible,
    classify_trapping,
    energy,
    evolve,
    mass,
    scattering_cauchy,
    strichartz_quotient,
    trapping_energy,
)
from mixdisp.special_functions import spherical_table


@pytest.fixture(scope="module")
def space():
    return HyperbolicSpace(3, 30.0, 512)


def gaussian(sp, width=2.0):
    return np.exp(-sp.r ** 2 / width ** 2) + 0j


def test_zero_data_stays_zero(space):
    traj = evolve(EvolutionConfig(space, 1.0, 1, 1.0, 1e-2, 0.2, np.zeros(space.r.size, complex)))
    assert all(np.all(s == 0) for s in traj.snapshots)
    assert mass(space, traj.snapshots[-1]) == 0.0
    assert energy(space, traj.snapshots[-1], 1.0, 1, 1.0) == 0.0


def test_linear_run_is_exact_group(space):
    u0 = gaussian(space)
    traj = evolve(EvolutionConfig(space, 1.0, 1, 1.0, 1e-2, 0.5, u0, snapshot_stride=5, nonlinearity=0.0))
    m = np.array(traj.mass)
    assert np.max(np.abs(m / m[0] - 1)) <= 1e-10
    direct = space.linear_flow(u0, 0.5, 1.0)
    assert np.sqrt(space.mass(traj.snapshots[-1] - direct)) <= 1e-10 * np.sqrt(m[0])
    assert np.all(scattering_cauchy(traj) <= 1e-10)


def test_energy_gauge_invariance(space):
    u = gaussian(space) * np.exp(0.3j * space.r)
    e = energy(space, u, 1.0, 1, 1.0)
    assert energy(space, np.exp(1.1j) * u, 1.0, 1, 1.0) == pytest.approx(e, rel=1e-12)


def test_gradient_identity_on_spherical_window():
    sp = HyperbolicSpace(3, 30.0, 2048, shifted=False)
    lam0 = 2.0
    window = np.exp(-((sp.r - 12.0) / 5.0) ** 4)
    u = spherical_table([lam0], sp.r, 3)[0] * window
    assert sp.grad_sq(u) == pytest.approx((lam0 ** 2 + 1.0) * sp.mass(u), rel=0.02)


def test_poincare_along_trajectory(space):
    traj = evolve(EvolutionConfig(space, 1.0, -1, 1.0, 1e-2, 0.5, gaussian(space), snapshot_stride=10))
    for s in traj.snapshots:
        assert space.grad_sq(s) >= space.rho ** 2 * space.mass(s) * (1 - 1e-10)


@pytest.mark.parametrize("p, q, dim, kind, expected", [
    (np.inf, 2, 3, "hyperbolic_adm", True),
    (np.inf, 2, 7, "hyperbolic_adm", True),
    (4, 4, 4, "hyperbolic_adm", True),
    (8, 4, 3, "hyperbolic_adm", False),
    (8, 4, 2, "hyperbolic_adm", True),
    (2, 10, 5, "B_adm", True),
    (2, 10, 5, "S_adm", False),
    (4, 3, 3, "S_adm", True),
    (2, np.inf, 2, "S_adm", False),
    (1, 100, 3, "hyperbolic_adm", False),
    (4, 2, 3, "hyperbolic_adm", False),
])
def test_admissible_examples(p, q, dim, kind, expected):
    assert admissible(p, q, dim, kind) is expected


def test_strichartz_quotient_zero_and_inadmissible(space):
    traj = evolve(EvolutionConfig(space, 1.0, 1, 1.0, 1e-2, 0.1, np.zeros(space.r.size, complex),
                                  nonlinearity=0.0))
    assert strichartz_quotient(traj, 4, 4) == 0.0
    with pytest.raises(SignalError) as err:
        strichartz_quotient(traj, 1, 100)
    assert err.value.signal == "inadmissible-pair"


def test_invalid_configs(space):
    u0 = gaussian(space)
    for kwargs in ({"lam_sign": 0}, {"sigma_nl": -1.0}, {"dt": 0.0}):
        args = dict(space=space, beta=1.0, lam_sign=1, sigma_nl=1.0, dt=1e-2, T=0.1, initial=u0)
        args.update(kwargs)
        with pytest.raises(SignalError) as err:
            evolve(EvolutionConfig(**args))
        assert err.value.signal == "invalid-config"
    big = HyperbolicSpace(6, 10.0, 64)
    with pytest.raises(SignalError):
        evolve(EvolutionConfig(big, 1.0, 1, 2.0, 1e-2, 0.1, gaussian(big)))


def test_growth_limit_stops_run(space):
    # a limit below one trips on the first recorded step
    u0 = gaussian(space, 1.0)
    traj = evolve(EvolutionConfig(space, 1.0, 1, 1.0, 1e-3, 1.0, u0, snapshot_stride=1, growth_limit=0.5))
    assert traj.status == "blow-up-suspected"
    assert traj.times[-1] < 1.0


def test_conjugated_space_conserves_mass():
    sp = ConjugatedSpace(ManifoldProfile.hyperbolic(3), 20.0, 800)
    u0 = sp.from_manifold(np.exp(-sp.r ** 2))
    traj = evolve(EvolutionConfig(sp, 1.0, -1, 1.0, 1e-3, 0.2, u0 + 0j, snapshot_stride=50))
    m = np.array(traj.mass)
    e = np.array(traj.energy)
    assert np.max(np.abs(m / m[0] - 1)) <= 1e-10
    assert np.max(np.abs(e / e[0] - 1)) <= 1e-4
    # mass on the flat side equals mass on the manifold
    psi = sp.manifold_values(u0)
    assert sp.manifold_cells.norm_sq(psi) == pytest.approx(sp.mass(u0), rel=1e-3)


@pytest.fixture(scope="module")
def ground():
    sp = HyperbolicSpace(3, 20.0, 256, shifted=False)
    return sp, minimize_quotient(sp, 1.0, 1.0, 1.0)


def test_trapping_classes(ground):
    sp, res = ground
    Q = res.Q
    assert classify_trapping(sp, Q, Q, 1.0, 1.0, 1.0) == "at_zero"
    assert classify_trapping(sp, 0.5 * Q, Q, 1.0, 1.0, 1.0) == "below_negative"
    # a rough bump carries far more quadratic energy than the ground state
    rough = 3.0 * np.exp(-sp.r ** 2) * np.cos(8 * sp.r)
    assert trapping_energy(sp, rough, 1.0, 1.0, 1.0) > trapping_energy(sp, Q, 1.0, 1.0, 1.0)
    assert classify_trapping(sp, rough, Q, 1.0, 1.0, 1.0) == "not_applicable"
