"""Time integration of the fourth-order Schrodinger flow

    i psi_t = -L psi + lam_sign |psi|^(2 sigma) psi

with ``L`` either the shifted operator ``(Delta + rho^2)^2 - beta (Delta + rho^2)``
on H^N or ``Delta^2 - beta Delta`` on a warped manifold.  ``lam_sign = +1`` is
focusing and ``-1`` defocusing.  The linear part is solved exactly in a
discrete eigenbasis (``HyperbolicSpace``) or by Crank-Nicolson on the
conjugated flat-space field (``ConjugatedSpace``); the nonlinear part is an
exact pointwise phase rotation, combined by Strang splitting.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import eigh_tridiagonal, solve_banded

from .errors import SignalError
from .manifold import ManifoldProfile
from .radial_fd import (
    apply_tridiag,
    flat_cells,
    symmetric_neg_laplacian,
    warped_cells,
)


# spaces -------------------------------------------------------------------

class HyperbolicSpace:
    """Radial fields on a ball of H^N with an exact discrete eigenbasis.

    The finite-volume ``-Delta`` (Dirichlet at ``r_max``) is diagonalized
    once; the coefficient map ``u -> U^T W^{1/2} u`` is a discrete unitary
    Helgason transform and ``mu - rho^2`` plays the role of ``lam^2``.
    """

    def __init__(self, dim, r_max=30.0, n=1024, shifted=True):
        self.profile = ManifoldProfile.hyperbolic(dim)
        self.dim = dim
        self.rho = (dim - 1) / 2.0
        self.shifted = shifted
        self.cells = warped_cells(self.profile, r_max, n)
        self.manifold_cells = self.cells
        diag, off = symmetric_neg_laplacian(self.cells)
        self.mu, self.basis = eigh_tridiagonal(diag, off)
        self.sqrt_w = np.sqrt(self.cells.volume)

    @property
    def r(self):
        return self.cells.r

    def spectral_variable(self):
        """``lam^2`` on the shifted scale, ``mu`` on the unshifted one."""
        return self.mu - self.rho ** 2 if self.shifted else self.mu

    def symbol(self, beta):
        s = self.spectral_variable()
        return s * s + beta * s

    def to_coeffs(self, u):
        return self.basis.T @ (self.sqrt_w * u)

    def from_coeffs(self, c):
        return (self.basis @ c) / self.sqrt_w

    def manifold_values(self, state):
        return state

    def mass(self, state):
        return self.cells.norm_sq(state)

    def quadratic(self, state, beta):
        """<L u, u> for the space's operator."""
        c = self.to_coeffs(state)
        return float(np.sum(self.symbol(beta) * np.abs(c) ** 2))

    def grad_sq(self, state):
        c = self.to_coeffs(state)
        return float(np.sum(self.mu * np.abs(c) ** 2))

    def lap_sq(self, state):
        c = self.to_coeffs(state)
        return float(np.sum(self.mu ** 2 * np.abs(c) ** 2))

    def laplacian(self, state):
        return -self.from_coeffs(self.mu * self.to_coeffs(state))

    def power_integral(self, state, p):
        return float(self.cells.integrate(np.abs(state) ** p))

    def nonlinear_modulus(self, state, sigma_nl):
        return np.abs(state) ** (2 * sigma_nl)

    def linear_flow(self, state, t, beta):
        """Exact ``exp(i t L)`` applied in the eigenbasis."""
        c = self.to_coeffs(state)
        return self.from_coeffs(np.exp(1j * t * self.symbol(beta)) * c)

    def linear_step(self, state, dt, beta):
        return self.linear_flow(state, dt, beta)


class ConjugatedSpace:
    """Fields on a warped manifold stored as ``phi = psi / sigma`` on a flat grid.

    The operator ``Delta_M^2 - beta Delta_M`` becomes
    ``P_V = (-Delta - V)(-Delta - V + beta)`` acting on ``phi``; the linear step
    is a Crank-Nicolson solve with the pentadiagonal symmetrized matrix.
    """

    def __init__(self, profile, r_max=20.0, n=2000):
        self.profile = profile
        self.dim = profile.dim
        self.cells = flat_cells(profile.dim, r_max, n)
        self.manifold_cells = warped_cells(profile, r_max, n)
        self.sigma = profile.sigma(self.cells.r)
        self.potential = profile.potential(self.cells.r)
        diag, off = symmetric_neg_laplacian(self.cells)
        self.a_diag = diag - self.potential
        self.a_off = off
        self.sqrt_w = np.sqrt(self.cells.volume)
        self._band_cache = {}

    @property
    def r(self):
        return self.cells.r

    def _apply_a(self, v):
        return apply_tridiag(self.a_diag, self.a_off, v)

    def apply_p_sym(self, v, beta):
        av = self._apply_a(v)
        return self._apply_a(av) + beta * av

    def p_banded(self, beta):
        """Pentadiagonal ``A(A + beta)`` in ``solve_banded`` layout."""
        d, e = self.a_diag, self.a_off
        n = d.size
        main = d * d + beta * d
        main[:-1] += e * e
        main[1:] += e * e
        first = e * (d[:-1] + d[1:]) + beta * e
        second = e[:-1] * e[1:]
        ab = np.zeros((5, n))
        ab[0, 2:] = second
        ab[1, 1:] = first
        ab[2] = main
        ab[3, :-1] = first
        ab[4, :-2] = second
        return ab

    def manifold_values(self, state):
        return self.sigma * state

    def from_manifold(self, psi):
        return np.asarray(psi) / self.sigma

    def mass(self, state):
        return self.cells.norm_sq(state)

    def quadratic(self, state, beta):
        v = self.sqrt_w * state
        av = self._apply_a(v)
        return float(np.real(np.vdot(av, av)) + beta * np.real(np.vdot(v, av)))

    def grad_sq(self, state):
        v = self.sqrt_w * state
        return float(np.real(np.vdot(v, self._apply_a(v))))

    def lap_sq(self, state):
        av = self._apply_a(self.sqrt_w * state)
        return float(np.real(np.vdot(av, av)))

    def power_integral(self, state, p):
        # |psi|^p dV_M = sigma^(p-2) |phi|^p r^(N-1) dr
        return float(self.cells.integrate(self.sigma ** (p - 2) * np.abs(state) ** p))

    def nonlinear_modulus(self, state, sigma_nl):
        return (self.sigma * np.abs(state)) ** (2 * sigma_nl)

    def linear_step(self, state, dt, beta):
        key = (dt, beta)
        ab = self._band_cache.get(key)
        if ab is None:
            p = self.p_banded(beta)
            ab = -0.5j * dt * p
            ab[2] += 1.0
            self._band_cache = {key: ab}
        v = self.sqrt_w * state
        rhs = v + 0.5j * dt * self.apply_p_sym(v, beta)
        try:
            out = solve_banded((2, 2), ab, rhs, check_finite=False)
        except (np.linalg.LinAlgError, ValueError) as exc:
            raise SignalError("linear-solve-failure", str(exc)) from exc
        if not np.all(np.isfinite(out)):
            raise SignalError("linear-solve-failure", "non-finite Crank-Nicolson solution")
        return out / self.sqrt_w


# functionals --------------------------------------------------------------

def mass(space, state):
    return space.mass(state)


def energy(space, state, beta, lam_sign, sigma_nl, amplitude=1.0):
    """``1/2 <L u, u> - lam_sign / (2 sigma + 2) int |u|^(2 sigma + 2)``."""
    p = 2 * sigma_nl + 2
    return 0.5 * space.quadratic(state, beta) - amplitude * lam_sign / p * space.power_integral(state, p)


# evolution ----------------------------------------------------------------

@dataclass
class EvolutionConfig:
    space: object
    beta: float
    lam_sign: int
    sigma_nl: float
    dt: float
    T: float
    initial: np.ndarray
    snapshot_stride: int = 10
    nonlinearity: float = 1.0     # test hook: 0 switches the nonlinear term off
    weight: object = None         # virial weight; logs M_phiR when present
    growth_limit: float = 1e6

    def validate(self):
        if self.lam_sign not in (-1, 1):
            raise SignalError("invalid-config", "lam_sign must be +1 or -1")
        if self.sigma_nl <= 0:
            raise SignalError("invalid-config", "nonlinearity power must be positive")
        n = self.space.dim
        if n > 4 and self.sigma_nl >= 4.0 / (n - 4):
            raise SignalError("invalid-config", "nonlinearity power is energy-supercritical")
        if self.dt <= 0 or self.T < 0:
            raise SignalError("invalid-config", "need dt > 0 and T >= 0")


@dataclass
class Trajectory:
    space: object
    beta: float
    times: list = field(default_factory=list)
    snapshots: list = field(default_factory=list)
    mass: list = field(default_factory=list)
    energy: list = field(default_factory=list)
    grad_norm: list = field(default_factory=list)
    lap_norm: list = field(default_factory=list)
    virial: list = field(default_factory=list)
    status: str = "ok"

    def log_rows(self):
        v = self.virial if self.virial else [np.nan] * len(self.times)
        return np.column_stack([self.times, self.mass, self.energy, self.grad_norm, self.lap_norm, v])

    @property
    def initial(self):
        return self.snapshots[0]


def nonlinear_phase(space, state, tau, lam_sign, sigma_nl, amplitude=1.0):
    """Exact solution of ``i u_t = lam_sign |u|^(2 sigma) u`` over time ``tau``."""
    if amplitude == 0.0:
        return state
    return state * np.exp(-1j * tau * amplitude * lam_sign * space.nonlinear_modulus(state, sigma_nl))


def _record(traj, cfg, t, state):
    sp = cfg.space
    traj.times.append(t)
    traj.snapshots.append(state.copy())
    traj.mass.append(sp.mass(state))
    traj.energy.append(energy(sp, state, cfg.beta, cfg.lam_sign, cfg.sigma_nl, cfg.nonlinearity))
    traj.grad_norm.append(np.sqrt(max(sp.grad_sq(state), 0.0)))
    traj.lap_norm.append(np.sqrt(max(sp.lap_sq(state), 0.0)))
    if cfg.weight is not None:
        from .virial import virial_value

        # the virial is taken in the opposite time orientation, hence the conjugate
        traj.virial.append(virial_value(np.conj(sp.manifold_values(state)), cfg.weight, sp.manifold_cells))


def evolve(cfg):
    """Strang splitting: half phase rotation, full linear step, half rotation.

    Returns a ``Trajectory``; a norm blow-up beyond ``growth_limit`` stops the
    run and sets ``status = 'blow-up-suspected'`` instead of raising.
    """
    cfg.validate()
    state = np.asarray(cfg.initial, dtype=complex).copy()
    traj = Trajectory(cfg.space, cfg.beta)
    _record(traj, cfg, 0.0, state)
    n_steps = int(round(cfg.T / cfg.dt))
    ref = max(traj.lap_norm[0], 1e-300)
    half = 0.5 * cfg.dt
    for k in range(1, n_steps + 1):
        state = nonlinear_phase(cfg.space, state, half, cfg.lam_sign, cfg.sigma_nl, cfg.nonlinearity)
        state = cfg.space.linear_step(state, cfg.dt, cfg.beta)
        state = nonlinear_phase(cfg.space, state, half, cfg.lam_sign, cfg.sigma_nl, cfg.nonlinearity)
        if k % cfg.snapshot_stride == 0 or k == n_steps:
            _record(traj, cfg, k * cfg.dt, state)
            if not np.isfinite(traj.lap_norm[-1]) or traj.lap_norm[-1] > cfg.growth_limit * ref:
                traj.status = "blow-up-suspected"
                break
    return traj


# Strichartz and scattering -------------------------------------------------

def admissible(p, q, dim, kind="hyperbolic_adm"):
    """Membership of the exponent pair in the requested admissible set."""
    if p < 1 or q < 1:
        return False
    ip = 0.0 if np.isinf(p) else 1.0 / p
    iq = 0.0 if np.isinf(q) else 1.0 / q
    tol = 1e-12
    if kind == "hyperbolic_adm":
        if abs(ip) < tol and abs(iq - 0.5) < tol:
            return True
        return 0 < ip <= 0.5 + tol and 0 < iq < 0.5 and 4 * ip + dim * iq >= dim / 2.0 - tol
    if kind in ("S_adm", "B_adm"):
        a = 2.0 if kind == "S_adm" else 4.0
        if abs(a * ip + dim * iq - dim / 2.0) > tol:
            return False
        if not (2 <= p <= np.inf and 2 <= q < np.inf or (np.isinf(p) and q == 2)):
            return False
        # the forbidden endpoint of the second-order scaling in dimension 2
        if kind == "S_adm" and dim == 2 and p == 2:
            return False
        return True
    raise SignalError("invalid-config", f"unknown admissibility kind {kind!r}")


def spacetime_norm(traj, p, q):
    """``|| psi ||_{L^p_t L^q_x}`` by the composite trapezoid rule over snapshots."""
    sp = traj.space
    times = np.asarray(traj.times)
    if np.isinf(q):
        inner = np.array([np.max(np.abs(sp.manifold_values(s))) for s in traj.snapshots])
    else:
        inner = np.array([sp.power_integral(s, q) ** (1.0 / q) for s in traj.snapshots])
    if np.isinf(p):
        return float(np.max(inner))
    return float(np.trapezoid(inner ** p, times) ** (1.0 / p))


def strichartz_quotient(traj, p, q, kind="hyperbolic_adm"):
    if not admissible(p, q, traj.space.dim, kind):
        raise SignalError("inadmissible-pair", f"({p}, {q}) is not admissible in dimension {traj.space.dim}")
    m0 = np.sqrt(traj.mass[0])
    if m0 == 0.0:
        return 0.0
    return spacetime_norm(traj, p, q) / m0


def scattering_cauchy(traj):
    """Successive differences of the linearly pulled-back states."""
    sp = traj.space
    pulled = [sp.linear_flow(s, -t, traj.beta) for t, s in zip(traj.times, traj.snapshots)]
    return np.array([np.sqrt(sp.mass(b - a)) for a, b in zip(pulled[:-1], pulled[1:])])


# trapping ----------------------------------------------------------------

def trapping_energy(space, u, beta, lam_shift, sigma_nl):
    from .ground_state import hb_norm_sq

    p = 2 * sigma_nl + 2
    return 0.5 * hb_norm_sq(space, u, beta, lam_shift) - space.power_integral(u, p) / p


def classify_trapping(space, psi0, Q, beta, lam_shift, sigma_nl, tol=1e-10):
    from .ground_state import hb_norm_sq

    e0 = trapping_energy(space, psi0, beta, lam_shift, sigma_nl)
    eq = trapping_energy(space, Q, beta, lam_shift, sigma_nl)
    if e0 > eq + tol * abs(eq):
        return "not_applicable"
    nq = hb_norm_sq(space, Q, beta, lam_shift)
    delta = hb_norm_sq(space, psi0, beta, lam_shift) - nq
    if abs(delta) <= tol * nq:
        return "at_zero"
    return "below_negative" if delta < 0 else "below_positive"


def trapping_signs(traj, Q, lam_shift, sigma_nl):
    from .ground_state import hb_norm_sq

    sp = traj.space
    nq = hb_norm_sq(sp, Q, traj.beta, lam_shift)
    return np.array([np.sign(hb_norm_sq(sp, s, traj.beta, lam_shift) - nq) for s in traj.snapshots])
