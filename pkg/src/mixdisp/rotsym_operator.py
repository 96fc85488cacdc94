"""Conjugation of radial problems on a warped manifold to flat space.

With ``psi = sigma phi`` the operator ``Delta_M^2 - beta Delta_M`` becomes
``P_V = (-Delta - V)(-Delta - V + beta)`` on R^N, which factors for every
spectral parameter ``mu``:

    P_V - mu = (A + g1)(A + g2),  A = -Delta - V,  g1 + g2 = beta,  g1 g2 = -mu.

Everything here works with the symmetrized matrices ``W^{1/2} A W^{-1/2}``
from the finite-volume grid, so ``P_V`` is a real symmetric pentadiagonal
matrix and resolvents are banded solves.
"""

from dataclasses import dataclass

import numpy as np
from scipy.linalg import solve_banded

from .errors import SignalError
from .manifold import sphere_area
from .radial_fd import (
    apply_tridiag,
    dense_symmetric,
    flat_cells,
    symmetric_neg_laplacian,
    warped_cells,
)


# conjugation ------------------------------------------------------------

def conjugate_down(profile, r, psi):
    """``phi = psi / sigma`` at the radii ``r``."""
    return np.asarray(psi) / profile.sigma(r)


def conjugate_up(profile, r, phi):
    return np.asarray(phi) * profile.sigma(r)


def l2_norms(profile, psi_fn, r_max=30.0, n_panels=200):
    """(||psi||_{L^2(M)}^2, ||psi/sigma||_{L^2(R^N)}^2) by Gauss-Legendre quadrature."""
    x, w = np.polynomial.legendre.leggauss(16)
    edges = np.linspace(0.0, r_max, n_panels + 1)
    half = 0.5 * np.diff(edges)
    r = (0.5 * (edges[1:] + edges[:-1])[:, None] + half[:, None] * x).ravel()
    wt = (half[:, None] * w).ravel() * sphere_area(profile.dim)
    psi = psi_fn(r)
    phi = conjugate_down(profile, r, psi)
    on_m = np.sum(wt * profile.volume_density(r) * np.abs(psi) ** 2)
    flat = np.sum(wt * r ** (profile.dim - 1) * np.abs(phi) ** 2)
    return float(on_m), float(flat)


def bookkeeping_identity(profile, h_fn, q, r_max=30.0, n_panels=200):
    """Both sides of ``||h/sigma||_{L^q(R^N)}^q = ||h sigma^{2/q-1}||_{L^q(M)}^q``."""
    x, w = np.polynomial.legendre.leggauss(16)
    edges = np.linspace(0.0, r_max, n_panels + 1)
    half = 0.5 * np.diff(edges)
    r = (0.5 * (edges[1:] + edges[:-1])[:, None] + half[:, None] * x).ravel()
    wt = (half[:, None] * w).ravel() * sphere_area(profile.dim)
    h = np.abs(h_fn(r))
    s = profile.sigma(r)
    flat = np.sum(wt * r ** (profile.dim - 1) * (h / s) ** q)
    on_m = np.sum(wt * profile.volume_density(r) * (h * s ** (2.0 / q - 1.0)) ** q)
    return float(flat), float(on_m)


# discrete operators ------------------------------------------------------

@dataclass
class DiscreteOperator:
    """Symmetrized ``A = -Delta - V`` on a flat cell grid plus helpers."""

    profile: object
    cells: object
    a_diag: np.ndarray
    a_off: np.ndarray

    @classmethod
    def build(cls, profile, r_max=20.0, n=200):
        cells = flat_cells(profile.dim, r_max, n)
        diag, off = symmetric_neg_laplacian(cells)
        v = profile.potential(cells.r) if profile.kind != "euclidean" else np.zeros(n)
        return cls(profile, cells, diag - v, off)

    @property
    def n(self):
        return self.a_diag.size

    @property
    def r(self):
        return self.cells.r

    def apply_a(self, v, shift=0.0):
        return apply_tridiag(self.a_diag + shift, self.a_off, v)

    def apply_p(self, v, beta):
        av = self.apply_a(v)
        return self.apply_a(av) + beta * av

    def a_banded(self, shift):
        ab = np.zeros((3, self.n), dtype=complex)
        ab[0, 1:] = self.a_off
        ab[1] = self.a_diag + shift
        ab[2, :-1] = self.a_off
        return ab

    def p_banded(self, beta, mu=0.0):
        d, e = self.a_diag, self.a_off
        main = d * d + beta * d
        main[:-1] += e * e
        main[1:] += e * e
        first = e * (d[:-1] + d[1:]) + beta * e
        second = e[:-1] * e[1:]
        ab = np.zeros((5, self.n), dtype=complex)
        ab[0, 2:] = second
        ab[1, 1:] = first
        ab[2] = main - mu
        ab[3, :-1] = first
        ab[4, :-2] = second
        return ab

    def dense_a(self):
        return dense_symmetric(self.a_diag, self.a_off)

    def dense_p(self, beta):
        a = self.dense_a()
        return a @ a + beta * a

    def symmetric_defect(self, beta):
        p = self.dense_p(beta)
        return float(np.max(np.abs(p - p.T)))

    def to_sym(self, phi):
        return np.sqrt(self.cells.volume) * phi

    def from_sym(self, v):
        return v / np.sqrt(self.cells.volume)


def _solve(ab, lower_upper, rhs):
    try:
        out = solve_banded(lower_upper, ab, rhs, check_finite=False)
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise SignalError("resolvent-singular", str(exc)) from exc
    if not np.all(np.isfinite(out)):
        raise SignalError("resolvent-singular", "non-finite banded solution")
    return out


def split_roots(beta, mu):
    """Roots of ``z^2 - beta z - mu = 0``."""
    disc = np.sqrt(complex(beta * beta + 4.0 * mu))
    return 0.5 * (beta + disc), 0.5 * (beta - disc)


def resolvent_direct(op, beta, mu, rhs):
    return _solve(op.p_banded(beta, mu), (2, 2), np.asarray(rhs, dtype=complex))


def resolvent_split(op, beta, mu, rhs):
    g1, g2 = split_roots(beta, mu)
    if abs(g1 - g2) <= 1e-14 * max(1.0, abs(g1)):
        raise SignalError("degenerate-split", "coincident roots; use the direct solve")
    rhs = np.asarray(rhs, dtype=complex)
    u1 = _solve(op.a_banded(g1), (1, 1), rhs)
    u2 = _solve(op.a_banded(g2), (1, 1), rhs)
    return (u1 - u2) / (g2 - g1)


def resolvent_split_check(op, beta, mu, rhs):
    """Relative discrepancy between the direct and the split resolvent."""
    if np.imag(mu) == 0:
        raise SignalError("invalid-config", "spectral parameter must be off the real axis")
    direct = resolvent_direct(op, beta, mu, rhs)
    split = resolvent_split(op, beta, mu, rhs)
    scale = np.linalg.norm(direct)
    if scale == 0.0:
        return float(np.linalg.norm(split))
    return float(np.linalg.norm(direct - split) / scale)


def factorization_residual(profile, beta, test_fn, r_max=10.0, n=400, interior=0.8):
    """Sup-norm mismatch of ``sigma^-1 (Delta_M^2 - beta Delta_M)(sigma f)`` and ``P_V f``.

    Both sides use second-order finite-volume Laplacians on the same cell
    centers; the mismatch is measured on ``r <= interior * r_max`` and scaled by
    the sup of ``P_V f`` there.
    """
    wc = warped_cells(profile, r_max, n)
    fc = flat_cells(profile.dim, r_max, n)
    r = fc.r
    f = test_fn(r)
    sig = profile.sigma(r)
    v = profile.potential(r) if profile.kind != "euclidean" else np.zeros_like(r)

    def neg_lap(cells, u):
        d, e = symmetric_neg_laplacian(cells)
        s = np.sqrt(cells.volume)
        return apply_tridiag(d, e, s * u) / s

    lm = neg_lap(wc, sig * f)            # -Delta_M psi
    lhs = (neg_lap(wc, lm) + beta * lm) / sig
    a = neg_lap(fc, f) - v * f
    rhs = neg_lap(fc, a) - v * a + beta * a
    mask = r <= interior * r_max
    scale = max(np.max(np.abs(rhs[mask])), 1e-300)
    return float(np.max(np.abs(lhs - rhs)[mask]) / scale)


# weighted resolvent norms ---------------------------------------------------

def _weights(op, kind):
    r = op.r
    if kind == "bracket":
        return 1.0 / np.sqrt(1.0 + r * r)
    if kind == "radius":
        return 1.0 / r
    raise SignalError("invalid-config", f"unknown weight {kind!r}")


def weighted_resolvent_apply(op, beta, mu, f, weight="bracket", adjoint=False):
    w = _weights(op, weight)
    m = np.conj(mu) if adjoint else mu
    return w * resolvent_direct(op, beta, m, w * f)


def weighted_resolvent_norm(op, beta, mu, target="L2toL2", weight=None, tol=1e-10,
                            max_iter=2000, seed=0):
    """Largest singular value of ``w R(mu) w`` (w = <x>^-1 or |x|^-1) by power iteration.

    For ``L2toH2`` the output is measured in ``||u||^2 + ||Delta_h u||^2``.
    """
    if np.imag(mu) == 0:
        raise SignalError("invalid-config", "spectral parameter must be off the real axis")
    if weight is None:
        weight = "radius" if target == "L2toL2" else "bracket"
    rng = np.random.default_rng(seed)
    x = rng.standard_normal(op.n) + 1j * rng.standard_normal(op.n)
    x /= np.linalg.norm(x)
    d, e = symmetric_neg_laplacian(op.cells)

    def gram(v):
        y = weighted_resolvent_apply(op, beta, mu, v, weight)
        if target == "L2toH2":
            y = y + apply_tridiag(d, e, apply_tridiag(d, e, y))
        elif target != "L2toL2":
            raise SignalError("invalid-config", f"unknown target {target!r}")
        return weighted_resolvent_apply(op, beta, mu, y, weight, adjoint=True)

    est = 0.0
    history = []
    for _ in range(max_iter):
        y = gram(x)
        new = float(np.real(np.vdot(x, y)))
        nrm = np.linalg.norm(y)
        if nrm == 0.0:
            return 0.0
        x = y / nrm
        history.append(new)
        if est > 0 and abs(new - est) <= tol * new:
            return float(np.sqrt(new))
        est = new
    raise SignalError("norm-estimate-unreliable",
                      f"power iteration stalled, last change {abs(history[-1] - history[-2]):.2e}")


def weighted_resolvent_norm_dense(op, beta, mu, target="L2toL2", weight=None):
    """Dense SVD of the same operator (reference route for small grids)."""
    if weight is None:
        weight = "radius" if target == "L2toL2" else "bracket"
    w = _weights(op, weight)
    p = op.dense_p(beta) - mu * np.eye(op.n)
    mat = w[:, None] * np.linalg.solve(p, np.diag(w))
    if target == "L2toH2":
        d, e = symmetric_neg_laplacian(op.cells)
        lap = dense_symmetric(d, e)
        mat = np.vstack([mat, lap @ mat])
    return float(np.linalg.svd(mat, compute_uv=False)[0])


def mu_sweep(op, beta, mus, target="L2toL2", weight=None):
    return np.array([weighted_resolvent_norm(op, beta, m, target, weight) for m in mus])


DEFAULT_SWEEP = tuple([1j * 10.0 ** k for k in range(-2, 3)] + [(1 + 1j) * 10.0 ** k for k in range(-2, 3)])


# smoothing ----------------------------------------------------------------

def absorbing_profile(r, start, strength):
    """Quadratic damping ramp from ``start`` to the last node, zero inside."""
    r = np.asarray(r, dtype=float)
    if start is None or start >= r[-1]:
        return np.zeros_like(r)
    x = np.clip((r - start) / (r[-1] - start), 0.0, None)
    return strength * x * x


def evolve_with_source(op, beta, phi0, dt, T, source=None, absorb_start=None, absorb_strength=10.0):
    """Crank-Nicolson for ``i phi_t = -P_V phi + h(t)`` on the flat grid.

    With ``absorb_start`` set, a damping term ``-eta(r) phi`` acts beyond that
    radius so outgoing waves leave the box instead of reflecting off the
    Dirichlet wall.  Returns (times, states) in the unsymmetrized variable.
    """
    n_steps = int(round(T / dt))
    eta = absorbing_profile(op.r, absorb_start, absorb_strength)
    ab = op.p_banded(beta) * (-0.5j * dt)
    ab[2] += 1.0 + 0.5 * dt * eta
    v = op.to_sym(np.asarray(phi0, dtype=complex))
    times = [0.0]
    states = [op.from_sym(v)]
    h_prev = op.to_sym(source(0.0)) if source is not None else None
    for k in range(1, n_steps + 1):
        rhs = v + 0.5j * dt * op.apply_p(v, beta) - 0.5 * dt * eta * v
        if source is not None:
            h_next = op.to_sym(source(k * dt))
            rhs = rhs - 0.5j * dt * (h_prev + h_next)
            h_prev = h_next
        v = _solve(ab, (2, 2), rhs)
        times.append(k * dt)
        states.append(op.from_sym(v))
    return np.array(times), np.array(states)


def smoothing_ratio(op, times, states, source_values=None, order=1):
    """``||<x>^-1 grad^i phi||_{L^2_t L^2} / (||phi_0||_{H^1} + ||<x> h||_{L^2_t L^2})``."""
    from .radial_fd import radial_derivative

    cells = op.cells
    bracket = np.sqrt(1.0 + cells.r ** 2)
    d, e = symmetric_neg_laplacian(cells)
    s = np.sqrt(cells.volume)

    def lhs_density(phi):
        if order == 1:
            g = radial_derivative(cells, phi)
        elif order == 2:
            g = -apply_tridiag(d, e, s * phi) / s
        else:
            raise SignalError("invalid-config", "derivative order must be 1 or 2")
        return cells.norm_sq(g / bracket)

    lhs = np.sqrt(np.trapezoid([lhs_density(p) for p in states], times))
    phi0 = states[0]
    h1 = np.sqrt(cells.norm_sq(phi0) + float(np.real(np.vdot(s * phi0, apply_tridiag(d, e, s * phi0)))))
    src = 0.0
    if source_values is not None:
        src = np.sqrt(np.trapezoid([cells.norm_sq(bracket * h) for h in source_values], times))
    rhs = h1 + src
    if rhs == 0.0:
        if lhs == 0.0:
            return 0.0
        raise SignalError("inconsistent-input", "zero data and source with nonzero response")
    return float(lhs / rhs)
