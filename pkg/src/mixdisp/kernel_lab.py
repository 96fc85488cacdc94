"""The regularized propagator kernel on H^N, its decay fits and Lorentz norms.

    I_eps(t, r) = int_R exp(-i t (lam^4 + beta lam^2) - eps^2 lam^4) Phi_lam(r) |c(lam)|^-2 d lam

The integrand is even and entire in ``lam`` away from the imaginary axis, so
the real line is rotated onto the ray ``lam = x e^{-i theta}`` (``t > 0``).
There the quartic phase turns into Gaussian-like decay and the trapezoid rule
converges spectrally.  The angle is the largest one (up to pi/8) for which
the growth of ``Phi_lam(r)`` off the real axis stays below ``e^4``.
Negative times use the conjugation symmetry ``I(-t) = conj(I(t))``.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import SignalError
from .manifold import ManifoldProfile, sphere_area
from .special_functions import calibrated_kappa, gamma_ratio_continued, gamma_ratio_sq, spherical_row

MAX_ANGLE = np.pi / 8
MIN_ANGLE = np.pi / 256


@dataclass
class KernelSample:
    t: float
    r: float
    beta: float
    eps: float
    value: complex
    error: float = 0.0
    nodes: int = 0

    @property
    def magnitude(self):
        return abs(self.value)


def _log_envelope(x, t, r, beta, eps, theta, dim):
    """Log-magnitude bound of the rotated integrand along the ray."""
    quartic = t * np.sin(4 * theta) + eps ** 2 * np.cos(4 * theta)
    return ((dim - 1) * np.log1p(x) + x * r * np.sin(theta)
            - quartic * x ** 4 - t * beta * np.sin(2 * theta) * x ** 2)


def _choose_angle(t, r, beta, eps, dim, growth=4.0):
    x = np.linspace(0.0, 200.0, 20001)
    lo, hi = MIN_ANGLE, MAX_ANGLE

    def excess(theta):
        env = _log_envelope(x, t, r, beta, eps, theta, dim) - (dim - 1) * np.log1p(x)
        return np.max(env)

    if excess(hi) <= growth:
        return hi
    if excess(lo) > growth:
        return lo
    for _ in range(40):
        mid = 0.5 * (lo + hi)
        if excess(mid) <= growth:
            lo = mid
        else:
            hi = mid
    return lo


def _cutoff(t, r, beta, eps, theta, dim, drop=40.0):
    x = np.linspace(0.0, 400.0, 40001)
    env = _log_envelope(x, t, r, beta, eps, theta, dim)
    k = int(np.argmax(env))
    below = np.nonzero(env[k:] < env[k] - drop)[0]
    if below.size == 0:
        raise SignalError("resolution-failure", "integrand does not decay on the search window")
    return x[k + below[0]], env[k]


def _integrand(lams, t, r, beta, eps, dim, kappa):
    lam2 = lams * lams
    weight = np.exp(-1j * t * (lam2 * lam2 + beta * lam2) - eps ** 2 * lam2 * lam2)
    density = kappa * gamma_ratio_continued(lams, dim)
    if r == 0.0:
        phi = np.ones_like(lams)
    else:
        phi, _ = spherical_row(lams, r, dim)
    return weight * density * phi


def kernel(t, r, beta, eps=1e-3, dim=3, rel_tol=1e-8, fail_tol=1e-4, max_nodes=2 ** 16):
    """Value of I_eps(t, r) with a Richardson-style error estimate.

    The trapezoid sum is repeated with the step halved until two successive
    values agree to ``rel_tol``; ``resolution-failure`` is raised when the
    node budget runs out with the estimate still above ``fail_tol``.
    """
    if t == 0:
        raise SignalError("invalid-config", "kernel needs a nonzero time")
    if eps <= 0:
        raise SignalError("invalid-config", "regularization eps must be positive")
    if r < 0:
        raise SignalError("invalid-config", "radius must be nonnegative")
    if t < 0:
        s = kernel(-t, r, beta, eps, dim, rel_tol, fail_tol, max_nodes)
        return KernelSample(t, r, beta, eps, np.conj(s.value), s.error, s.nodes)
    kappa = calibrated_kappa(dim)
    theta = _choose_angle(t, r, beta, eps, dim)
    x_max, _ = _cutoff(t, r, beta, eps, theta, dim)
    rot = np.exp(-1j * theta)
    # local oscillation frequency along the ray bounds the first step
    freq = 4 * t * x_max ** 3 + 2 * t * abs(beta) * x_max + r + 1.0
    n = int(min(max(64, np.ceil(x_max * freq / np.pi)), max_nodes // 2))
    x = np.linspace(0.0, x_max, n + 1)
    vals = _integrand(x * rot, t, r, beta, eps, dim, kappa)

    def trap(v, step):
        return step * (np.sum(v) - 0.5 * v[0] - 0.5 * v[-1])

    h = x_max / n
    prev = 2.0 * rot * trap(vals, h)
    scale = 2.0 * h * np.sum(np.abs(vals))
    while True:
        mids = x[:-1] + 0.5 * h
        mid_vals = _integrand(mids * rot, t, r, beta, eps, dim, kappa)
        merged = np.empty(vals.size + mid_vals.size, dtype=complex)
        merged[0::2] = vals
        merged[1::2] = mid_vals
        x = np.empty(merged.size)
        x[0::2] = np.linspace(0.0, x_max, n + 1)
        x[1::2] = mids
        n, h, vals = 2 * n, 0.5 * h, merged
        cur = 2.0 * rot * trap(vals, h)
        err = abs(cur - prev) / max(abs(cur), 1e-300)
        # absolute floor: cancellation below roundoff of the integrand scale
        if err < rel_tol or abs(cur - prev) < 1e-14 * scale:
            return KernelSample(t, r, beta, eps, complex(cur), float(err), n + 1)
        if 2 * n > max_nodes:
            if err > fail_tol:
                raise SignalError("resolution-failure",
                                  f"estimate {err:.2e} at t={t}, r={r}; suggest > {2 * n} nodes",
                                  suggested_nodes=2 * n)
            return KernelSample(t, r, beta, eps, complex(cur), float(err), n + 1)
        prev = cur


def kernel_real_axis(t, r, beta, eps, dim=3, n_nodes=200001, lam_max=None):
    """Direct uniform trapezoid on the real axis (independent check route)."""
    if lam_max is None:
        lam_max = (34.0 / eps ** 2) ** 0.25
    lam = np.linspace(0.0, lam_max, n_nodes)
    lam2 = lam * lam
    weight = np.exp(-1j * t * (lam2 * lam2 + beta * lam2) - eps ** 2 * lam2 * lam2)
    density = calibrated_kappa(dim) * gamma_ratio_sq(lam, dim)
    if r == 0.0:
        phi = np.ones_like(lam)
    else:
        phi = spherical_row(lam.astype(complex), r, dim)[0].real
    v = weight * density * phi
    h = lam[1] - lam[0]
    return complex(2.0 * h * (np.sum(v) - 0.5 * v[0] - 0.5 * v[-1]))


def dispersive_envelope(t, r, dim):
    """``min(|t|^{-N/4}, |t|^{-3/2}) r^{(N+5)/6} e^{-rho r}``."""
    rho = (dim - 1) / 2.0
    t = abs(t)
    return min(t ** (-dim / 4.0), t ** -1.5) * r ** ((dim + 5) / 6.0) * np.exp(-rho * r)


def bound_constant(times, radii, beta=1.0, eps=1e-3, dim=3):
    """Smallest C with |I| <= C * envelope over the (t, r) grid, plus the table."""
    rows = []
    for t in times:
        for r in radii:
            s = kernel(t, r, beta, eps, dim)
            env = dispersive_envelope(t, r, dim)
            rows.append((t, r, s.value.real, s.value.imag, s.magnitude, s.magnitude / env))
    rows = np.array(rows)
    return float(np.max(rows[:, 5])), rows


# decay fits --------------------------------------------------------------

TARGETS = {
    "small_time": lambda dim, beta: -dim / 4.0,
    "large_time": lambda dim, beta: -1.5 if beta > 0 else (-0.75 if beta == 0 else -0.5),
}


@dataclass
class DecayFit:
    regime: str
    exponent: float
    residual: float
    window: tuple
    target: float
    flags: list = field(default_factory=list)


def decay_fit(times, magnitudes, regime, dim, beta):
    """Least-squares slope of log|I| against log t over the window."""
    times = np.asarray(times, dtype=float)
    mags = np.asarray(magnitudes, dtype=float)
    if times.size < 8 or times.max() / times.min() < 10.0 * (1 - 1e-12):
        raise SignalError("invalid-config", "fit needs >= 8 times spanning a decade")
    lt, lm = np.log(times), np.log(mags)
    slope, intercept = np.polyfit(lt, lm, 1)
    residual = float(np.max(np.abs(lm - (slope * lt + intercept))))
    flags = []
    order = np.argsort(times)
    if np.any(np.diff(mags[order]) > 0):
        flags.append("oscillatory")
    if regime not in TARGETS:
        raise SignalError("invalid-config", f"unknown regime {regime!r}")
    return DecayFit(regime, float(slope), residual, (float(times.min()), float(times.max())),
                    TARGETS[regime](dim, beta), flags)


def sample_decay(times, beta, dim, eps=1e-3, r_policy=0.0):
    """|I| over a time window at a fixed radius or sup-normalized over radii.

    ``r_policy`` is either a radius or a sequence of radii; for a sequence the
    sample is ``sup_r |I| r^{-(N+5)/6} e^{rho r}``.
    """
    rho = (dim - 1) / 2.0
    out = []
    for t in times:
        if np.ndim(r_policy) == 0:
            out.append(kernel(t, float(r_policy), beta, eps, dim).magnitude)
        else:
            best = 0.0
            for r in r_policy:
                m = kernel(t, float(r), beta, eps, dim).magnitude
                best = max(best, m * r ** (-(dim + 5) / 6.0) * np.exp(rho * r))
            out.append(best)
    return np.array(out)


# Lorentz norms -------------------------------------------------------------

def ball_volume(r, dim, profile=None):
    """Volume of the geodesic ball of radius r (hyperbolic by default)."""
    r = np.asarray(r, dtype=float)
    if profile is None and dim == 3:
        return np.pi * (np.sinh(2 * r) - 2 * r)
    profile = profile or ManifoldProfile.hyperbolic(dim)
    x, w = np.polynomial.legendre.leggauss(24)
    flat = np.atleast_1d(r)
    pts = 0.5 * flat[:, None] * (x[None, :] + 1.0)
    vals = 0.5 * flat * (profile.volume_density(pts) @ w)
    return sphere_area(dim) * vals.reshape(r.shape)


def lorentz_norm(r, values, q, theta, dim=3, n_fine=200000, profile=None):
    """``||f||_{L^{q,theta}}`` of a radial function given by samples.

    The samples are resampled piecewise linearly on a fine grid, each fine
    cell is given its exact volume, and the decreasing rearrangement is the
    sorted step function.  The norm of a step rearrangement is integrated in
    closed form.
    """
    if q <= 2:
        raise SignalError("unsupported-index", f"q must exceed 2, got {q}")
    if theta < 1:
        raise SignalError("unsupported-index", f"theta must be >= 1, got {theta}")
    r = np.asarray(r, dtype=float)
    mag = np.abs(np.asarray(values))
    if not np.any(mag):
        return 0.0
    edges = np.linspace(0.0, r[-1], n_fine + 1)
    mids = 0.5 * (edges[1:] + edges[:-1])
    fine = np.interp(mids, r, mag)
    vol = np.diff(ball_volume(edges, dim, profile))
    order = np.argsort(-fine, kind="stable")
    m = fine[order]
    cum = np.concatenate([[0.0], np.cumsum(vol[order])])
    if np.isinf(theta):
        return float(np.max(m * cum[1:] ** (1.0 / q)))
    a = theta / q
    pieces = m ** theta * (q / theta) * (cum[1:] ** a - cum[:-1] ** a)
    return float(np.sum(pieces) ** (1.0 / theta))


def kernel_profile(t, beta, eps=1e-3, dim=3, r_max=40.0, n_r=161):
    """Samples of r -> I_eps(t, r) on a uniform radial grid."""
    r = np.linspace(0.0, r_max, n_r)
    return r, np.array([kernel(t, float(x), beta, eps, dim).value for x in r])


def kernel_lorentz_series(times, beta, q=3.0, theta=1.0, eps=1e-3, dim=3, r_max=40.0, n_r=161):
    """``||I_eps(t, .)||_{L^{q,theta}}`` for each time."""
    out = []
    for t in times:
        r, vals = kernel_profile(t, beta, eps, dim, r_max, n_r)
        out.append(lorentz_norm(r, vals, q, theta, dim))
    return np.array(out)
