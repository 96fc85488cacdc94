"""Rotationally symmetric warped profiles ``dr^2 + phi(r)^2 dtheta^2``.

A profile knows its warp function ``phi`` and can hand out Taylor jets of it,
from which the conjugation factor ``sigma``, the effective potential ``V``
and ``W = Delta V + V^2`` are derived.  ``hypothesis_report`` checks the
structural conditions needed by the weighted resolvent machinery.
"""

from dataclasses import dataclass, field
from math import gamma, pi

import numpy as np

from .errors import SignalError
from .jets import Jet

KINDS = ("euclidean", "hyperbolic", "polynomial", "custom")


def sphere_area(dim):
    """Surface area of the unit sphere in R^dim."""
    return 2.0 * pi ** (dim / 2) / gamma(dim / 2)


class ManifoldProfile:
    """Warp function ``phi`` with ``phi(0) = 0`` and ``phi'(0) = 1``.

    ``coefficients`` (polynomial kind) are the coefficients of r, r^2, r^3, ...
    so ``[1, 0, 1]`` is ``phi = r + r^3``.  ``table`` (custom kind) is a pair of
    arrays ``(r, phi)`` on a uniform grid starting at 0.
    """

    def __init__(self, dim, kind="hyperbolic", coefficients=None, table=None):
        if int(dim) != dim or dim < 2:
            raise SignalError("invalid-config", f"dimension must be an integer >= 2, got {dim}")
        if kind not in KINDS:
            raise SignalError("invalid-config", f"unknown profile kind {kind!r}")
        self.dim = int(dim)
        self.kind = kind
        self.coefficients = None
        self._table = None
        if kind == "polynomial":
            if coefficients is None or len(coefficients) == 0:
                raise SignalError("invalid-config", "polynomial profile needs coefficients")
            coeffs = np.asarray(coefficients, dtype=float)
            if coeffs[0] != 1.0:
                raise SignalError("invalid-config", "leading coefficient of r must be 1")
            self.coefficients = coeffs
        elif kind == "custom":
            if table is None:
                raise SignalError("invalid-config", "custom profile needs a (r, phi) table")
            self._table = _TabulatedWarp(*table)

    @classmethod
    def euclidean(cls, dim):
        return cls(dim, "euclidean")

    @classmethod
    def hyperbolic(cls, dim):
        return cls(dim, "hyperbolic")

    @property
    def rho(self):
        return (self.dim - 1) / 2.0

    def __repr__(self):
        extra = f", coefficients={list(self.coefficients)}" if self.coefficients is not None else ""
        return f"ManifoldProfile(dim={self.dim}, kind={self.kind!r}{extra})"

    # warp function ----------------------------------------------------
    def jet(self, r, order=4, scaled=False):
        """Taylor jet of phi at the points ``r`` up to the given order.

        ``scaled=True`` may multiply the jet at each point by a positive
        constant (``e^-r`` for the hyperbolic warp) so that quotients of jets
        stay finite at large r.
        """
        r = np.asarray(r, dtype=float)
        c = np.zeros((order + 1,) + r.shape)
        if self.kind == "euclidean":
            c[0] = r
            if order >= 1:
                c[1] = 1.0
            return Jet(c)
        if self.kind == "hyperbolic":
            if scaled:
                decay = np.exp(-2.0 * r)
                s, ch = -0.5 * np.expm1(-2.0 * r), 0.5 * (1.0 + decay)
            else:
                s, ch = np.sinh(r), np.cosh(r)
            return Jet.from_derivatives([s if k % 2 == 0 else ch for k in range(order + 1)])
        if self.kind == "polynomial":
            # phi = sum_k a_k r^k with a_1 the first entry
            poly = np.polynomial.Polynomial(np.concatenate([[0.0], self.coefficients]))
            derivs = []
            for _ in range(order + 1):
                derivs.append(poly(r))
                poly = poly.deriv()
            return Jet.from_derivatives(derivs)
        return self._table.jet(r, order)

    def phi(self, r):
        return self.jet(r, 0).value

    def derivative(self, r, k):
        return self.jet(r, k).deriv(k)

    def log_slope(self, r, order=3):
        """Jet of phi'/phi."""
        j = self.jet(r, order + 1, scaled=True)
        return j.d() / j.truncate(order)

    def volume_density(self, r):
        return self.phi(r) ** (self.dim - 1)

    def curvature(self, r):
        """Radial sectional curvature ``-phi''/phi``."""
        _check_off_pole(r)
        j = self.jet(r, 2, scaled=True)
        return -j.deriv(2) / j.value

    def series_cubic(self):
        """Coefficient c3 in ``phi = r + c3 r^3 + ...``."""
        return self.jet(np.array(0.0), 3).c[3]

    # derived scalars --------------------------------------------------
    def sigma(self, r):
        """Conjugation factor ``(r/phi)^((N-1)/2)``, equal to 1 at the pole."""
        r = np.asarray(r, dtype=float)
        out = np.ones_like(r)
        pos = r > 0
        out[pos] = (r[pos] / self.phi(r[pos])) ** self.rho
        return out

    def sigma_log_slope(self, r, order=2):
        """Jet of sigma'/sigma = (N-1)/2 (1/r - phi'/phi)."""
        _check_off_pole(r)
        g = self.log_slope(r, order)
        inv_r = 1.0 / Jet.variable(r, order)
        return self.rho * (inv_r - g)

    def potential_jet(self, r, order=2, form="phi"):
        """Jet of V.  ``form`` picks the phi-based or sigma-based closed form."""
        _check_off_pole(r)
        n = self.dim
        if form == "phi":
            j = self.jet(r, order + 2, scaled=True)
            g = j.d().truncate(order) / j.truncate(order)
            curv = j.d().d() / j.truncate(order)
            inv_r = 1.0 / Jet.variable(r, order)
            return (n - 1) / 2.0 * ((n - 3) / 2.0 * (inv_r * inv_r - g * g) - curv)
        if form == "sigma":
            s = self.sigma_log_slope(r, order + 1)
            g = self.log_slope(r, order)
            s0 = s.truncate(order)
            return s.d() + s0 * s0 + (n - 1) * g * s0
        raise ValueError(f"unknown potential form {form!r}")

    def potential(self, r, form="phi"):
        return self.potential_jet(r, 0, form).value

    def potential_at_pole(self):
        """Limit of V as r -> 0 from the series of phi."""
        return -self.dim * (self.dim - 1) * self.series_cubic()

    def wtilde(self, r):
        """``Delta V + V^2`` with the flat radial Laplacian of R^N."""
        v = self.potential_jet(r, 2)
        r = np.asarray(r, dtype=float)
        lap = v.deriv(2) + (self.dim - 1) / r * v.deriv(1)
        return lap + v.value ** 2


def potential(profile, r, form="phi"):
    """Effective potential V(r); r = 0 is a pole of the closed form."""
    return profile.potential(r, form)


def _check_off_pole(r):
    if np.any(np.asarray(r) <= 0):
        raise SignalError("evaluate-at-pole", "closed form is singular at r = 0; use the pole limit")


class _TabulatedWarp:
    """Warp function known only by samples on a uniform grid from r = 0."""

    def __init__(self, r, phi):
        from scipy.interpolate import CubicSpline
        from scipy.signal import savgol_filter

        r = np.asarray(r, dtype=float)
        phi = np.asarray(phi, dtype=float)
        if r.ndim != 1 or r.shape != phi.shape or r.size < 8:
            raise SignalError("invalid-config", "table needs matching 1-D arrays with >= 8 rows")
        h = r[1] - r[0]
        if abs(r[0]) > 1e-14 or not np.allclose(np.diff(r), h, rtol=1e-9, atol=1e-12):
            raise SignalError("invalid-config", "table must be uniform and start at r = 0")
        self.r_max = r[-1]
        # odd reflection through the pole keeps the stencils centered there
        pad = 6
        ext_r = np.concatenate([-r[pad:0:-1], r])
        ext_phi = np.concatenate([-phi[pad:0:-1], phi])
        self._splines = []
        for k in range(5):
            d = savgol_filter(ext_phi, 7, 6, deriv=k, delta=h, mode="interp")
            self._splines.append(CubicSpline(ext_r, d))

    def jet(self, r, order):
        if order > 4:
            raise SignalError("invalid-config", "tabulated profiles carry derivatives up to order 4")
        r = np.asarray(r, dtype=float)
        if np.any(r > self.r_max):
            raise SignalError("invalid-config", f"r beyond the table end {self.r_max}")
        return Jet.from_derivatives([self._splines[k](r) for k in range(order + 1)])


# hypothesis report ------------------------------------------------------

@dataclass
class ConditionRecord:
    name: str
    margin: float
    passed: bool
    note: str = ""


@dataclass
class ConditionReport:
    records: list = field(default_factory=list)

    def add(self, name, margin, passed, note=""):
        self.records.append(ConditionRecord(name, float(margin), bool(passed), note))

    def __getitem__(self, name):
        for rec in self.records:
            if rec.name == name:
                return rec
        raise KeyError(name)

    def names(self):
        return [rec.name for rec in self.records]

    def as_text(self):
        lines = []
        for rec in self.records:
            line = f"name={rec.name} margin={rec.margin:.12e} pass={str(rec.passed).lower()}"
            if rec.note:
                line += f" note={rec.note}"
            lines.append(line)
        return "\n".join(lines)


def shell_volumes(r, dim, measure="flat", profile=None):
    """Volumes of the cells around each sample of a radial grid."""
    r = np.asarray(r, dtype=float)
    edges = np.concatenate([[0.0], 0.5 * (r[1:] + r[:-1]), [r[-1] + 0.5 * (r[-1] - r[-2])]])
    area = sphere_area(dim)
    if measure == "flat":
        return area * np.diff(edges ** dim) / dim
    if measure == "manifold":
        # integrate phi^(N-1) over each cell with a 4-point Gauss rule
        x, w = np.polynomial.legendre.leggauss(4)
        a, b = edges[:-1], edges[1:]
        mid, half = 0.5 * (a + b), 0.5 * (b - a)
        pts = mid[:, None] + half[:, None] * x[None, :]
        return area * half * (profile.volume_density(pts) @ w)
    raise ValueError(f"unknown measure {measure!r}")


def weak_lorentz_norm(values, cell_volumes, p):
    """``sup_s s * |{|f| > s}|^(1/p)`` for sampled radial data.

    Sorting the samples by decreasing modulus gives the decreasing
    rearrangement; the sup is attained just below each sorted value.
    """
    mag = np.abs(np.asarray(values, dtype=float))
    order = np.argsort(-mag, kind="stable")
    dist = np.cumsum(np.asarray(cell_volumes)[order])
    return float(np.max(mag[order] * dist ** (1.0 / p))) if mag.size else 0.0


def hypothesis_report(profile, r_samples, delta0=1e-3, measure="flat", tail_tolerance=1.5):
    """Per-condition margins over the sample grid; never raises on failure.

    Weak-norm conditions pass when the norm over the whole grid exceeds the
    norm over the inner half by at most ``tail_tolerance`` (up to roundoff),
    a finite-grid stand-in for finiteness.
    """
    r = np.asarray(r_samples, dtype=float)
    if np.any(r <= 0):
        raise SignalError("evaluate-at-pole", "sample grid must lie in (0, R_max]")
    n = profile.dim
    hardy = (n / 2.0 - 1.0) ** 2
    v = profile.potential_jet(r, 2)
    V, dV, d2V = v.value, v.deriv(1), v.deriv(2)
    W = d2V + (n - 1) / r * dV + V ** 2
    report = ConditionReport()

    m1 = np.min(hardy + r ** 2 * V)
    report.add("hardy_potential", m1, m1 >= delta0)
    m2 = np.min(hardy - r ** 2 * (V + r * dV))
    report.add("hardy_virial", m2, m2 >= delta0)
    report.add("inverse_square_decay", np.max(r ** 2 * np.abs(V)), True, "best C reported")

    bracket = np.sqrt(1.0 + r ** 2)
    # flat Laplacian of V/<x> and radial derivative of V'/<x>, mu = 0
    q = Jet.from_derivatives([V, dV, d2V]) / Jet.from_derivatives([bracket, r / bracket, 1.0 / bracket ** 3])
    lap_q = q.deriv(2) + (n - 1) / r * q.deriv(1)
    d_vp = (d2V * bracket - dV * r / bracket) / bracket ** 2
    lhs = np.abs(lap_q) + np.abs(d_vp) + (np.abs(W) + np.abs(V)) / bracket
    report.add("derivative_bounds", np.max(lhs * bracket), True, "best C at mu=0")

    vols = shell_volumes(r, n, measure, profile)
    inner = r <= 0.5 * r[-1]
    for tag, power, p in (("B", 2, n / 2.0), ("S", 1, float(n))):
        for label, f in (("wtilde", W), ("dpotential", dV), ("potential", V)):
            weighted = bracket ** power * f
            full = weak_lorentz_norm(weighted, vols, p)
            half = weak_lorentz_norm(weighted[inner], vols[inner], p)
            stable = full <= tail_tolerance * half + 1e-9
            report.add(f"weak_{tag}_{label}", full, np.isfinite(full) and stable)
    return report
