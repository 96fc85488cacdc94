"""Truncated Taylor arithmetic for radial profiles.

A ``Jet`` stores normalized Taylor coefficients ``c[k] = f^(k)(r) / k!`` for an
array of base points at once.  Arithmetic follows the usual Cauchy-product
rules, and ``d()`` differentiates (dropping one order).  This lets long
chains of products, quotients and Laplacians be evaluated exactly up to
roundoff instead of by nested finite differences.
"""

from math import factorial

import numpy as np


class Jet:
    __slots__ = ("c",)

    def __init__(self, coeffs):
        self.c = np.asarray(coeffs, dtype=float)
        if self.c.ndim == 0:
            raise ValueError("jet needs at least one coefficient")

    # construction -----------------------------------------------------
    @classmethod
    def from_derivatives(cls, derivs):
        """Build from a list ``[f, f', f'', ...]`` of arrays."""
        derivs = np.broadcast_arrays(*[np.asarray(d, dtype=float) for d in derivs])
        return cls(np.stack([d / factorial(k) for k, d in enumerate(derivs)]))

    @classmethod
    def variable(cls, r, order):
        r = np.asarray(r, dtype=float)
        c = np.zeros((order + 1,) + r.shape)
        c[0] = r
        if order >= 1:
            c[1] = 1.0
        return cls(c)

    @classmethod
    def constant(cls, value, like):
        c = np.zeros_like(like.c)
        c[0] = value
        return cls(c)

    # access -----------------------------------------------------------
    @property
    def order(self):
        return self.c.shape[0] - 1

    @property
    def value(self):
        return self.c[0]

    def deriv(self, k):
        """k-th derivative values at the base points."""
        if k > self.order:
            raise ValueError(f"jet of order {self.order} has no derivative {k}")
        return self.c[k] * factorial(k)

    def d(self):
        """Derivative jet (order drops by one)."""
        if self.order == 0:
            raise ValueError("cannot differentiate an order-0 jet")
        k = np.arange(1, self.order + 1).reshape((-1,) + (1,) * (self.c.ndim - 1))
        return Jet(self.c[1:] * k)

    def truncate(self, order):
        return Jet(self.c[: order + 1])

    # arithmetic -------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, Jet):
            n = min(self.order, other.order)
            return self.c[: n + 1], other.c[: n + 1]
        c = np.zeros_like(self.c)
        c[0] = other
        return self.c, c

    def __add__(self, other):
        a, b = self._coerce(other)
        return Jet(a + b)

    __radd__ = __add__

    def __neg__(self):
        return Jet(-self.c)

    def __sub__(self, other):
        a, b = self._coerce(other)
        return Jet(a - b)

    def __rsub__(self, other):
        a, b = self._coerce(other)
        return Jet(b - a)

    def __mul__(self, other):
        if not isinstance(other, Jet):
            return Jet(self.c * other)
        a, b = self._coerce(other)
        out = np.zeros_like(a)
        for k in range(a.shape[0]):
            out[k] = np.einsum("i...,i...->...", a[: k + 1], b[k::-1])
        return Jet(out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, Jet):
            return Jet(self.c / other)
        a, b = self._coerce(other)
        q = np.zeros_like(a)
        for k in range(a.shape[0]):
            acc = a[k].copy()
            for j in range(1, k + 1):
                acc -= b[j] * q[k - j]
            q[k] = acc / b[0]
        return Jet(q)

    def __rtruediv__(self, other):
        return Jet.constant(other, self) / self

    def __pow__(self, p):
        if isinstance(p, (int, np.integer)) and p >= 0:
            out = Jet.constant(1.0, self)
            for _ in range(int(p)):
                out = out * self
            return out
        # g = f^p satisfies f g' = p f' g
        a = self.c
        g = np.zeros_like(a)
        g[0] = a[0] ** p
        for k in range(1, a.shape[0]):
            acc = np.zeros_like(a[0])
            for j in range(1, k + 1):
                acc += (p * j - (k - j)) * a[j] * g[k - j]
            g[k] = acc / (k * a[0])
        return Jet(g)

    def log(self):
        a = self.c
        out = np.zeros_like(a)
        out[0] = np.log(a[0])
        if a.shape[0] > 1:
            dl = self.d() / self.truncate(self.order - 1)
            k = np.arange(1, a.shape[0]).reshape((-1,) + (1,) * (a.ndim - 1))
            out[1:] = dl.c / k
        return Jet(out)


def radial_laplacian(f, log_warp_slope, dim):
    """``f'' + (dim-1) * g * f'`` where ``g`` is the jet of phi'/phi."""
    fp = f.d()
    return fp.d() + (dim - 1) * log_warp_slope * fp
