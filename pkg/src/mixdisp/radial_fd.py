"""Finite-volume radial Laplacians on cell-centered grids.

Cells are ``[(j-1) h, j h]`` with centers ``(j - 1/2) h``.  The flux through
the pole vanishes because the density does, which gives the even-parity
condition for free; the outer face carries a homogeneous Dirichlet value.
The operator ``-Delta`` is ``W^{-1} K`` with ``K`` symmetric tridiagonal and
``W`` the diagonal of cell volumes, so ``W^{1/2} (-Delta) W^{-1/2}`` is a
symmetric tridiagonal matrix.
"""

from dataclasses import dataclass

import numpy as np

from .manifold import sphere_area


@dataclass
class RadialCells:
    dim: int
    h: float
    r: np.ndarray        # centers
    volume: np.ndarray   # cell volumes (including the sphere area)
    face_area: np.ndarray  # density * sphere area at faces h, 2h, ..., n h

    @property
    def n(self):
        return self.r.size

    @property
    def r_max(self):
        return self.h * self.n

    def integrate(self, values):
        return np.sum(self.volume * values)

    def norm_sq(self, values):
        return float(np.sum(self.volume * np.abs(values) ** 2))


def flat_cells(dim, r_max, n):
    h = r_max / n
    faces = h * np.arange(n + 1)
    area = sphere_area(dim)
    volume = area * np.diff(faces ** dim) / dim
    return RadialCells(dim, h, h * (np.arange(n) + 0.5), volume, area * faces[1:] ** (dim - 1))


def warped_cells(profile, r_max, n):
    """Cells carrying the volume ``phi(r)^{N-1} dr`` of a warped profile."""
    dim = profile.dim
    h = r_max / n
    faces = h * np.arange(n + 1)
    area = sphere_area(dim)
    x, w = np.polynomial.legendre.leggauss(6)
    pts = 0.5 * (faces[:-1, None] + faces[1:, None]) + 0.5 * h * x[None, :]
    volume = area * 0.5 * h * (profile.volume_density(pts) @ w)
    return RadialCells(dim, h, h * (np.arange(n) + 0.5), volume,
                       area * profile.volume_density(faces[1:]))


def stiffness(cells):
    """Diagonal and off-diagonal of ``K`` in ``-Delta = W^{-1} K``."""
    h = cells.h
    flux = cells.face_area / h
    diag = np.empty(cells.n)
    diag[:] = flux
    diag[1:] += flux[:-1]
    # Dirichlet outer face sits half a cell from the last center
    diag[-1] += flux[-1]
    return diag, -flux[:-1]


def symmetric_neg_laplacian(cells):
    """Symmetric tridiagonal ``W^{1/2}(-Delta)W^{-1/2}`` as (diag, offdiag)."""
    diag, off = stiffness(cells)
    s = np.sqrt(cells.volume)
    return diag / cells.volume, off / (s[:-1] * s[1:])


def apply_tridiag(diag, off, x):
    y = diag * x
    y[:-1] += off * x[1:]
    y[1:] += off * x[:-1]
    return y


def neg_laplacian(cells, u):
    """``-Delta u`` on the cell grid (unsymmetrized)."""
    diag, off = stiffness(cells)
    return apply_tridiag(diag, off, np.asarray(u, dtype=complex if np.iscomplexobj(u) else float)) / cells.volume


def dense_symmetric(diag, off):
    m = np.diag(diag)
    idx = np.arange(off.size)
    m[idx, idx + 1] = off
    m[idx + 1, idx] = off
    return m


def radial_derivative(cells, u, parity=1):
    """Centered first derivative with a reflected ghost at the pole and a
    zero value on the outer face."""
    h = cells.h
    ext = np.concatenate([[parity * u[0]], u, [-u[-1]]])
    return (ext[2:] - ext[:-2]) / (2.0 * h)


def radial_second_derivative(cells, u, parity=1):
    h = cells.h
    ext = np.concatenate([[parity * u[0]], u, [-u[-1]]])
    return (ext[2:] - 2.0 * ext[1:-1] + ext[:-2]) / h ** 2
