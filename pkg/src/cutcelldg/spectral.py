"""Spectral study of the semi-discrete operator on a banded cut mesh.

For linear problems the assembled rhs is ``d_t U = L U``; this module
materializes ``L`` column by column (probing with unit coefficient vectors)
and reports its spectral abscissa ``max Re(eigenvalue)``, which must be
nonpositive (up to roundoff) for a stable semi-discretization.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import equations as eqs
from .marching import timestep_length
from .mesh import banded_mesh
from .riemann import UpwindAdvection
from .spatial import SpatialOperator


@dataclass(frozen=True)
class OperatorMatrix:
    """Dense semi-discrete operator with its spectrum.

    ``eigenvalues`` belong to the time-step-scaled operator ``dt M^{-1} L``
    with ``dt`` the CFL step on the background mesh, so the abscissa is the
    per-step growth exponent (the scaling is positive and hence preserves
    the sign of the abscissa).
    """

    matrix: np.ndarray
    eigenvalues: np.ndarray
    dt: float
    alpha: float
    p: int
    variant: str

    @property
    def abscissa(self):
        return float(self.eigenvalues.real.max())


def stability_mesh(alpha, n=100, band=(0.1, 0.9), domain=(0.0, 1.0)):
    """Banded mesh with every band cell split at volume fraction ``alpha``."""
    return banded_mesh(n, band, alpha=alpha, domain=domain)


def assemble_matrix(operator, m=1):
    """Dense matrix of ``coeffs -> assemble_rhs(coeffs)`` (linear operators).

    Columns are obtained by probing with unit coefficient states, so this is
    exact whenever the rhs is linear in the coefficients.
    """
    n_cells = operator.mesh.n_cells
    n_modes = operator.p + 1
    dim = n_cells * m * n_modes
    probe = np.zeros((n_cells, m, n_modes))
    matrix = np.empty((dim, dim))
    for col in range(dim):
        probe.flat[col] = 1.0
        matrix[:, col] = operator.assemble_rhs(probe, 0.0).ravel()
        probe.flat[col] = 0.0
    return matrix


def advection_operator(mesh, p, variant="full", nu=0.4, beta=1.0):
    """Periodic advection operator used throughout the stability study.

    ``variant`` is "full" (edge + volume penalty), "legacy" (older
    advection-only volume penalty), or "none" (unstabilized).
    """
    if variant not in ("full", "legacy", "none"):
        raise ValueError(f"unknown stabilization variant {variant!r}")
    return SpatialOperator(
        mesh, eqs.advection(beta), UpwindAdvection(beta), p,
        bc="periodic", stabilize=variant != "none", nu=nu,
        legacy_j1=variant == "legacy")


def operator_spectrum(alpha, p, variant="full", n=100, band=(0.1, 0.9),
                      nu=0.4, beta=1.0):
    """Assemble the advection operator on the banded mesh and diagonalize."""
    mesh = stability_mesh(alpha, n=n, band=band)
    op = advection_operator(mesh, p, variant=variant, nu=nu, beta=beta)
    matrix = assemble_matrix(op, m=1)
    dt = timestep_length(p, nu, mesh.h, abs(beta))
    return OperatorMatrix(matrix=matrix,
                          eigenvalues=dt * np.linalg.eigvals(matrix),
                          dt=dt, alpha=alpha, p=p, variant=variant)


def spectral_abscissa(alpha, p, variant="full", **kwargs):
    return operator_spectrum(alpha, p, variant=variant, **kwargs).abscissa


def abscissa_table(alphas, orders, variants=("full", "legacy"), **kwargs):
    """Rows of (alpha, p, variant, abscissa) for a sweep of configurations."""
    rows = []
    for alpha in alphas:
        for p in orders:
            for variant in variants:
                rows.append((alpha, p, variant,
                             spectral_abscissa(alpha, p, variant=variant,
                                               **kwargs)))
    return rows
