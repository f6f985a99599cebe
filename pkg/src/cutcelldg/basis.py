"""Modal Legendre basis, quadrature, projection and extension evaluation.

Each cell carries an orthonormal Legendre basis on the reference interval
[-1, 1]: ``phi_n(xi) = sqrt(n + 1/2) * P_n(xi)``.  The per-cell mass matrix
is then ``(len_j / 2) * I``.  Polynomials may be evaluated outside their own
cell (the extension operator): the reference coordinate is simply allowed to
leave [-1, 1].
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.polynomial import legendre as npleg

#: Cell average of a polynomial equals ``c_0 / sqrt(2)`` in this basis.
AVG_NORM = 1.0 / np.sqrt(2.0)


@dataclass(frozen=True)
class Quadrature:
    """Gauss-Legendre rule on [-1, 1], exact for degree <= 2*n - 1."""

    nodes: np.ndarray
    weights: np.ndarray

    @classmethod
    def gauss(cls, n):
        nodes, weights = npleg.leggauss(n)
        return cls(nodes=nodes, weights=weights)

    @property
    def n_points(self):
        return len(self.nodes)


def basis_values(xi, p):
    """Orthonormal Legendre values, shape ``(p + 1,) + xi.shape``.

    ``xi`` may lie outside [-1, 1] (extension evaluation).
    """
    xi = np.asarray(xi, dtype=float)
    out = np.empty((p + 1,) + xi.shape)
    for n in range(p + 1):
        coeff = np.zeros(n + 1)
        coeff[n] = np.sqrt(n + 0.5)
        out[n] = npleg.legval(xi, coeff)
    return out


def basis_derivatives(xi, p):
    """d(phi_n)/d(xi), same shape convention as :func:`basis_values`."""
    xi = np.asarray(xi, dtype=float)
    out = np.empty((p + 1,) + xi.shape)
    for n in range(p + 1):
        coeff = np.zeros(n + 1)
        coeff[n] = np.sqrt(n + 0.5)
        out[n] = npleg.legval(xi, npleg.legder(coeff)) if n > 0 else 0.0
    return out


@dataclass
class DGState:
    """Modal coefficients, shape ``(n_cells, m, p + 1)``."""

    mesh: object
    p: int
    coeffs: np.ndarray

    @property
    def m(self):
        return self.coeffs.shape[1]

    def copy(self):
        return DGState(mesh=self.mesh, p=self.p, coeffs=self.coeffs.copy())

    def cell_averages(self):
        """Per-cell, per-component averages, shape ``(n_cells, m)``."""
        return self.coeffs[:, :, 0] * AVG_NORM


def reference_coord(mesh, j, x):
    """Map physical ``x`` to cell ``j``'s reference coordinate."""
    left = mesh.edges[j]
    right = mesh.edges[j + 1]
    return (2.0 * np.asarray(x, dtype=float) - (left + right)) / (right - left)


def evaluate(state, j, x):
    """Value of cell ``j``'s polynomial at physical ``x`` (extension is total).

    Returns shape ``x.shape + (m,)``.
    """
    xi = reference_coord(state.mesh, j, x)
    phi = basis_values(xi, state.p)                      # (p+1,) + x.shape
    return np.einsum("mn,n...->...m", state.coeffs[j], phi)


def evaluate_deriv(state, j, x):
    """Spatial derivative of cell ``j``'s extended polynomial at ``x``."""
    xi = reference_coord(state.mesh, j, x)
    dphi = basis_derivatives(xi, state.p)
    scale = 2.0 / state.mesh.lengths[j]
    return scale * np.einsum("mn,n...->...m", state.coeffs[j], dphi)


def edge_traces(state):
    """Traces at each cell's own edges.

    Returns ``(left_traces, right_traces)``, each of shape ``(n_cells, m)``:
    the value at ``x_{j-1/2}^+`` and ``x_{j+1/2}^-`` respectively.
    """
    phi_l = basis_values(np.array(-1.0), state.p)
    phi_r = basis_values(np.array(1.0), state.p)
    left = np.einsum("jmn,n->jm", state.coeffs, phi_l)
    right = np.einsum("jmn,n->jm", state.coeffs, phi_r)
    return left, right


def jump(state, edge):
    """Jump at global edge index ``edge`` (0 .. n_cells).

    Interior edges: left trace minus right trace.  At the domain boundary the
    one-sided conventions are ``-u(x^+)`` on the left and ``u(x^-)`` on the
    right.
    """
    n_cells = state.mesh.n_cells
    left, right = edge_traces(state)
    if edge == 0:
        return -right[0] if n_cells else None
    if edge == n_cells:
        return right[n_cells - 1]
    # note: ``right`` holds traces at x_{j+1/2}^-, ``left`` at x_{j-1/2}^+
    return right[edge - 1] - left[edge]


def project(func, mesh, p, m=1, n_quad=None):
    """Per-cell L2 projection of ``func(x) -> (..., m)`` onto degree p."""
    nq = n_quad if n_quad is not None else p + 2
    quad = Quadrature.gauss(nq)
    phi = basis_values(quad.nodes, p)                    # (p+1, nq)
    x_q = mesh.centers[:, None] + 0.5 * mesh.lengths[:, None] * quad.nodes
    values = np.asarray(func(x_q), dtype=float)          # (n_cells, nq, m)
    if values.ndim == 2:
        values = values[:, :, None]
    coeffs = np.einsum("jqm,nq,q->jmn", values, phi, quad.weights)
    return DGState(mesh=mesh, p=p, coeffs=coeffs)
