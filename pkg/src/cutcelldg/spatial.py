"""Semi-discrete right-hand side assembly.

The weak form is ``(d_t u, w) + a_h(u, w) + J_h(u, w) = S_h(g, w)``; the
operator returns ``d_t U = M^{-1} (S - A - J)`` per cell, component, and
mode.  Assembly is fully vectorized over cells and edges; the cut-edge flux
needs no special casing because every consecutive-cell interface carries a
flux term.
"""

from __future__ import annotations

import numpy as np

from . import basis as bs
from .dod import StabilizationBatch
from .errors import AdmissibilityError, DegenerateSpeedError


class SpatialOperator:
    """DG residual assembly on a cut-cell mesh.

    Parameters mirror the run configuration: boundary condition kind is
    ``"periodic"`` or ``"transmissive"``; ``source(x, t)`` may be None;
    ``legacy_j1`` selects the older advection-only volume penalty.
    """

    def __init__(self, mesh, equation, flux, p, bc="periodic",
                 stabilize=True, nu=0.4, n_quad=None, source=None,
                 legacy_j1=False, conserved_roe_average=False):
        if bc not in ("periodic", "transmissive"):
            raise ValueError(f"unknown boundary condition {bc!r}")
        self.mesh = mesh
        self.equation = equation
        self.flux = flux
        self.p = p
        self.bc = bc
        self.nu = nu
        self.source = source
        self.legacy_j1 = legacy_j1
        self.conserved_roe_average = conserved_roe_average
        self.quad = bs.Quadrature.gauss(n_quad if n_quad else p + 2)

        nodes = self.quad.nodes
        self.phi = bs.basis_values(nodes, p)             # (n, q)
        self.dphi = bs.basis_derivatives(nodes, p)       # d/dxi
        self.phi_minus = bs.basis_values(np.array(-1.0), p)
        self.phi_plus = bs.basis_values(np.array(1.0), p)
        self.x_quad = (mesh.centers[:, None]
                       + 0.5 * mesh.lengths[:, None] * nodes)
        self.inv_mass = 2.0 / mesh.lengths               # diagonal M^{-1}

        self.stabilization = (StabilizationBatch(mesh, p, nu, self.quad)
                              if stabilize else None)

    # -- state evaluation ---------------------------------------------------

    def quad_values(self, coeffs):
        """States at all volume quadrature points, shape (cells, q, m)."""
        return np.einsum("jmn,nq->jqm", coeffs, self.phi)

    def traces(self, coeffs):
        """Per-cell edge traces: (left at x_{j-1/2}^+, right at x_{j+1/2}^-)."""
        left = np.einsum("jmn,n->jm", coeffs, self.phi_minus)
        right = np.einsum("jmn,n->jm", coeffs, self.phi_plus)
        return left, right

    def apply_bc(self, coeffs):
        """Ghost traces (u_0(x_1/2), u_{N+1}(x_{N+1/2})) per the BC kind."""
        left, right = self.traces(coeffs)
        if self.bc == "periodic":
            return right[-1], left[0]
        return left[0], right[-1]

    def max_wave_speed(self, coeffs):
        """Max wave speed over all quadrature points and edge traces."""
        u_q = self.quad_values(coeffs)
        left, right = self.traces(coeffs)
        speed = max(float(self.equation.max_wave_speed(u_q).max()),
                    float(self.equation.max_wave_speed(left).max()),
                    float(self.equation.max_wave_speed(right).max()))
        if speed <= 0.0:
            raise DegenerateSpeedError("maximum wave speed is zero")
        return speed

    # -- residual pieces ----------------------------------------------------

    def ah_residual(self, coeffs, t=0.0):
        """a_h applied to every test basis function, residual-shaped."""
        u_q = self.quad_values(coeffs)
        try:
            self.equation.check_admissible(u_q, context="at quadrature points")
            f_q = self.equation.flux(u_q)
        except AdmissibilityError as exc:
            raise AdmissibilityError(f"{exc} (t={t})") from None
        # volume: -int f(u) d_x w dx; reference Jacobians cancel
        residual = -np.einsum("jqm,nq,q->jmn", f_q, self.dphi,
                              self.quad.weights)

        left, right = self.traces(coeffs)
        ghost_l, ghost_r = self.apply_bc(coeffs)
        u_minus = np.concatenate([ghost_l[None], right], axis=0)
        u_plus = np.concatenate([left, ghost_r[None]], axis=0)
        try:
            self.equation.check_admissible(u_minus, context="at edges")
            self.equation.check_admissible(u_plus, context="at edges")
        except AdmissibilityError as exc:
            raise AdmissibilityError(f"{exc} (t={t})") from None
        h_all = self.flux.evaluate(u_minus, u_plus)      # (n_cells + 1, m)
        residual += h_all[1:, :, None] * self.phi_plus
        residual -= h_all[:-1, :, None] * self.phi_minus
        return residual

    def jh_residual(self, coeffs):
        """Stabilization J_h applied to every test basis function."""
        residual = np.zeros_like(coeffs)
        if self.stabilization is not None:
            self.stabilization.accumulate(
                residual, coeffs, self.equation, self.flux,
                legacy=self.legacy_j1,
                conserved_roe_average=self.conserved_roe_average)
        return residual

    def source_residual(self, coeffs, t):
        """S_h(g, w) for every test basis function."""
        if self.source is None:
            return np.zeros_like(coeffs)
        g = np.asarray(self.source(self.x_quad, t), dtype=float)
        w_vol = 0.5 * self.mesh.lengths[:, None] * self.quad.weights
        return np.einsum("jqm,nq,jq->jmn", g, self.phi, w_vol)

    # -- public entry points ------------------------------------------------

    def assemble_rhs(self, coeffs, t=0.0):
        """Time derivative of the modal coefficients at time ``t``."""
        residual = self.ah_residual(coeffs, t)
        residual += self.jh_residual(coeffs)
        residual -= self.source_residual(coeffs, t)
        return -residual * self.inv_mass[:, None, None]

    def rhs_state(self, state, t=0.0):
        return bs.DGState(mesh=state.mesh, p=state.p,
                          coeffs=self.assemble_rhs(state.coeffs, t))

    def energy_form(self, coeffs):
        """a_h(u, u) + J_h(u, u) for the current state."""
        residual = self.ah_residual(coeffs) + self.jh_residual(coeffs)
        return float(np.sum(residual * coeffs))

    def total_mass(self, coeffs):
        """Integral of each component over the domain, shape (m,)."""
        return np.einsum("j,jm->m", self.mesh.lengths,
                         coeffs[:, :, 0] * bs.AVG_NORM)
