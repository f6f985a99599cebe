"""Domain-of-dependence stabilization: eta, direction matrices, J^0 and J^1.

The penalty couples each small cut cell k1 with its neighbors k-1 and k2.
J^0 adds jump-weighted flux differences at the two edges of k1; J^1 adds
volume integrals over k1 of extended ansatz and test polynomials.  All
geometry-dependent evaluation matrices are precomputed per mesh so the
per-step work is a handful of einsums over the batch of cut pairs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import basis as bs
from . import riemann
from .errors import UnsupportedOperationError

# roles within one stabilized neighborhood
KM1, K1, K2 = 0, 1, 2


def compute_eta(alpha, nu):
    """Penalty factor eta = max(1 - alpha/nu, 0); zero disables the pair."""
    return max(1.0 - alpha / nu, 0.0)


@dataclass(frozen=True)
class StabilizationRecord:
    """One stabilized cut pair: cell indices, fraction and penalty factor."""

    k1: int
    k2: int
    left_neighbor: int
    alpha: float
    eta: float


def direction_matrices(equation, u_left, u_right, conserved_roe_average=False):
    """Flow-direction splitters (L, R) with L + R = I.

    ``u_left`` and ``u_right`` are the neighbor polynomials of a small cut
    cell evaluated (via extension) at its centroid, shape ``(..., m)``.  The
    split decomposes the flux Jacobian at an averaged state: arithmetic mean
    for scalars, the matrix itself for linear systems, a Roe average for
    Euler.  Eigendirections with speed zero are shared half and half.
    """
    u_left = np.asarray(u_left, dtype=float)
    u_right = np.asarray(u_right, dtype=float)
    if equation.name == "euler" and not conserved_roe_average:
        v_hat, h_hat = riemann.roe_average_vh(u_left, u_right)
        from .equations import euler_eigen_vh
        q, lam, qinv = euler_eigen_vh(v_hat, h_hat)
    elif equation.name == "euler":
        # sqrt(rho)-weighted averaged vector read directly as a conserved state
        rho_l = u_left[..., 0]
        rho_r = u_right[..., 0]
        sl = np.sqrt(rho_l)[..., None]
        sr = np.sqrt(rho_r)[..., None]
        from .equations import euler_primitives
        _, v_l, p_l = euler_primitives(u_left)
        _, v_r, p_r = euler_primitives(u_right)
        h_l = (u_left[..., 2] + p_l) / rho_l
        h_r = (u_right[..., 2] + p_r) / rho_r
        u_hat = 0.5 * np.stack(
            [sl[..., 0] + sr[..., 0],
             sl[..., 0] * v_l + sr[..., 0] * v_r,
             sl[..., 0] * h_l + sr[..., 0] * h_r], axis=-1)
        q, lam, qinv = equation.eigen(u_hat)
    else:
        u_hat = 0.5 * (u_left + u_right)
        q, lam, qinv = equation.eigen(u_hat)
    i_plus = np.where(lam > 0.0, 1.0, np.where(lam < 0.0, 0.0, 0.5))
    left = np.einsum("...ik,...k,...kj->...ij", q, i_plus, qinv)
    right = np.einsum("...ik,...k,...kj->...ij", q, 1.0 - i_plus, qinv)
    return left, right


class StabilizationBatch:
    """All stabilized cut pairs of a mesh with precomputed basis tables.

    Evaluation tables (shapes: P = number of pairs, n = p + 1, q = quad
    points) map modal coefficients of the three neighborhood cells to values
    and spatial derivatives at the quadrature points of each small cell, and
    to point values at the small cell's two edges and centroid.
    """

    def __init__(self, mesh, p, nu, quad=None):
        self.mesh = mesh
        self.p = p
        self.nu = nu
        self.quad = quad if quad is not None else bs.Quadrature.gauss(p + 2)
        records = []
        for pair in mesh.cut_pairs:
            eta = compute_eta(pair.alpha, nu)
            if eta > 0.0:
                records.append(StabilizationRecord(
                    k1=pair.k1, k2=pair.k2, left_neighbor=pair.left_neighbor,
                    alpha=pair.alpha, eta=eta))
        self.records = tuple(records)
        self.n_pairs = len(records)
        if self.n_pairs == 0:
            return

        idx = np.array([[r.left_neighbor, r.k1, r.k2] for r in records])
        self.idx = idx                      # (P, 3) role-ordered indices
        self.eta = np.array([r.eta for r in records])
        self.len_k1 = mesh.lengths[idx[:, K1]]

        nodes = self.quad.nodes
        self.weights = self.quad.weights
        centers = mesh.centers
        half = 0.5 * mesh.lengths
        # quadrature points of each small cell, (P, q)
        x_q = centers[idx[:, K1], None] + half[idx[:, K1], None] * nodes
        x_edge = mesh.edges[idx[:, K1]]          # x_{k-1/2}
        x_cut = mesh.edges[idx[:, K1] + 1]
        x_cent = centers[idx[:, K1]]

        self.phi_q = np.empty((3, self.n_pairs, p + 1, len(nodes)))
        self.dphi_q = np.empty_like(self.phi_q)
        for role in (KM1, K1, K2):
            cells = idx[:, role]
            xi = (x_q - centers[cells, None]) / half[cells, None]
            self.phi_q[role] = np.moveaxis(bs.basis_values(xi, p), 0, 1)
            dphi = np.moveaxis(bs.basis_derivatives(xi, p), 0, 1)
            self.dphi_q[role] = dphi / half[cells, None, None]

        def point_values(cells, x):
            xi = (x - centers[cells]) / half[cells]
            return bs.basis_values(xi, p).T        # (P, n)

        # own-edge traces are geometry independent
        self.phi_minus = bs.basis_values(np.array(-1.0), p)
        self.phi_plus = bs.basis_values(np.array(1.0), p)
        # extension-operator point values
        self.phi_k2_at_edge = point_values(idx[:, K2], x_edge)
        self.phi_km1_at_cut = point_values(idx[:, KM1], x_cut)
        self.phi_km1_at_cent = point_values(idx[:, KM1], x_cent)
        self.phi_k2_at_cent = point_values(idx[:, K2], x_cent)

    def role_values(self, coeffs, role):
        """States of a role cell at the small cells' quad points, (P, q, m)."""
        c = coeffs[self.idx[:, role]]
        return np.einsum("pmn,pnq->pqm", c, self.phi_q[role])

    def point_state(self, coeffs, role, table):
        c = coeffs[self.idx[:, role]]
        return np.einsum("pmn,pn->pm", c, table)

    def centroid_states(self, coeffs):
        """Extended neighbor states at the small cells' centroids."""
        u_l = self.point_state(coeffs, KM1, self.phi_km1_at_cent)
        u_r = self.point_state(coeffs, K2, self.phi_k2_at_cent)
        return u_l, u_r

    def accumulate(self, residual, coeffs, equation, flux, legacy=False,
                   conserved_roe_average=False, include_j1=True):
        """Add J_h = J^0 + J^1 contributions to ``residual`` (in place)."""
        if self.n_pairs == 0:
            return
        eta = self.eta
        contrib = np.zeros((3,) + coeffs[self.idx[:, 0]].shape)

        # --- J^0: flux-difference jumps at both edges of k1
        u_km1_e = np.einsum("pmn,n->pm", coeffs[self.idx[:, KM1]],
                            self.phi_plus)
        u_k1_e = np.einsum("pmn,n->pm", coeffs[self.idx[:, K1]],
                           self.phi_minus)
        u_k2_e = self.point_state(coeffs, K2, self.phi_k2_at_edge)
        dh_left = flux.evaluate(u_km1_e, u_k2_e) - flux.evaluate(u_km1_e,
                                                                 u_k1_e)
        u_km1_c = self.point_state(coeffs, KM1, self.phi_km1_at_cut)
        u_k1_c = np.einsum("pmn,n->pm", coeffs[self.idx[:, K1]],
                           self.phi_plus)
        u_k2_c = np.einsum("pmn,n->pm", coeffs[self.idx[:, K2]],
                           self.phi_minus)
        dh_right = flux.evaluate(u_km1_c, u_k2_c) - flux.evaluate(u_k1_c,
                                                                  u_k2_c)
        scale = eta[:, None]
        contrib[KM1] += (scale * dh_left)[:, :, None] * self.phi_plus
        contrib[K1] -= (scale * dh_left)[:, :, None] * self.phi_minus
        contrib[K1] += (scale * dh_right)[:, :, None] * self.phi_plus
        contrib[K2] -= (scale * dh_right)[:, :, None] * self.phi_minus

        # --- J^1: volume penalties over each small cell
        if include_j1 and self.p > 0:
            if legacy:
                self._accumulate_legacy_j1(contrib, coeffs, equation, flux)
            else:
                self._accumulate_j1(contrib, coeffs, equation, flux,
                                    conserved_roe_average)

        for role in (KM1, K1, K2):
            np.add.at(residual, self.idx[:, role], contrib[role])

    def _accumulate_j1(self, contrib, coeffs, equation, flux,
                       conserved_roe_average):
        eta = self.eta
        u_q = [self.role_values(coeffs, role) for role in (KM1, K1, K2)]
        h_q = flux.evaluate(u_q[KM1], u_q[K2])           # (P, q, m)
        jl_q = flux.jac_left(u_q[KM1], u_q[K2])          # (P, q, m, m)
        jr_q = flux.jac_right(u_q[KM1], u_q[K2])

        u_l_cent, u_r_cent = self.centroid_states(coeffs)
        left, right = direction_matrices(equation, u_l_cent, u_r_cent,
                                         conserved_roe_average)
        m = coeffs.shape[1]
        eye = np.broadcast_to(np.eye(m), left.shape)
        k_mats = (left, -eye, right)                     # K(k-1), K(k1), K(k2)

        w_vol = 0.5 * self.len_k1[:, None] * eta[:, None] * self.weights
        sum_left = 0.0
        sum_right = 0.0
        for role in (KM1, K1, K2):
            diff = h_q - equation.flux(u_q[role])
            vec = np.einsum("pab,pqb->pqa", k_mats[role], diff)
            contrib[role] += np.einsum("pqa,pnq,pq->pan", vec,
                                       self.dphi_q[role], w_vol)
            jlu = np.einsum("pqab,pqb->pqa", jl_q, u_q[role])
            sum_left = sum_left + np.einsum("pab,pqb->pqa", k_mats[role], jlu)
            jru = np.einsum("pqab,pqb->pqa", jr_q, u_q[role])
            sum_right = sum_right + np.einsum("pab,pqb->pqa", k_mats[role],
                                              jru)
        contrib[KM1] += np.einsum("pqa,pnq,pq->pan", sum_left,
                                  self.dphi_q[KM1], w_vol)
        contrib[K2] += np.einsum("pqa,pnq,pq->pan", sum_right,
                                 self.dphi_q[K2], w_vol)

    def _accumulate_legacy_j1(self, contrib, coeffs, equation, flux):
        """Older advection-only volume penalty (no w_{k-1} difference term)."""
        if not isinstance(flux, riemann.UpwindAdvection):
            raise UnsupportedOperationError(
                "legacy volume penalty is defined for upwind advection only")
        beta = flux.beta
        eta = self.eta
        u_km1 = self.role_values(coeffs, KM1)
        u_k1 = self.role_values(coeffs, K1)
        w_vol = 0.5 * self.len_k1[:, None] * eta[:, None] * self.weights
        diff = beta * (u_km1 - u_k1)
        contrib[K1] -= np.einsum("pqa,pnq,pq->pan", diff, self.dphi_q[K1],
                                 w_vol)


def _single_record_batch(mesh, p, record, quad=None):
    # eta = 1 - alpha/nu  =>  nu = alpha / (1 - eta); eta < 1 since alpha > 0
    nu = record.alpha / (1.0 - record.eta)
    batch = StabilizationBatch(mesh, p, nu=nu, quad=quad)
    keep = [i for i, r in enumerate(batch.records)
            if (r.k1, r.k2) == (record.k1, record.k2)]
    if len(keep) != 1:
        raise ValueError("record does not match a stabilized pair of the mesh")
    i = keep[0]
    batch.records = (batch.records[i],)
    batch.n_pairs = 1
    batch.idx = batch.idx[i:i + 1]
    batch.eta = np.array([record.eta])
    batch.len_k1 = batch.len_k1[i:i + 1]
    batch.phi_q = batch.phi_q[:, i:i + 1]
    batch.dphi_q = batch.dphi_q[:, i:i + 1]
    for name in ("phi_k2_at_edge", "phi_km1_at_cut", "phi_km1_at_cent",
                 "phi_k2_at_cent"):
        setattr(batch, name, getattr(batch, name)[i:i + 1])
    return batch


def j0_edge_penalty(state, record, equation, flux):
    """Residual contribution of J^0 for one record, residual-shaped."""
    batch = _single_record_batch(state.mesh, state.p, record)
    residual = np.zeros_like(state.coeffs)
    batch.accumulate(residual, state.coeffs, equation, flux, include_j1=False)
    return residual


def j1_volume_penalty(state, record, equation, flux, conserved_roe_average=False):
    """Residual contribution of J^1 for one record, residual-shaped."""
    batch = _single_record_batch(state.mesh, state.p, record)
    residual = np.zeros_like(state.coeffs)
    if state.p == 0:
        return residual
    contrib = np.zeros((3,) + state.coeffs[batch.idx[:, 0]].shape)
    batch._accumulate_j1(contrib, state.coeffs, equation, flux,
                         conserved_roe_average)
    for role in (KM1, K1, K2):
        np.add.at(residual, batch.idx[:, role], contrib[role])
    return residual


def legacy_j1_advection(state, record, equation, flux):
    """Residual contribution of the pre-extension volume penalty (advection)."""
    batch = _single_record_batch(state.mesh, state.p, record)
    residual = np.zeros_like(state.coeffs)
    if state.p == 0:
        return residual
    contrib = np.zeros((3,) + state.coeffs[batch.idx[:, 0]].shape)
    batch._accumulate_legacy_j1(contrib, state.coeffs, equation, flux)
    for role in (KM1, K1, K2):
        np.add.at(residual, batch.idx[:, role], contrib[role])
    return residual
