"""TVDM generalized slope limiter with cut-cell postprocessing.

The per-cell limiter compares each cell's edge traces with minmod-limited
values built from neighbor averages; only cells whose traces violate the
bound are reduced to P1 and re-sloped (mass is preserved because the basis
is modal Legendre).  After the cell pass, the extended evaluations used by
the stabilization (u_{k-1} at x_cut and u_{k2} at x_{k-1/2}) are clamped
into the envelope of the three neighborhood averages.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import basis as bs
from . import equations as eqs
from .errors import AdmissibilityError

# slope mode scale: edge deviation of the P1 part is c_1 * phi_1(1)
_PHI1_EDGE = float(np.sqrt(1.5))


@dataclass(frozen=True)
class LimiterConfig:
    enabled: bool = True
    positivity: bool = False          # Euler pressure/density safeguard
    cut_postprocess: bool = True
    gamma: float = eqs.GAMMA


def minmod(*args):
    """Elementwise minmod; zero whenever the signs disagree or vanish."""
    stacked = np.stack(np.broadcast_arrays(*[np.asarray(a, dtype=float)
                                             for a in args]))
    signs = np.sign(stacked)
    all_pos = np.all(signs > 0, axis=0)
    all_neg = np.all(signs < 0, axis=0)
    magnitude = np.min(np.abs(stacked), axis=0)
    return np.where(all_pos, magnitude, np.where(all_neg, -magnitude, 0.0))


def _neighbor_diffs(ubar, bc):
    """(ubar_j - ubar_{j-1}, ubar_{j+1} - ubar_j) with BC-aware ends."""
    if bc == "periodic":
        prev = np.roll(ubar, 1, axis=0)
        nxt = np.roll(ubar, -1, axis=0)
        return ubar - prev, nxt - ubar
    diff_l = np.empty_like(ubar)
    diff_r = np.empty_like(ubar)
    diff_l[1:] = ubar[1:] - ubar[:-1]
    diff_r[:-1] = ubar[1:] - ubar[:-1]
    # missing neighbor: contribute a zero slope candidate
    diff_l[0] = 0.0
    diff_r[-1] = 0.0
    return diff_l, diff_r


def limit_cells(coeffs, p, bc="periodic"):
    """Vectorized TVDM pass over all cells; returns new coefficients."""
    if p == 0:
        return coeffs
    phi_minus = bs.basis_values(np.array(-1.0), p)
    phi_plus = bs.basis_values(np.array(1.0), p)
    ubar = coeffs[:, :, 0] * bs.AVG_NORM
    trace_l = np.einsum("jmn,n->jm", coeffs, phi_minus)
    trace_r = np.einsum("jmn,n->jm", coeffs, phi_plus)
    diff_l, diff_r = _neighbor_diffs(ubar, bc)

    dev_l = ubar - trace_l
    dev_r = trace_r - ubar
    lim_l = minmod(dev_l, diff_l, diff_r)
    lim_r = minmod(dev_r, diff_l, diff_r)
    needs = (lim_l != dev_l) | (lim_r != dev_r)        # (cells, m)
    if not np.any(needs):
        return coeffs

    out = coeffs.copy()
    slope_dev = minmod(lim_l, lim_r)                   # symmetric P1 deviation
    new_c1 = slope_dev / _PHI1_EDGE
    out[:, :, 1] = np.where(needs, new_c1, out[:, :, 1])
    if p >= 2:
        out[:, :, 2:] = np.where(needs[:, :, None], 0.0, out[:, :, 2:])
    return out


def limit_cell(coeffs, p, j, bc="periodic"):
    """Single-cell view of :func:`limit_cells` (shares its logic)."""
    return limit_cells(coeffs, p, bc)[j]


def postprocess_cut_neighbors(coeffs, p, stabilization):
    """Clamp extended neighbor evaluations into the 3-average envelope.

    ``stabilization`` is the mesh's StabilizationBatch; only stabilized
    pairs are postprocessed.
    """
    if p == 0 or stabilization is None or stabilization.n_pairs == 0:
        return coeffs
    out = coeffs.copy()
    mesh = stabilization.mesh
    centers = mesh.centers
    half = 0.5 * mesh.lengths
    for rec in stabilization.records:
        tri = (rec.left_neighbor, rec.k1, rec.k2)
        ubar = out[list(tri), :, 0] * bs.AVG_NORM      # (3, m)
        lower = ubar.min(axis=0)
        upper = ubar.max(axis=0)
        x_cut = mesh.edges[rec.k1 + 1]
        x_edge = mesh.edges[rec.k1]
        for cell, x_eval in ((rec.left_neighbor, x_cut), (rec.k2, x_edge)):
            xi = (x_eval - centers[cell]) / half[cell]
            phi = bs.basis_values(np.array(xi), p)     # (p+1,)
            value = out[cell] @ phi                    # (m,)
            bad_low = value < lower
            bad_high = value > upper
            if not (np.any(bad_low) or np.any(bad_high)):
                continue
            target = np.where(bad_low, lower, np.where(bad_high, upper,
                                                       value))
            avg = out[cell, :, 0] * bs.AVG_NORM
            mask = bad_low | bad_high
            # reduce to P1, then slope so the extension meets the bound
            out[cell, mask, 2:] = 0.0
            out[cell, mask, 1] = (target[mask] - avg[mask]) / phi[1]
    return out


def positivity_guard(coeffs, p, mesh, quad=None, gamma=eqs.GAMMA,
                     floor=eqs.ADMISSIBILITY_FLOOR):
    """Flatten Euler cells with non-positive density/pressure samples.

    Cells whose density or pressure dips below ``floor`` at any edge or
    quadrature point are replaced by their (admissible) cell average.
    """
    quad = quad if quad is not None else bs.Quadrature.gauss(p + 2)
    points = np.concatenate([[-1.0], quad.nodes, [1.0]])
    phi = bs.basis_values(points, p)                   # (p+1, pts)
    values = np.einsum("jmn,nq->jqm", coeffs, phi)
    rho = values[..., 0]
    pressure = (gamma - 1.0) * (values[..., 2]
                                - 0.5 * values[..., 1] ** 2 / rho)
    with np.errstate(invalid="ignore"):
        bad = np.any((rho <= floor) | (pressure <= floor)
                     | ~np.isfinite(pressure), axis=1)
    if not np.any(bad):
        return coeffs
    out = coeffs.copy()
    out[bad, :, 1:] = 0.0
    avg = out[bad, :, 0] * bs.AVG_NORM
    rho_a = avg[:, 0]
    p_a = (gamma - 1.0) * (avg[:, 2] - 0.5 * avg[:, 1] ** 2 / rho_a)
    if np.any(rho_a <= floor) or np.any(p_a <= floor):
        raise AdmissibilityError(
            "cell average inadmissible during positivity guard: "
            f"min rho = {rho_a.min()}, min p = {p_a.min()}")
    return out


def make_limiter(operator, config):
    """Stage hook combining cell limiting, cut postprocessing, positivity."""
    if not config.enabled and not config.positivity:
        return None

    def apply(coeffs):
        out = coeffs
        if config.enabled:
            out = limit_cells(out, operator.p, operator.bc)
            if config.cut_postprocess:
                out = postprocess_cut_neighbors(out, operator.p,
                                                operator.stabilization)
        if config.positivity:
            out = positivity_guard(out, operator.p, operator.mesh,
                                   operator.quad, config.gamma)
        return out

    return apply
