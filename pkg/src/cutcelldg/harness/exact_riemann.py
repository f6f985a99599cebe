"""Exact Riemann solver for the 1D Euler equations (ideal gas).

Newton iteration on the star-region pressure with the standard two-shock /
two-rarefaction pressure functions, plus a similarity sampler.  Used as a
test oracle for the shock-tube runs, not inside the solver itself.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import CutCellDGError


@dataclass(frozen=True)
class RiemannSolution:
    """Star-region state of an exact Euler Riemann problem."""

    p_star: float
    v_star: float
    left: tuple          # (rho, v, p)
    right: tuple
    gamma: float

    def sample(self, xi):
        """State (rho, v, p) along rays x/t = xi; vectorized in xi."""
        return _sample(self, np.asarray(xi, dtype=float))


def _pressure_function(p, rho_k, p_k, c_k, gamma):
    """f_K(p) and f_K'(p) for one side of the star region."""
    g1 = (gamma - 1.0) / (2.0 * gamma)
    if p > p_k:  # shock
        a_k = 2.0 / ((gamma + 1.0) * rho_k)
        b_k = (gamma - 1.0) / (gamma + 1.0) * p_k
        root = np.sqrt(a_k / (p + b_k))
        f = (p - p_k) * root
        df = root * (1.0 - 0.5 * (p - p_k) / (p + b_k))
    else:  # rarefaction
        ratio = (p / p_k) ** g1
        f = 2.0 * c_k / (gamma - 1.0) * (ratio - 1.0)
        df = (1.0 / (rho_k * c_k)) * (p / p_k) ** (-(gamma + 1.0)
                                                   / (2.0 * gamma))
    return f, df


def solve_riemann(left, right, gamma=1.4, tol=1e-12, max_iter=100):
    """Exact star state for primitive states ``left``/``right`` = (rho,v,p)."""
    rho_l, v_l, p_l = left
    rho_r, v_r, p_r = right
    c_l = np.sqrt(gamma * p_l / rho_l)
    c_r = np.sqrt(gamma * p_r / rho_r)
    dv = v_r - v_l
    if 2.0 * (c_l + c_r) / (gamma - 1.0) <= dv:
        raise CutCellDGError("vacuum generated in Riemann problem")

    # two-rarefaction initial guess, floored away from zero
    g1 = (gamma - 1.0) / (2.0 * gamma)
    p = ((c_l + c_r - 0.5 * (gamma - 1.0) * dv)
         / (c_l / p_l ** g1 + c_r / p_r ** g1)) ** (1.0 / g1)
    p = max(p, 1e-8 * min(p_l, p_r))

    for _ in range(max_iter):
        f_l, df_l = _pressure_function(p, rho_l, p_l, c_l, gamma)
        f_r, df_r = _pressure_function(p, rho_r, p_r, c_r, gamma)
        g = f_l + f_r + dv
        delta = g / (df_l + df_r)
        p_new = p - delta
        if p_new <= 0.0:
            p_new = 0.5 * p
        if abs(p_new - p) < tol * (1.0 + p):
            p = p_new
            break
        p = p_new
    else:
        raise CutCellDGError("Riemann pressure iteration did not converge")

    f_l, _ = _pressure_function(p, rho_l, p_l, c_l, gamma)
    f_r, _ = _pressure_function(p, rho_r, p_r, c_r, gamma)
    v_star = 0.5 * (v_l + v_r) + 0.5 * (f_r - f_l)
    return RiemannSolution(p_star=float(p), v_star=float(v_star),
                           left=tuple(left), right=tuple(right), gamma=gamma)


def _sample(sol, xi):
    gamma = sol.gamma
    rho_l, v_l, p_l = sol.left
    rho_r, v_r, p_r = sol.right
    p_s, v_s = sol.p_star, sol.v_star
    c_l = np.sqrt(gamma * p_l / rho_l)
    c_r = np.sqrt(gamma * p_r / rho_r)
    gp = (gamma + 1.0) / (2.0 * gamma)
    gm = (gamma - 1.0) / (2.0 * gamma)

    rho = np.empty_like(xi)
    v = np.empty_like(xi)
    p = np.empty_like(xi)

    left_of_contact = xi <= v_s

    # left wave
    if p_s > p_l:  # shock
        rho_sl = rho_l * ((p_s / p_l + (gamma - 1.0) / (gamma + 1.0))
                          / ((gamma - 1.0) / (gamma + 1.0) * p_s / p_l + 1.0))
        s_l = v_l - c_l * np.sqrt(gp * p_s / p_l + gm)
        pre = xi < s_l
        region = left_of_contact & pre
        rho[region], v[region], p[region] = rho_l, v_l, p_l
        region = left_of_contact & ~pre
        rho[region], v[region], p[region] = rho_sl, v_s, p_s
    else:  # rarefaction
        c_sl = c_l * (p_s / p_l) ** gm
        head = v_l - c_l
        tail = v_s - c_sl
        pre = xi < head
        fan = (~pre) & (xi < tail)
        star = left_of_contact & (xi >= tail)
        region = left_of_contact & pre
        rho[region], v[region], p[region] = rho_l, v_l, p_l
        region = left_of_contact & fan
        u_fan = (2.0 / (gamma + 1.0)
                 * (c_l + 0.5 * (gamma - 1.0) * v_l + xi[region]))
        c_fan = c_l + 0.5 * (gamma - 1.0) * (v_l - u_fan)
        rho[region] = rho_l * (c_fan / c_l) ** (2.0 / (gamma - 1.0))
        v[region] = u_fan
        p[region] = p_l * (c_fan / c_l) ** (2.0 * gamma / (gamma - 1.0))
        rho_sl = rho_l * (p_s / p_l) ** (1.0 / gamma)
        rho[star], v[star], p[star] = rho_sl, v_s, p_s

    # right wave (mirror)
    right_side = ~left_of_contact
    if p_s > p_r:  # shock
        rho_sr = rho_r * ((p_s / p_r + (gamma - 1.0) / (gamma + 1.0))
                          / ((gamma - 1.0) / (gamma + 1.0) * p_s / p_r + 1.0))
        s_r = v_r + c_r * np.sqrt(gp * p_s / p_r + gm)
        post = xi > s_r
        region = right_side & post
        rho[region], v[region], p[region] = rho_r, v_r, p_r
        region = right_side & ~post
        rho[region], v[region], p[region] = rho_sr, v_s, p_s
    else:  # rarefaction
        c_sr = c_r * (p_s / p_r) ** gm
        head = v_r + c_r
        tail = v_s + c_sr
        post = xi > head
        fan = (~post) & (xi > tail)
        star = right_side & (xi <= tail)
        region = right_side & post
        rho[region], v[region], p[region] = rho_r, v_r, p_r
        region = right_side & fan
        u_fan = (2.0 / (gamma + 1.0)
                 * (-c_r + 0.5 * (gamma - 1.0) * v_r + xi[region]))
        c_fan = c_r - 0.5 * (gamma - 1.0) * (v_r - u_fan)
        rho[region] = rho_r * (c_fan / c_r) ** (2.0 / (gamma - 1.0))
        v[region] = u_fan
        p[region] = p_r * (c_fan / c_r) ** (2.0 * gamma / (gamma - 1.0))
        rho_sr = rho_r * (p_s / p_r) ** (1.0 / gamma)
        rho[star], v[star], p[star] = rho_sr, v_s, p_s

    return rho, v, p


SOD_LEFT = (1.0, 0.0, 1.0)
SOD_RIGHT = (0.125, 0.0, 0.1)


def sod_exact(x, t, gamma=1.4, x0=0.0):
    """Primitive Sod-tube solution at time ``t`` (t > 0), vectorized in x."""
    sol = solve_riemann(SOD_LEFT, SOD_RIGHT, gamma)
    return sol.sample((np.asarray(x, dtype=float) - x0) / t)
