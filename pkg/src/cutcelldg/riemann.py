"""Two-point numerical fluxes with Jacobians w.r.t. both arguments.

Every flux is vectorized: ``evaluate`` maps ``(..., m) x (..., m)`` to
``(..., m)`` and the Jacobians return ``(..., m, m)``.
"""

from __future__ import annotations

import numpy as np

from . import equations as eqs
from .errors import AdmissibilityError


class NumericalFlux:
    """Base interface: consistency H(u, u) = f(u) is required of subclasses."""

    kind = "abstract"
    m = 1

    def evaluate(self, ul, ur):
        raise NotImplementedError

    def jac_left(self, ul, ur):
        raise NotImplementedError

    def jac_right(self, ul, ur):
        raise NotImplementedError

    def __call__(self, ul, ur):
        return self.evaluate(ul, ur)


class UpwindAdvection(NumericalFlux):
    """Upwind flux for constant-speed advection."""

    kind = "upwind"

    def __init__(self, beta=1.0):
        self.beta = float(beta)

    def evaluate(self, ul, ur):
        if self.beta > 0.0:
            return self.beta * np.asarray(ul, dtype=float)
        if self.beta < 0.0:
            return self.beta * np.asarray(ur, dtype=float)
        return np.zeros_like(np.asarray(ul, dtype=float))

    def jac_left(self, ul, ur):
        ul = np.asarray(ul, dtype=float)
        value = self.beta if self.beta > 0.0 else 0.0
        return np.full(ul.shape[:-1] + (1, 1), value)

    def jac_right(self, ul, ur):
        ur = np.asarray(ur, dtype=float)
        value = self.beta if self.beta < 0.0 else 0.0
        return np.full(ur.shape[:-1] + (1, 1), value)


class GodunovBurgers(NumericalFlux):
    """Exact Riemann (Godunov) flux for f(u) = u^2 / 2.

    H(ul, ur) = max(f(max(ul, 0)), f(min(ur, 0))).  At the sonic kink the
    one-sided derivative from the upwind side is used; H(0, 0) = 0.
    """

    kind = "godunov"

    def evaluate(self, ul, ur):
        ul = np.asarray(ul, dtype=float)
        ur = np.asarray(ur, dtype=float)
        return np.maximum(0.5 * np.maximum(ul, 0.0) ** 2,
                          0.5 * np.minimum(ur, 0.0) ** 2)

    def _sides(self, ul, ur):
        ul = np.asarray(ul, dtype=float)
        ur = np.asarray(ur, dtype=float)
        fl = 0.5 * np.maximum(ul, 0.0) ** 2
        fr = 0.5 * np.minimum(ur, 0.0) ** 2
        return fl >= fr

    def jac_left(self, ul, ur):
        ul = np.asarray(ul, dtype=float)
        deriv = np.where(self._sides(ul, ur), np.maximum(ul, 0.0), 0.0)
        return deriv[..., None]

    def jac_right(self, ul, ur):
        ur = np.asarray(ur, dtype=float)
        deriv = np.where(self._sides(ul, ur), 0.0, np.minimum(ur, 0.0))
        return deriv[..., None]


class LinearSystemExact(NumericalFlux):
    """Exact (characteristic upwind) flux H = A+ ul + A- ur."""

    kind = "linsys-exact"

    def __init__(self, a):
        a = np.asarray(a, dtype=float)
        q, lam, qinv = eqs.linear_system_eigen(a)
        self.m = a.shape[0]
        self.a = a
        self.a_plus = q @ np.diag(np.maximum(lam, 0.0)) @ qinv
        self.a_minus = q @ np.diag(np.minimum(lam, 0.0)) @ qinv

    def evaluate(self, ul, ur):
        ul = np.asarray(ul, dtype=float)
        ur = np.asarray(ur, dtype=float)
        return (np.einsum("ij,...j->...i", self.a_plus, ul)
                + np.einsum("ij,...j->...i", self.a_minus, ur))

    def jac_left(self, ul, ur):
        ul = np.asarray(ul, dtype=float)
        return np.broadcast_to(self.a_plus,
                               ul.shape[:-1] + (self.m, self.m)).copy()

    def jac_right(self, ul, ur):
        ur = np.asarray(ur, dtype=float)
        return np.broadcast_to(self.a_minus,
                               ur.shape[:-1] + (self.m, self.m)).copy()


def roe_average_vh(ul, ur, gamma=eqs.GAMMA):
    """Roe-averaged velocity and total enthalpy of two Euler states."""
    rho_l, v_l, p_l = eqs.euler_primitives(ul, gamma)
    rho_r, v_r, p_r = eqs.euler_primitives(ur, gamma)
    h_l = (ul[..., 2] + p_l) / rho_l
    h_r = (ur[..., 2] + p_r) / rho_r
    sl = np.sqrt(rho_l)
    sr = np.sqrt(rho_r)
    v_hat = (sl * v_l + sr * v_r) / (sl + sr)
    h_hat = (sl * h_l + sr * h_r) / (sl + sr)
    return v_hat, h_hat


class RoeEuler(NumericalFlux):
    """Roe's approximate Riemann solver for the Euler equations.

    ``H = (f(ul) + f(ur)) / 2 - |A_hat| (ur - ul) / 2`` with ``|A_hat|``
    assembled from the Roe-averaged eigenstructure.  The Jacobians use the
    frozen-matrix approximation (|A_hat| not differentiated).  An optional
    Harten entropy fix smooths |lambda| near sonic points (off by default).
    """

    kind = "roe"
    m = 3

    def __init__(self, gamma=eqs.GAMMA, entropy_fix=False, fix_delta=0.1):
        self.gamma = gamma
        self.entropy_fix = entropy_fix
        self.fix_delta = fix_delta

    def _abs_roe_matrix(self, ul, ur):
        v_hat, h_hat = roe_average_vh(ul, ur, self.gamma)
        q, lam, qinv = eqs.euler_eigen_vh(v_hat, h_hat, self.gamma)
        abs_lam = np.abs(lam)
        if self.entropy_fix:
            c_hat = 0.5 * (lam[..., 2] - lam[..., 0])
            delta = self.fix_delta * c_hat[..., None]
            small = abs_lam < delta
            abs_lam = np.where(small,
                               0.5 * (abs_lam ** 2 / delta + delta),
                               abs_lam)
        return np.einsum("...ik,...k,...kj->...ij", q, abs_lam, qinv)

    def evaluate(self, ul, ur):
        ul = np.asarray(ul, dtype=float)
        ur = np.asarray(ur, dtype=float)
        fl = eqs.euler_flux(ul, self.gamma)
        fr = eqs.euler_flux(ur, self.gamma)
        a_abs = self._abs_roe_matrix(ul, ur)
        diss = np.einsum("...ij,...j->...i", a_abs, ur - ul)
        return 0.5 * (fl + fr) - 0.5 * diss

    def jac_left(self, ul, ur):
        ul = np.asarray(ul, dtype=float)
        rho, v, p = eqs.euler_primitives(ul, self.gamma)
        big_h = (ul[..., 2] + p) / rho
        jac = eqs.euler_jacobian_vh(v, big_h, self.gamma)
        return 0.5 * jac + 0.5 * self._abs_roe_matrix(ul, ur)

    def jac_right(self, ul, ur):
        ur = np.asarray(ur, dtype=float)
        rho, v, p = eqs.euler_primitives(ur, self.gamma)
        big_h = (ur[..., 2] + p) / rho
        jac = eqs.euler_jacobian_vh(v, big_h, self.gamma)
        return 0.5 * jac - 0.5 * self._abs_roe_matrix(ul, ur)


def finite_difference_jacobians(flux, ul, ur):
    """Central-difference flux Jacobians (validation mode for Roe)."""
    ul = np.asarray(ul, dtype=float)
    ur = np.asarray(ur, dtype=float)
    m = ul.shape[-1]
    jl = np.empty(ul.shape[:-1] + (m, m))
    jr = np.empty(ur.shape[:-1] + (m, m))
    sqrt_eps = np.sqrt(np.finfo(float).eps)
    for j in range(m):
        step = sqrt_eps * (1.0 + np.abs(ul[..., j]))
        dl = np.zeros_like(ul)
        dl[..., j] = step
        jl[..., :, j] = ((flux.evaluate(ul + dl, ur)
                          - flux.evaluate(ul - dl, ur))
                         / (2.0 * step[..., None]))
        step = sqrt_eps * (1.0 + np.abs(ur[..., j]))
        dr = np.zeros_like(ur)
        dr[..., j] = step
        jr[..., :, j] = ((flux.evaluate(ul, ur + dr)
                          - flux.evaluate(ul, ur - dr))
                         / (2.0 * step[..., None]))
    return jl, jr


def flux_jacobians(flux, ul, ur, mode="analytic"):
    """Jacobian pair (H_{u-}, H_{u+}); ``mode='fd'`` uses central differences."""
    if mode == "fd":
        return finite_difference_jacobians(flux, ul, ur)
    return flux.jac_left(ul, ur), flux.jac_right(ul, ur)


FLUX_KEYS = ("upwind", "godunov", "linsys-exact", "roe")


def make_flux(key, equation=None, **kwargs):
    """Flux lookup for the CLI config keys."""
    if key == "upwind":
        beta = kwargs.pop("beta", None)
        if beta is None and equation is not None:
            beta = float(equation.jacobian(np.zeros(1))[0, 0])
        return UpwindAdvection(beta if beta is not None else 1.0)
    if key == "godunov":
        return GodunovBurgers()
    if key == "linsys-exact":
        a = kwargs.pop("a", None)
        if a is None and equation is not None:
            a = equation.jacobian(np.zeros(equation.m))
        return LinearSystemExact(a)
    if key == "roe":
        return RoeEuler(**kwargs)
    raise KeyError(f"unknown flux key {key!r}; expected {FLUX_KEYS}")


def default_flux_key(equation_name):
    return {"advection": "upwind", "burgers": "godunov",
            "linsys": "linsys-exact", "euler": "roe"}[equation_name]
