"""Conservation laws: fluxes, Jacobians, eigenstructures, manufactured cases.

All state-valued callables are vectorized over leading axes; states carry
their components on the last axis, so a batch of Euler states has shape
``(..., 3)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import AdmissibilityError, HyperbolicityError

GAMMA = 1.4
ADMISSIBILITY_FLOOR = 1e-12


@dataclass(frozen=True)
class EquationSystem:
    """A hyperbolic system ``u_t + f(u)_x = g``.

    ``eigen(u)`` returns ``(Q, lam, Qinv)`` with ``f_u = Q diag(lam) Qinv``
    and eigenvalues sorted ascending.  ``is_linear`` marks systems whose
    Jacobian is state-independent (the direction matrices of the
    stabilization are then constant).
    """

    name: str
    m: int
    flux: Callable
    jacobian: Callable
    eigen: Callable
    max_wave_speed: Callable
    source: Callable
    exact_solution: Optional[Callable] = None
    is_linear: bool = False

    def check_admissible(self, u, context=""):
        """Hook for physical admissibility; no-op except for Euler."""


@dataclass(frozen=True)
class ManufacturedCase:
    """An exact solution together with the source it forces."""

    equation: EquationSystem
    exact: Callable
    source: Callable
    domain: tuple
    final_time: float
    bc: str = "periodic"


def _zero_source(m):
    def source(x, t):
        x = np.asarray(x, dtype=float)
        return np.zeros(x.shape + (m,))
    return source


# ---------------------------------------------------------------------------
# scalar laws

def advection(beta=1.0):
    """Linear advection ``u_t + beta u_x = 0``."""
    beta = float(beta)

    def flux(u):
        return beta * np.asarray(u, dtype=float)

    def jacobian(u):
        u = np.asarray(u, dtype=float)
        return np.broadcast_to(beta, u.shape[:-1] + (1, 1)).copy()

    def eigen(u):
        u = np.asarray(u, dtype=float)
        shape = u.shape[:-1]
        one = np.ones(shape + (1, 1))
        lam = np.full(shape + (1,), beta)
        return one, lam, one.copy()

    def max_wave_speed(u):
        u = np.asarray(u, dtype=float)
        return np.full(u.shape[:-1], abs(beta))

    return EquationSystem(name="advection", m=1, flux=flux, jacobian=jacobian,
                          eigen=eigen, max_wave_speed=max_wave_speed,
                          source=_zero_source(1), is_linear=True)


def burgers():
    """Burgers equation with ``f(u) = u^2 / 2``."""

    def flux(u):
        u = np.asarray(u, dtype=float)
        return 0.5 * u * u

    def jacobian(u):
        u = np.asarray(u, dtype=float)
        return u[..., None]

    def eigen(u):
        u = np.asarray(u, dtype=float)
        shape = u.shape[:-1]
        one = np.ones(shape + (1, 1))
        return one, u.copy(), one.copy()

    def max_wave_speed(u):
        u = np.asarray(u, dtype=float)
        return np.abs(u[..., 0])

    return EquationSystem(name="burgers", m=1, flux=flux, jacobian=jacobian,
                          eigen=eigen, max_wave_speed=max_wave_speed,
                          source=_zero_source(1))


# ---------------------------------------------------------------------------
# linear systems

def linear_system_eigen(a):
    """Real eigendecomposition ``A = Q diag(lam) Qinv``, ascending order.

    Raises :class:`HyperbolicityError` for complex or defective spectra.
    """
    a = np.asarray(a, dtype=float)
    lam, q = np.linalg.eig(a)
    scale = max(1.0, np.abs(lam).max())
    if np.abs(lam.imag).max() > 1e-10 * scale:
        raise HyperbolicityError(f"matrix has complex eigenvalues: {lam}")
    lam = lam.real
    q = q.real
    order = np.argsort(lam, kind="stable")
    lam = lam[order]
    q = q[:, order]
    try:
        qinv = np.linalg.inv(q)
    except np.linalg.LinAlgError as exc:
        raise HyperbolicityError("defective eigenvector matrix") from exc
    if np.max(np.abs(q @ np.diag(lam) @ qinv - a)) > 1e-10 * scale:
        raise HyperbolicityError("eigendecomposition fails to reconstruct A")
    return q, lam, qinv


def linear_system(a):
    """The system ``u_t + A u_x = 0`` for a diagonalizable real matrix A."""
    a = np.asarray(a, dtype=float)
    m = a.shape[0]
    q, lam, qinv = linear_system_eigen(a)
    lam_max = float(np.abs(lam).max())

    def flux(u):
        return np.einsum("ij,...j->...i", a, np.asarray(u, dtype=float))

    def jacobian(u):
        u = np.asarray(u, dtype=float)
        return np.broadcast_to(a, u.shape[:-1] + (m, m)).copy()

    def eigen(u):
        u = np.asarray(u, dtype=float)
        shape = u.shape[:-1]
        return (np.broadcast_to(q, shape + (m, m)).copy(),
                np.broadcast_to(lam, shape + (m,)).copy(),
                np.broadcast_to(qinv, shape + (m, m)).copy())

    def max_wave_speed(u):
        u = np.asarray(u, dtype=float)
        return np.full(u.shape[:-1], lam_max)

    return EquationSystem(name="linsys", m=m, flux=flux, jacobian=jacobian,
                          eigen=eigen, max_wave_speed=max_wave_speed,
                          source=_zero_source(m), is_linear=True)


def linear_system_exact(u0, a, t):
    """Exact periodic solution on (0, 1) by characteristic decomposition.

    ``u0(x) -> (..., m)`` is the initial profile; returns a profile callable.
    """
    q, lam, qinv = linear_system_eigen(a)

    def profile(x):
        x = np.asarray(x, dtype=float)
        out = 0.0
        for i, lam_i in enumerate(lam):
            xs = np.mod(x - lam_i * t, 1.0)
            w_i = np.einsum("j,...j->...", qinv[i], np.asarray(u0(xs)))
            out = out + w_i[..., None] * q[:, i]
        return out

    return profile


# ---------------------------------------------------------------------------
# compressible Euler

def euler_primitives(u, gamma=GAMMA):
    """(rho, v, p) from conserved (rho, rho*v, E)."""
    u = np.asarray(u, dtype=float)
    rho = u[..., 0]
    v = u[..., 1] / rho
    p = (gamma - 1.0) * (u[..., 2] - 0.5 * rho * v * v)
    return rho, v, p


def euler_conserved(rho, v, p, gamma=GAMMA):
    """Conserved state array from primitive fields."""
    rho = np.asarray(rho, dtype=float)
    e = p / (gamma - 1.0) + 0.5 * rho * v * v
    return np.stack([rho, rho * v, e], axis=-1)


def check_euler_admissible(u, gamma=GAMMA, floor=ADMISSIBILITY_FLOOR,
                           context=""):
    rho, _, p = euler_primitives(u, gamma)
    if np.any(~np.isfinite(rho)) or np.any(rho <= floor):
        where = f" {context}" if context else ""
        raise AdmissibilityError(f"non-positive density{where}: "
                                 f"min rho = {np.min(rho)}")
    if np.any(~np.isfinite(p)) or np.any(p <= floor):
        where = f" {context}" if context else ""
        raise AdmissibilityError(f"non-positive pressure{where}: "
                                 f"min p = {np.min(p)}")


def euler_flux(u, gamma=GAMMA):
    """Flux (rho*v, rho*v^2 + p, (E + p)*v) with admissibility check."""
    check_euler_admissible(u, gamma)
    u = np.asarray(u, dtype=float)
    rho, v, p = euler_primitives(u, gamma)
    return np.stack([u[..., 1], rho * v * v + p, (u[..., 2] + p) * v], axis=-1)


def euler_jacobian_vh(v, big_h, gamma=GAMMA):
    """Flux Jacobian from velocity and total enthalpy H = (E + p) / rho."""
    v = np.asarray(v, dtype=float)
    big_h = np.asarray(big_h, dtype=float)
    g1 = gamma - 1.0
    shape = v.shape + (3, 3)
    jac = np.zeros(shape)
    jac[..., 0, 1] = 1.0
    jac[..., 1, 0] = 0.5 * (gamma - 3.0) * v * v
    jac[..., 1, 1] = (3.0 - gamma) * v
    jac[..., 1, 2] = g1
    jac[..., 2, 0] = (0.5 * g1 * v * v - big_h) * v
    jac[..., 2, 1] = big_h - g1 * v * v
    jac[..., 2, 2] = gamma * v
    return jac


def euler_eigen_vh(v, big_h, gamma=GAMMA):
    """Closed-form eigenstructure of the Euler Jacobian from (v, H).

    Eigenvalues come out ascending: (v - c, v, v + c).
    """
    v = np.asarray(v, dtype=float)
    big_h = np.asarray(big_h, dtype=float)
    g1 = gamma - 1.0
    c2 = g1 * (big_h - 0.5 * v * v)
    if np.any(c2 <= 0.0):
        raise AdmissibilityError("non-positive sound speed in eigenstructure")
    c = np.sqrt(c2)
    shape = v.shape
    q = np.empty(shape + (3, 3))
    q[..., 0, 0] = 1.0
    q[..., 1, 0] = v - c
    q[..., 2, 0] = big_h - v * c
    q[..., 0, 1] = 1.0
    q[..., 1, 1] = v
    q[..., 2, 1] = 0.5 * v * v
    q[..., 0, 2] = 1.0
    q[..., 1, 2] = v + c
    q[..., 2, 2] = big_h + v * c

    lam = np.stack([v - c, v, v + c], axis=-1)

    b1 = g1 / c2
    b2 = 0.5 * b1 * v * v
    qinv = np.empty(shape + (3, 3))
    qinv[..., 0, 0] = 0.5 * (b2 + v / c)
    qinv[..., 0, 1] = -0.5 * (b1 * v + 1.0 / c)
    qinv[..., 0, 2] = 0.5 * b1
    qinv[..., 1, 0] = 1.0 - b2
    qinv[..., 1, 1] = b1 * v
    qinv[..., 1, 2] = -b1
    qinv[..., 2, 0] = 0.5 * (b2 - v / c)
    qinv[..., 2, 1] = -0.5 * (b1 * v - 1.0 / c)
    qinv[..., 2, 2] = 0.5 * b1
    return q, lam, qinv


def euler(gamma=GAMMA):
    """Compressible Euler equations with ideal-gas equation of state."""

    def flux(u):
        return euler_flux(u, gamma)

    def _vh(u):
        rho, v, p = euler_primitives(u, gamma)
        return v, (u[..., 2] + p) / rho

    def jacobian(u):
        u = np.asarray(u, dtype=float)
        return euler_jacobian_vh(*_vh(u), gamma)

    def eigen(u):
        u = np.asarray(u, dtype=float)
        return euler_eigen_vh(*_vh(u), gamma)

    def max_wave_speed(u):
        rho, v, p = euler_primitives(np.asarray(u, dtype=float), gamma)
        return np.abs(v) + np.sqrt(gamma * p / rho)

    eq = EquationSystem(name="euler", m=3, flux=flux, jacobian=jacobian,
                        eigen=eigen, max_wave_speed=max_wave_speed,
                        source=_zero_source(3))
    object.__setattr__(eq, "check_admissible",
                       lambda u, context="": check_euler_admissible(
                           u, gamma, context=context))
    return eq


# ---------------------------------------------------------------------------
# manufactured cases

def manufactured_burgers():
    """Burgers on (0,1), T=1: u = sin(4 pi (x - t)) with matching source."""

    def exact(x, t):
        x = np.asarray(x, dtype=float)
        return np.sin(4.0 * np.pi * (x - t))[..., None]

    def source(x, t):
        x = np.asarray(x, dtype=float)
        phase = 4.0 * np.pi * (x - t)
        g = 4.0 * np.pi * np.cos(phase) * (np.sin(phase) - 1.0)
        return g[..., None]

    eq = burgers()
    return ManufacturedCase(equation=eq, exact=exact, source=source,
                            domain=(0.0, 1.0), final_time=1.0)


DEMO_LINSYS_A = np.array([[4.0, 2.5, -7.0],
                           [-1.0, 0.5, 7.0],
                           [-0.5, 1.25, 1.5]])


def manufactured_linear_system(a=None, final_time=1.0):
    """Linear system on (0,1) with the sinusoidal initial profile."""
    a = DEMO_LINSYS_A if a is None else np.asarray(a, dtype=float)
    eq = linear_system(a)

    def u0(x):
        x = np.asarray(x, dtype=float)
        return np.stack([np.sin(2.0 * np.pi * x),
                         -np.cos(2.0 * np.pi * x) / 3.0,
                         0.5 * np.sin(2.0 * np.pi * x)], axis=-1)

    def exact(x, t):
        return linear_system_exact(u0, a, t)(x)

    return ManufacturedCase(equation=eq, exact=exact,
                            source=_zero_source(eq.m),
                            domain=(0.0, 1.0), final_time=final_time)


def manufactured_euler(gamma=GAMMA):
    """Euler on (0,1), T=1: sinusoidal primitives with closed-form source.

    Primitives are (2+sin, sin, 2+cos) in the phase 2*pi*(x - t).  The source
    was obtained by differentiating f(u) - u with respect to the phase; it is
    cross-checked against a finite-difference residual in the tests.
    """
    two_pi = 2.0 * np.pi
    ig1 = 1.0 / (gamma - 1.0)

    def primitives(x, t):
        phase = two_pi * (np.asarray(x, dtype=float) - t)
        s = np.sin(phase)
        c = np.cos(phase)
        return 2.0 + s, s, 2.0 + c

    def exact(x, t):
        rho, v, p = primitives(x, t)
        return euler_conserved(rho, v, p, gamma)

    def source(x, t):
        phase = two_pi * (np.asarray(x, dtype=float) - t)
        s = np.sin(phase)
        c = np.cos(phase)
        # g = 2*pi * d/dphase (f(u) - u) for the profile above
        g1 = c * (2.0 * s + 1.0)
        g2 = c * (s * s - s) + c * (2.0 + s) * (2.0 * s - 1.0) - s
        e = ig1 * (2.0 + c) + 0.5 * (2.0 + s) * s * s
        de = -ig1 * s + 0.5 * c * s * s + (2.0 + s) * s * c
        g3 = de * (s - 1.0) + e * c - s * s + (2.0 + c) * c
        return two_pi * np.stack([g1, g2, g3], axis=-1)

    eq = euler(gamma)
    return ManufacturedCase(equation=eq, exact=exact, source=source,
                            domain=(0.0, 1.0), final_time=1.0)


EQUATION_KEYS = ("advection", "burgers", "linsys", "euler")


def make_equation(key, **kwargs):
    """Equation lookup for the CLI config keys."""
    if key == "advection":
        return advection(**kwargs)
    if key == "burgers":
        return burgers()
    if key == "linsys":
        return linear_system(kwargs.pop("a", DEMO_LINSYS_A))
    if key == "euler":
        return euler(**kwargs)
    raise KeyError(f"unknown equation key {key!r}; expected {EQUATION_KEYS}")
