"""Explicit SSP Runge-Kutta time marching with the cut-cell CFL rule.

The integrators are written in Shu-Osher form: every stage is a convex
combination of previous stage values plus forward-Euler pieces, which is what
makes stage-wise limiting legitimate.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import CutCellDGError, DegenerateSpeedError


@dataclass(frozen=True)
class TimeIntegrator:
    """Shu-Osher tableau: stage i computes sum_k (a[i][k] u_k + dt b[i][k] F_k).

    ``c`` holds the stage times (fractions of dt) at which the rhs of each
    stage value is evaluated.
    """

    order: int
    a: tuple
    b: tuple
    c: tuple = ()

    def __post_init__(self):
        if not self.c:
            # consistency: stage time = convex combination of previous stage
            # times plus the forward-Euler increments
            c = [0.0]
            for alpha, beta in zip(self.a, self.b):
                c.append(sum(ai * ci for ai, ci in zip(alpha, c))
                         + sum(beta))
            object.__setattr__(self, "c", tuple(c[:-1]))

    @property
    def n_stages(self):
        return len(self.a)

    def step(self, u, t, dt, rhs, post_stage=None):
        """One step from ``(u, t)``; ``post_stage`` is the limiter hook."""
        stages = [u]
        evals = []
        for i in range(self.n_stages):
            evals.append(rhs(stages[i], t + self.c[i] * dt))
            new = 0.0
            for k, (alpha, beta) in enumerate(zip(self.a[i], self.b[i])):
                if alpha:
                    new = new + alpha * stages[k]
                if beta:
                    new = new + (dt * beta) * evals[k]
            if post_stage is not None:
                new = post_stage(new)
            stages.append(new)
        return stages[-1]


_EULER = TimeIntegrator(order=1, a=((1.0,),), b=((1.0,),))

_SSP2 = TimeIntegrator(
    order=2,
    a=((1.0,), (0.5, 0.5)),
    b=((1.0,), (0.0, 0.5)))

_SSP3 = TimeIntegrator(
    order=3,
    a=((1.0,), (0.75, 0.25), (1.0 / 3.0, 0.0, 2.0 / 3.0)),
    b=((1.0,), (0.0, 0.25), (0.0, 0.0, 2.0 / 3.0)))

# five-stage fourth-order SSP scheme (Spiteri-Ruuth coefficients)
_SSP54 = TimeIntegrator(
    order=4,
    a=((1.0,),
       (0.444370493651235, 0.555629506348765),
       (0.620101851488403, 0.0, 0.379898148511597),
       (0.178079954393132, 0.0, 0.0, 0.821920045606868),
       (0.0, 0.0, 0.517231671970585, 0.096059710526147, 0.386708617503269)),
    b=((0.391752226571890,),
       (0.0, 0.368410593050371),
       (0.0, 0.0, 0.251891774271694),
       (0.0, 0.0, 0.0, 0.544974750228521),
       (0.0, 0.0, 0.0, 0.063692468666290, 0.226007483236906)))


def get_integrator(order):
    try:
        return {1: _EULER, 2: _SSP2, 3: _SSP3, 4: _SSP54}[order]
    except KeyError:
        raise ValueError(f"no SSP integrator of order {order}") from None


def timestep_length(p, nu, h, lam_max):
    """dt = nu h / ((2p + 1) lam_max) with h the background spacing."""
    if lam_max <= 0.0:
        raise DegenerateSpeedError("lam_max must be positive")
    return nu * h / ((2 * p + 1) * lam_max)


@dataclass
class MarchInfo:
    steps: int = 0
    stages: int = 0
    final_time: float = 0.0
    min_dt: float = field(default=np.inf)


def advance(state, operator, t0, t_final, order=None, limiter=None,
            callback: Optional[Callable] = None, max_steps=10_000_000):
    """March ``state`` from ``t0`` to ``t_final``.

    The step length is recomputed from the current state each step and the
    final step is clipped to land exactly on ``t_final``.  ``limiter`` is
    applied after every stage.  Returns ``(state, MarchInfo)``.
    """
    if order is None:
        order = state.p + 1
    integrator = get_integrator(order)
    info = MarchInfo(final_time=t0)
    out = state.copy()
    t = t0

    def rhs(coeffs, t_stage):
        return operator.assemble_rhs(coeffs, t_stage)

    def post_stage(coeffs):
        if limiter is None:
            return coeffs
        return limiter(coeffs)

    while t < t_final - 1e-14 * max(1.0, abs(t_final)):
        if info.steps >= max_steps:
            raise CutCellDGError(f"exceeded {max_steps} time steps")
        lam = operator.max_wave_speed(out.coeffs)
        dt = timestep_length(state.p, operator.nu, operator.mesh.h, lam)
        dt = min(dt, t_final - t)
        new = integrator.step(out.coeffs, t, dt, rhs,
                              post_stage=post_stage if limiter else None)
        if not np.all(np.isfinite(new)):
            raise CutCellDGError(
                f"non-finite state after step {info.steps} (t={t}, dt={dt})")
        out.coeffs = new
        t += dt
        info.steps += 1
        info.stages += integrator.n_stages
        info.min_dt = min(info.min_dt, dt)
        info.final_time = t
        if callback is not None:
            callback(out, t)
    return out, info
