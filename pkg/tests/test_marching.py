import numpy as np
import pytest

from cutcelldg import basis as bs
from cutcelldg import equations as eqs
from cutcelldg import riemann as rie
from cutcelldg.errors import CutCellDGError, DegenerateSpeedError
from cutcelldg.marching import advance, get_integrator, timestep_length
from cutcelldg.mesh import model_mesh
from cutcelldg.spatial import SpatialOperator


def test_timestep_length_examples():
    assert timestep_length(1, 0.4, 0.01, 2.0) == pytest.approx(
        0.4 * 0.01 / 6.0, rel=1e-14)
    assert timestep_length(0, 0.4, 0.01, 2.0) == pytest.approx(2e-3,
                                                               rel=1e-14)
    with pytest.raises(DegenerateSpeedError):
        timestep_length(1, 0.4, 0.01, 0.0)


def test_integrator_stage_times():
    assert get_integrator(1).c == (0.0,)
    assert get_integrator(2).c == (0.0, 1.0)
    assert get_integrator(3).c == pytest.approx((0.0, 1.0, 0.5))
    c4 = np.array(get_integrator(4).c)
    assert c4[0] == 0.0
    assert np.all(c4 >= 0.0) and np.all(c4 <= 1.0 + 1e-12)


def test_unknown_order_rejected():
    with pytest.raises(ValueError):
        get_integrator(5)


@pytest.mark.parametrize("order", [1, 2, 3, 4])
def test_temporal_convergence_order(order):
    """u' = cos(t) u, u(0) = 1; non-autonomous to exercise stage times."""
    integ = get_integrator(order)

    def rhs(u, t):
        return np.cos(t) * u

    errs = []
    for n in (40, 80):
        dt = 1.0 / n
        u, t = np.array([1.0]), 0.0
        for _ in range(n):
            u = integ.step(u, t, dt, rhs)
            t += dt
        errs.append(abs(float(u[0]) - np.exp(np.sin(1.0))))
    rate = np.log2(errs[0] / errs[1])
    assert abs(rate - order) < 0.25


def _setup(p=1, alpha=0.1):
    mesh = model_mesh(20, 10, alpha)
    op = SpatialOperator(mesh, eqs.burgers(), rie.GodunovBurgers(), p)
    state = bs.project(
        lambda x: (0.5 + 0.3 * np.sin(2 * np.pi * x))[..., None], mesh, p, 1)
    return op, state


def test_advance_zero_interval_is_identity():
    op, state = _setup()
    out, info = advance(state, op, 0.0, 0.0)
    assert info.steps == 0
    assert np.array_equal(out.coeffs, state.coeffs)


def test_advance_lands_on_final_time():
    op, state = _setup()
    out, info = advance(state, op, 0.0, 0.037)
    assert info.final_time == pytest.approx(0.037, abs=1e-14)
    assert info.steps > 0 and info.min_dt <= 0.037


def test_advance_conserves_mass():
    op, state = _setup(p=2, alpha=1e-6)
    mass0 = op.total_mass(state.coeffs)
    out, info = advance(state, op, 0.0, 0.05)
    mass1 = op.total_mass(out.coeffs)
    assert info.steps >= 10
    assert np.max(np.abs(mass1 - mass0)) < 1e-12 * max(1.0,
                                                       abs(float(mass0[0])))


def test_advance_max_steps_guard():
    op, state = _setup()
    with pytest.raises(CutCellDGError):
        advance(state, op, 0.0, 1.0, max_steps=2)


def test_advance_callback_sees_every_step():
    op, state = _setup()
    times = []
    out, info = advance(state, op, 0.0, 0.02,
                        callback=lambda s, t: times.append(t))
    assert len(times) == info.steps
    assert times[-1] == pytest.approx(0.02, abs=1e-14)
    assert np.all(np.diff(times) > 0)
