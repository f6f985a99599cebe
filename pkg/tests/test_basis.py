import numpy as np
import pytest

from cutcelldg import basis as bs
from cutcelldg.mesh import model_mesh, uniform_mesh


def test_quadrature_exactness():
    for n_q in (1, 2, 3, 5, 8):
        quad = bs.Quadrature.gauss(n_q)
        for deg in range(2 * n_q):
            exact = (1.0 - (-1.0) ** (deg + 1)) / (deg + 1)
            approx = np.sum(quad.weights * quad.nodes ** deg)
            assert approx == pytest.approx(exact, abs=1e-13)


def test_orthonormality():
    p = 4
    quad = bs.Quadrature.gauss(p + 1)
    phi = bs.basis_values(quad.nodes, p)
    gram = np.einsum("iq,jq,q->ij", phi, phi, quad.weights)
    assert np.max(np.abs(gram - np.eye(p + 1))) < 1e-13


def test_cell_average_normalization():
    mesh = uniform_mesh(3)
    coeffs = np.zeros((3, 1, 3))
    coeffs[:, 0, 0] = 4.0
    state = bs.DGState(mesh=mesh, p=2, coeffs=coeffs)
    assert np.allclose(state.cell_averages(), 4.0 * bs.AVG_NORM)


def _state_from_function(func, mesh, p, m=1):
    return bs.project(lambda x: func(x), mesh, p, m)


def test_extension_linear():
    # cell (0, 0.1) carrying the polynomial x, evaluated outside its support
    mesh = uniform_mesh(10)
    state = _state_from_function(lambda x: x[..., None], mesh, 1)
    assert bs.evaluate(state, 0, 0.2)[0] == pytest.approx(0.2, abs=1e-13)
    assert bs.evaluate_deriv(state, 0, 0.8)[0] == pytest.approx(1.0,
                                                               abs=1e-12)


def test_extension_quadratic():
    mesh = uniform_mesh(1)
    state = _state_from_function(lambda x: (x ** 2)[..., None], mesh, 2)
    assert bs.evaluate(state, 0, 0.5)[0] == pytest.approx(0.25, abs=1e-13)
    assert bs.evaluate_deriv(state, 0, 0.3)[0] == pytest.approx(0.6,
                                                                abs=1e-12)


def test_p0_derivative_vanishes():
    mesh = uniform_mesh(4)
    state = _state_from_function(lambda x: np.ones_like(x)[..., None], mesh, 0)
    assert bs.evaluate_deriv(state, 2, 0.9)[0] == 0.0


def test_extension_matches_in_cell():
    mesh = model_mesh(10, 4, 0.3)
    rng = np.random.default_rng(0)
    coeffs = rng.standard_normal((mesh.n_cells, 2, 4))
    state = bs.DGState(mesh=mesh, p=3, coeffs=coeffs)
    j = 4
    x = mesh.centers[j] + 0.3 * mesh.lengths[j]
    inside = coeffs[j] @ bs.basis_values(
        np.array(bs.reference_coord(mesh, j, x)), 3)
    assert np.array_equal(bs.evaluate(state, j, x), inside)


def test_jump_continuous_state():
    mesh = uniform_mesh(8)
    state = _state_from_function(lambda x: (2 * x + 1)[..., None], mesh, 1)
    for edge in range(1, 8):
        assert bs.jump(state, edge)[0] == pytest.approx(0.0, abs=1e-13)


def test_jump_piecewise_constant():
    mesh = uniform_mesh(2)
    coeffs = np.zeros((2, 1, 1))
    coeffs[0, 0, 0] = 2.0 / bs.AVG_NORM
    coeffs[1, 0, 0] = 5.0 / bs.AVG_NORM
    state = bs.DGState(mesh=mesh, p=0, coeffs=coeffs)
    assert bs.jump(state, 1)[0] == pytest.approx(-3.0, abs=1e-13)
    # boundary conventions: left boundary -v(x+), right boundary v(x-)
    assert bs.jump(state, 0)[0] == pytest.approx(-2.0, abs=1e-13)
    assert bs.jump(state, 2)[0] == pytest.approx(5.0, abs=1e-13)


def test_project_constant():
    mesh = model_mesh(6, 3, 0.2)
    state = _state_from_function(
        lambda x: np.full(x.shape + (1,), 3.5), mesh, 3)
    assert np.allclose(state.coeffs[:, 0, 0] * bs.AVG_NORM, 3.5, atol=1e-13)
    assert np.max(np.abs(state.coeffs[:, :, 1:])) < 1e-13


def test_project_linear_exact():
    mesh = model_mesh(6, 3, 0.2)
    state = _state_from_function(lambda x: (7 * x - 2)[..., None], mesh, 2)
    x = np.linspace(0.01, 0.99, 37)
    for xi in x:
        j = int(np.searchsorted(mesh.edges, xi) - 1)
        assert bs.evaluate(state, j, xi)[0] == pytest.approx(7 * xi - 2,
                                                             abs=1e-12)


def test_projection_order():
    errs = []
    for n in (10, 20, 40):
        mesh = uniform_mesh(n)
        state = _state_from_function(
            lambda x: np.sin(2 * np.pi * x)[..., None], mesh, 3)
        quad = bs.Quadrature.gauss(8)
        x_q = (mesh.centers[:, None]
               + 0.5 * mesh.lengths[:, None] * quad.nodes)
        phi = bs.basis_values(quad.nodes, 3)
        u_q = np.einsum("jmn,nq->jqm", state.coeffs, phi)[:, :, 0]
        err = np.abs(u_q - np.sin(2 * np.pi * x_q))
        errs.append(np.einsum("jq,q,j->", err, quad.weights,
                              0.5 * mesh.lengths))
    rates = np.log2(np.array(errs[:-1]) / errs[1:])
    assert np.all(np.abs(rates - 4.0) < 0.2)
