import numpy as np
import pytest

from cutcelldg import equations as eqs
from cutcelldg import spectral as sp
from cutcelldg.mesh import uniform_mesh
from cutcelldg.riemann import UpwindAdvection
from cutcelldg.spatial import SpatialOperator


def test_p0_uniform_matrix_is_upwind_circulant():
    mesh = uniform_mesh(4)
    op = SpatialOperator(mesh, eqs.advection(1.0), UpwindAdvection(1.0), 0)
    mat = sp.assemble_matrix(op)
    h = 0.25
    expected = np.zeros((4, 4))
    for j in range(4):
        expected[j, j] = -1.0 / h
        expected[j, (j - 1) % 4] = 1.0 / h
    assert np.max(np.abs(mat - expected)) < 1e-12


def test_matrix_reproduces_rhs():
    mesh = sp.stability_mesh(1e-2, n=20)
    op = sp.advection_operator(mesh, 2)
    mat = sp.assemble_matrix(op)
    rng = np.random.default_rng(0)
    coeffs = rng.standard_normal((mesh.n_cells, 1, 3))
    direct = op.assemble_rhs(coeffs).ravel()
    via_matrix = mat @ coeffs.ravel()
    scale = np.max(np.abs(direct))
    assert np.max(np.abs(direct - via_matrix)) < 1e-12 * scale


def test_full_and_legacy_differ_only_in_left_neighbor_rows():
    mesh = sp.stability_mesh(1e-1, n=20)
    p = 2
    full = sp.assemble_matrix(sp.advection_operator(mesh, p, "full"))
    legacy = sp.assemble_matrix(sp.advection_operator(mesh, p, "legacy"))
    diff_rows = np.where(np.any(np.abs(full - legacy) > 1e-13,
                                axis=1))[0] // (p + 1)
    neighbors = {pair.left_neighbor for pair in mesh.cut_pairs}
    assert set(diff_rows) <= neighbors
    assert set(diff_rows) == neighbors


def test_eigensolver_on_known_spectrum():
    rng = np.random.default_rng(1)
    lam = np.sort(rng.uniform(-5.0, -0.5, 12))
    q = rng.standard_normal((12, 12)) + np.eye(12) * 3.0
    mat = q @ np.diag(lam) @ np.linalg.inv(q)
    got = np.sort(np.linalg.eigvals(mat).real)
    assert np.max(np.abs(got - lam) / np.abs(lam)) < 1e-8


def test_trivial_abscissae():
    diag = sp.OperatorMatrix(matrix=np.diag([-1.0, -2.0, 0.0]),
                             eigenvalues=np.array([-1.0, -2.0, 0.0]),
                             dt=1.0, alpha=0.1, p=0, variant="full")
    assert diag.abscissa == 0.0
    rot = np.array([[0.0, -1.0], [1.0, 0.0]])   # purely imaginary spectrum
    assert np.max(np.linalg.eigvals(rot).real) == pytest.approx(0.0,
                                                                abs=1e-14)


def test_operator_spectrum_metadata():
    spec = sp.operator_spectrum(1e-1, 1, n=20)
    assert spec.alpha == 1e-1 and spec.p == 1 and spec.variant == "full"
    assert spec.dt == pytest.approx(0.4 * (1.0 / 20) / 3.0, rel=1e-14)
    assert spec.eigenvalues.shape == (spec.matrix.shape[0],)


def test_full_variant_stable_small_case():
    assert sp.spectral_abscissa(1e-1, 1, n=20) <= 1e-12
    assert sp.spectral_abscissa(1e-6, 2, n=20) <= 1e-12


def test_unknown_variant_rejected():
    mesh = sp.stability_mesh(1e-1, n=10)
    with pytest.raises(ValueError):
        sp.advection_operator(mesh, 1, variant="extra")


def test_abscissa_table_shape():
    rows = sp.abscissa_table([1e-1], [1], n=20)
    assert len(rows) == 2
    alphas, orders, variants, values = zip(*rows)
    assert set(variants) == {"full", "legacy"}
