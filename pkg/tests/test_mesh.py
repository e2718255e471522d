"""Mesh geometry and index conventions."""

import numpy as np
import pytest

from temax.mesh import Mesh


def test_spacing_and_area():
    m = Mesh(4, 5, -1.0, 1.0, 0.0, 10.0)
    assert m.dx == pytest.approx(0.5)
    assert m.dy == pytest.approx(2.0)
    assert m.n_cells == 20
    assert m.area == pytest.approx(20.0)


def test_centers_and_faces():
    m = Mesh(2, 2, 0.0, 1.0, 0.0, 1.0)
    xc, yc = m.cell_centers()
    np.testing.assert_allclose(xc, [0.25, 0.75])
    np.testing.assert_allclose(yc, [0.25, 0.75])
    # face i sits at the right edge of cell i, so the last one is the
    # domain boundary (identified with x0 under periodicity)
    np.testing.assert_allclose(m.vertical_face_x(), [0.5, 1.0])
    np.testing.assert_allclose(m.horizontal_face_y(), [0.5, 1.0])


def test_reference_round_trip():
    m = Mesh(3, 4, -2.0, 4.0, 1.0, 3.0)
    rng = np.random.default_rng(0)
    xi = rng.uniform(-0.5, 0.5, 10)
    eta = rng.uniform(-0.5, 0.5, 10)
    for i, j in [(0, 0), (2, 3), (1, 2)]:
        x, y = m.to_physical(xi, eta, i, j)
        xi2, eta2 = m.to_reference(x, y, i, j)
        np.testing.assert_allclose(xi2, xi, atol=1e-14)
        np.testing.assert_allclose(eta2, eta, atol=1e-14)


def test_center_is_reference_origin():
    m = Mesh(8, 8, 0.0, 1.0, 0.0, 1.0)
    xc, yc = m.cell_centers()
    xi, eta = m.to_reference(xc[3], yc[5], 3, 5)
    assert abs(xi) < 1e-15 and abs(eta) < 1e-15


def test_invalid_meshes_rejected():
    with pytest.raises(ValueError):
        Mesh(0, 4, 0.0, 1.0, 0.0, 1.0)
    with pytest.raises(ValueError):
        Mesh(4, 4, 1.0, 0.0, 0.0, 1.0)
