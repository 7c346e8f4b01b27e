import numpy as np
import pytest

from wsupport import catalog as C
from wsupport.diffop import DiffOp
from wsupport.errors import SingularGridPoint
from wsupport.gridops import Grid, apply_grid, fd_weights, sample, stencil_halfwidth


def test_fd_weights():
    np.testing.assert_allclose(fd_weights(2, 1), [1.0, -2.0, 1.0])
    np.testing.assert_allclose(fd_weights(1, 1), [-0.5, 0.0, 0.5])
    np.testing.assert_allclose(fd_weights(1, 2), np.array([1, -8, 0, 8, -1]) / 12.0, atol=1e-14)
    assert stencil_halfwidth(0, 4) == 0
    assert stencil_halfwidth(2, 2) == 1 and stencil_halfwidth(2, 4) == 2


def test_grid_geometry():
    g = Grid.centered(1.0, 21, dim=2)
    assert g.h == pytest.approx(0.1)
    assert g.points().shape == (21, 21, 2)
    assert g.points(pad=2).shape == (25, 25, 2)
    with pytest.raises(ValueError):
        Grid((0.0,), (1.0,), (1,))


def test_laplacian_of_quadratic_is_exact():
    g = Grid.centered(1.0, 41, dim=2)
    F = apply_grid(DiffOp.laplacian(2), lambda x: x[..., 0] ** 2 + 3 * x[..., 1] ** 2, g)
    np.testing.assert_allclose(F.values, 8.0, atol=1e-9)


def test_convergence_orders():
    D = C.euler(1.0, 0.5)
    f = lambda x: np.sin(x[..., 0])
    exact = lambda x: -x ** 2 * np.sin(x) + x * np.cos(x) + 0.5 * np.sin(x)
    errs = {}
    for order in (2, 4):
        e = []
        for n in (41, 81):
            g = Grid.centered(1.0, n)
            e.append(np.max(np.abs(apply_grid(D, f, g, fd_order=order).values - exact(g.axes()[0]))))
        errs[order] = e[0] / e[1]
    assert errs[2] == pytest.approx(4.0, rel=0.1)
    assert errs[4] == pytest.approx(16.0, rel=0.15)


def test_richardson_improves_accuracy():
    D = DiffOp.laplacian(1)
    f = lambda x: np.sin(3 * x[..., 0])
    g = Grid.centered(1.0, 81)
    exact = -9 * np.sin(3 * g.axes()[0])
    plain = np.max(np.abs(apply_grid(D, f, g, fd_order=2).values - exact))
    rich = np.max(np.abs(apply_grid(D, f, g, fd_order=2, richardson=True).values - exact))
    assert rich < plain / 10


def test_singular_nodes_are_refused():
    with pytest.raises(SingularGridPoint):
        apply_grid(C.bessel_1d(1.0, 0.0), lambda x: x[..., 0], Grid.centered(1.0, 11))
    # staggered grid avoids the wall
    F = apply_grid(C.bessel_1d(1.0, 0.0), lambda x: x[..., 0] ** 2, Grid.centered(1.0, 10))
    np.testing.assert_allclose(F.values, 4.0, atol=1e-9)


def test_argument_checks():
    g = Grid.centered(1.0, 11)
    with pytest.raises(ValueError):
        apply_grid(DiffOp.laplacian(1), lambda x: x[..., 0], g, fd_order=3)
    with pytest.raises(ValueError):
        apply_grid(DiffOp.laplacian(2), lambda x: x[..., 0], g)


def test_field_csv(tmp_path):
    g = Grid.centered(1.0, 3)
    F = sample(lambda x: x[..., 0] ** 2, g)
    path = tmp_path / "f.csv"
    F.to_csv(path)
    lines = path.read_text().splitlines()
    assert lines[0] == "x0,value" and len(lines) == 4
