"""Field evaluation and derivative-route agreement."""

import numpy as np
import pytest

from geodyn.fields import ChartField, DUAL, FD, differentiate, scalar_field, constant_field
from geodyn.jets import cosh, exp, sin
from geodyn.tensors import DOWN, UP, COORD, FRAME, Point


def test_scalar_closed_form_derivatives():
    # f = exp(x) sin(y): both derivative orders against hand formulas
    f = scalar_field(2, lambda x, y: exp(x) * sin(y))
    p = Point((0.3, 1.1))
    val, d1, d2 = f.jets(p, order=2)
    ex, sy, cy = np.exp(0.3), np.sin(1.1), np.cos(1.1)
    assert abs(val - ex * sy) < 1e-15
    assert abs(d1[0] - ex * sy) < 1e-14
    assert abs(d1[1] - ex * cy) < 1e-14
    assert abs(d2[0, 0] - ex * sy) < 1e-13
    assert abs(d2[0, 1] - ex * cy) < 1e-13
    assert abs(d2[1, 1] + ex * sy) < 1e-13


def test_dual_and_fd_routes_agree():
    rng = np.random.default_rng(23)
    for _ in range(5):
        c = rng.standard_normal(6)

        def entry(coords):
            x, y, z = coords
            m = np.array([
                [c[0] * x * x + c[1] * y, sin(c[2] * z)],
                [exp(c[3] * y) * x, c[4] + c[5] * z * y],
            ], dtype=object)
            return m

        dual = ChartField(dim=3, shape=(2, 2), func=entry)
        fd = ChartField(dim=3, shape=(2, 2), func=entry, derivative_mode=FD)
        p = Point(tuple(rng.uniform(-0.5, 0.5, size=3)))
        _, d1a, d2a = dual.jets(p, order=2)
        _, d1b, d2b = fd.jets(p, order=2)
        assert np.max(np.abs(d1a - d1b)) < 1e-8
        assert np.max(np.abs(d2a - d2b)) < 1e-5


def test_derivative_tensor_metadata():
    f = ChartField(dim=2, shape=(2,), func=lambda c: np.array([c[0], c[0] * c[1]]),
                   variance=(UP,), kinds=(FRAME,))
    t = differentiate(f, Point((1.0, 2.0)), order=1)
    assert t.variance == (UP, DOWN)
    assert t.kinds == (FRAME, COORD)
    assert np.allclose(t.data, [[1.0, 0.0], [2.0, 1.0]])


def test_second_derivative_symmetry():
    f = scalar_field(3, lambda x, y, z: sin(x * y) * cosh(z) + x ** 3 * z)
    d2 = f.derivative(Point((0.4, -0.2, 0.7)), order=2).data
    assert np.max(np.abs(d2 - d2.transpose(1, 0))) < 1e-12


def test_constant_field_has_zero_derivative():
    f = constant_field(3, np.diag([1.0, 2.0, 3.0]))
    _, d1, d2 = f.jets(Point((0.1, 0.2, 0.3)), order=2)
    assert np.allclose(d1, 0.0)
    assert np.allclose(d2, 0.0)


def test_complex_valued_field_derivatives():
    # mixed real/imag entries exercise the complex jet path
    f = ChartField(dim=1, shape=(), func=lambda c: exp(1j * c[0]))
    val, d1, _ = f.jets(Point((0.5,)), order=1)
    assert abs(complex(val) - np.exp(0.5j)) < 1e-15
    assert abs(complex(d1[0]) - 1j * np.exp(0.5j)) < 1e-14


def test_shape_mismatch_rejected():
    f = ChartField(dim=2, shape=(3,), func=lambda c: np.array([c[0], c[1]]))
    with pytest.raises(ValueError):
        f.value(Point((1.0, 2.0)))


def test_nonfinite_value_rejected():
    f = scalar_field(1, lambda x: float("inf") if x == 0.0 else x)
    with pytest.raises(ValueError):
        f.value(Point((0.0,)))


def test_unknown_mode_rejected():
    with pytest.raises(ValueError):
        ChartField(dim=1, shape=(), func=lambda c: c[0], derivative_mode="spectral")


def test_point_dim_mismatch_rejected():
    f = scalar_field(2, lambda x, y: x + y)
    with pytest.raises(ValueError):
        f.jets(Point((1.0,)), order=1)


def test_numeric_collapses_object_arrays():
    # python-scalar entries force an object array out of the evaluator
    f = ChartField(dim=1, shape=(2,), func=lambda c: np.array([c[0], 2], dtype=object))
    out = f.numeric((1.5,))
    assert out.dtype == float
    assert np.allclose(out, [1.5, 2.0])
