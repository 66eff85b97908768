import numpy as np
import mpmath

from geodyn.jets import (PI, Jet, arctan, conjugate, cos, cosh, exp, log,
                         sin, sinh, sqrt, tan, tanh)


def seed_jet(x, i, n, order=2):
    grad = np.zeros(n)
    grad[i] = 1.0
    hess = np.zeros((n, n)) if order == 2 else None
    return Jet(x, grad, hess)


def test_polynomial_derivatives_exact():
    x = seed_jet(1.7, 0, 1)
    y = 3.0 * x ** 3 - 2.0 * x + 5.0
    assert abs(y.val - (3 * 1.7 ** 3 - 2 * 1.7 + 5)) < 1e-15
    assert abs(y.grad[0] - (9 * 1.7 ** 2 - 2)) < 1e-13
    assert abs(y.hess[0, 0] - 18 * 1.7) < 1e-13


def test_elementary_functions_vs_mpmath():
    mpmath.mp.dps = 30
    cases = [
        (sin, mpmath.sin, 0.83), (cos, mpmath.cos, 0.83),
        (tan, mpmath.tan, 0.42), (exp, mpmath.exp, 0.3),
        (log, mpmath.log, 1.9), (sqrt, mpmath.sqrt, 2.6),
        (sinh, mpmath.sinh, 0.5), (cosh, mpmath.cosh, 0.5),
        (tanh, mpmath.tanh, 0.5), (arctan, mpmath.atan, 0.7),
    ]
    for ours, ref, x0 in cases:
        out = ours(seed_jet(x0, 0, 1))
        d1 = float(mpmath.diff(ref, x0))
        d2 = float(mpmath.diff(ref, x0, 2))
        assert abs(out.val - float(ref(x0))) < 1e-14
        assert abs(out.grad[0] - d1) < 1e-12
        assert abs(out.hess[0, 0] - d2) < 1e-11


def test_chain_and_product_rule_two_variables():
    # f = sin(x*y) + x^2 / y at (0.7, 1.3)
    x0, y0 = 0.7, 1.3
    x = seed_jet(x0, 0, 2)
    y = seed_jet(y0, 1, 2)
    f = sin(x * y) + x ** 2 / y
    fx = y0 * np.cos(x0 * y0) + 2 * x0 / y0
    fy = x0 * np.cos(x0 * y0) - x0 ** 2 / y0 ** 2
    fxy = np.cos(x0 * y0) - x0 * y0 * np.sin(x0 * y0) - 2 * x0 / y0 ** 2
    assert abs(f.grad[0] - fx) < 1e-13
    assert abs(f.grad[1] - fy) < 1e-13
    assert abs(f.hess[0, 1] - fxy) < 1e-12
    assert abs(f.hess[0, 1] - f.hess[1, 0]) < 1e-15


def test_random_rational_functions_match_finite_differences():
    rng = np.random.default_rng(11)
    for _ in range(20):
        c = rng.standard_normal(4)
        x0 = rng.uniform(0.5, 1.5)

        def f(v):
            return (c[0] + c[1] * v + c[2] * v * v) / (2.0 + c[3] * v * v)

        out = f(seed_jet(x0, 0, 1))
        h = 1e-5
        fd1 = (f(x0 + h) - f(x0 - h)) / (2 * h)
        fd2 = (f(x0 + h) - 2 * f(x0) + f(x0 - h)) / h ** 2
        scale1 = max(1.0, abs(fd1))
        scale2 = max(1.0, abs(fd2))
        assert abs(out.grad[0] - fd1) < 1e-8 * scale1
        assert abs(out.hess[0, 0] - fd2) < 1e-4 * scale2


def test_conjugate_passthrough_and_pi():
    assert conjugate(1.5) == 1.5
    assert conjugate(2.0 + 1.0j) == 2.0 - 1.0j
    assert abs(PI - np.pi) < 1e-15
    j = conjugate(Jet(1.0 + 2.0j, np.array([1.0j]), np.zeros((1, 1),
                                                             dtype=complex)))
    assert j.val == 1.0 - 2.0j
    assert j.grad[0] == -1.0j
