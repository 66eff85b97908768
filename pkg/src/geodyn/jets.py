"""Forward-mode Taylor scalars of order one and two.

A :class:`Jet` carries a value, a gradient with respect to the chart
coordinates, and optionally a (symmetric) Hessian.  Chart fields evaluated
on jet-valued coordinates yield exact first and second derivatives in a
single pass; the finite-difference path in :mod:`geodyn.fields` serves as
the independent cross-check.

Only smooth operations are provided.  ``abs`` is deliberately absent.
"""

from __future__ import annotations

import cmath
import math

import numpy as np

__all__ = [
    "Jet",
    "variables",
    "constant",
    "value_of",
    "sin",
    "cos",
    "tan",
    "exp",
    "log",
    "sqrt",
    "sinh",
    "cosh",
    "tanh",
    "arctan",
    "conjugate",
    "PI",
    "EULER_E",
]

PI = math.pi
EULER_E = math.e


class Jet:
    """Truncated Taylor expansion (value, gradient, optional Hessian).

    ``hess is None`` marks a first-order jet; second-order bookkeeping is
    then skipped entirely, which matters in integrator inner loops.
    """

    __slots__ = ("val", "grad", "hess")

    def __init__(self, val, grad, hess=None):
        self.val = val
        self.grad = np.asarray(grad)
        self.hess = None if hess is None else np.asarray(hess)

    @property
    def order(self) -> int:
        return 1 if self.hess is None else 2

    @property
    def nvars(self) -> int:
        return self.grad.shape[0]

    def __repr__(self) -> str:  # pragma: no cover
        return f"Jet({self.val!r}, grad={self.grad!r}, order={self.order})"

    # -- ring operations ------------------------------------------------

    def __add__(self, other):
        if isinstance(other, Jet):
            h = None
            if self.hess is not None and other.hess is not None:
                h = self.hess + other.hess
            return Jet(self.val + other.val, self.grad + other.grad, h)
        return Jet(self.val + other, self.grad, self.hess)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, Jet):
            h = None
            if self.hess is not None and other.hess is not None:
                h = self.hess - other.hess
            return Jet(self.val - other.val, self.grad - other.grad, h)
        return Jet(self.val - other, self.grad, self.hess)

    def __rsub__(self, other):
        return Jet(other - self.val, -self.grad, None if self.hess is None else -self.hess)

    def __neg__(self):
        return Jet(-self.val, -self.grad, None if self.hess is None else -self.hess)

    def __pos__(self):
        return self

    def __mul__(self, other):
        if isinstance(other, Jet):
            g = self.grad * other.val + self.val * other.grad
            h = None
            if self.hess is not None and other.hess is not None:
                cross = np.outer(self.grad, other.grad)
                h = self.hess * other.val + cross + cross.T + self.val * other.hess
            return Jet(self.val * other.val, g, h)
        h = None if self.hess is None else self.hess * other
        return Jet(self.val * other, self.grad * other, h)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Jet):
            v = self.val / other.val
            g = (self.grad - v * other.grad) / other.val
            h = None
            if self.hess is not None and other.hess is not None:
                cross = np.outer(g, other.grad)
                h = (self.hess - cross - cross.T - v * other.hess) / other.val
            return Jet(v, g, h)
        inv = 1.0 / other
        h = None if self.hess is None else self.hess * inv
        return Jet(self.val * inv, self.grad * inv, h)

    def __rtruediv__(self, other):
        v = self.val
        return _chain(self, other / v, -other / (v * v), 2.0 * other / (v * v * v))

    def __pow__(self, k):
        if isinstance(k, Jet):
            return exp(k * log(self))
        if k == 0:
            return Jet(self.val ** 0, np.zeros_like(self.grad),
                       None if self.hess is None else np.zeros_like(self.hess))
        if k == 1:
            return self
        v = self.val
        return _chain(self, v ** k, k * v ** (k - 1), k * (k - 1) * v ** (k - 2))

    def __rpow__(self, base):
        return exp(self * math.log(base))

    # Comparisons act on values so field code may branch on coordinates.
    def __lt__(self, other):
        return self.val < _plain(other)

    def __le__(self, other):
        return self.val <= _plain(other)

    def __gt__(self, other):
        return self.val > _plain(other)

    def __ge__(self, other):
        return self.val >= _plain(other)

    def __float__(self):
        raise TypeError("Jet cannot be silently demoted to float; use .val")

    def __abs__(self):
        raise TypeError("abs() is not smooth; jets do not support it")

    def conjugate(self):
        h = None if self.hess is None else np.conjugate(self.hess)
        return Jet(np.conjugate(self.val), np.conjugate(self.grad), h)


def _plain(x):
    return x.val if isinstance(x, Jet) else x


def _chain(x: Jet, f0, f1, f2):
    """Compose an outer scalar function with derivatives f1, f2 at x.val."""
    g = f1 * x.grad
    h = None
    if x.hess is not None:
        h = f1 * x.hess + f2 * np.outer(x.grad, x.grad)
    return Jet(f0, g, h)


def variables(coords, order: int = 2) -> tuple:
    """Seed one jet per coordinate with unit gradient entries."""
    n = len(coords)
    out = []
    for i, xi in enumerate(coords):
        g = np.zeros(n)
        g[i] = 1.0
        h = np.zeros((n, n)) if order == 2 else None
        out.append(Jet(xi, g, h))
    return tuple(out)


def constant(c, n: int, order: int = 2) -> Jet:
    h = np.zeros((n, n)) if order == 2 else None
    return Jet(c, np.zeros(n), h)


def value_of(x):
    """Value of a jet or plain number (array-safe for object arrays)."""
    if isinstance(x, Jet):
        return x.val
    return x


def _dispatch(x, real_fn, cplx_fn, f0f1f2):
    if isinstance(x, Jet):
        f0, f1, f2 = f0f1f2(x.val)
        return _chain(x, f0, f1, f2)
    if isinstance(x, complex) or (isinstance(x, np.generic) and np.iscomplexobj(x)):
        return cplx_fn(x)
    return real_fn(x)


def _c(fn):
    """Evaluate a cmath/math function on a possibly-complex scalar."""
    def apply(v):
        if isinstance(v, complex) or np.iscomplexobj(v):
            return getattr(cmath, fn)(v)
        return getattr(math, fn)(v)
    return apply


_sin, _cos, _tan = _c("sin"), _c("cos"), _c("tan")
_exp, _log, _sqrt = _c("exp"), _c("log"), _c("sqrt")
_sinh, _cosh, _tanh = _c("sinh"), _c("cosh"), _c("tanh")
_atan = _c("atan")


def sin(x):
    return _dispatch(x, math.sin, cmath.sin,
                     lambda v: (_sin(v), _cos(v), -_sin(v)))


def cos(x):
    return _dispatch(x, math.cos, cmath.cos,
                     lambda v: (_cos(v), -_sin(v), -_cos(v)))


def tan(x):
    def derivs(v):
        t = _tan(v)
        s = 1.0 + t * t
        return (t, s, 2.0 * t * s)
    return _dispatch(x, math.tan, cmath.tan, derivs)


def exp(x):
    def derivs(v):
        e = _exp(v)
        return (e, e, e)
    return _dispatch(x, math.exp, cmath.exp, derivs)


def log(x):
    return _dispatch(x, math.log, cmath.log,
                     lambda v: (_log(v), 1.0 / v, -1.0 / (v * v)))


def sqrt(x):
    def derivs(v):
        s = _sqrt(v)
        return (s, 0.5 / s, -0.25 / (s * v))
    return _dispatch(x, math.sqrt, cmath.sqrt, derivs)


def sinh(x):
    return _dispatch(x, math.sinh, cmath.sinh,
                     lambda v: (_sinh(v), _cosh(v), _sinh(v)))


def cosh(x):
    return _dispatch(x, math.cosh, cmath.cosh,
                     lambda v: (_cosh(v), _sinh(v), _cosh(v)))


def tanh(x):
    def derivs(v):
        t = _tanh(v)
        s = 1.0 - t * t
        return (t, s, -2.0 * t * s)
    return _dispatch(x, math.tanh, cmath.tanh, derivs)


def arctan(x):
    def derivs(v):
        d = 1.0 / (1.0 + v * v)
        return (_atan(v), d, -2.0 * v * d * d)
    return _dispatch(x, math.atan, cmath.atan, derivs)


def conjugate(x):
    if isinstance(x, Jet):
        return x.conjugate()
    return np.conjugate(x)
