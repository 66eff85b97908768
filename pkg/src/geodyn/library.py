"""Builtin vielbeins for common charts.

Each factory returns a :class:`~geodyn.geometry.Vielbein`; the registry at
the bottom maps builtin names (as used in configs and the CLI) to factories
and their keyword parameters.
"""

from __future__ import annotations

import math

import numpy as np

from .fields import ChartField
from .geometry import Vielbein
from .tensors import MinkowskiSignature

__all__ = [
    "diagonal_vielbein",
    "flat",
    "polar",
    "sphere2",
    "schwarzschild",
    "sphere2_cross_flat2",
    "BUILTIN_FRAMES",
    "make_builtin_frame",
]


def diagonal_vielbein(entries, signature: MinkowskiSignature, name: str = "") -> Vielbein:
    """Vielbein with E = diag(entries(x)); each entry is a callable of the coords."""
    n = signature.dim
    if len(entries) != n:
        raise ValueError(f"need {n} diagonal entries, got {len(entries)}")

    def func(coords):
        out = np.zeros((n, n), dtype=object)
        for i, f in enumerate(entries):
            out[i, i] = f(coords)
        return out

    field = ChartField(dim=n, shape=(n, n), func=func, name=name or "diagonal")
    return Vielbein(field=field, signature=signature)


def flat(dim: int = 4, signature: str = "lorentzian") -> Vielbein:
    """Identity frame on R^dim with the requested flat signature."""
    if signature == "lorentzian":
        sig = MinkowskiSignature.lorentzian(dim)
    elif signature == "euclidean":
        sig = MinkowskiSignature.euclidean(dim)
    else:
        raise ValueError(f"unknown signature {signature!r}")
    eye = np.eye(dim)

    def func(coords):
        return eye

    return Vielbein(field=ChartField(dim=dim, shape=(dim, dim), func=func, name="flat"),
                    signature=sig)


def polar() -> Vielbein:
    """Plane in polar coordinates (r, phi): E = diag(1, r)."""
    return diagonal_vielbein([lambda c: 1.0, lambda c: c[0]],
                             MinkowskiSignature.euclidean(2), name="polar")


def sphere2(radius: float = 1.0) -> Vielbein:
    """Round 2-sphere of the given radius, coordinates (theta, phi)."""
    if radius <= 0:
        raise ValueError("radius must be positive")
    from .jets import sin
    return diagonal_vielbein(
        [lambda c: radius, lambda c: radius * sin(c[0])],
        MinkowskiSignature.euclidean(2), name="sphere2")


def schwarzschild(mass: float = 1.0) -> Vielbein:
    """Static orthonormal frame outside r = 2m, coordinates (t, r, theta, phi)."""
    if mass <= 0:
        raise ValueError("mass must be positive")
    from .jets import sin, sqrt

    def f_t(c):
        return sqrt(1.0 - 2.0 * mass / c[1])

    def f_r(c):
        return 1.0 / sqrt(1.0 - 2.0 * mass / c[1])

    return diagonal_vielbein(
        [f_t, f_r, lambda c: c[1], lambda c: c[1] * sin(c[2])],
        MinkowskiSignature.lorentzian(4), name="schwarzschild")


def sphere2_cross_flat2(radius: float = 1.0) -> Vielbein:
    """S^2(radius) x R^2, coordinates (theta, phi, x, y), Euclidean frame."""
    if radius <= 0:
        raise ValueError("radius must be positive")
    from .jets import sin
    return diagonal_vielbein(
        [lambda c: radius, lambda c: radius * sin(c[0]),
         lambda c: 1.0, lambda c: 1.0],
        MinkowskiSignature.euclidean(4), name="sphere2_cross_flat2")


BUILTIN_FRAMES = {
    "flat": (flat, {"dim": 4, "signature": "lorentzian"}),
    "polar": (polar, {}),
    "sphere2": (sphere2, {"radius": 1.0}),
    "schwarzschild": (schwarzschild, {"mass": 1.0}),
    "sphere2-cross-flat2": (sphere2_cross_flat2, {"radius": 1.0}),
}


def make_builtin_frame(name: str, params: dict | None = None) -> Vielbein:
    if name not in BUILTIN_FRAMES:
        known = ", ".join(sorted(BUILTIN_FRAMES))
        raise KeyError(f"unknown builtin frame {name!r} (known: {known})")
    factory, defaults = BUILTIN_FRAMES[name]
    kwargs = dict(defaults)
    for key, value in (params or {}).items():
        if key not in defaults:
            raise KeyError(f"builtin frame {name!r} takes no parameter {key!r}")
        kwargs[key] = value
    return factory(**kwargs)
