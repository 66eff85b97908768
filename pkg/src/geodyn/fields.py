"""Smooth tensor-valued fields over a chart.

A :class:`ChartField` wraps a pure evaluator ``func(coords) -> array`` whose
scalar arithmetic must go through :mod:`geodyn.jets` functions so the same
code path serves plain floats (values, finite differences) and jets (exact
derivatives).  ``differentiate`` appends covariant coordinate indices.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Callable

import numpy as np

from . import jets
from .tensors import COORD, DOWN, Point, TensorValue

__all__ = ["ChartField", "differentiate", "scalar_field", "constant_field"]

DUAL = "dual"
FD = "fd"


def _collapse_numeric(arr: np.ndarray) -> np.ndarray:
    """Collapse an object array of numbers to a float or complex array."""
    if arr.dtype != object:
        return arr
    flat = [complex(v) for v in arr.ravel()]
    if any(v.imag != 0.0 for v in flat):
        return np.array(flat, dtype=complex).reshape(arr.shape)
    return np.array([v.real for v in flat], dtype=float).reshape(arr.shape)


def _collect(obj, shape, n, order):
    """Split an evaluator result (jets and/or numbers) into value/grad/hess arrays."""
    out = np.empty(shape, dtype=object)
    out[...] = np.asarray(obj, dtype=object).reshape(shape)
    is_complex = False
    for _, entry in np.ndenumerate(out):
        v = jets.value_of(entry)
        if isinstance(v, complex) or np.iscomplexobj(v):
            is_complex = True
            break
        if isinstance(entry, jets.Jet) and np.iscomplexobj(entry.grad):
            is_complex = True
            break
    dtype = complex if is_complex else float
    val = np.zeros(shape, dtype=dtype)
    d1 = np.zeros(shape + (n,), dtype=dtype)
    d2 = np.zeros(shape + (n, n), dtype=dtype) if order == 2 else None
    for idx, entry in np.ndenumerate(out):
        if isinstance(entry, jets.Jet):
            val[idx] = entry.val
            d1[idx] = entry.grad
            if order == 2:
                if entry.hess is None:
                    raise ValueError("order-2 jets requested but evaluator dropped the Hessian")
                d2[idx] = entry.hess
        else:
            val[idx] = entry
    return val, d1, d2


@dataclass
class ChartField:
    """Tensor-valued field on an n-dimensional chart.

    Parameters
    ----------
    dim : int
        Chart dimension.
    shape : tuple
        Shape of the tensor value (``()`` for scalars).
    func : callable
        ``func(coords)`` with coords a tuple of scalars or jets; must return
        a nested structure of matching shape built from smooth operations.
    variance, kinds : tuple
        Index metadata for the produced :class:`TensorValue`.
    derivative_mode : str
        ``"dual"`` (default) or ``"fd"``.
    fd_step, fd_step2 : float
        Relative central-difference steps for first and second derivatives.
    """

    dim: int
    shape: tuple
    func: Callable
    variance: tuple = ()
    kinds: tuple = field(default=())
    derivative_mode: str = DUAL
    fd_step: float = 1e-5
    fd_step2: float = 1e-4
    name: str = ""

    def __post_init__(self):
        self.shape = tuple(self.shape)
        self.variance = tuple(self.variance) if self.variance else (DOWN,) * len(self.shape)
        self.kinds = tuple(self.kinds) if self.kinds else (COORD,) * len(self.shape)
        if self.derivative_mode not in (DUAL, FD):
            raise ValueError(f"unknown derivative mode {self.derivative_mode!r}")

    # -- evaluation -------------------------------------------------------

    def raw(self, coords) -> np.ndarray:
        out = self.func(tuple(coords))
        arr = np.asarray(out)
        if arr.shape != self.shape:
            raise ValueError(f"evaluator returned shape {arr.shape}, expected {self.shape}")
        return arr

    def numeric(self, coords) -> np.ndarray:
        """Evaluate at plain numeric coordinates, collapsing object arrays."""
        return _collapse_numeric(self.raw(coords))

    def value(self, p: Point) -> TensorValue:
        arr = self.raw(p.coords)
        if np.iscomplexobj(arr):
            if not np.all(np.isfinite(arr.real)) or not np.all(np.isfinite(arr.imag)):
                raise ValueError(f"non-finite field value at {p.coords}")
        elif arr.size and not np.all(np.isfinite(arr.astype(float))):
            raise ValueError(f"non-finite field value at {p.coords}")
        return TensorValue(arr, self.variance, self.kinds)

    def jets(self, p: Point, order: int = 2):
        """Value, first and (optionally) second derivative arrays at p.

        Derivative indices trail the value indexes: ``d1[..., m] = d_m f``
        and ``d2[..., m, n] = d_m d_n f``.
        """
        if p.dim != self.dim:
            raise ValueError(f"point dimension {p.dim} != field dimension {self.dim}")
        if order not in (1, 2):
            raise ValueError("derivative order must be 1 or 2")
        if self.derivative_mode == FD:
            return self._fd_jets(p, order)
        xs = jets.variables(p.coords, order=order)
        out = self.func(xs)
        return _collect(out, self.shape, self.dim, order)

    def derivative(self, p: Point, order: int = 1, mode: str | None = None) -> TensorValue:
        mode = mode or self.derivative_mode
        fld = self if mode == self.derivative_mode else replace(self, derivative_mode=mode)
        _, d1, d2 = fld.jets(p, order=order)
        data = d1 if order == 1 else d2
        var = self.variance + (DOWN,) * order
        kinds = self.kinds + (COORD,) * order
        return TensorValue(data, var, kinds)

    # -- finite differences ------------------------------------------------

    def _steps(self, p: Point, step: float) -> np.ndarray:
        return step * np.maximum(1.0, np.abs(p.array()))

    def _fd_jets(self, p: Point, order: int):
        n = self.dim
        # object arrays would defeat the iscomplexobj test below and drop
        # imaginary parts, so collapse to a numeric dtype up front
        f0 = self.numeric(p.coords)
        h1 = self._steps(p, self.fd_step)

        def ev(q: Point) -> np.ndarray:
            return _collapse_numeric(self.raw(q.coords))

        d1 = np.zeros(self.shape + (n,), dtype=complex)
        for i in range(n):
            fp = ev(p.shifted(i, +h1[i]))
            fm = ev(p.shifted(i, -h1[i]))
            d1[..., i] = (fp - fm) / (2.0 * h1[i])
        d2 = None
        if order == 2:
            h2 = self._steps(p, self.fd_step2)
            d2 = np.zeros(self.shape + (n, n), dtype=complex)
            for i in range(n):
                fp = ev(p.shifted(i, +h2[i]))
                fm = ev(p.shifted(i, -h2[i]))
                d2[..., i, i] = (fp - 2.0 * f0 + fm) / (h2[i] * h2[i])
                for j in range(i + 1, n):
                    fpp = ev(p.shifted(i, +h2[i]).shifted(j, +h2[j]))
                    fpm = ev(p.shifted(i, +h2[i]).shifted(j, -h2[j]))
                    fmp = ev(p.shifted(i, -h2[i]).shifted(j, +h2[j]))
                    fmm = ev(p.shifted(i, -h2[i]).shifted(j, -h2[j]))
                    mixed = (fpp - fpm - fmp + fmm) / (4.0 * h2[i] * h2[j])
                    d2[..., i, j] = mixed
                    d2[..., j, i] = mixed
        if not np.iscomplexobj(f0):
            d1 = d1.real
            d2 = None if d2 is None else d2.real
        return np.asarray(f0), d1, d2


def differentiate(f: ChartField, p: Point, order: int = 1) -> TensorValue:
    """Derivative tensor of ``f`` at ``p`` with appended covariant indices."""
    return f.derivative(p, order=order)


def scalar_field(dim: int, func: Callable, **kw) -> ChartField:
    return ChartField(dim=dim, shape=(), func=lambda c: func(*c), **kw)


def constant_field(dim: int, value, **kw) -> ChartField:
    arr = np.asarray(value)
    return ChartField(dim=dim, shape=arr.shape, func=lambda c: arr, **kw)
