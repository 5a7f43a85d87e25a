"""
Step-function kernels on a uniform grid and their contractions.

A kernel of order ``q`` is a function on ``R_+^q`` that is constant on the
cells of a uniform grid ``[0, w), [w, 2w), ..., [(n-1)w, nw)`` along each
axis and vanishes beyond ``nw``.  It is stored as an order-``q`` coefficient
array (axis 0 is the first variable).

Two scalar backends share the same class:

* **exact** -- the function values are ``coeffs * sqrt(scale_sq)`` with
  integer ``coeffs`` and a rational ``scale_sq``.  Normalising a kernel only
  touches ``scale_sq``, so unit-norm kernels stay exact, and every quantity of
  even degree in the kernels (norms, inner products, even moments) comes out
  as a :class:`~fractions.Fraction`.
* **float** -- ``coeffs`` is a ``float64`` array and ``scale_sq`` is 1.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from numbers import Rational
from typing import Union

import numpy as np

from .errors import CapacityError, GridMismatchError, PreconditionError

__all__ = [
    "MAX_ENTRIES",
    "Grid",
    "Kernel",
    "contract",
    "adjoint",
    "inner_product",
    "norm",
    "norm_sq",
    "tensor",
    "reference_tetilla_kernel",
    "random_mirror_symmetric_kernel",
    "exact_sqrt",
    "scalar_value",
]

#: Largest coefficient array a contraction may allocate.
MAX_ENTRIES = 10**8
MAX_CELLS = 32

Number = Union[Fraction, float, int]

_I64_SAFE = 2**62
_F64_EXACT = 2**53


def exact_sqrt(x: Fraction) -> Fraction | None:
    """``sqrt(x)`` as a Fraction when ``x`` is the square of a rational, else ``None``."""
    x = Fraction(x)
    if x < 0:
        return None
    a, b = math.isqrt(x.numerator), math.isqrt(x.denominator)
    if a * a == x.numerator and b * b == x.denominator:
        return Fraction(a, b)
    return None


def _frac_sqrt_float(x: Fraction) -> float:
    # float(x) may under/overflow for extreme rationals; go through logs of ints.
    try:
        return math.sqrt(float(x))
    except OverflowError:
        return math.exp(0.5 * (math.log(x.numerator) - math.log(x.denominator)))


def scalar_value(c, scale_sq) -> Number:
    """Value of ``c * sqrt(scale_sq)``: exact when it is rational, float otherwise."""
    if isinstance(c, (float, np.floating)):
        return float(c) * math.sqrt(float(scale_sq))
    c = int(c)
    if c == 0:
        return Fraction(0)
    root = exact_sqrt(scale_sq)
    if root is not None:
        return c * root
    return c * _frac_sqrt_float(Fraction(scale_sq))


@dataclass(frozen=True)
class Grid:
    """Uniform grid of ``cells`` intervals of width ``cell_width`` starting at 0."""

    cell_width: Fraction = Fraction(1)
    cells: int = 2

    def __post_init__(self):
        w = self.cell_width
        if isinstance(w, str):
            w = Fraction(w)
        elif isinstance(w, float):
            w = Fraction(w).limit_denominator(10**12)
        object.__setattr__(self, "cell_width", Fraction(w))
        if not self.cell_width > 0:
            raise PreconditionError("cell width must be positive")
        if not 1 <= self.cells <= MAX_CELLS:
            raise PreconditionError(f"cells per axis must lie in [1, {MAX_CELLS}], got {self.cells}")


# ---------------------------------------------------------------------------
# integer array helpers
# ---------------------------------------------------------------------------


def _max_abs(a: np.ndarray) -> int:
    if a.size == 0:
        return 0
    if a.dtype == object:
        return max(abs(int(x)) for x in a.flat)
    return int(np.abs(a).max())


def _compact(a: np.ndarray) -> np.ndarray:
    """Store integers as int64 when they fit, python ints otherwise."""
    if a.dtype == object:
        if _max_abs(a) < _I64_SAFE:
            return a.astype(np.int64)
        return a
    return a.astype(np.int64, copy=False)


def _to_object(a: np.ndarray) -> np.ndarray:
    out = np.empty(a.shape, dtype=object)
    out.flat[:] = [int(x) for x in a.flat]
    return out


def _int_matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    # Exact integer product.  When every partial sum stays below 2**53 the
    # float64 BLAS product is exact, which is by far the fastest route.
    bound = _max_abs(a) * _max_abs(b) * max(a.shape[-1], 1)
    if bound < _F64_EXACT:
        return np.rint(a.astype(np.float64) @ b.astype(np.float64)).astype(np.int64)
    if bound < _I64_SAFE and a.dtype != object and b.dtype != object:
        return a.astype(np.int64) @ b.astype(np.int64)
    return _compact(_to_object(a) @ _to_object(b))


def _int_gcd(a: np.ndarray) -> int:
    if a.size == 0:
        return 0
    if a.dtype == object:
        return reduce(math.gcd, (int(x) for x in a.flat), 0)
    return int(np.gcd.reduce(a.ravel()))


# ---------------------------------------------------------------------------
# Kernel
# ---------------------------------------------------------------------------


class Kernel:
    """A step-function kernel (order 0 is a scalar).

    Parameters
    ----------
    coeffs : array_like
        Order-``q`` array of shape ``(n,) * q``.  Integer input selects the
        exact backend, floating input the float backend.
    grid : Grid
    scale_sq : Fraction, optional
        Exact backend only: the function values are
        ``coeffs * sqrt(scale_sq)``.
    """

    __slots__ = ("coeffs", "grid", "scale_sq")
    __hash__ = None

    def __init__(self, coeffs, grid: Grid, scale_sq=1):
        arr = np.asarray(coeffs)
        if arr.dtype.kind == "f":
            arr = arr.astype(np.float64)
            if scale_sq != 1:
                arr = arr * math.sqrt(float(scale_sq))
            scale = 1.0
        elif arr.dtype.kind in "iub" or arr.dtype == object:
            if arr.dtype == object and any(not isinstance(x, (int, np.integer)) for x in arr.flat):
                raise PreconditionError("exact coefficients must be integers; use Kernel.from_values")
            arr = _compact(arr.astype(object) if arr.dtype == object else arr.astype(np.int64))
            scale = Fraction(scale_sq)
            if scale < 0:
                raise PreconditionError("scale_sq must be non-negative")
        else:
            raise PreconditionError(f"unsupported coefficient dtype {arr.dtype}")
        n = grid.cells
        if any(d != n for d in arr.shape):
            raise PreconditionError(f"coefficient shape {arr.shape} does not match {n} cells per axis")
        self.coeffs = arr
        self.grid = grid
        self.scale_sq = scale

    # -- construction -----------------------------------------------------

    @classmethod
    def from_values(cls, values, grid: Grid) -> "Kernel":
        """Exact kernel from rational values (anything :class:`Fraction` accepts)."""
        arr = np.asarray(values, dtype=object)
        fr = [Fraction(x) for x in arr.flat]
        den = reduce(lambda a, b: a * b // math.gcd(a, b), (x.denominator for x in fr), 1)
        ints = np.empty(arr.shape, dtype=object)
        ints.flat[:] = [int(x * den) for x in fr]
        return cls(ints, grid, Fraction(1, den * den))._reduced()

    @classmethod
    def scalar(cls, value, grid: Grid) -> "Kernel":
        if isinstance(value, (float, np.floating)):
            return cls(np.array(float(value)), grid)
        return cls.from_values(np.array(Fraction(value), dtype=object), grid)

    # -- basic properties ---------------------------------------------------

    @property
    def order(self) -> int:
        return self.coeffs.ndim

    @property
    def exact(self) -> bool:
        return self.coeffs.dtype.kind != "f"

    def __repr__(self):
        mode = "exact" if self.exact else "float"
        return f"Kernel(order={self.order}, cells={self.grid.cells}, {mode})"

    def item(self) -> Number:
        """Value of an order-0 kernel."""
        if self.order != 0:
            raise PreconditionError(f"kernel of order {self.order} is not a scalar")
        c = self.coeffs[()]
        if not self.exact:
            return float(c)
        return scalar_value(c, self.scale_sq)

    def values(self) -> np.ndarray:
        """Function values on the cells (Fraction array when rational, else float)."""
        if not self.exact:
            return self.coeffs.copy()
        root = exact_sqrt(self.scale_sq)
        if root is None:
            return self.to_float().coeffs
        out = np.empty(self.coeffs.shape, dtype=object)
        out.flat[:] = [int(c) * root for c in self.coeffs.flat]
        return out

    def to_float(self) -> "Kernel":
        if not self.exact:
            return self
        c = self.coeffs.astype(np.float64) if self.coeffs.dtype != object else \
            np.array([float(x) for x in self.coeffs.flat]).reshape(self.coeffs.shape)
        return Kernel(c * _frac_sqrt_float(self.scale_sq), self.grid)

    def _reduced(self) -> "Kernel":
        if not self.exact:
            return self
        g = _int_gcd(self.coeffs)
        if g == 0:
            return Kernel(np.zeros(self.coeffs.shape, dtype=np.int64), self.grid, Fraction(1))
        if g == 1:
            return self
        c = self.coeffs // g
        return Kernel(c, self.grid, self.scale_sq * g * g)

    def is_zero(self) -> bool:
        return not np.any(self.coeffs != 0)

    def is_mirror_symmetric(self) -> bool:
        return bool(np.all(self.coeffs == adjoint(self).coeffs))

    # -- linear structure ---------------------------------------------------

    def _check_compatible(self, other: "Kernel") -> None:
        if self.grid != other.grid:
            raise GridMismatchError(f"grids differ: {self.grid} vs {other.grid}")
        if self.order != other.order:
            raise PreconditionError(f"orders differ: {self.order} vs {other.order}")

    def __add__(self, other: "Kernel") -> "Kernel":
        if not isinstance(other, Kernel):
            return NotImplemented
        self._check_compatible(other)
        if not (self.exact and other.exact):
            return Kernel(self.to_float().coeffs + other.to_float().coeffs, self.grid)
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        # sqrt(s) A + sqrt(t) B with t/s = (u/v)^2  ->  sqrt(s / v^2) (v A + u B)
        ratio = exact_sqrt(other.scale_sq / self.scale_sq)
        if ratio is None:
            raise PreconditionError(
                "cannot add exactly: the scale ratio is not a rational square; "
                "convert with to_float() first")
        u, v = ratio.numerator, ratio.denominator
        a, b = self.coeffs, other.coeffs
        if max(_max_abs(a) * v, _max_abs(b) * u) * 2 >= _I64_SAFE:
            a, b = _to_object(a), _to_object(b)
        return Kernel(v * a + u * b, self.grid, self.scale_sq / (v * v))._reduced()

    def __neg__(self) -> "Kernel":
        return Kernel(-self.coeffs, self.grid, self.scale_sq)

    def __sub__(self, other: "Kernel") -> "Kernel":
        return self + (-other)

    def __mul__(self, c) -> "Kernel":
        if isinstance(c, Kernel):
            return NotImplemented
        if self.exact and isinstance(c, (Rational, int)):
            c = Fraction(c)
            a = self.coeffs
            if _max_abs(a) * abs(c.numerator) >= _I64_SAFE:
                a = _to_object(a)
            return Kernel(a * c.numerator, self.grid,
                          self.scale_sq / (c.denominator * c.denominator))._reduced()
        return Kernel(self.to_float().coeffs * float(c), self.grid)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, Kernel):
            return NotImplemented
        if self.grid != other.grid or self.order != other.order:
            return False
        if self.exact and other.exact:
            try:
                return (self - other).is_zero()
            except PreconditionError:
                # Scales differ by an irrational factor, so the kernels can
                # only coincide if both vanish, which _add already handles.
                return False
        return bool(np.array_equal(self.to_float().coeffs, other.to_float().coeffs))

    def normalized(self) -> "Kernel":
        """``f / ||f||``; exact kernels stay exact."""
        nsq = norm_sq(self)
        if nsq == 0:
            raise PreconditionError("cannot normalise the zero kernel")
        if self.exact:
            return Kernel(self.coeffs, self.grid, self.scale_sq / nsq)
        return Kernel(self.coeffs / math.sqrt(nsq), self.grid)

    # -- serialisation ------------------------------------------------------

    def to_json(self) -> dict:
        """JSON-ready dict; exact coefficients are written as ``"p/q"`` strings."""
        if self.exact:
            coeffs = [str(int(x)) for x in self.coeffs.flat]
            scale = str(self.scale_sq)
        else:
            coeffs = [float(x) for x in self.coeffs.flat]
            scale = "1"
        return {
            "order": self.order,
            "grid": {"cell_width": str(self.grid.cell_width), "cells": self.grid.cells},
            "scale_sq": scale,
            "coefficients": coeffs,
        }

    @classmethod
    def from_json(cls, data: dict | str) -> "Kernel":
        if isinstance(data, str):
            data = json.loads(data)
        try:
            q = int(data["order"])
            grid = Grid(Fraction(data["grid"]["cell_width"]), int(data["grid"]["cells"]))
            scale = Fraction(data.get("scale_sq", "1"))
            raw = list(data["coefficients"])
        except (KeyError, TypeError, ValueError) as exc:
            raise PreconditionError(f"malformed kernel JSON: {exc}") from None
        shape = (grid.cells,) * q
        if len(raw) != grid.cells**q:
            raise PreconditionError(f"expected {grid.cells ** q} coefficients, got {len(raw)}")
        if any(isinstance(x, float) for x in raw):
            arr = np.array([float(x) for x in raw]).reshape(shape)
            return cls(arr * _frac_sqrt_float(scale), grid)
        fr = [Fraction(x) for x in raw]
        if all(x.denominator == 1 for x in fr):
            ints = np.empty(len(fr), dtype=object)
            ints[:] = [x.numerator for x in fr]
            return cls(ints.reshape(shape), grid, scale)
        root = exact_sqrt(scale)
        if root is None:
            raise PreconditionError("non-integer coefficients need a square scale_sq")
        return cls.from_values(np.array([x * root for x in fr], dtype=object).reshape(shape), grid)


# ---------------------------------------------------------------------------
# Operations
# ---------------------------------------------------------------------------


def adjoint(f: Kernel) -> Kernel:
    """``f*(t_1, ..., t_q) = f(t_q, ..., t_1)``."""
    return Kernel(np.ascontiguousarray(f.coeffs.transpose(tuple(reversed(range(f.order))))),
                  f.grid, f.scale_sq)


def contract(f: Kernel, g: Kernel, r: int) -> Kernel:
    """The ``r``-th contraction of ``f`` (order ``p``) and ``g`` (order ``q``).

    The last ``r`` variables of ``f`` are integrated against the first ``r``
    variables of ``g`` taken in reverse order::

        (f ~r g)(s, t) = int f(s, x_1..x_r) g(x_r..x_1, t) dx

    ``r = 0`` is the tensor product and ``r = p = q`` gives ``<f, g*>``.
    """
    if f.grid != g.grid:
        raise GridMismatchError(f"grids differ: {f.grid} vs {g.grid}")
    p, q = f.order, g.order
    if not 0 <= r <= min(p, q):
        raise PreconditionError(f"contraction order {r} out of range for orders {p} and {q}")
    n = f.grid.cells
    out_order = p + q - 2 * r
    if n**out_order > MAX_ENTRIES:
        raise CapacityError(f"contraction result would hold {n}**{out_order} entries (> {MAX_ENTRIES})")
    # Reverse the first r axes of g so they line up with the last r axes of f.
    g_axes = tuple(reversed(range(r))) + tuple(range(r, q))
    a = f.coeffs.reshape(n ** (p - r), n**r)
    b = g.coeffs.transpose(g_axes).reshape(n**r, n ** (q - r))
    shape = (n,) * out_order
    w = f.grid.cell_width
    if f.exact and g.exact:
        c = _int_matmul(a, np.ascontiguousarray(b)).reshape(shape)
        return Kernel(c, f.grid, f.scale_sq * g.scale_sq * w ** (2 * r))._reduced()
    a = f.to_float().coeffs.reshape(a.shape)
    b = g.to_float().coeffs.transpose(g_axes).reshape(b.shape)
    return Kernel((a @ b).reshape(shape) * float(w) ** r, f.grid)


def tensor(f: Kernel, g: Kernel) -> Kernel:
    return contract(f, g, 0)


def _pair_sum(f: Kernel, g: Kernel):
    f._check_compatible(g)
    if f.exact and g.exact:
        a, b = f.coeffs.ravel(), g.coeffs.ravel()
        return int(_int_matmul(a.reshape(1, -1), b.reshape(-1, 1))[0, 0])
    return float(np.dot(f.to_float().coeffs.ravel(), g.to_float().coeffs.ravel()))


def inner_product(f: Kernel, g: Kernel) -> Number:
    """Real bilinear ``<f, g> = int f g``."""
    s = _pair_sum(f, g)
    w = f.grid.cell_width
    if isinstance(s, float):
        return s * float(w) ** f.order
    return scalar_value(s, f.scale_sq * g.scale_sq * w ** (2 * f.order))


def norm_sq(f: Kernel) -> Number:
    """``||f||^2``, exact for exact kernels."""
    s = _pair_sum(f, f)
    w = f.grid.cell_width
    if isinstance(s, float):
        return s * float(w) ** f.order
    return s * f.scale_sq * w**f.order


def norm(f: Kernel) -> Number:
    """``||f||``: a Fraction when the square root is rational, else a float."""
    nsq = norm_sq(f)
    if isinstance(nsq, Fraction):
        root = exact_sqrt(nsq)
        return root if root is not None else _frac_sqrt_float(nsq)
    return math.sqrt(nsq)


def reference_tetilla_kernel(exact: bool = True) -> Kernel:
    """``(1_[0,1] x 1_[1,2] + 1_[1,2] x 1_[0,1]) / sqrt(2)`` on two unit cells.

    Its second Wigner integral has the tetilla law.
    """
    grid = Grid(Fraction(1), 2)
    k = Kernel(np.array([[0, 1], [1, 0]], dtype=np.int64), grid, Fraction(1, 2))
    return k if exact else k.to_float()


def random_mirror_symmetric_kernel(q: int, grid: Grid, seed, exact: bool = True,
                                   spread: int = 9) -> Kernel:
    """Seeded unit-norm kernel ``(g + g*) / ||g + g*||``.

    ``g`` has i.i.d. uniform integer entries in ``[-spread, spread]`` (exact)
    or uniform entries in ``[-1, 1)`` (float).  ``seed`` is a non-negative
    int or a tuple of them; the same arguments give the same kernel.
    """
    if q < 1:
        raise PreconditionError("order must be >= 1")
    if grid.cells**q > MAX_ENTRIES:
        raise CapacityError(f"{grid.cells}**{q} coefficients exceed the capacity")
    shape = (grid.cells,) * q
    key = list(seed) if isinstance(seed, (tuple, list)) else [seed]
    attempt = 0
    while True:
        rng = np.random.default_rng(key + [attempt])
        if exact:
            g = Kernel(rng.integers(-spread, spread + 1, size=shape), grid)
        else:
            g = Kernel(rng.uniform(-1.0, 1.0, size=shape), grid)
        s = g + adjoint(g)
        if not s.is_zero():
            return s.normalized()
        attempt += 1
