"""
Free moment/cumulant transforms and the tetilla law.

Combinatorial quantities (moments, cumulants) are exact
:class:`fractions.Fraction`; densities and Cauchy transforms are double
precision.

Sequences are plain Python lists starting at order one, i.e. ``seq[0]`` is
the first moment (or cumulant); the zeroth moment is implicitly 1.
"""

from __future__ import annotations

import cmath
import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Sequence

import numpy as np
from scipy import integrate

from .combinatorics import MAX_NC_SIZE, iter_nc
from .errors import CapacityError, PreconditionError, RootSelectionError

__all__ = [
    "TETILLA_EDGE",
    "Distribution",
    "moments_from_cumulants",
    "cumulants_from_moments",
    "tetilla_cumulant",
    "tetilla_cumulants",
    "tetilla_moment_closed",
    "tetilla_r_transform",
    "semicircular_density",
    "tetilla_density",
    "cardano_roots",
    "cauchy_transform_tetilla",
    "cauchy_cubic_residual",
    "density_from_cauchy",
    "density_moment",
]

MAX_ORDER = MAX_NC_SIZE

#: Right end of the support of the tetilla law, ``sqrt(11 + 5 sqrt 5) / 2``.
TETILLA_EDGE = math.sqrt(11 + 5 * math.sqrt(5)) / 2


def _check_order(K: int) -> None:
    if K > MAX_ORDER:
        raise CapacityError(f"sequences are limited to order {MAX_ORDER}, got {K}")
    if K < 0:
        raise PreconditionError("order must be non-negative")


@lru_cache(maxsize=None)
def _nc_census(m: int) -> tuple[tuple[tuple[int, ...], int], ...]:
    """Non-crossing partitions of [m] grouped by their multiset of block sizes."""
    census = Counter(tuple(sorted(pi.block_sizes)) for pi in iter_nc(m))
    return tuple(sorted(census.items()))


def _prod(values):
    out = 1
    for v in values:
        out *= v
    return out


def moments_from_cumulants(cumulants: Sequence, K: int | None = None, method: str = "recursion") -> list:
    """Moments ``m_1, ..., m_K`` from free cumulants ``k_1, ..., k_K``.

    ``m_n`` is the sum over non-crossing partitions of ``[n]`` of the product
    of ``k_|b|`` over the blocks ``b``.

    Parameters
    ----------
    cumulants : sequence
        ``cumulants[i]`` is the cumulant of order ``i + 1``.
    K : int, optional
        Highest order wanted (default: ``len(cumulants)``).
    method : {"recursion", "enumerate"}
        ``"enumerate"`` literally sums over :func:`~tetilla.combinatorics.iter_nc`
        (grouped by block type) and is practical up to ``K`` of about 12.
        ``"recursion"`` splits off the block containing 1, giving
        ``m_n = sum_s k_s [x^(n-s)] M(x)^s`` with ``M(x) = sum_i m_i x^i``;
        it sums the same partitions and reaches ``K = 16`` instantly.

    Returns
    -------
    list
        ``[m_1, ..., m_K]`` in the scalar type of the input.
    """
    K = len(cumulants) if K is None else K
    _check_order(K)
    if K > len(cumulants):
        raise PreconditionError(f"need {K} cumulants, got {len(cumulants)}")
    kappa = list(cumulants[:K])

    if method == "enumerate":
        out = []
        for n in range(1, K + 1):
            total = 0
            for sizes, count in _nc_census(n):
                total += count * _prod(kappa[b - 1] for b in sizes)
            out.append(total)
        return out
    if method != "recursion":
        raise PreconditionError(f"unknown method {method!r}")

    m = [1]
    for n in range(1, K + 1):
        total = 0
        for s in range(1, n + 1):
            if kappa[s - 1] == 0:
                continue
            total += kappa[s - 1] * _power_coefficient(m, s, n - s)
        m.append(total)
    return m[1:]


def _power_coefficient(series: list, power: int, degree: int):
    """Coefficient of ``x**degree`` in ``(sum_i series[i] x^i) ** power``."""
    acc = [1] + [0] * degree
    for _ in range(power):
        nxt = [0] * (degree + 1)
        for i, a in enumerate(acc):
            if a == 0:
                continue
            for j in range(degree + 1 - i):
                nxt[i + j] += a * series[j]
        acc = nxt
    return acc[degree]


def cumulants_from_moments(moments: Sequence, K: int | None = None) -> list:
    """Free cumulants ``k_1, ..., k_K`` from moments ``m_1, ..., m_K``.

    The one-block partition contributes ``k_n`` with coefficient one to
    ``m_n``; every other partition only involves lower cumulants, so the
    relation is inverted order by order.
    """
    K = len(moments) if K is None else K
    _check_order(K)
    if K > len(moments):
        raise PreconditionError(f"need {K} moments, got {len(moments)}")
    m = [1] + list(moments[:K])
    kappa: list = []
    for n in range(1, K + 1):
        rest = 0
        for s in range(1, n):
            if kappa[s - 1] != 0:
                rest += kappa[s - 1] * _power_coefficient(m, s, n - s)
        kappa.append(m[n] - rest)
    return kappa


# ---------------------------------------------------------------------------
# Distributions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Distribution:
    """One of the laws handled by the package, described by its free cumulants.

    ``kind`` is ``"semicircular"`` (variance ``t``), ``"tetilla"`` or
    ``"free-poisson-square"`` (the law of ``x**2`` for ``x`` semicircular of
    variance ``t``).
    """

    kind: str
    t: Fraction = Fraction(1)

    def __post_init__(self):
        if self.kind not in ("semicircular", "tetilla", "free-poisson-square"):
            raise PreconditionError(f"unknown distribution {self.kind!r}")
        if not self.t > 0:
            raise PreconditionError("parameter t must be positive")

    def cumulant(self, m: int):
        if self.kind == "tetilla":
            return tetilla_cumulant(m)
        if self.kind == "semicircular":
            return self.t if m == 2 else Fraction(0)
        return self.t**m

    def cumulants(self, K: int) -> list:
        return [self.cumulant(m) for m in range(1, K + 1)]

    def moments(self, K: int) -> list:
        return moments_from_cumulants(self.cumulants(K), K)


def tetilla_cumulant(m: int) -> Fraction:
    """Free cumulant of order ``m`` of the tetilla law: ``2**(1 - m/2)`` for even ``m``, else 0."""
    if m < 1:
        raise PreconditionError("cumulant order must be >= 1")
    if m % 2:
        return Fraction(0)
    return Fraction(2) ** (1 - m // 2)


def tetilla_cumulants(K: int) -> list[Fraction]:
    return [tetilla_cumulant(m) for m in range(1, K + 1)]


def tetilla_r_transform(z):
    """``R(z) = sum_m k_m z^m = 2 z^2 / (2 - z^2)``."""
    return 2 * z * z / (2 - z * z)


def tetilla_moment_closed(n: int) -> Fraction:
    """Closed form of the even moment ``m_{2n}`` of the tetilla law.

    ``m_{2n} = (2**n * n)**-1 * sum_{k=1}^{n} 2**k * C(2n, k-1) * C(n, k)``
    """
    if n < 1:
        raise PreconditionError("n must be >= 1")
    total = sum(2**k * comb(2 * n, k - 1) * comb(n, k) for k in range(1, n + 1))
    return Fraction(total, 2**n * n)


# ---------------------------------------------------------------------------
# Densities
# ---------------------------------------------------------------------------


def semicircular_density(u: float, t: float = 1.0) -> float:
    """Density of the centered semicircular law of variance ``t``."""
    if not t > 0:
        raise PreconditionError("variance t must be positive")
    r = 4 * t - u * u
    if r <= 0:
        return 0.0
    return math.sqrt(r) / (2 * math.pi * t)


_SMALL_T = 1e-6


def tetilla_density(t: float) -> float:
    """Density of the tetilla law; zero outside ``[-TETILLA_EDGE, TETILLA_EDGE]``.

    Both cube-root arguments ``1 + 36 t^2 +- 3 sqrt(6 t^2 + 132 t^4 - 24 t^6)``
    stay positive on the support (their minimum is about 0.42), so real cube
    roots are the principal ones there.  Near ``t = 0`` the formula is 0/0 and
    the expansion ``sqrt(2)/pi * (1 - 3 t^2)`` is used instead.
    """
    t = abs(float(t))
    if t > TETILLA_EDGE:
        return 0.0
    if t < _SMALL_T:
        return math.sqrt(2) / math.pi * (1 - 3 * t * t)
    t2 = t * t
    radicand = 6 * t2 + 132 * t2 * t2 - 24 * t2 * t2 * t2
    # Rounding can push the radicand slightly negative at the edge.
    s = math.sqrt(max(radicand, 0.0))
    a = 1 + 36 * t2
    val = (np.cbrt(a + 3 * s) - np.cbrt(a - 3 * s)) / (2 * math.sqrt(3) * math.pi * t)
    return max(float(val), 0.0)


def density_moment(k: int, epsabs: float = 1e-12) -> float:
    """``int t^k h(t) dt`` over the support by adaptive Gauss-Kronrod quadrature.

    The integrand is split at 0 and stops at the support edges, where ``h``
    has a square-root singularity in its derivative.
    """
    if k % 2:
        return 0.0
    val, _ = integrate.quad(lambda t: t**k * tetilla_density(t), 0.0, TETILLA_EDGE,
                            epsabs=epsabs, epsrel=1e-13, limit=200)
    return 2 * val


# ---------------------------------------------------------------------------
# Cauchy transform
# ---------------------------------------------------------------------------

_OMEGA = cmath.exp(2j * math.pi / 3)


def cardano_roots(a: complex, b: complex, c: complex, d: complex, polish: int = 3) -> list[complex]:
    """All three roots of ``a y^3 + b y^2 + c y + d`` by Cardano's formulae.

    The shift ``y = x - b / (3a)`` gives ``x^3 + P x + Q = 0``; the roots are
    ``w^k u + w^-k v`` with ``u^3 = -Q/2 + sqrt(Q^2/4 + P^3/27)``,
    ``v = -P / (3u)`` and ``w = exp(2 i pi / 3)``.  The sign of the square
    root is chosen to avoid cancellation, and each root is refined by a few
    Newton steps on the original cubic.
    """
    a, b, c, d = complex(a), complex(b), complex(c), complex(d)
    if a == 0:
        raise PreconditionError("leading coefficient must be nonzero")
    shift = b / (3 * a)
    P = (3 * a * c - b * b) / (3 * a * a)
    Q = (2 * b**3 - 9 * a * b * c + 27 * a * a * d) / (27 * a**3)
    root = cmath.sqrt(Q * Q / 4 + P**3 / 27)
    w = -Q / 2 + root
    w2 = -Q / 2 - root
    if abs(w2) > abs(w):
        w = w2
    if w == 0:
        u = v = 0j
    else:
        u = w ** (1 / 3)
        v = -P / (3 * u)
    roots = [_OMEGA**k * u + _OMEGA ** (-k) * v - shift for k in range(3)]

    def newton(y):
        for _ in range(polish):
            f = ((a * y + b) * y + c) * y + d
            df = (3 * a * y + 2 * b) * y + c
            if df == 0:
                break
            step = f / df
            y -= step
            if abs(step) <= 1e-17 * max(1.0, abs(y)):
                break
        return y

    return [newton(y) for y in roots]


def cauchy_cubic_residual(z: complex, y: complex) -> float:
    """``|z y^3 + y^2 - 2 z y + 2|``, the defect of a candidate Cauchy-transform value."""
    return abs(z * y**3 + y * y - 2 * z * y + 2)


def cauchy_transform_tetilla(z: complex, tol: float = 1e-8) -> complex:
    """Cauchy transform ``G(z)`` of the tetilla law for ``Im z > 0``.

    ``G(z)`` solves ``z y^3 + y^2 - 2 z y + 2 = 0``.  The cubic has no real
    root when ``Im z > 0``, so exactly one root lies in the lower half-plane;
    that root is returned.

    Raises
    ------
    RootSelectionError
        If the numerics do not single out one root with negative imaginary
        part (other roots must satisfy ``Im y > -tol``), or the selected root
        misses the cubic by more than ``1e-10 (1 + |z|^3)``.
    """
    z = complex(z)
    if not z.imag > 0:
        raise PreconditionError(f"z must lie in the upper half-plane, got {z}")
    roots = sorted(cardano_roots(z, 1, -2 * z, 2), key=lambda y: y.imag)
    best, others = roots[0], roots[1:]
    if not best.imag < 0 or any(y.imag <= -tol for y in others):
        raise RootSelectionError(
            f"cannot isolate the lower half-plane root at z={z}: roots={roots}")
    res = cauchy_cubic_residual(z, best)
    if res > 1e-10 * (1 + abs(z) ** 3):
        raise RootSelectionError(f"cubic residual {res:.3e} at z={z}, root={best}")
    return best


def density_from_cauchy(t: float, eps: float = 1e-6) -> float:
    """Stieltjes inversion ``-Im G(t + i eps) / pi``."""
    if not 0 < eps <= 1e-2:
        raise PreconditionError(f"eps must lie in (0, 1e-2], got {eps}")
    return -cauchy_transform_tetilla(complex(t, eps)).imag / math.pi
