"""
Moments of Wigner integrals computed from their kernels.

The ``l``-th moment of ``I_q(f)`` is the sum, over all admissible contraction
paths from ``f`` back to a scalar, of the iterated contraction
``(...((f ~r1 f) ~r2 f) ...) ~r_{l-1} f``.  This module evaluates such sums,
the fourth- and sixth-moment decompositions into squared contraction norms,
and the rational recursion that produces the tetilla moments without any
kernel at all.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from fractions import Fraction

from .combinatorics import ContractionPath, MAX_PATH_L, enumerate_paths, enumerate_positive_paths
from .errors import CapacityError, GridMismatchError, InvalidWalkError, MirrorSymmetryWarning, PreconditionError
from .kernels import MAX_ENTRIES, Kernel, contract, norm_sq

__all__ = [
    "MAX_MOMENT_ORDER",
    "ContractionStringValue",
    "FourthMoment",
    "SixthMoment",
    "SplitSums",
    "MomentAlgorithmResult",
    "iterated_contraction",
    "contraction_string_values",
    "split_sum",
    "wigner_moment",
    "fourth_moment_decomposition",
    "admissible_double_contractions",
    "double_contraction",
    "grouped_double_contraction",
    "double_contraction_levels",
    "combination_kernel",
    "sixth_moment_combination",
    "tetilla_moment_algorithm",
]

MAX_MOMENT_ORDER = 12
MAX_ALGORITHM_ORDER = 16
UNIT_NORM_RTOL = 1e-12


def _zero(f: Kernel):
    return Fraction(0) if f.exact else 0.0


def _check_capacity(n: int, peak: int, what: str) -> None:
    if n**peak > MAX_ENTRIES:
        raise CapacityError(f"{what} reaches order {peak}: {n}**{peak} entries exceed {MAX_ENTRIES}")


def _require_unit(f: Kernel) -> None:
    nsq = norm_sq(f)
    ok = nsq == 1 if f.exact else abs(nsq - 1.0) <= UNIT_NORM_RTOL
    if not ok:
        raise PreconditionError(f"kernel must have unit norm, got norm^2 = {nsq}")


def _warn_if_asymmetric(f: Kernel) -> None:
    if not f.is_mirror_symmetric():
        warnings.warn("kernel is not mirror-symmetric; its Wigner integral is not self-adjoint",
                      MirrorSymmetryWarning, stacklevel=3)


# ---------------------------------------------------------------------------
# Contraction strings
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ContractionStringValue:
    """Value of one iterated contraction along ``path``."""

    path: ContractionPath
    value: object
    peak_order: int


def iterated_contraction(g: Kernel, f: Kernel, path: ContractionPath) -> Kernel:
    """Left fold ``(...((g ~r1 f) ~r2 f) ...) ~r_{l-1} f``.

    The result has order 0 (a scalar kernel; use ``.item()``) because every
    admissible path ends at a scalar.
    """
    if path.p != g.order or path.q != f.order:
        raise InvalidWalkError(f"path is for orders (p={path.p}, q={path.q}), kernels have ({g.order}, {f.order})")
    _check_capacity(f.grid.cells, path.peak_order, f"path {path.r}")
    out = g
    for r in path.r:
        out = contract(out, f, r)
    return out


def contraction_string_values(g: Kernel, f: Kernel, l: int, positive: bool = False) -> list[ContractionStringValue]:
    """Every path of ``A_{q,p,l}`` (or its positive part) with its contraction value."""
    paths = (enumerate_positive_paths if positive else enumerate_paths)(f.order, g.order, l)
    return [ContractionStringValue(pa, iterated_contraction(g, f, pa).item(), pa.peak_order) for pa in paths]


def _reachable_peak(p: int, q: int, l: int) -> int:
    steps = l - 1
    return max(min(p + k * q, (steps - k) * q) for k in range(steps + 1))


def _sum_by_state(g: Kernel, f: Kernel, l: int, positive: bool):
    # Iterated contraction is linear in its starting kernel, so all prefixes
    # that reach the same order after the same number of steps can be summed
    # before they are extended.  This is the prefix tree with equal subtrees
    # merged.
    q, steps = f.order, l - 1
    level: dict[int, Kernel] = {g.order: g}
    for k in range(1, steps + 1):
        left = steps - k
        nxt: dict[int, Kernel] = {}
        for order, acc in level.items():
            for r in range(min(order, q) + 1):
                new = order + q - 2 * r
                if new > left * q or (left == 0 and new != 0):
                    continue
                if positive and left > 0 and new == 0:
                    continue
                term = contract(acc, f, r)
                nxt[new] = nxt[new] + term if new in nxt else term
        level = nxt
    return level[0].item() if 0 in level else _zero(f)


def _sum_by_prefix(g: Kernel, f: Kernel, l: int, positive: bool):
    q, steps = f.order, l - 1
    total = _zero(f)

    def walk(kernel: Kernel, taken: int):
        nonlocal total
        left = steps - taken - 1
        for r in range(min(kernel.order, q) + 1):
            new = kernel.order + q - 2 * r
            if new > left * q or (left == 0 and new != 0):
                continue
            if positive and left > 0 and new == 0:
                continue
            child = contract(kernel, f, r)
            if left == 0:
                total = total + child.item()
            else:
                walk(child, taken + 1)

    walk(g, 0)
    return total


def split_sum(g: Kernel, f: Kernel, l: int, positive: bool = False, method: str = "state"):
    """``S_{f,l}(g)``: sum of iterated contractions over ``A_{q,p,l}``.

    With ``positive=True`` only strictly positive walks are kept, giving
    ``S+_{f,l}(g)``.

    Parameters
    ----------
    method : {"state", "prefix", "naive"}
        ``"state"`` merges prefixes ending at the same order, ``"prefix"``
        walks the prefix tree sharing common prefixes, ``"naive"`` evaluates
        every path from scratch.  All three agree exactly in rational mode.
    """
    if g.grid != f.grid:
        raise GridMismatchError("kernels live on different grids")
    if l < 2 or l > MAX_PATH_L:
        raise CapacityError(f"string length l must lie in [2, {MAX_PATH_L}], got {l}")
    if method == "naive":
        total = _zero(f)
        for item in contraction_string_values(g, f, l, positive):
            total = total + item.value
        return total
    _check_capacity(f.grid.cells, _reachable_peak(g.order, f.order, l), f"length-{l} contraction strings")
    if method == "state":
        return _sum_by_state(g, f, l, positive)
    if method == "prefix":
        return _sum_by_prefix(g, f, l, positive)
    raise PreconditionError(f"unknown method {method!r}")


def wigner_moment(f: Kernel, l: int, method: str = "state"):
    """``E[I_q(f)^l]`` as the sum over ``A_{q,q,l}`` of iterated contractions.

    Exact kernels give a :class:`~fractions.Fraction` whenever the moment is
    rational (always the case for even ``l``).
    """
    if not 2 <= l <= MAX_MOMENT_ORDER:
        raise CapacityError(f"moment order must lie in [2, {MAX_MOMENT_ORDER}], got {l}")
    _warn_if_asymmetric(f)
    if (l * f.order) % 2:
        return _zero(f)
    return split_sum(f, f, l, method=method)


# ---------------------------------------------------------------------------
# Fourth and sixth moments
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FourthMoment:
    total: object
    residuals: list


def fourth_moment_decomposition(f: Kernel) -> FourthMoment:
    """``E[I_q(f)^4] = 2 + sum_{r=1}^{q-1} ||f ~r f||^2`` for unit ``f``."""
    _require_unit(f)
    residuals = [norm_sq(contract(f, f, r)) for r in range(1, f.order)]
    total = 2 + sum(residuals, _zero(f))
    return FourthMoment(total, residuals)


def _levels(q: int) -> tuple[int, int, int]:
    """``(shift, middle, top)`` such that ``s = shift - k - r`` and the level-``k`` order is ``2k + q % 2``."""
    if q % 2 == 0:
        return 3 * q // 2, q // 2, 3 * q // 2
    p = q - 1
    return 3 * p // 2 + 1, p // 2, 3 * p // 2 + 1


def admissible_double_contractions(q: int, k: int) -> list[int]:
    """Contraction orders ``r`` for which the level-``k`` double contraction exists.

    For even ``q`` the second order is ``s = 3q/2 - k - r`` and the result has
    order ``2k``; for odd ``q`` (with ``p = q - 1``) it is
    ``s = 3p/2 + 1 - k - r`` and the result has order ``2k + 1``.  ``r`` is
    kept when ``0 <= s <= min(q, 2q - 2r)``.
    """
    if q < 1:
        raise PreconditionError("q must be positive")
    shift, _, top = _levels(q)
    if not 0 <= k <= top:
        raise PreconditionError(f"level k must lie in [0, {top}] for q={q}, got {k}")
    return [r for r in range(q + 1) if 0 <= shift - k - r <= min(q, 2 * q - 2 * r)]


def double_contraction(f: Kernel, r: int, s: int) -> Kernel:
    """``(f ~r f) ~s f``."""
    return contract(contract(f, f, r), f, s)


def grouped_double_contraction(f: Kernel, k: int) -> Kernel:
    """Sum of the double contractions of level ``k`` (see :func:`admissible_double_contractions`)."""
    shift, _, _ = _levels(f.order)
    terms = [double_contraction(f, r, shift - k - r) for r in admissible_double_contractions(f.order, k)]
    out = terms[0]
    for t in terms[1:]:
        out = out + t
    return out


def double_contraction_levels(q: int) -> dict[str, list[int]]:
    """Level indices ``k`` split into the ``low``, ``middle``, ``high`` and ``top`` groups."""
    _, mid, top = _levels(q)
    return {"low": list(range(mid)), "middle": [mid], "high": list(range(mid + 1, top)), "top": [top]}


def combination_kernel(f: Kernel) -> Kernel:
    """``-f/2 + sum_{r=1}^{q-1} (f ~r f) ~(q-r) f``."""
    out = f * Fraction(-1, 2) if f.exact else f * -0.5
    for r in range(1, f.order):
        out = out + double_contraction(f, r, f.order - r)
    return out


@dataclass(frozen=True)
class SixthMoment:
    """``lhs = m6 - 5 m4 + 25/4 m2`` and its chaos-by-chaos decomposition."""

    lhs: object
    terms: dict = field(default_factory=dict)

    @property
    def rhs(self):
        return sum(self.terms.values())

    @property
    def discrepancy(self):
        return abs(self.lhs - self.rhs)


def sixth_moment_combination(f: Kernel, method: str = "state") -> SixthMoment:
    """Both sides of ``E[(I_q(f)^3 - 5/2 I_q(f))^2] = low + middle + high + top``.

    ``low`` and ``high`` are the squared norms of the grouped double
    contractions below and above chaos order ``q``, ``middle`` is
    ``||combination_kernel(f)||^2`` and ``top`` is ``||f x f x f||^2 = 1``.
    Works for either parity of ``q``.
    """
    _require_unit(f)
    _warn_if_asymmetric(f)
    m2, m4, m6 = (wigner_moment(f, l, method) for l in (2, 4, 6))
    quarter = Fraction(25, 4) if f.exact else 6.25
    lhs = m6 - 5 * m4 + quarter * m2
    groups = double_contraction_levels(f.order)
    zero = _zero(f)
    terms = {
        "low": sum((norm_sq(grouped_double_contraction(f, k)) for k in groups["low"]), zero),
        "middle": norm_sq(combination_kernel(f)),
        "high": sum((norm_sq(grouped_double_contraction(f, k)) for k in groups["high"]), zero),
        "top": norm_sq(contract(contract(f, f, 0), f, 0)),
    }
    return SixthMoment(lhs, terms)


# ---------------------------------------------------------------------------
# The rational moment recursion
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SplitSums:
    """Level-indexed sums: ``S[2m]``, ``S_plus[2m]`` (even levels) and ``N[2m-1]``, ``N_plus[2m-1]``."""

    S: dict
    S_plus: dict
    N: dict
    N_plus: dict


@dataclass(frozen=True)
class MomentAlgorithmResult:
    moments: dict
    sums: SplitSums


def tetilla_moment_algorithm(m_max: int) -> MomentAlgorithmResult:
    """Even tetilla moments ``m_2, ..., m_{2 m_max}`` from the coupled split-sum recursion.

    ``S[2m]`` sums contraction strings of the reference kernel over all walks,
    ``S_plus`` over strictly positive walks, and ``N``/``N_plus`` are the same
    sums started from ``f ~1 f``.  A walk splits at its first return to zero,
    which gives (with ``N`` computed before ``S``)::

        N[2m-1]  = S[2m-2]/2  + sum_{k=1}^{m-2} S_plus[2k] N[2m-2k-1]
        S[2m]    = S[2m-2] + N[2m-1] + sum_{k=1}^{m-1} S_plus[2k] S[2m-2k]
        Np[2m-1] = Sp[2m-2]/2 + sum_{k=1}^{m-2} Sp[2k] Np[2m-2k-1]
        Sp[2m]   = Np[2m-1] + sum_{k=1}^{m-1} Sp[2k] Sp[2m-2k]

    starting from ``S[2] = Sp[2] = 1`` and ``N[3] = Np[3] = 1/2``.
    """
    if not 1 <= m_max <= MAX_ALGORITHM_ORDER:
        raise CapacityError(f"m_max must lie in [1, {MAX_ALGORITHM_ORDER}], got {m_max}")
    half = Fraction(1, 2)
    S, Sp, N, Np = {2: Fraction(1)}, {2: Fraction(1)}, {3: half}, {3: half}
    for m in range(2, m_max + 1):
        if m > 2:
            N[2 * m - 1] = half * S[2 * m - 2] + sum(
                (Sp[2 * k] * N[2 * m - 2 * k - 1] for k in range(1, m - 1)), Fraction(0))
            Np[2 * m - 1] = half * Sp[2 * m - 2] + sum(
                (Sp[2 * k] * Np[2 * m - 2 * k - 1] for k in range(1, m - 1)), Fraction(0))
        S[2 * m] = S[2 * m - 2] + N[2 * m - 1] + sum(
            (Sp[2 * k] * S[2 * m - 2 * k] for k in range(1, m)), Fraction(0))
        Sp[2 * m] = Np[2 * m - 1] + sum(
            (Sp[2 * k] * Sp[2 * m - 2 * k] for k in range(1, m)), Fraction(0))
    moments = {2 * m: S[2 * m] for m in range(1, m_max + 1)}
    return MomentAlgorithmResult(moments, SplitSums(S, Sp, N, Np))
