"""
Sweeps over kernel families that test the three equivalent tetilla-convergence conditions.

For a sequence ``f_n`` of unit-norm mirror-symmetric kernels of order ``q``:

(i)   the fourth and sixth moments of ``I_q(f_n)`` approach 5/2 and 33/4;
(ii)  the double contractions ``(f_n ~r f_n) ~r' f_n`` vanish for the
      listed pairs ``(r, r')`` and ``-f_n/2 + sum_r (f_n ~r f_n) ~(q-r) f_n``
      vanishes;
(iii) all moments approach the tetilla moments.

Each built-in family is exact, so residuals that should be zero are exactly
zero, and the reported values are Fractions whenever they are rational.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np
from scipy import stats

from .chaos import combination_kernel, double_contraction, wigner_moment
from .errors import CapacityError, PreconditionError
from .kernels import MAX_ENTRIES, Grid, Kernel, norm, reference_tetilla_kernel
from .transforms import tetilla_moment_closed

__all__ = [
    "KernelFamily",
    "ConvergenceRow",
    "ConvergenceReport",
    "builtin_families",
    "get_family",
    "condition_ii_pairs",
    "check_condition_i",
    "check_condition_ii",
    "check_condition_iii",
    "sweep",
    "tetilla_target",
    "equivalence_witness",
    "perturbation_matrix",
]

MAX_ORDER_CAP = 10


@dataclass(frozen=True)
class KernelFamily:
    """A sequence ``n -> f_n`` of unit-norm mirror-symmetric kernels of order ``q``.

    ``n_max`` is the largest index for which sixth moments fit the array
    capacity (families on a fixed grid have no practical limit).
    """

    name: str
    q: int
    generator: Callable[[int], Kernel]
    description: str = ""
    n_max: int = 10**6

    def __call__(self, n: int) -> Kernel:
        if not 1 <= n <= self.n_max:
            raise CapacityError(f"family {self.name!r} is available for 1 <= n <= {self.n_max}, got {n}")
        return self.generator(n)


def _constant_reference(n: int) -> Kernel:
    return reference_tetilla_kernel()


_PERTURBATION_SEED = 20240611
#: The perturbation is g = G / (PERTURBATION_DAMPING * sqrt(2)) with G a seeded
#: symmetric matrix with entries in {-1, 0, 1}; residuals decay like ||g|| / n.
PERTURBATION_DAMPING = 4


def perturbation_matrix() -> np.ndarray:
    """The fixed symmetric integer matrix ``G`` behind the perturbed family."""
    rng = np.random.default_rng(_PERTURBATION_SEED)
    while True:
        a, b, c = rng.integers(-1, 2, size=3)
        # Skip multiples of the reference pattern, which would not perturb it.
        if a != 0 or c != 0:
            return np.array([[a, b], [b, c]], dtype=np.int64)


def _perturbed_reference(n: int) -> Kernel:
    # normalize(f + g/n) with f = C/sqrt(2), g = G/(D sqrt(2)): after clearing
    # the common factor 1/(D n sqrt(2)) the coefficients are D n C + G.
    d = PERTURBATION_DAMPING
    c = np.array([[0, 1], [1, 0]], dtype=np.int64)
    k = Kernel(d * n * c + perturbation_matrix(), Grid(Fraction(1), 2), Fraction(1, 2 * (d * n) ** 2))
    return k.normalized()


def _semicircular_control(n: int) -> Kernel:
    # n^{-1/2} sum_i e_i x e_i on n unit cells.
    return Kernel(np.eye(n, dtype=np.int64), Grid(Fraction(1), n), Fraction(1, n))


def _block_reference(n: int) -> Kernel:
    # n^{-1/2} sum_i (e_{2i-1} x e_{2i} + e_{2i} x e_{2i-1}) / sqrt(2) on 2n unit cells:
    # n free copies of the reference kernel, averaged.
    c = np.zeros((2 * n, 2 * n), dtype=np.int64)
    for i in range(n):
        c[2 * i, 2 * i + 1] = c[2 * i + 1, 2 * i] = 1
    return Kernel(c, Grid(Fraction(1), 2 * n), Fraction(1, 2 * n))


def _sixth_moment_cap(cells_of_n: Callable[[int], int]) -> int:
    n = 1
    while cells_of_n(n + 1) <= 32 and cells_of_n(n + 1) ** 6 <= MAX_ENTRIES:
        n += 1
    return n


def builtin_families() -> list[KernelFamily]:
    """The four built-in families, all of order 2."""
    return [
        KernelFamily("constant-reference", 2, _constant_reference,
                     "the reference tetilla kernel for every n"),
        KernelFamily("perturbed-reference", 2, _perturbed_reference,
                     "normalize(f + g/n) for the reference f and a fixed seeded symmetric g (see perturbation_matrix)"),
        KernelFamily("semicircular-control", 2, _semicircular_control,
                     "n^{-1/2} sum_i e_i x e_i on n cells; ||f_n ~1 f_n||^2 = 1/n",
                     n_max=_sixth_moment_cap(lambda n: n)),
        KernelFamily("block-reference", 2, _block_reference,
                     "average of n disjoint copies of the reference kernel; ||f_n ~1 f_n||^2 = 1/(2n)",
                     n_max=_sixth_moment_cap(lambda n: 2 * n)),
    ]


def get_family(name: str) -> KernelFamily:
    for fam in builtin_families():
        if fam.name == name:
            return fam
    names = ", ".join(f.name for f in builtin_families())
    raise PreconditionError(f"unknown family {name!r}; choose from {names}")


# ---------------------------------------------------------------------------
# Conditions
# ---------------------------------------------------------------------------


def tetilla_target(l: int) -> Fraction:
    """``E[T^l]`` for a tetilla variable ``T``."""
    return Fraction(0) if l % 2 else tetilla_moment_closed(l // 2)


def condition_ii_pairs(q: int) -> list[tuple[int, int, bool]]:
    """``(r, r', literal)`` for every double contraction required to vanish.

    ``r`` runs over ``1..q-1`` and ``r'`` over ``1..q`` with ``r' + 2r <= 2q``
    and ``r + r' != q``.  ``literal`` is False for the ``r' = q`` pairs,
    which close the gap that lets non-tetilla kernels satisfy the
    ``r' <= q-1`` list (e.g. ``q = 2``, where that list is empty).
    """
    if q < 2:
        raise PreconditionError("q must be at least 2")
    return [(r, r2, r2 <= q - 1) for r in range(1, q) for r2 in range(1, q + 1)
            if r2 + 2 * r <= 2 * q and r + r2 != q]


def check_condition_i(family: KernelFamily, n: int) -> tuple:
    """``(E[F_n^4], E[F_n^6])``; the targets are 5/2 and 33/4."""
    f = family(n)
    return wigner_moment(f, 4), wigner_moment(f, 6)


@dataclass(frozen=True)
class ResidualRecord:
    """Norms of the kernels that condition (ii) requires to vanish."""

    pairs: dict
    combination: object
    literal: dict = field(default_factory=dict)

    @property
    def total(self) -> float:
        return float(sum(float(v) for v in self.pairs.values()) + float(self.combination))


def check_condition_ii(family: KernelFamily, n: int) -> ResidualRecord:
    """``||(f_n ~r f_n) ~r' f_n||`` for :func:`condition_ii_pairs` and ``||combination_kernel(f_n)||``."""
    f = family(n)
    pairs, literal = {}, {}
    for r, r2, lit in condition_ii_pairs(f.order):
        pairs[(r, r2)] = norm(double_contraction(f, r, r2))
        literal[(r, r2)] = lit
    return ResidualRecord(pairs, norm(combination_kernel(f)), literal)


def check_condition_iii(family: KernelFamily, n: int, L: int) -> dict:
    """``{l: |E[F_n^l] - E[T^l]|}`` for ``l = 2..L``.

    Moment convergence is equivalent to convergence in law here because the
    tetilla law has compact support.
    """
    if L < 2 or L > MAX_ORDER_CAP or L % 2:
        raise PreconditionError(f"L must be even and lie in [2, {MAX_ORDER_CAP}], got {L}")
    f = family(n)
    return {l: abs(wigner_moment(f, l) - tetilla_target(l)) for l in range(2, L + 1)}


# ---------------------------------------------------------------------------
# Reports
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ConvergenceRow:
    n: int
    m4: object
    m6: object
    residuals: ResidualRecord
    distances: dict

    @property
    def condition_i_distance(self) -> float:
        return abs(float(self.m4) - 2.5) + abs(float(self.m6) - 8.25)


def _fmt(x) -> str:
    if isinstance(x, Fraction):
        return str(x)
    return repr(float(x))


@dataclass(frozen=True)
class ConvergenceReport:
    """Rows keyed by ``n`` for one family; ``L`` is the highest moment order compared."""

    family: str
    q: int
    L: int
    rows: list

    def columns(self) -> list[str]:
        cols = ["n", "m4", "m6"]
        if self.rows:
            cols += [f"res_{r}_{r2}" for r, r2 in self.rows[0].residuals.pairs]
        cols += ["res_combination"] + [f"dist_{l}" for l in range(2, self.L + 1)]
        return cols

    def records(self) -> list[dict]:
        out = []
        for row in self.rows:
            rec = {"n": row.n, "m4": _fmt(row.m4), "m6": _fmt(row.m6)}
            for (r, r2), v in row.residuals.pairs.items():
                rec[f"res_{r}_{r2}"] = _fmt(v)
            rec["res_combination"] = _fmt(row.residuals.combination)
            for l, d in row.distances.items():
                rec[f"dist_{l}"] = _fmt(d)
            out.append(rec)
        return out

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=self.columns(), lineterminator="\n")
        writer.writeheader()
        writer.writerows(self.records())
        return buf.getvalue()

    def to_json(self) -> str:
        return json.dumps({"family": self.family, "q": self.q, "L": self.L, "rows": self.records()}, indent=2)


def sweep(family: KernelFamily, n_values, L: int = 6) -> ConvergenceReport:
    """Evaluate all three conditions for every ``n`` in ``n_values``."""
    if L < 2 or L > MAX_ORDER_CAP or L % 2:
        raise PreconditionError(f"L must be even and lie in [2, {MAX_ORDER_CAP}], got {L}")
    ns = sorted(set(n_values))
    if ns and (ns[0] < 1 or ns[-1] > family.n_max):
        raise CapacityError(f"family {family.name!r} is available for 1 <= n <= {family.n_max}")
    rows = []
    for n in ns:
        f = family(n)
        moments = {l: wigner_moment(f, l) for l in range(2, max(L, 6) + 1)}
        distances = {l: abs(moments[l] - tetilla_target(l)) for l in range(2, L + 1)}
        rows.append(ConvergenceRow(n, moments[4], moments[6], check_condition_ii(family, n), distances))
    return ConvergenceReport(family.name, family.q, L, rows)


def equivalence_witness(report: ConvergenceReport) -> float:
    """Spearman rank correlation between the condition-(i) distance and the summed condition-(ii) residuals.

    Returns ``nan`` when either column is constant (e.g. the constant family).
    """
    a = [row.condition_i_distance for row in report.rows]
    b = [row.residuals.total for row in report.rows]
    if len(set(a)) < 2 or len(set(b)) < 2:
        return math.nan
    return float(stats.spearmanr(a, b).statistic)
