"""
Numerical witnesses for the double-contraction identities.

Every check evaluates both sides of an identity independently, by explicit
contractions, and reports the discrepancy.  On exact kernels "holds" means
the discrepancy is exactly zero; on float kernels it means a relative error
of at most :data:`FLOAT_RTOL`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

from .chaos import _levels, admissible_double_contractions, double_contraction, double_contraction_levels, \
    grouped_double_contraction
from .errors import PreconditionError
from .kernels import Grid, Kernel, contract, inner_product, norm, norm_sq, random_mirror_symmetric_kernel

__all__ = [
    "FLOAT_RTOL",
    "IdentityCheck",
    "NondegeneracyResult",
    "contr_link_index_tuples",
    "forbid_walk_index_pairs",
    "verify_contr_link",
    "verify_lm1",
    "verify_forbid_walks",
    "nondegeneracy_check",
    "run_suite",
    "report_records",
    "SUITES",
]

FLOAT_RTOL = 1e-12
SUITES = ("contr-link", "lm1", "forbid-walks", "nondegeneracy")


@dataclass(frozen=True)
class IdentityCheck:
    """Outcome of one identity evaluation.

    ``lhs`` and ``rhs`` are scalars, or kernels for the forbidden-walk
    identity, whose ``discrepancy`` is then the L2 distance.
    """

    identity: str
    q: int
    indices: tuple
    lhs: object
    rhs: object
    discrepancy: object
    mode: str
    scale: float = 1.0

    @property
    def holds(self) -> bool:
        if self.mode == "rational":
            return self.discrepancy == 0
        return float(self.discrepancy) <= FLOAT_RTOL * max(1.0, self.scale)

    def to_record(self) -> dict:
        d = self.discrepancy
        return {
            "identity": self.identity,
            "q": self.q,
            "indices": list(self.indices),
            "discrepancy": str(d) if isinstance(d, Fraction) else float(d),
            "mode": self.mode,
        }


def _mode(f: Kernel) -> str:
    return "rational" if f.exact else "float"


def _abs(x) -> float:
    return abs(float(x))


def _scalar_check(name: str, f: Kernel, indices: tuple, lhs, rhs) -> IdentityCheck:
    return IdentityCheck(name, f.order, indices, lhs, rhs, abs(lhs - rhs), _mode(f),
                         max(_abs(lhs), _abs(rhs)))


# ---------------------------------------------------------------------------
# Index sets
# ---------------------------------------------------------------------------


def _variant_holds(q: int, variant: int, idx: tuple) -> bool:
    if variant == 3:
        if len(idx) != 2:
            return False
        r, s = idx
        return r >= 1 and s >= 1 and r <= q and s <= min(q, 2 * q - 2 * r) and r + s >= q
    if len(idx) != 4:
        return False
    r, s, r2, s2 = idx
    if min(idx) < 1 or r + s != r2 + s2 or r + s > q or r >= r2:
        return False
    return r2 + s >= q if variant == 1 else r2 + s <= q


def contr_link_index_tuples(q: int, variant: int) -> list[tuple]:
    """All admissible index tuples ``(r, s, r', s')`` (variants 1, 2) or ``(r, s)`` (variant 3)."""
    if variant not in (1, 2, 3):
        raise PreconditionError(f"variant must be 1, 2 or 3, got {variant}")
    rng = range(1, q + 1)
    if variant == 3:
        cands: Iterator[tuple] = ((r, s) for r in rng for s in rng)
    else:
        cands = ((r, s, r2, s2) for r in rng for s in rng for r2 in rng for s2 in rng)
    return [c for c in cands if _variant_holds(q, variant, c)]


def forbid_walk_index_pairs(q: int) -> list[tuple[int, int]]:
    """Pairs ``(r, r')`` with ``1 <= r <= q-1``, ``1 <= r' <= q`` and ``r' + 2r > 2q``."""
    return [(r, r2) for r in range(1, q) for r2 in range(1, q + 1) if r2 + 2 * r > 2 * q]


# ---------------------------------------------------------------------------
# Identities
# ---------------------------------------------------------------------------


def verify_contr_link(f: Kernel, variant: int, indices: tuple) -> IdentityCheck:
    """Check one of the three inner-product identities between double contractions.

    Variant 1 and 2 take ``(r, s, r', s')``, variant 3 takes ``(r, s)``::

        1:  <(f~r f)~s f, (f~r' f)~s' f> = <(f~s f)~(2q-2s-r) f, (f~(q-r') f)~(q-s') f>
        2:  <(f~r f)~s f, (f~r' f)~s' f> = <(f~s f)~(q-s') f,    (f~(q-r') f)~(2r'-r) f>
        3:  ||(f~r f)~s f||^2            = <(f~(q-r) f)~(q-s) f,  (f~(2q-2r-s) f)~r f>
    """
    q = f.order
    indices = tuple(int(i) for i in indices)
    if variant not in (1, 2, 3):
        raise PreconditionError(f"variant must be 1, 2 or 3, got {variant}")
    if q < 2 or not _variant_holds(q, variant, indices):
        raise PreconditionError(f"indices {indices} are not admissible for variant {variant} at q={q}")
    dc = lambda a, b: double_contraction(f, a, b)  # noqa: E731
    if variant == 3:
        r, s = indices
        lhs = norm_sq(dc(r, s))
        rhs = inner_product(dc(q - r, q - s), dc(2 * q - 2 * r - s, r))
    else:
        r, s, r2, s2 = indices
        lhs = inner_product(dc(r, s), dc(r2, s2))
        if variant == 1:
            rhs = inner_product(dc(s, 2 * q - 2 * s - r), dc(q - r2, q - s2))
        else:
            rhs = inner_product(dc(s, q - s2), dc(q - r2, 2 * r2 - r))
    return _scalar_check(f"contr-link-{variant}", f, indices, lhs, rhs)


def verify_lm1(f: Kernel) -> IdentityCheck:
    """Squared norm of the grouped high-order double contractions versus its expansion.

    ``sum_high ||sum_r D_{k,r}||^2 = sum_high sum_r ||D_{k,r}||^2 + 2 sum_low ||sum_r D_{k,r}||^2``
    where ``D_{k,r}`` is the level-``k`` double contraction with first order
    ``r``; ``low`` and ``high`` are the levels below and above chaos order
    ``q`` (top level excluded).  Both parities of ``q`` are handled.
    """
    q = f.order
    if q < 2:
        raise PreconditionError("q must be at least 2")
    shift, _, _ = _levels(q)
    groups = double_contraction_levels(q)
    zero = Fraction(0) if f.exact else 0.0
    lhs = sum((norm_sq(grouped_double_contraction(f, k)) for k in groups["high"]), zero)
    split = sum((norm_sq(double_contraction(f, r, shift - k - r))
                 for k in groups["high"] for r in admissible_double_contractions(q, k)), zero)
    low = sum((norm_sq(grouped_double_contraction(f, k)) for k in groups["low"]), zero)
    rhs = split + 2 * low
    name = "lm1" if q % 2 == 0 else "lm1-odd"
    return _scalar_check(name, f, (), lhs, rhs)


def verify_forbid_walks(g: Kernel, f: Kernel, r: int, r_prime: int) -> IdentityCheck:
    """``((g x f) ~r f) ~r' f`` versus ``g ~(r'+2r-2q) ((f ~r f) ~(2q-2r) f)``.

    Requires ``1 <= r <= q-1``, ``1 <= r' <= q``, ``r' + 2r > 2q`` and
    ``r' + 2r - 2q <= p`` (the order of ``g``), without which neither side
    is defined.
    """
    q, p = f.order, g.order
    if not (1 <= r <= q - 1 and 1 <= r_prime <= q):
        raise PreconditionError(f"need 1 <= r <= {q - 1} and 1 <= r' <= {q}, got r={r}, r'={r_prime}")
    if r_prime + 2 * r <= 2 * q:
        raise PreconditionError(f"need r' + 2r > 2q, got {r_prime + 2 * r} <= {2 * q}")
    t = r_prime + 2 * r - 2 * q
    if p < 1 or t > p:
        raise PreconditionError(f"g has order {p}; the identity needs order >= {max(t, 1)}")
    lhs = contract(contract(contract(g, f, 0), f, r), f, r_prime)
    rhs = contract(g, double_contraction(f, r, 2 * q - 2 * r), t)
    diff = lhs - rhs if lhs.exact == rhs.exact else lhs.to_float() - rhs.to_float()
    dist = norm(diff)
    scale = float(norm(lhs)) + float(norm(rhs))
    return IdentityCheck("forbid-walks", q, (r, r_prime), lhs, rhs, dist, _mode(f), scale)


@dataclass(frozen=True)
class NondegeneracyResult:
    """``norm_T = ||(f~1 f)~1 f||``; for ``q = 2`` also the pairing ``<(f~1 f)~1 f, f>`` and ``||f~1 f||^2``."""

    q: int
    norm_T: object
    pairing: object = None
    contraction_norm_sq: object = None

    @property
    def pairing_gap(self):
        if self.pairing is None:
            return None
        return abs(self.pairing - self.contraction_norm_sq)


def nondegeneracy_check(f: Kernel) -> NondegeneracyResult:
    """Quantities behind the fact that ``(f ~1 f) ~1 f`` never vanishes for nonzero ``f``.

    For order-2 mirror-symmetric ``f`` the pairing ``<(f~1 f)~1 f, f>``
    equals ``||f ~1 f||^2``, so ``T = 0`` would force ``f ~1 f = 0`` and
    hence ``f = 0``.
    """
    q = f.order
    if q < 2:
        raise PreconditionError("q must be at least 2")
    nsq = norm_sq(f)
    if (nsq != 1) if f.exact else abs(nsq - 1) > FLOAT_RTOL:
        raise PreconditionError(f"kernel must have unit norm, got norm^2 = {nsq}")
    if not f.is_mirror_symmetric():
        raise PreconditionError("kernel must be mirror-symmetric")
    t = double_contraction(f, 1, 1)
    if q != 2:
        return NondegeneracyResult(q, norm(t))
    return NondegeneracyResult(q, norm(t), inner_product(t, f), norm_sq(contract(f, f, 1)))


# ---------------------------------------------------------------------------
# Batch verification
# ---------------------------------------------------------------------------


def _nondegeneracy_as_check(f: Kernel) -> list[IdentityCheck]:
    res = nondegeneracy_check(f)
    out = []
    mode = _mode(f)
    # ||T|| > 0 is reported as a check whose discrepancy is 0 when it holds.
    positive = float(res.norm_T) > 0
    out.append(IdentityCheck("nondegeneracy-positive", f.order, (), res.norm_T, 0,
                             Fraction(0) if positive else Fraction(1), "rational"))
    if res.pairing is not None:
        out.append(IdentityCheck("nondegeneracy-pairing", f.order, (), res.pairing, res.contraction_norm_sq,
                                 res.pairing_gap, mode, max(_abs(res.pairing), _abs(res.contraction_norm_sq))))
    return out


def run_suite(suite: str, q: int, cells: int, seed: int, reps: int, mode: str = "rational",
              cell_width=Fraction(1)) -> list[IdentityCheck]:
    """Check one suite (or ``"all"``) on ``reps`` seeded random mirror-symmetric kernels.

    Every admissible index tuple is tested on every kernel.  The
    forbidden-walk suite also draws a random partner ``g`` of each order
    ``p`` from 1 to 2 that the identity allows.
    """
    if suite != "all" and suite not in SUITES:
        raise PreconditionError(f"unknown suite {suite!r}; choose from {', '.join(SUITES)} or all")
    if mode not in ("rational", "float"):
        raise PreconditionError(f"mode must be rational or float, got {mode!r}")
    if reps < 1:
        raise PreconditionError("reps must be positive")
    suites = SUITES if suite == "all" else (suite,)
    grid = Grid(cell_width, cells)
    exact = mode == "rational"
    results: list[IdentityCheck] = []
    for rep in range(reps):
        f = random_mirror_symmetric_kernel(q, grid, (seed, rep), exact=exact)
        for name in suites:
            if name == "contr-link":
                for variant in (1, 2, 3):
                    for idx in contr_link_index_tuples(q, variant):
                        results.append(verify_contr_link(f, variant, idx))
            elif name == "lm1":
                results.append(verify_lm1(f))
            elif name == "forbid-walks":
                for r, r2 in forbid_walk_index_pairs(q):
                    for p in (1, 2):
                        if r2 + 2 * r - 2 * q > p:
                            continue
                        g = random_mirror_symmetric_kernel(p, grid, (seed, rep, p, 1), exact=exact)
                        results.append(verify_forbid_walks(g, f, r, r2))
            else:
                results.extend(_nondegeneracy_as_check(f))
    return results


def report_records(results: list[IdentityCheck]) -> list[dict]:
    return [r.to_record() for r in results]
