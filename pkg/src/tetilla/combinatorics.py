"""
Non-crossing partitions and contraction walks.

Two families of combinatorial objects index every moment computation in the
package:

* non-crossing partitions of ``[m] = {1, ..., m}``, which carry the free
  moment-cumulant relation;
* contraction paths ``(r_1, ..., r_{l-1})``, i.e. the orders of an iterated
  contraction string ``(...((g ~r1 f) ~r2 f) ...) ~r_{l-1} f`` that starts
  from a kernel of order ``p``, uses a kernel of order ``q`` at every step and
  ends at a scalar.  Each path is in bijection with a lattice walk
  ``M_0, ..., M_{l-1}`` recording the order after each step.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Callable, Iterator, Sequence

from .errors import CapacityError, InvalidWalkError, PreconditionError

__all__ = [
    "DEFAULT_CAPACITY",
    "MAX_NC_SIZE",
    "NonCrossingPartition",
    "ContractionPath",
    "Walk",
    "capacity",
    "catalan",
    "crossing_witness",
    "enumerate_nc",
    "iter_nc",
    "count_even_block_nc",
    "enumerate_paths",
    "enumerate_positive_paths",
    "path_to_walk",
    "walk_to_path",
]

DEFAULT_CAPACITY = 10**6
MAX_NC_SIZE = 16
MAX_PATH_Q = 6
MAX_PATH_L = 14


def capacity() -> int:
    """Path-count budget; ``TETILLA_CAPACITY`` overrides the default."""
    env = os.environ.get("TETILLA_CAPACITY")
    if env:
        try:
            value = int(env)
        except ValueError:
            raise PreconditionError(f"TETILLA_CAPACITY must be an integer, got {env!r}")
        if value < 1:
            raise PreconditionError("TETILLA_CAPACITY must be positive")
        return value
    return DEFAULT_CAPACITY


def catalan(m: int) -> int:
    """Catalan number ``C_m`` by the convolution recurrence."""
    c = [1]
    for k in range(m):
        c.append(sum(c[i] * c[k - i] for i in range(k + 1)))
    return c[m]


# ---------------------------------------------------------------------------
# Non-crossing partitions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class NonCrossingPartition:
    """A non-crossing partition of ``{1, ..., m}``.

    Blocks are stored as sorted tuples, ordered by their minimum element, so
    two partitions are equal iff they are the same set partition.
    """

    m: int
    blocks: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        blocks = tuple(sorted((tuple(sorted(b)) for b in self.blocks), key=lambda b: b[0]))
        object.__setattr__(self, "blocks", blocks)
        seen = [x for b in blocks for x in b]
        if any(len(b) == 0 for b in blocks) or sorted(seen) != list(range(1, self.m + 1)):
            raise PreconditionError(f"blocks {blocks} do not partition [1..{self.m}]")
        if crossing_witness(blocks) is not None:
            raise PreconditionError(f"partition {blocks} is crossing")

    @classmethod
    def _trusted(cls, m: int, blocks: tuple[tuple[int, ...], ...]) -> "NonCrossingPartition":
        # Generator output is canonical and non-crossing by construction.
        obj = object.__new__(cls)
        object.__setattr__(obj, "m", m)
        object.__setattr__(obj, "blocks", blocks)
        return obj

    @property
    def block_sizes(self) -> tuple[int, ...]:
        return tuple(len(b) for b in self.blocks)

    def __len__(self):
        return len(self.blocks)


def crossing_witness(blocks: Sequence[Sequence[int]]):
    """Return ``(p1, q1, p2, q2)`` exhibiting a crossing, or ``None``.

    Two blocks cross iff some arc between consecutive elements of one block
    crosses an arc of the other, so only arcs are compared.
    """
    arcs = []
    for i, b in enumerate(blocks):
        b = sorted(b)
        arcs.extend((x, y, i) for x, y in zip(b, b[1:]))
    for a, b, i in arcs:
        for c, d, j in arcs:
            if i != j and a < c < b < d:
                return (a, c, b, d)
    return None


def _nc_blocks(lo: int, hi: int, allowed: Callable[[int], bool]) -> Iterator[list[tuple[int, ...]]]:
    # Partitions of the integer interval [lo, hi): the block holding lo is
    # lo = a_1 < ... < a_k; each gap (a_i, a_{i+1}) and the tail (a_k, hi)
    # are partitioned independently.
    if lo >= hi:
        yield []
        return

    def grow(block: list[int]) -> Iterator[list[tuple[int, ...]]]:
        last = block[-1]
        if allowed(len(block)):
            for rest in _nc_blocks(last + 1, hi, allowed):
                yield [tuple(block)] + rest
        for nxt in range(last + 1, hi):
            for inner in _nc_blocks(last + 1, nxt, allowed):
                for tail in grow(block + [nxt]):
                    yield inner + tail

    yield from grow([lo])


def iter_nc(m: int, block_filter: Callable[[int], bool] | None = None) -> Iterator[NonCrossingPartition]:
    """Lazily generate ``NC(m)``, optionally keeping only blocks whose size passes ``block_filter``.

    Filtering is applied while the partitions are being built, so e.g. the
    even-block partitions of ``[16]`` are reached without visiting all of
    ``NC(16)``.
    """
    if not 1 <= m <= MAX_NC_SIZE:
        raise CapacityError(f"non-crossing partitions are enumerated for 1 <= m <= {MAX_NC_SIZE}, got {m}")
    allowed = block_filter or (lambda size: True)
    for blocks in _nc_blocks(1, m + 1, allowed):
        yield NonCrossingPartition._trusted(m, tuple(sorted(blocks)))


def enumerate_nc(m: int) -> list[NonCrossingPartition]:
    """All non-crossing partitions of ``[m]``; there are ``catalan(m)`` of them."""
    return list(iter_nc(m))


def count_even_block_nc(n: int, k: int) -> int:
    """Number of non-crossing partitions of ``[2n]`` into exactly ``k`` blocks, all of even size."""
    if not 1 <= n <= MAX_NC_SIZE // 2:
        raise CapacityError(f"count_even_block_nc supports 1 <= n <= {MAX_NC_SIZE // 2}, got {n}")
    if not 1 <= k <= n:
        raise PreconditionError(f"k must lie in [1, {n}], got {k}")
    return sum(1 for pi in iter_nc(2 * n, lambda size: size % 2 == 0) if len(pi) == k)


# ---------------------------------------------------------------------------
# Contraction paths and walks
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ContractionPath:
    """Contraction orders ``r = (r_1, ..., r_{l-1})`` of an admissible string.

    Admissible means every contraction is well defined,
    ``2 r_1 + ... + 2 r_{k-1} + r_k <= (k-1) q + p``, and the string ends at a
    scalar, ``2 r_1 + ... + 2 r_{l-1} = (l-1) q + p``.
    """

    q: int
    p: int
    r: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "r", tuple(int(x) for x in self.r))
        if self.q < 1 or self.p < 1 or len(self.r) < 1:
            raise InvalidWalkError(f"need q >= 1, p >= 1 and l >= 2, got q={self.q}, p={self.p}, r={self.r}")
        order = self.p
        for k, rk in enumerate(self.r, 1):
            if not 0 <= rk <= self.q or rk > order:
                raise InvalidWalkError(f"r_{k}={rk} is not admissible at order {order} (q={self.q})")
            order += self.q - 2 * rk
        if order != 0:
            raise InvalidWalkError(f"path {self.r} ends at order {order}, not at a scalar")

    @property
    def l(self) -> int:
        return len(self.r) + 1

    @property
    def peak_order(self) -> int:
        return max(path_to_walk(self).values)


@dataclass(frozen=True)
class Walk:
    """Orders ``M_0, ..., M_{l-1}`` visited by an iterated contraction."""

    values: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(int(x) for x in self.values))

    def check(self, q: int) -> None:
        """Raise :class:`InvalidWalkError` unless the walk is admissible for kernel order ``q``."""
        M = self.values
        if len(M) < 2 or M[0] < 1 or M[-1] != 0 or min(M) < 0:
            raise InvalidWalkError(f"walk {M} must start positive, stay >= 0 and end at 0")
        for a, b in zip(M, M[1:]):
            step = b - a
            if abs(step) > q or (step - q) % 2:
                raise InvalidWalkError(f"step {a}->{b} is not in {{-q, -q+2, ..., q}} for q={q}")
            if a <= q and b < q - a:
                raise InvalidWalkError(f"step {a}->{b} contracts more than {a} variables")


def path_to_walk(path: ContractionPath) -> Walk:
    """``M_k = k q + p - 2 (r_1 + ... + r_k)``."""
    M = [path.p]
    for rk in path.r:
        M.append(M[-1] + path.q - 2 * rk)
    return Walk(tuple(M))


def walk_to_path(walk: Walk, q: int) -> ContractionPath:
    """Inverse of :func:`path_to_walk`: ``r_k = (q - M_k + M_{k-1}) / 2``."""
    walk.check(q)
    M = walk.values
    r = []
    for prev, cur in zip(M, M[1:]):
        twice = q - cur + prev
        if twice % 2:
            raise InvalidWalkError(f"non-integral contraction order at step {prev}->{cur}")
        r.append(twice // 2)
    return ContractionPath(q, M[0], tuple(r))


def _check_path_args(q: int, p: int, l: int) -> None:
    if q < 1 or p < 1 or l < 2:
        raise PreconditionError(f"need q >= 1, p >= 1, l >= 2; got q={q}, p={p}, l={l}")
    if q > MAX_PATH_Q or l > MAX_PATH_L:
        raise CapacityError(f"path enumeration is capped at q <= {MAX_PATH_Q}, l <= {MAX_PATH_L}")


def _iter_paths(q: int, p: int, l: int, positive: bool) -> Iterator[tuple[int, ...]]:
    steps = l - 1
    prefix: list[int] = []

    def extend(order: int) -> Iterator[tuple[int, ...]]:
        left = steps - len(prefix)
        if left == 0:
            if order == 0:
                yield tuple(prefix)
            return
        for r in range(0, min(order, q) + 1):
            new = order + q - 2 * r
            # Must still be able to reach 0 in the remaining steps.
            if new > (left - 1) * q:
                continue
            if positive and left > 1 and new == 0:
                continue
            prefix.append(r)
            yield from extend(new)
            prefix.pop()

    yield from extend(p)


def _collect(q: int, p: int, l: int, positive: bool) -> list[ContractionPath]:
    _check_path_args(q, p, l)
    budget = capacity()
    out = []
    for r in _iter_paths(q, p, l, positive):
        if len(out) >= budget:
            raise CapacityError(f"more than {budget} paths in A_(q={q}, p={p}, l={l}); raise TETILLA_CAPACITY")
        out.append(ContractionPath(q, p, r))
    return out


def enumerate_paths(q: int, p: int, l: int) -> list[ContractionPath]:
    """All admissible contraction paths, in lexicographic order of ``r``.

    Parameters
    ----------
    q : int
        Order of the kernel used at every contraction step.
    p : int
        Order of the starting kernel.
    l : int
        Number of kernels in the string (``l - 1`` contractions).

    Raises
    ------
    CapacityError
        If ``q`` or ``l`` exceed the desk-scale caps or the number of paths
        exceeds :func:`capacity`.  Output is never truncated.
    """
    return _collect(q, p, l, positive=False)


def enumerate_positive_paths(q: int, p: int, l: int) -> list[ContractionPath]:
    """Admissible paths whose walk stays strictly positive before the last step."""
    return _collect(q, p, l, positive=True)
