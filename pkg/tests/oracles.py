"""Slow, independent reference implementations used only by the tests."""

from __future__ import annotations

import itertools
from fractions import Fraction

import sympy as sp


def set_partitions(m):
    """All set partitions of {1..m}, by inserting each element into an existing block or a new one."""
    if m == 0:
        yield []
        return
    for part in set_partitions(m - 1):
        for i in range(len(part)):
            yield part[:i] + [part[i] + [m]] + part[i + 1:]
        yield part + [[m]]


def is_crossing(blocks):
    where = {x: i for i, b in enumerate(blocks) for x in b}
    m = len(where)
    for a, b, c, d in itertools.combinations(range(1, m + 1), 4):
        if where[a] == where[c] and where[b] == where[d] and where[a] != where[b]:
            return True
    return False


def nc_partitions(m):
    return [p for p in set_partitions(m) if not is_crossing(p)]


def moments_from_cumulants_bruteforce(cumulants, K):
    out = []
    for m in range(1, K + 1):
        total = Fraction(0)
        for blocks in nc_partitions(m):
            term = Fraction(1)
            for b in blocks:
                term *= cumulants[len(b) - 1]
            total += term
        out.append(total)
    return out


def paths_bruteforce(q, p, l):
    out = []
    for r in itertools.product(range(q + 1), repeat=l - 1):
        ok = all(2 * sum(r[:k - 1]) + r[k - 1] <= (k - 1) * q + p for k in range(1, l))
        if ok and 2 * sum(r) == (l - 1) * q + p:
            out.append(r)
    return out


def symbolic_values(kernel):
    """Kernel values as a dict index-tuple -> exact sympy number."""
    scale = sp.sqrt(sp.Rational(kernel.scale_sq.numerator, kernel.scale_sq.denominator))
    return {idx: sp.Integer(int(c)) * scale for idx, c in zip(itertools.product(range(kernel.grid.cells),
                                                                                  repeat=kernel.order),
                                                              kernel.coeffs.flat)}


def contract_bruteforce(fv, p, gv, q, r, n, w):
    """Contraction of value dicts by explicit summation over the contracted cells."""
    w = sp.Rational(w.numerator, w.denominator)
    out = {}
    for left in itertools.product(range(n), repeat=p - r):
        for right in itertools.product(range(n), repeat=q - r):
            total = sp.Integer(0)
            for x in itertools.product(range(n), repeat=r):
                total += fv[left + x] * gv[tuple(reversed(x)) + right]
            out[left + right] = sp.nsimplify(total * w**r)
    return out
