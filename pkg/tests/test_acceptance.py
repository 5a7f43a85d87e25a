"""Acceptance suite: one test per criterion, each timed and reported as a PASS/FAIL line."""

import math
import time
from fractions import Fraction
from math import comb

import numpy as np
import pytest

from tetilla.chaos import fourth_moment_decomposition, sixth_moment_combination, tetilla_moment_algorithm, \
    wigner_moment
from tetilla.combinatorics import catalan, count_even_block_nc, enumerate_nc
from tetilla.identities import run_suite
from tetilla.kernels import Grid, random_mirror_symmetric_kernel, reference_tetilla_kernel
from tetilla.rmt import SimConfig, agreement_z, alternative_representation_moments, semicircle_trace_moments, \
    tetilla_trace_moments
from tetilla.theorem import get_family, sweep
from tetilla.transforms import (TETILLA_EDGE, cauchy_cubic_residual, cauchy_transform_tetilla, density_from_cauchy,
                                density_moment, moments_from_cumulants, tetilla_cumulants, tetilla_density,
                                tetilla_moment_closed)

REF = reference_tetilla_kernel()


@pytest.fixture
def report(capsys):
    def emit(number, title, checks, elapsed, budget):
        failed = [name for name, ok in checks if not ok]
        in_time = elapsed <= budget
        verdict = "PASS" if not failed and in_time else "FAIL"
        detail = f"{elapsed:.2f}s of {budget:g}s"
        if failed:
            detail += "; failed: " + ", ".join(failed)
        if not in_time:
            detail += "; over time budget"
        with capsys.disabled():
            print(f"\n{verdict} criterion {number}: {title} ({detail})")
        assert not failed and in_time, detail

    return emit


def test_criterion_1_moment_cross_validation(report):
    start = time.perf_counter()
    algorithm = tetilla_moment_algorithm(6).moments
    from_cumulants = moments_from_cumulants(tetilla_cumulants(12), 12)
    checks = []
    for n in range(1, 7):
        values = {tetilla_moment_closed(n), algorithm[2 * n], from_cumulants[2 * n - 1], wigner_moment(REF, 2 * n)}
        checks.append((f"m{2 * n} four sources", len(values) == 1 and isinstance(values.pop(), Fraction)))
    checks.append(("m4 = 5/2", wigner_moment(REF, 4) == Fraction(5, 2)))
    checks.append(("m6 = 33/4", wigner_moment(REF, 6) == Fraction(33, 4)))
    report(1, "exact moment cross-validation n = 1..6", checks, time.perf_counter() - start, 60)


def test_criterion_2_odd_moments(report):
    start = time.perf_counter()
    checks = [(f"m{l} = 0", wigner_moment(REF, l) == 0) for l in (3, 5, 7)]
    report(2, "odd moments of the reference kernel vanish", checks, time.perf_counter() - start, 60)


def test_criterion_3_density_normalization(report):
    start = time.perf_counter()
    edge = math.sqrt(11 + 5 * math.sqrt(5)) / 2
    checks = [
        ("support edge", TETILLA_EDGE == edge),
        ("h = 0 outside", tetilla_density(edge + 1e-9) == 0 and tetilla_density(-edge - 1e-3) == 0),
        ("mass 1", abs(density_moment(0) - 1) <= 1e-8),
        ("second moment 1", abs(density_moment(2) - 1) <= 1e-6),
        ("fourth moment 5/2", abs(density_moment(4) - 2.5) <= 1e-6),
        ("sixth moment 33/4", abs(density_moment(6) - 8.25) <= 1e-6),
    ]
    report(3, "density mass and moments", checks, time.perf_counter() - start, 10)


def test_criterion_4_stieltjes_consistency(report):
    start = time.perf_counter()
    eps = 1e-6
    worst_delta = worst_residual = 0.0
    for t in np.linspace(-TETILLA_EDGE, TETILLA_EDGE, 1000):
        t = float(t)
        worst_delta = max(worst_delta, abs(density_from_cauchy(t, eps) - tetilla_density(t)))
        z = complex(t, eps)
        worst_residual = max(worst_residual, cauchy_cubic_residual(z, cauchy_transform_tetilla(z)))
    checks = [(f"max |delta| = {worst_delta:.2e}", worst_delta <= 1e-4),
              (f"max cubic residual = {worst_residual:.2e}", worst_residual <= 1e-10)]
    report(4, f"Stieltjes inversion (max delta {worst_delta:.2e}, residual {worst_residual:.2e})", checks,
           time.perf_counter() - start, 10)


def test_criterion_5_identities(report):
    start = time.perf_counter()
    reps = 50
    checks = []
    for suite in ("contr-link", "lm1", "forbid-walks"):
        for q in (2, 3, 4):
            for cells in (2, 3):
                exact = run_suite(suite, q, cells, seed=100 + q, reps=reps, mode="rational")
                checks.append((f"{suite} q={q} n={cells} rational",
                               all(r.discrepancy == 0 for r in exact)))
                floats = run_suite(suite, q, cells, seed=200 + q, reps=reps, mode="float")
                checks.append((f"{suite} q={q} n={cells} float",
                               all(float(r.discrepancy) <= 1e-12 * max(1.0, r.scale) for r in floats)))
    identities = {r.identity for r in run_suite("all", 3, 2, seed=0, reps=1) + run_suite("all", 4, 2, seed=0, reps=1)}
    checks.append(("all identities exercised",
                   {"contr-link-1", "contr-link-2", "contr-link-3", "lm1", "lm1-odd", "forbid-walks"} <= identities))
    report(5, f"double-contraction identities over {reps} kernels per case", checks, time.perf_counter() - start, 300)


def test_criterion_6_sixth_moment(report):
    start = time.perf_counter()
    six = sixth_moment_combination(REF)
    checks = [("reference lhs = 2", six.lhs == 2),
              ("reference terms (0, 0, 1, 1)",
               tuple(six.terms[k] for k in ("low", "middle", "high", "top")) == (0, 0, 1, 1))]
    kernels = [REF] + [random_mirror_symmetric_kernel(2, Grid(1, n), (6, s)) for n in (2, 3) for s in range(10)]
    kernels += [random_mirror_symmetric_kernel(3, Grid(1, 2), (6, 3, s)) for s in range(3)]
    for i, f in enumerate(kernels):
        if f.order == 2:
            checks.append((f"sixth-moment identity kernel {i}", sixth_moment_combination(f).discrepancy == 0))
        fm = fourth_moment_decomposition(f)
        checks.append((f"fourth-moment identity kernel {i}",
                       fm.total == wigner_moment(f, 4) == 2 + sum(fm.residuals)))
    report(6, "sixth- and fourth-moment decompositions", checks, time.perf_counter() - start, 60)


def test_criterion_7_theorem_sweep(report):
    start = time.perf_counter()
    const = sweep(get_family("constant-reference"), range(1, 9), L=8)
    const_zero = all(all(v == 0 for v in row.residuals.pairs.values()) and row.residuals.combination == 0
                     and all(d == 0 for d in row.distances.values()) for row in const.rows)
    pert = sweep(get_family("perturbed-reference"), range(1, 65))
    totals = {row.n: row.residuals.total for row in pert.rows}
    decreasing = all(totals[n] > totals[n + 1] for n in range(8, 64))
    last = pert.rows[-1].residuals
    small = max([float(v) for v in last.pairs.values()] + [float(last.combination)]) < 1e-2
    semi = sweep(get_family("semicircular-control"), range(1, 22))
    m4_exact = all(row.m4 - 2 == Fraction(1, row.n) for row in semi.rows)
    combos = [row.residuals.combination for row in semi.rows]
    to_half = all(c == abs(Fraction(1, 2) - Fraction(1, n)) for c, n in zip(combos, range(1, 22))) and \
        abs(combos[-1] - Fraction(1, 2)) < abs(combos[3] - Fraction(1, 2))
    checks = [("constant family exactly zero", const_zero),
              ("perturbed residuals decrease for n >= 8", decreasing),
              (f"perturbed residuals below 1e-2 at n=64 (total {last.total:.2e})", small),
              ("semicircular |m4 - 2| = 1/n", m4_exact),
              ("semicircular combination residual -> 1/2", to_half)]
    report(7, "convergence sweeps over kernel families", checks, time.perf_counter() - start, 300)


def test_criterion_8_monte_carlo(report):
    start = time.perf_counter()
    cfg = SimConfig(N=512, trials=40, seed=0, k_max=6)
    product = tetilla_trace_moments(cfg)
    squares = alternative_representation_moments(cfg)
    semicircle = semicircle_trace_moments(SimConfig(N=512, trials=40, seed=0, k_max=4))
    m4, m6, s4 = product.estimate(4), product.estimate(6), semicircle.estimate(4)
    checks = [(f"m4 = {m4:.4f}", abs(m4 - 2.5) <= 0.1),
              (f"m6 = {m6:.4f}", abs(m6 - 8.25) <= 0.5),
              (f"semicircle m4 = {s4:.4f}", abs(s4 - 2) <= 0.05)]
    for k in (2, 4, 6):
        z = agreement_z(product, squares, k)
        checks.append((f"representations agree at k={k} (z = {z:.2f})", abs(z) <= 3))
    report(8, f"Monte Carlo at N=512, 40 trials (m4 {m4:.3f}, m6 {m6:.3f}, semicircle m4 {s4:.4f})", checks,
           time.perf_counter() - start, 300)


def test_criterion_9_combinatorial_counts(report):
    start = time.perf_counter()
    checks = [(f"|NC({m})| = Catalan", len(enumerate_nc(m)) == catalan(m)) for m in range(1, 11)]
    for n in range(1, 6):
        counts = {k: count_even_block_nc(n, k) for k in range(1, n + 1)}
        checks.append((f"even-block counts n={n}",
                       all(c * n == comb(2 * n, k - 1) * comb(n, k) for k, c in counts.items())))
        moment = sum(c * Fraction(2) ** (k - n) for k, c in counts.items())
        checks.append((f"even-block expansion gives m{2 * n}", moment == tetilla_moment_closed(n)))
    report(9, "non-crossing partition counts", checks, time.perf_counter() - start, 60)
