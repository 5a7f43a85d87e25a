from fractions import Fraction

import pytest

from tetilla.errors import PreconditionError
from tetilla.identities import (FLOAT_RTOL, contr_link_index_tuples, forbid_walk_index_pairs, nondegeneracy_check,
                                report_records, run_suite, verify_contr_link, verify_forbid_walks, verify_lm1)
from tetilla.kernels import Grid, random_mirror_symmetric_kernel, reference_tetilla_kernel

REF = reference_tetilla_kernel()


def rand(q, cells=2, seed=0, exact=True):
    return random_mirror_symmetric_kernel(q, Grid(1, cells), seed, exact=exact)


class TestIndexSets:
    def test_contr_link_tuples(self):
        assert contr_link_index_tuples(2, 1) == [] and contr_link_index_tuples(2, 2) == []
        assert contr_link_index_tuples(3, 1) == [(1, 2, 2, 1)] and contr_link_index_tuples(3, 2) == []
        assert len(contr_link_index_tuples(4, 1)) == 4 and contr_link_index_tuples(4, 2) == [(1, 2, 2, 1)]
        assert (1, 1) in contr_link_index_tuples(2, 3)
        assert (1, 2, 2, 1) in contr_link_index_tuples(4, 1)

    def test_variant3_bounds(self):
        for q in (2, 3, 4):
            for r, s in contr_link_index_tuples(q, 3):
                assert r <= q and s <= min(q, 2 * q - 2 * r) and r + s >= q

    def test_forbid_pairs(self):
        assert forbid_walk_index_pairs(2) == []
        assert forbid_walk_index_pairs(3) == [(2, 3)]
        assert forbid_walk_index_pairs(4) == [(3, 3), (3, 4)]

    def test_unknown_variant(self):
        with pytest.raises(PreconditionError):
            contr_link_index_tuples(3, 4)


class TestContrLink:
    def test_reference_variant3(self):
        chk = verify_contr_link(REF, 3, (1, 1))
        assert chk.lhs == Fraction(1, 4) == chk.rhs and chk.discrepancy == 0 and chk.holds

    def test_variant1_q4(self):
        f = rand(4, seed=3)
        assert verify_contr_link(f, 1, (1, 2, 2, 1)).discrepancy == 0

    def test_variant2_requires_strict_order(self):
        f = rand(4)
        with pytest.raises(PreconditionError):
            verify_contr_link(f, 2, (2, 1, 2, 1))

    def test_inadmissible(self):
        with pytest.raises(PreconditionError):
            verify_contr_link(rand(3), 1, (1, 1, 1, 1))
        with pytest.raises(PreconditionError):
            verify_contr_link(rand(3), 7, (1, 2))

    @pytest.mark.parametrize("q", [2, 3, 4])
    def test_all_tuples_exact(self, q):
        f = rand(q, seed=q + 20)
        for variant in (1, 2, 3):
            for idx in contr_link_index_tuples(q, variant):
                assert verify_contr_link(f, variant, idx).discrepancy == 0


class TestLm1:
    def test_reference(self):
        chk = verify_lm1(REF)
        assert chk.lhs == 1 and chk.rhs == 1 and chk.identity == "lm1"

    @pytest.mark.parametrize("q", [2, 4])
    def test_even_exact(self, q):
        assert verify_lm1(rand(q, seed=5)).discrepancy == 0

    def test_odd_float(self):
        chk = verify_lm1(rand(3, cells=3, seed=6, exact=False))
        assert chk.identity == "lm1-odd" and chk.mode == "float"
        assert chk.discrepancy <= FLOAT_RTOL * max(1.0, chk.scale)

    def test_odd_exact(self):
        assert verify_lm1(rand(3, seed=7)).discrepancy == 0

    def test_order_one(self):
        with pytest.raises(PreconditionError):
            verify_lm1(rand(1))


class TestForbidWalks:
    def test_boundary_is_rejected(self):
        with pytest.raises(PreconditionError):
            verify_forbid_walks(rand(2), rand(2), 1, 2)

    def test_r_prime_above_q(self):
        with pytest.raises(PreconditionError):
            verify_forbid_walks(rand(2), rand(2), 1, 3)

    def test_q3_exact(self):
        chk = verify_forbid_walks(rand(2, seed=1), rand(3, seed=2), 2, 3)
        assert chk.discrepancy == 0 and chk.holds
        assert chk.lhs == chk.rhs

    def test_partner_order_too_small(self):
        # r' + 2r - 2q = 2 exceeds p = 1.
        with pytest.raises(PreconditionError):
            verify_forbid_walks(rand(1), rand(4), 3, 4)

    @pytest.mark.parametrize("q", [3, 4])
    def test_all_pairs(self, q):
        f = rand(q, seed=40 + q)
        for r, r2 in forbid_walk_index_pairs(q):
            for p in (1, 2):
                if r2 + 2 * r - 2 * q <= p:
                    assert verify_forbid_walks(rand(p, seed=p), f, r, r2).discrepancy == 0


class TestNondegeneracy:
    def test_reference(self):
        res = nondegeneracy_check(REF)
        assert res.norm_T == Fraction(1, 2) and res.pairing_gap == 0

    def test_q3_positive(self):
        res = nondegeneracy_check(rand(3, seed=8))
        assert res.norm_T > 0 and res.pairing is None and res.pairing_gap is None

    def test_preconditions(self):
        with pytest.raises(PreconditionError):
            nondegeneracy_check(REF * 2)
        with pytest.raises(PreconditionError):
            nondegeneracy_check(rand(1))


class TestRunSuite:
    @pytest.mark.parametrize("suite", ["contr-link", "lm1", "forbid-walks", "nondegeneracy"])
    @pytest.mark.parametrize("q", [2, 3, 4])
    def test_suites_hold(self, suite, q):
        results = run_suite(suite, q, 2, seed=1, reps=5)
        assert all(r.holds for r in results)

    def test_float_mode(self):
        results = run_suite("all", 3, 3, seed=2, reps=3, mode="float")
        assert results and all(r.holds and r.mode in ("float", "rational") for r in results)

    def test_records(self):
        recs = report_records(run_suite("lm1", 2, 2, seed=1, reps=2))
        assert recs == [{"identity": "lm1", "q": 2, "indices": [], "discrepancy": "0", "mode": "rational"}] * 2

    def test_deterministic(self):
        a = report_records(run_suite("all", 3, 2, seed=9, reps=2, mode="float"))
        b = report_records(run_suite("all", 3, 2, seed=9, reps=2, mode="float"))
        assert a == b

    def test_bad_arguments(self):
        for kwargs in ({"suite": "nope"}, {"mode": "decimal"}, {"reps": 0}):
            args = {"suite": "lm1", "q": 2, "cells": 2, "seed": 0, "reps": 1, **kwargs}
            with pytest.raises(PreconditionError):
                run_suite(**args)
