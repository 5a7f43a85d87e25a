import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate

from oracles import moments_from_cumulants_bruteforce
from tetilla.combinatorics import catalan
from tetilla.errors import CapacityError, PreconditionError
from tetilla.transforms import (TETILLA_EDGE, Distribution, cardano_roots, cauchy_cubic_residual,
                                cauchy_transform_tetilla, cumulants_from_moments, density_from_cauchy,
                                density_moment, moments_from_cumulants, semicircular_density, tetilla_cumulant,
                                tetilla_cumulants, tetilla_density, tetilla_moment_closed, tetilla_r_transform)

# Frozen from the split-sum recursion, the closed form and the NC sum, which agree exactly.
TETILLA_EVEN = [Fraction(1), Fraction(5, 2), Fraction(33, 4), Fraction(249, 8), Fraction(2033, 16),
                Fraction(17485, 32)]


class TestMomentCumulant:
    def test_semicircular_gives_catalan(self):
        m = moments_from_cumulants([0, 1, 0, 0, 0, 0, 0, 0], 8)
        assert m == [0, 1, 0, 2, 0, 5, 0, 14]

    def test_tetilla_m4(self):
        m = moments_from_cumulants([0, 1, 0, Fraction(1, 2)], 4)
        assert m[3] == Fraction(5, 2)

    def test_single_block(self):
        assert moments_from_cumulants([Fraction(7)], 1) == [Fraction(7)]

    @pytest.mark.parametrize("method", ["recursion", "enumerate"])
    def test_matches_bruteforce(self, method):
        kappa = [Fraction(1, 3), Fraction(2), Fraction(-1, 5), Fraction(1, 7), Fraction(3), Fraction(-2, 9), Fraction(1)]
        assert moments_from_cumulants(kappa, 7, method=method) == moments_from_cumulants_bruteforce(kappa, 7)

    def test_tetilla_even_moments(self):
        m = moments_from_cumulants(tetilla_cumulants(12), 12)
        assert m[1::2] == TETILLA_EVEN and all(x == 0 for x in m[0::2])

    def test_methods_agree_to_order_12(self):
        k = tetilla_cumulants(12)
        assert moments_from_cumulants(k, 12, "enumerate") == moments_from_cumulants(k, 12)

    def test_inverse_examples(self):
        assert cumulants_from_moments([0, 1, 0, 2], 4) == [0, 1, 0, 0]
        assert cumulants_from_moments(moments_from_cumulants(tetilla_cumulants(6)), 6)[:4] == \
            [0, 1, 0, Fraction(1, 2)]
        assert cumulants_from_moments([Fraction(3)], 1) == [Fraction(3)]

    def test_round_trip_to_16(self):
        k = tetilla_cumulants(16)
        assert cumulants_from_moments(moments_from_cumulants(k, 16), 16) == k

    def test_capacity_and_length(self):
        with pytest.raises(CapacityError):
            moments_from_cumulants([0] * 17, 17)
        with pytest.raises(PreconditionError):
            moments_from_cumulants([1, 2], 3)
        with pytest.raises(PreconditionError):
            moments_from_cumulants([1, 2], 2, method="magic")

    def test_distribution_specs(self):
        assert Distribution("semicircular", Fraction(2)).moments(4) == [0, 2, 0, 8]
        assert Distribution("free-poisson-square").moments(4) == [catalan(k) for k in range(1, 5)]
        assert Distribution("tetilla").cumulants(4) == [0, 1, 0, Fraction(1, 2)]
        with pytest.raises(PreconditionError):
            Distribution("tetilla", Fraction(0))
        with pytest.raises(PreconditionError):
            Distribution("cauchy")


@settings(max_examples=30, deadline=None)
@given(st.lists(st.fractions(min_value=-3, max_value=3, max_denominator=7), min_size=1, max_size=9))
def test_cumulant_round_trip_property(kappa):
    K = len(kappa)
    assert cumulants_from_moments(moments_from_cumulants(kappa, K), K) == kappa


class TestTetillaClosedForms:
    def test_cumulants(self):
        assert [tetilla_cumulant(m) for m in (2, 4, 3, 6)] == [1, Fraction(1, 2), 0, Fraction(1, 4)]

    def test_r_transform_series(self):
        z = 0.1
        series = sum(float(tetilla_cumulant(m)) * z**m for m in range(1, 40))
        assert tetilla_r_transform(z) == pytest.approx(series, rel=1e-14)

    def test_closed_moments(self):
        assert [tetilla_moment_closed(n) for n in range(1, 7)] == TETILLA_EVEN
        with pytest.raises(PreconditionError):
            tetilla_moment_closed(0)


class TestDensities:
    def test_semicircular(self):
        assert semicircular_density(0.0, 1.0) == pytest.approx(1 / math.pi)
        assert semicircular_density(2.0, 1.0) == 0.0
        assert semicircular_density(0.0, 4.0) == pytest.approx(1 / (2 * math.pi))
        with pytest.raises(PreconditionError):
            semicircular_density(0.0, 0.0)

    def test_tetilla_near_zero(self):
        assert tetilla_density(0.0) == pytest.approx(math.sqrt(2) / math.pi)
        # The series branch and the closed formula meet smoothly.
        assert tetilla_density(2e-6) == pytest.approx(tetilla_density(0.0), rel=1e-9)
        assert tetilla_density(1e-3) == pytest.approx(math.sqrt(2) / math.pi * (1 - 3e-6), rel=1e-6)

    def test_tetilla_support(self):
        assert TETILLA_EDGE == pytest.approx(2.354800410199, abs=1e-12)
        assert tetilla_density(TETILLA_EDGE + 1e-9) == 0.0
        assert tetilla_density(-3.0) == 0.0
        assert tetilla_density(0.7) == tetilla_density(-0.7) > 0

    def test_moments(self):
        assert density_moment(0) == pytest.approx(1.0, abs=1e-8)
        for k, target in [(2, 1.0), (4, 2.5), (6, 8.25)]:
            assert density_moment(k) == pytest.approx(target, abs=1e-6)
        assert density_moment(3) == 0.0


class TestCauchy:
    def test_cardano_simple(self):
        roots = sorted(cardano_roots(1, -6, 11, -6), key=lambda y: y.real)
        assert np.allclose(roots, [1, 2, 3], atol=1e-12)

    def test_cardano_matches_numpy(self):
        coeffs = [2 + 1j, -1, 3j, 0.5]
        ours = sorted(cardano_roots(*coeffs), key=lambda y: (y.real, y.imag))
        ref = sorted(np.roots(coeffs), key=lambda y: (y.real, y.imag))
        assert np.allclose(ours, ref, atol=1e-12)

    @pytest.mark.parametrize("z", [2j, 1 + 0.5j, -1.5 + 0.01j, 10j])
    def test_against_quadrature(self, z):
        re = integrate.quad(lambda t: (1 / (z - t)).real * tetilla_density(t),
                            -TETILLA_EDGE, TETILLA_EDGE, limit=400)[0]
        im = integrate.quad(lambda t: (1 / (z - t)).imag * tetilla_density(t),
                            -TETILLA_EDGE, TETILLA_EDGE, limit=400)[0]
        assert cauchy_transform_tetilla(z) == pytest.approx(complex(re, im), abs=1e-7)

    def test_large_z_behaves_like_one_over_z(self):
        z = 1e3j
        assert cauchy_transform_tetilla(z) * z == pytest.approx(1.0, abs=1e-5)

    def test_residual(self):
        z = 0.3 + 1e-6j
        assert cauchy_cubic_residual(z, cauchy_transform_tetilla(z)) <= 1e-10

    def test_requires_upper_half_plane(self):
        with pytest.raises(PreconditionError):
            cauchy_transform_tetilla(1.0)
        with pytest.raises(PreconditionError):
            density_from_cauchy(0.0, eps=0.0)

    def test_stieltjes_points(self):
        assert density_from_cauchy(0.0) == pytest.approx(tetilla_density(0.0), abs=1e-5)
        assert density_from_cauchy(1.0) == pytest.approx(tetilla_density(1.0), abs=1e-5)
        assert density_from_cauchy(5.0) == pytest.approx(0.0, abs=1e-6)
