import cmath
import math

import numpy as np
import pytest

from parafold.series import NotAUnit, TruncatedSeries, exp_series
from parafold.normal_forms import (
    KostovNF,
    NotCanonical,
    PolynomialNF,
    kostov_check,
    lagrange_Q,
    lagrange_Q_determinant,
    poly_to_canonical_parameter,
    polynomial_nf,
    rational_nf,
)
from parafold.unfolding import EigenvalueFunction, factor_family, realize


def random_series(rng, order, decay=0.6, unit=True):
    c = (rng.uniform(-1, 1, order + 1) + 1j * rng.uniform(-1, 1, order + 1)) * decay ** np.arange(
        order + 1
    )
    if unit:
        c[0] = 1.0 + 0.4 * c[0]
    return TruncatedSeries(c)


def family_from_sigma(sigma, k):
    ef = EigenvalueFunction(k, ((k + 1) * sigma).shift_up(k).extended(sigma.order + k))
    return factor_family(realize(ef))


class TestLagrange:
    def test_constant(self):
        q = lagrange_Q(TruncatedSeries.constant(2.0 - 1.0j, 8), 3, 0.2 + 0.1j)
        assert np.abs(q - np.r_[2.0 - 1.0j, np.zeros(3)]).max() < 1e-13

    def test_identity(self):
        q = lagrange_Q(TruncatedSeries.identity(8), 2, 0.37)
        assert np.abs(q - np.array([0, 1, 0])).max() < 1e-13

    def test_hermite_limit_small_eps(self):
        q = lagrange_Q(exp_series(20), 2, 1e-12)
        assert np.abs(q - np.array([1.0, 1.0, 0.5])).max() < 1e-4

    def test_exact_coalescence(self):
        q = lagrange_Q(exp_series(20), 2, 0.0)
        assert np.abs(q - np.array([1.0, 1.0, 0.5])).max() < 1e-15

    def test_interpolates(self):
        rng = np.random.default_rng(0)
        sigma = random_series(rng, 20)
        k = 3
        eps = 0.21 + 0.33j
        q = lagrange_Q(sigma, k, eps)
        nodes = eps ** (1 / (k + 1)) * np.exp(2j * np.pi * np.arange(k + 1) / (k + 1))
        for d in nodes:
            assert abs(np.polyval(q[::-1], d) - sigma(d)) < 1e-12

    def test_matches_determinant_formula(self):
        rng = np.random.default_rng(1)
        for k in (1, 2, 4):
            sigma = random_series(rng, 18)
            eps = 0.3 * cmath.exp(2j * math.pi * rng.random())
            qa = lagrange_Q(sigma, k, eps)
            qb = lagrange_Q_determinant(sigma, k, eps)
            assert np.abs(qa - qb).max() < 1e-10

    def test_permutation_invariance_exact(self):
        rng = np.random.default_rng(2)
        sigma = random_series(rng, 14)
        k = 3
        eps = 0.4 + 0.1j
        nodes = eps ** (1 / (k + 1)) * np.exp(2j * np.pi * np.arange(k + 1) / (k + 1))
        base = lagrange_Q(sigma, k, eps, nodes=nodes)
        for perm in ([1, 0, 3, 2], [3, 2, 1, 0], [2, 3, 0, 1]):
            got = lagrange_Q(sigma, k, eps, nodes=nodes[perm])
            assert np.array_equal(base, got)


class TestPolynomialNF:
    def test_low_degree_sigma_constant_in_eps(self):
        # sigma of degree <= k: Q equals sigma for every eps
        k = 2
        sigma = TruncatedSeries([1, 0.5, -0.25], order=20)
        nf = polynomial_nf(family_from_sigma(sigma, k), eps_order=4)
        for j, c in enumerate(nf.coefficients):
            expect = np.zeros(c.order + 1, dtype=complex)
            expect[0] = sigma[j]
            assert np.abs(c.coefficients - expect).max() < 1e-12

    def test_interpolation_residual(self):
        rng = np.random.default_rng(4)
        k = 2
        sigma = random_series(rng, 24)
        spec = family_from_sigma(sigma, k)
        nf = polynomial_nf(spec, eps_order=6)
        for eps in (0.01 + 0.02j, 0.03, -0.02 + 0.005j):
            qv = nf.eval_at(eps)
            nodes = eps ** (1 / (k + 1)) * np.exp(2j * np.pi * np.arange(k + 1) / (k + 1))
            for d in nodes:
                assert abs(np.polyval(qv[::-1], d) - sigma(d)) < 1e-10

    def test_eps_zero_is_taylor(self):
        rng = np.random.default_rng(5)
        k = 3
        sigma = random_series(rng, 24)
        nf = polynomial_nf(family_from_sigma(sigma, k), eps_order=5)
        got = np.array([c[0] for c in nf.coefficients])
        assert np.abs(got - sigma.coefficients[: k + 1]).max() < 1e-8

    def test_canonicity_flag(self):
        k = 2
        # sigma with no (k+1)-class terms beyond 1: canonical parameter
        canonical = TruncatedSeries(np.r_[1.0, 0.3, 0.2, 0.0, 0.1, np.zeros(10)])
        nf = polynomial_nf(family_from_sigma(canonical, k), eps_order=3)
        assert nf.is_canonical()
        off = TruncatedSeries(np.r_[1.0, 0.3, 0.2, 0.05, np.zeros(11)])
        nf2 = polynomial_nf(family_from_sigma(off, k), eps_order=3)
        assert not nf2.is_canonical()

    def test_split_matches_sampled(self):
        rng = np.random.default_rng(6)
        k = 2
        sigma = random_series(rng, 20)
        a = polynomial_nf(sigma, k=k, eps_order=2, method="split")
        b = polynomial_nf(sigma, k=k, eps_order=2, method="sampled")
        for ca, cb in zip(a.coefficients, b.coefficients):
            assert np.abs(ca.coefficients[:3] - cb.coefficients[:3]).max() < 1e-8


class TestRationalNF:
    def test_unit_sigma(self):
        k = 2
        nf = rational_nf(TruncatedSeries.constant(1.0, 12), k=k, eps_order=3)
        assert nf.is_canonical()
        assert np.abs(nf.coefficients[0].coefficients - np.r_[1, np.zeros(3)]).max() < 1e-13

    def test_reciprocal_residual(self):
        rng = np.random.default_rng(7)
        k = 3
        sigma = random_series(rng, 24)
        nf = rational_nf(sigma, k=k, eps_order=5)
        for eps in (0.01 + 0.01j, 0.02):
            rv = nf.eval_at(eps)
            nodes = eps ** (1 / (k + 1)) * np.exp(2j * np.pi * np.arange(k + 1) / (k + 1))
            for d in nodes:
                assert abs(np.polyval(rv[::-1], d) * sigma(d) - 1.0) < 1e-10

    def test_duality(self):
        # rational coefficients of sigma == polynomial coefficients of 1/sigma
        rng = np.random.default_rng(8)
        k = 2
        sigma = random_series(rng, 26)
        ra = rational_nf(family_from_sigma(sigma, k), eps_order=5)
        recip = sigma.reciprocal()
        pb = polynomial_nf(family_from_sigma(recip, k), eps_order=5)
        for a, b in zip(ra.coefficients, pb.coefficients):
            assert np.abs(a.coefficients - b.coefficients).max() < 1e-10

    def test_requires_unit(self):
        with pytest.raises(NotAUnit):
            rational_nf(TruncatedSeries([0.0, 1.0], order=6), k=1)


class TestCanonicalParameter:
    def test_identity_on_canonical(self):
        nf = PolynomialNF(
            k=2,
            coefficients=(
                TruncatedSeries([1, 0, 0, 0, 0]),
                TruncatedSeries([0.4, 0.1, 0, 0, 0]),
                TruncatedSeries([0.2, 0, 0.3, 0, 0]),
            ),
        )
        change, out = poly_to_canonical_parameter(nf)
        assert change.is_identity
        for a, b in zip(nf.coefficients, out.coefficients):
            assert np.abs(a.coefficients - b.coefficients).max() < 1e-12

    def test_makes_constant_one(self):
        nf = PolynomialNF(
            k=2,
            coefficients=(
                TruncatedSeries([1, 1, 0, 0, 0, 0]),
                TruncatedSeries([0.5, 0, 0, 0, 0, 0]),
                TruncatedSeries([0.1, 0.2, 0, 0, 0, 0]),
            ),
        )
        change, out = poly_to_canonical_parameter(nf)
        c0 = out.coefficients[0].coefficients
        assert np.abs(c0 - np.r_[1.0, np.zeros(len(c0) - 1)]).max() < 1e-10
        assert out.is_canonical()

    def test_k1_no_branch_choice(self):
        nf = PolynomialNF(
            k=1,
            coefficients=(
                TruncatedSeries([2.0, 0.3, 0, 0, 0]),
                TruncatedSeries([0.1, 0, 0, 0, 0]),
            ),
        )
        change, out = poly_to_canonical_parameter(nf)
        # Q_eps(0)^{1/1} is Q_eps(0) itself
        assert np.abs(change.z_factor.coefficients - nf.coefficients[0].coefficients).max() < 1e-12
        assert out.is_canonical()

    def test_change_maps_are_inverse(self):
        nf = PolynomialNF(
            k=3,
            coefficients=(
                TruncatedSeries([1.0, -0.4, 0.05, 0, 0, 0]),
                TruncatedSeries([0.2, 0, 0, 0, 0, 0]),
                TruncatedSeries([0, 0.1, 0, 0, 0, 0]),
                TruncatedSeries([0.05, 0, 0, 0, 0, 0]),
            ),
        )
        change, _ = poly_to_canonical_parameter(nf)
        round_trip = change.eps_map.compose(change.eps_inverse)
        ident = TruncatedSeries.identity(round_trip.order)
        assert np.abs(round_trip.coefficients - ident.coefficients).max() < 1e-11

    def test_requires_unit(self):
        nf = PolynomialNF(
            k=1,
            coefficients=(TruncatedSeries([0.0, 1.0, 0, 0]), TruncatedSeries([1.0, 0, 0, 0])),
        )
        with pytest.raises(NotAUnit):
            poly_to_canonical_parameter(nf)


def make_kostov(rng, k, order=8):
    b = [TruncatedSeries(np.r_[0.0, -1.0, np.zeros(order - 1)])]
    for j in range(1, k):
        c = 0.2 * (rng.standard_normal(order + 1) + 1j * rng.standard_normal(order + 1))
        c[0] = 0.0  # P_0(z) = z^{k+1}
        b.append(TruncatedSeries(c))
    A = TruncatedSeries(0.3 * (rng.standard_normal(order + 1) + 1j * rng.standard_normal(order + 1)))
    return KostovNF(k=k, b=tuple(b), A=A)


class TestKostov:
    def test_self_match(self):
        rng = np.random.default_rng(9)
        nf = make_kostov(rng, 3)
        assert kostov_check(nf, nf) == 0

    def test_rotation_detected(self):
        rng = np.random.default_rng(10)
        for k in (2, 3, 5):
            nf = make_kostov(rng, k)
            for m in range(k):
                nu = cmath.exp(2j * math.pi * m / k)
                rotated = nf.rotated(nu)
                assert rotated.is_canonical()
                assert kostov_check(nf, rotated) == m

    def test_perturbed_A_rejected(self):
        rng = np.random.default_rng(11)
        nf = make_kostov(rng, 3)
        c = nf.A.coefficients.copy()
        c[2] += 1e-3
        other = KostovNF(k=3, b=nf.b, A=TruncatedSeries(c))
        assert kostov_check(nf, other) is None

    def test_requires_canonical(self):
        rng = np.random.default_rng(12)
        nf = make_kostov(rng, 2)
        bad_b0 = TruncatedSeries(np.r_[0.0, -1.0, 0.5, np.zeros(6)])
        bad = KostovNF(k=2, b=(bad_b0, nf.b[1]), A=nf.A)
        with pytest.raises(NotCanonical):
            kostov_check(bad, nf)

    def test_json_round_trip(self):
        rng = np.random.default_rng(13)
        nf = make_kostov(rng, 2)
        back = KostovNF.from_dict(nf.to_dict())
        assert kostov_check(nf, back) == 0

    def test_polynomial_nf_json_round_trip(self):
        rng = np.random.default_rng(14)
        sigma = random_series(rng, 16)
        nf = polynomial_nf(sigma, k=2, eps_order=3)
        back = PolynomialNF.from_dict(nf.to_dict())
        assert back.kind == "polynomial"
        for a, b in zip(nf.coefficients, back.coefficients):
            assert np.array_equal(a.coefficients, b.coefficients)
