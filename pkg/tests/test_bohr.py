import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from polytorus import bohr
from polytorus.errors import DomainError, SpectrumError


def mi(*pairs):
    return bohr.MultiIndex(pairs)


class TestMultiIndex:
    def test_canonical_form(self):
        assert mi((3, 1), (1, 2)).entries == ((1, 2), (3, 1))
        assert mi((1, 1), (1, -1)).entries == ()
        assert mi() == bohr.EMPTY_INDEX

    def test_derived_quantities(self):
        nu = mi((1, 2), (3, -1))
        assert nu.order == 3
        assert nu.diagonal_sum == 1
        assert nu.max_coordinate == 3
        assert nu.weighted_degree() == 1 * 2 + 3 * 1
        assert nu.signature() == 1 * 2 - 3 * 1

    def test_hash_respects_canonical_form(self):
        assert hash(mi((2, 1), (1, 1))) == hash(mi((1, 1), (2, 1)))
        assert mi((2, 1)) != mi((2, 2))

    def test_rejects_bad_coordinates(self):
        with pytest.raises(Exception):
            mi((0, 1))


class TestFactorisation:
    @pytest.mark.parametrize(
        "n,entries",
        [
            (1, ()),                      # multiplicative identity
            (12, ((1, 2), (2, 1))),       # 2^2 * 3
            (50, ((1, 1), (3, 2))),       # 2 * 5^2
        ],
    )
    def test_examples(self, n, entries):
        assert bohr.index_of_integer(n).entries == entries

    @pytest.mark.parametrize(
        "entries,n",
        [((), 1), (((2, 1),), 3), (((1, 3), (4, 1)), 56)],
    )
    def test_integer_of_index_examples(self, entries, n):
        assert bohr.integer_of_index(bohr.MultiIndex(entries)) == n

    def test_zero_rejected(self):
        with pytest.raises(DomainError):
            bohr.index_of_integer(0)

    def test_negative_exponent_rejected(self):
        with pytest.raises(DomainError):
            bohr.integer_of_index(mi((1, -1)))

    def test_overflow_rejected(self):
        with pytest.raises(DomainError):
            bohr.integer_of_index(mi((1, 70)))

    @given(st.integers(min_value=1, max_value=10**6))
    @settings(max_examples=300, deadline=None)
    def test_roundtrip(self, n):
        assert bohr.integer_of_index(bohr.index_of_integer(n)) == n

    @given(st.integers(min_value=1, max_value=10**4), st.integers(min_value=1, max_value=10**4))
    @settings(max_examples=200, deadline=None)
    def test_multiplicativity(self, a, b):
        left = bohr.index_of_integer(a * b)
        right = bohr.index_of_integer(a) + bohr.index_of_integer(b)
        assert left == right

    def test_large_prime_factor_grows_sieve(self):
        p = 1_000_003  # first prime past the default bound
        nu = bohr.index_of_integer(p)
        assert bohr.integer_of_index(nu) == p


class TestLift:
    def test_constant(self):
        d = bohr.DirichletSeries({1: 1.0})
        f = bohr.lift_dirichlet(d)
        assert f.coefficient(bohr.EMPTY_INDEX) == 1.0
        assert f.dim == 0

    def test_six(self):
        d = bohr.DirichletSeries({6: 2.5})
        f = bohr.lift_dirichlet(d)
        assert f.coefficient(mi((1, 1), (2, 1))) == 2.5

    def test_roundtrip_support(self):
        d = bohr.DirichletSeries({2: 1.0, 3: -2.0, 4: 1j, 5: 0.5, 6: 2.0, 12: -1.5})
        assert bohr.unlift(bohr.lift_dirichlet(d)) == d

    def test_roundtrip_random(self):
        import numpy as np

        rng = np.random.default_rng(5)
        for _ in range(100):
            ns = rng.integers(1, 5000, size=8)
            d = bohr.DirichletSeries({int(n): complex(rng.normal(), rng.normal()) for n in ns})
            assert bohr.unlift(bohr.lift_dirichlet(d)) == d

    def test_unlift_requires_analytic(self):
        from polytorus.series import FourierSeries

        f = FourierSeries({mi((1, -1)): 1.0})
        with pytest.raises(SpectrumError):
            bohr.unlift(f)

    def test_lift_of_dirichlet_convolution_is_coefficient_product(self):
        a = bohr.DirichletSeries({1: 1.0, 2: 3.0, 5: -1.0})
        b = bohr.DirichletSeries({3: 2.0, 4: 1.0})
        lhs = bohr.lift_dirichlet(a.convolve(b))
        rhs = bohr.lift_dirichlet(a) * bohr.lift_dirichlet(b)
        assert lhs == rhs


class TestDirichletEval:
    def test_constant(self):
        d = bohr.DirichletSeries({1: 1.0})
        assert bohr.dirichlet_eval(d, 3.7 + 2j) == 1.0

    def test_dyadic(self):
        d = bohr.DirichletSeries({1: 1.0, 2: 1.0, 4: 1.0})
        assert abs(bohr.dirichlet_eval(d, 1.0) - 1.75) < 1e-15

    def test_zeta_partial(self):
        # oracle: the tail sum_{n>100} n^-2 is below integral_100^inf x^-2 dx = 0.01
        d = bohr.DirichletSeries({n: 1.0 for n in range(1, 101)})
        val = bohr.dirichlet_eval(d, 2.0, 100)
        assert abs(val - math.pi**2 / 6.0) < 0.01

    def test_cutoff_below_support_rejected(self):
        d = bohr.DirichletSeries({8: 1.0})
        with pytest.raises(Exception):
            bohr.dirichlet_eval(d, 1.0, 4)
