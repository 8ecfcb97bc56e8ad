import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from polytorus import series
from polytorus.bohr import EMPTY_INDEX, MultiIndex
from polytorus.errors import ConfigError, DomainError
from polytorus.series import FourierSeries, SpectrumClass, TorusPoint


def mono(pairs, c=1.0):
    return FourierSeries({MultiIndex(pairs): c})


def random_poly(rng, terms=6, dim=4, max_exp=2, signed=False):
    out = {}
    for _ in range(terms):
        support = rng.integers(1, dim + 1)
        coords = rng.choice(np.arange(1, dim + 1), size=support, replace=False)
        exps = rng.integers(1, max_exp + 1, size=support)
        if signed:
            exps = exps * np.where(rng.uniform(size=support) < 0.5, -1, 1)
        out[MultiIndex(zip(coords.tolist(), exps.tolist()))] = complex(rng.normal(), rng.normal())
    return FourierSeries(out)


class TestAbschnitt:
    def test_definition(self):
        f = mono([(1, 1)]) + mono([(3, 1)])
        assert series.abschnitt(f, 2) == mono([(1, 1)])

    def test_idempotent_beyond_dim(self):
        rng = np.random.default_rng(0)
        f = random_poly(rng)
        assert series.abschnitt(f, f.dim) == f
        assert series.abschnitt(f, f.dim + 5) == f

    def test_matches_zero_padded_evaluation(self):
        # identity: truncation equals evaluation with later coordinates set to 0
        rng = np.random.default_rng(1)
        for _ in range(20):
            f = random_poly(rng, dim=5, signed=True)
            m = int(rng.integers(1, 6))
            z = np.exp(1j * rng.uniform(0, 2 * np.pi, size=5)) * rng.uniform(0.2, 1.0, size=5)
            padded = list(z[:m]) + [0.0] * (5 - m)
            lhs = series.evaluate(series.abschnitt(f, m), z)
            rhs = series.evaluate(f, padded)
            assert abs(lhs - rhs) < 1e-12

    def test_rejects_zero(self):
        with pytest.raises(ConfigError):
            series.abschnitt(mono([(1, 1)]), 0)


class TestSpectrum:
    def test_analytic(self):
        assert series.spectrum_class(mono([(1, 1), (2, 1)])) is SpectrumClass.ANALYTIC

    def test_pm(self):
        f = mono([(1, 1)]) + mono([(2, -1)])
        assert series.spectrum_class(f) is SpectrumClass.PM_ANALYTIC

    def test_big(self):
        f = mono([(1, 1), (2, -1)])  # mixed signs, exponent sum 0
        assert series.spectrum_class(f) is SpectrumClass.BIG

    def test_general(self):
        f = mono([(1, 1), (2, -3)])
        assert series.spectrum_class(f) is SpectrumClass.GENERAL

    def test_constant_is_analytic(self):
        assert series.spectrum_class(FourierSeries.constant(2.0)) is SpectrumClass.ANALYTIC


class TestEvaluate:
    def test_product_monomial(self):
        f = mono([(1, 1), (2, 1)])
        val = series.evaluate(f, [0.5, 0.5j])
        assert abs(val - 0.25j) < 1e-15

    def test_conjugate_convention(self):
        f = mono([(1, -1)])
        z = 0.7 * cmath.exp(0.3j)
        assert abs(series.evaluate(f, [z]) - 0.7 * cmath.exp(-0.3j)) < 1e-15

    def test_missing_coordinates_are_zero(self):
        f = FourierSeries.constant(1.0) + mono([(1, 1)])
        assert series.evaluate(f, [0.0]) == 1.0
        assert series.evaluate(f, []) == 1.0

    def test_outside_disc_rejected(self):
        with pytest.raises(DomainError):
            series.evaluate(mono([(1, 1)]), [1.5])

    def test_batch_matches_scalar(self):
        rng = np.random.default_rng(2)
        f = random_poly(rng, signed=True)
        z = np.exp(1j * rng.uniform(0, 2 * np.pi, size=(7, 4)))
        batch = series.evaluate_batch(f, z)
        for i in range(7):
            assert abs(batch[i] - series.evaluate(f, z[i])) < 1e-12


class TestNorms:
    def test_wiener(self):
        assert series.wiener_norm(FourierSeries()) == 0.0
        f = 3.0 * mono([(1, 1)]) + (-4j) * mono([(2, 1)])
        assert series.wiener_norm(f) == 7.0

    def test_l2(self):
        f = mono([(1, 1)]) + mono([(2, 1)])
        assert abs(series.l2_norm(f) - math.sqrt(2)) < 1e-15
        nine = FourierSeries({MultiIndex([(j, 1)]): cmath.exp(1j * j) for j in range(1, 10)})
        assert abs(series.l2_norm(nine) - 3.0) < 1e-12

    def test_wiener_contracts_under_twist(self):
        from polytorus.extension import twist

        rng = np.random.default_rng(3)
        for _ in range(20):
            f = random_poly(rng, signed=True)
            xi = rng.uniform(0, 1) * cmath.exp(1j * rng.uniform(0, 2 * np.pi))
            assert series.wiener_norm(twist(f, xi)) <= series.wiener_norm(f) + 1e-12

    def test_lp_constant_exact(self):
        rng = np.random.default_rng(4)
        est, se = series.lp_norm_mc(FourierSeries.constant(2 - 1j), 3.0, 50, rng)
        assert abs(est - abs(2 - 1j)) < 1e-12
        assert se < 1e-15  # zero variance up to rounding of |c|^p

    def test_lp_single_monomial(self):
        rng = np.random.default_rng(5)
        est, se = series.lp_norm_mc(mono([(1, 1)]), 2.0, 4000, rng)
        assert abs(est - 1.0) <= max(3 * se, 1e-9)

    def test_lp_fourth_moment(self):
        # oracle: E|z1+z2|^4 = E(2+2cos)^2 = 4 + 0 + 2 = 6
        rng = np.random.default_rng(6)
        f = mono([(1, 1)]) + mono([(2, 1)])
        est, se = series.lp_norm_mc(f, 4.0, 20000, rng)
        assert abs(est - 6.0**0.25) <= 3 * se

    def test_l2_matches_mc(self):
        rng = np.random.default_rng(7)
        for _ in range(10):
            f = random_poly(rng, signed=True)
            est, se = series.lp_norm_mc(f, 2.0, 20000, rng)
            assert abs(est - series.l2_norm(f)) <= 3 * se + 1e-9

    def test_lp_requires_samples(self):
        with pytest.raises(ConfigError):
            series.lp_norm_mc(mono([(1, 1)]), 2.0, 1, np.random.default_rng(0))


class TestDiagonalRestriction:
    def test_single_variable(self):
        r = series.diagonal_restriction(mono([(1, 1)]), [0.8])
        assert abs(r.coefficient(MultiIndex([(1, 1)])) - cmath.exp(0.8j)) < 1e-15

    def test_zero_frequency_term(self):
        f = mono([(1, 1), (2, -1)])
        r = series.diagonal_restriction(f, [0.5, 0.2])
        assert abs(r.coefficient(EMPTY_INDEX) - cmath.exp(1j * 0.3)) < 1e-15

    def test_analytic_has_no_negative_frequencies(self):
        rng = np.random.default_rng(8)
        f = random_poly(rng)
        r = series.diagonal_restriction(f, rng.uniform(0, 2 * np.pi, size=f.dim))
        assert all(nu.diagonal_sum >= 0 for nu, _ in r.items())

    def test_rotation_identity(self):
        # evaluating the restriction at t equals evaluating F at (theta_j + t)
        rng = np.random.default_rng(9)
        for _ in range(20):
            f = random_poly(rng, signed=True)
            th = rng.uniform(0, 2 * np.pi, size=max(f.dim, 1))
            t = float(rng.uniform(0, 2 * np.pi))
            restricted = series.diagonal_restriction(f, th)
            lhs = series.evaluate(restricted, TorusPoint([t]))
            rhs = series.evaluate(f, TorusPoint(th + t))
            assert abs(lhs - rhs) < 1e-10

    def test_zero_coeff_mean_over_theta_is_constant_term(self):
        # the theta-average of the 0-frequency coefficient recovers a_0
        rng = np.random.default_rng(10)
        f = random_poly(rng, signed=True) + FourierSeries.constant(0.7)
        acc = 0j
        n = 400
        for i in range(n):
            th = rng.uniform(0, 2 * np.pi, size=f.dim)
            acc += series.diagonal_restriction(f, th).coefficient(EMPTY_INDEX)
        assert abs(acc / n - 0.7) < 0.1


class TestLinearity:
    @given(st.integers(min_value=0, max_value=2**31 - 1))
    @settings(max_examples=25, deadline=None)
    def test_abschnitt_and_restriction_linear(self, seed):
        rng = np.random.default_rng(seed)
        f = random_poly(rng, signed=True)
        g = random_poly(rng, signed=True)
        a, b = complex(rng.normal(), rng.normal()), complex(rng.normal(), rng.normal())
        m = int(rng.integers(1, 6))
        lhs = series.abschnitt(a * f + b * g, m)
        rhs = a * series.abschnitt(f, m) + b * series.abschnitt(g, m)
        assert lhs == rhs
        th = rng.uniform(0, 2 * np.pi, size=4)
        lhs2 = series.diagonal_restriction(a * f + b * g, th)
        rhs2 = a * series.diagonal_restriction(f, th) + b * series.diagonal_restriction(g, th)
        for nu in set(n for n, _ in lhs2.items()) | set(n for n, _ in rhs2.items()):
            assert abs(lhs2.coefficient(nu) - rhs2.coefficient(nu)) < 1e-12


class TestTextForm:
    def test_roundtrip_bit_exact(self):
        rng = np.random.default_rng(11)
        for _ in range(25):
            f = random_poly(rng, signed=True) + FourierSeries.constant(rng.normal())
            assert series.from_text(series.to_text(f)) == f

    def test_canonical_line(self):
        f = mono([(1, 2), (2, 1)])
        assert series.to_text(f) == "1:2,2:1 -> 1,0\n"

    def test_empty_index_line(self):
        assert series.to_text(FourierSeries.constant(0.5)) == "- -> 0.5,0\n"

    def test_sorted_output(self):
        f = mono([(2, 1)]) + mono([(1, 1)])
        lines = series.to_text(f).splitlines()
        assert lines == sorted(lines)
