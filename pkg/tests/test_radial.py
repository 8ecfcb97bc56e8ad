import math

import numpy as np
import pytest

from polytorus import radial
from polytorus.errors import ConfigError, DomainError, ResourceError
from polytorus.radial import (
    ApproachPath,
    PathStep,
    RadialScheme,
    adaptive_block_path,
    admissibility_A,
    block_path,
    build_mz_sequence,
    choose_blocks_mc,
    default_radius_grid,
    kernel_ratio,
    mz_default_sequence,
    next_block_boundary,
    path_from_text,
    path_to_text,
    step_condition_margin,
)


class TestSchemes:
    def test_diagonal(self):
        sch = RadialScheme.diagonal()
        assert [sch.exponent(j) for j in (1, 2, 7)] == [1, 2, 7]

    def test_power(self):
        sch = RadialScheme.power(2.0)
        assert [sch.exponent(j) for j in (1, 2, 3)] == [1, 4, 9]

    def test_explicit_with_diagonal_tail(self):
        sch = RadialScheme.explicit([5, 5, 7])
        assert [sch.exponent(j) for j in (1, 3, 4, 9)] == [5, 7, 4, 9]

    def test_parse(self):
        assert RadialScheme.parse("power:2.5").alpha == 2.5
        assert RadialScheme.parse("explicit:3,4").table == (3, 4)
        with pytest.raises(ConfigError):
            RadialScheme.parse("fancy")


class TestAdmissibility:
    def test_diagonal_closed_forms(self):
        a, ap = admissibility_A(RadialScheme.diagonal(), 0.5)
        assert abs(a - 1.0) < 1e-15
        assert abs(ap - 4.0) < 1e-15

    def test_zero_radius(self):
        a, ap = admissibility_A(RadialScheme.power(3.0), 0.0)
        assert a == 0.0

    def test_power_against_brute_force(self):
        # oracle: 1e5-term partial sums
        sch = RadialScheme.power(2.0)
        r = 0.9
        j = np.arange(1, 100_001, dtype=float)
        m = np.ceil(j**2.0)
        brute_a = float(np.exp(m * math.log(r)).sum())
        brute_ap = float((m * np.exp((m - 1) * math.log(r))).sum())
        a, ap = admissibility_A(sch, r, tol=1e-12)
        assert abs(a - brute_a) < 1e-10
        assert abs(ap - brute_ap) < 1e-8

    def test_explicit_against_brute_force(self):
        sch = RadialScheme.explicit([4, 4, 9])
        r = 0.8
        terms = [4, 4, 9] + list(range(4, 2000))
        brute_a = sum(r**m for m in terms)
        brute_ap = sum(m * r ** (m - 1) for m in terms)
        a, ap = admissibility_A(sch, r)
        assert abs(a - brute_a) < 1e-10
        assert abs(ap - brute_ap) < 1e-8

    def test_rejects_r_one(self):
        with pytest.raises(DomainError):
            admissibility_A(RadialScheme.diagonal(), 1.0)


class TestDefaultSequence:
    def test_values(self):
        seq = mz_default_sequence(1000)
        assert seq[0] == 0.0
        assert abs(seq[7] - 0.5) < 1e-15
        assert abs(seq[999] - 0.9) < 1e-15
        assert np.all(np.diff(seq) > 0)


class TestBuildSequence:
    def test_starts_at_half(self):
        seq = build_mz_sequence(RadialScheme.power(3.0), 0.9)
        assert seq[0] == 0.5

    def test_strictly_increasing_and_reaches(self):
        seq = build_mz_sequence(RadialScheme.power(3.0), 0.99)
        assert np.all(np.diff(seq) > 0)
        assert seq[-1] > 0.99

    def test_step_condition_every_pair(self):
        sch = RadialScheme.power(3.0)
        seq = build_mz_sequence(sch, 0.95)
        assert step_condition_margin(sch, seq) <= 1.0

    def test_three_quarter_decay_per_round(self):
        sch = RadialScheme.power(3.0)
        seq, starts = build_mz_sequence(sch, 0.99, return_rounds=True)
        # each full round (fill) must shrink the distance to 1 by at least 3/4,
        # measured from the radius just before the round to its last element
        for k in range(1, len(starts)):
            before = seq[starts[k] - 1]
            end = seq[starts[k + 1] - 1] if k + 1 < len(starts) else seq[-1]
            assert 1.0 - end <= 0.75 * (1.0 - before) + 1e-12

    def test_cap_raises(self):
        with pytest.raises(ResourceError):
            build_mz_sequence(RadialScheme.diagonal(), 0.999, max_steps=10_000)

    def test_bad_target_rejected(self):
        with pytest.raises(ConfigError):
            build_mz_sequence(RadialScheme.diagonal(), 0.4)


class TestKernelRatio:
    def test_equal_radii(self):
        th = [0.3, 1.0, 2.2]
        assert abs(kernel_ratio(0.7, 0.7, th) - 1.0) < 1e-12

    def test_one_dim_identity(self):
        r, rk = 0.9, 0.8
        val = kernel_ratio(r, rk, [0.0])
        expect = ((1 + r) / (1 - r)) * ((1 - rk) / (1 + rk))
        assert abs(val - expect) < 1e-10 * expect

    def test_multiplicative_over_coordinate_groups(self):
        rng = np.random.default_rng(0)
        th = rng.uniform(0, 2 * np.pi, size=6)
        sch = RadialScheme.explicit(list(range(1, 7)))
        left = kernel_ratio(0.8, 0.7, th, sch)
        a = kernel_ratio(0.8, 0.7, th[:3], RadialScheme.explicit([1, 2, 3]))
        b = kernel_ratio(0.8, 0.7, th[3:], RadialScheme.explicit([4, 5, 6]))
        assert abs(left - a * b) < 1e-9 * abs(left)

    def test_truncation_stability(self):
        # ratios along the reference sequence stabilise between 50 and 200 coords
        rng = np.random.default_rng(1)
        seq = mz_default_sequence(51)
        worst = 0.0
        for _ in range(200):
            k = int(rng.integers(1, 50))
            rk, rk1 = seq[k - 1], seq[k]
            r = float(rng.uniform(rk, rk1))
            th = rng.uniform(0, 2 * np.pi, size=200)
            v200 = kernel_ratio(r, rk, th)
            v50 = kernel_ratio(r, rk, th[:50])
            assert np.isfinite(v200)
            worst = max(worst, abs(v200 - v50) / abs(v50))
        assert worst < 1e-2

    def test_summand_bound_uniform(self):
        # (r_{k+1} - r_k) / (1 - r_{k+1})^4 stays bounded for the reference sequence
        k = np.arange(1, 10_001, dtype=float)
        r = 1.0 - k ** (-1.0 / 3.0)
        summand = np.diff(r) / (1.0 - r[1:]) ** 4
        assert summand.max() < 1.0


class TestPaths:
    def test_block_path_single(self):
        path = block_path([1])
        assert len(path) == 2
        assert [s.block for s in path.steps] == [(0.0,), (0.5,)]
        assert path.monotone

    def test_block_path_two_blocks(self):
        path = block_path([2, 3])
        assert len(path) == 4 + 2
        late = path.steps[4]
        assert late.head_len == 2
        assert late.head_radius == 1.0 - 1.0 / 2.0
        assert late.block in ((0.0,), (0.5,))

    def test_block_path_width_cap(self):
        with pytest.raises(ConfigError):
            block_path([25])

    def test_enumeration_is_complete(self):
        path = block_path([2])
        assert sorted(s.block for s in path.steps) == [
            (0.0, 0.0), (0.0, 0.5), (0.5, 0.0), (0.5, 0.5)]

    def test_all_radii_in_unit_interval(self):
        path = block_path([2, 4, 5])
        for s in path.steps:
            assert 0.0 <= s.head_radius < 1.0
            assert all(0.0 <= b < 1.0 for b in s.block)

    def test_serialization_roundtrip(self):
        path = block_path([2, 3])
        text = path_to_text(path)
        back = path_from_text(text)
        assert back == path
        assert path_to_text(back) == text

    def test_monotone_flag_honest_for_wide_blocks(self):
        # enumerating all tuples of a width-2 block necessarily revisits 0
        assert not block_path([2]).monotone


class TestChooseBlocks:
    def test_expected_scale(self):
        # oracle: E|cos| = 2/pi, so sums of |cos(theta_n)|/n reach 1 around
        # N = m * e^(pi/2); the returned boundary should sit within 2x
        rng = np.random.default_rng(2)
        m = 100
        n = next_block_boundary(m, 0.5, 4000, rng)
        centre = m * math.exp(math.pi / 2.0)
        assert centre / 2 <= n <= centre * 2

    def test_degenerate_threshold(self):
        rng = np.random.default_rng(3)
        assert next_block_boundary(10, 0.0, 500, rng) == 11

    def test_monotone_in_p0(self):
        lo = next_block_boundary(20, 0.5, 3000, np.random.default_rng(4))
        hi = next_block_boundary(20, 0.95, 3000, np.random.default_rng(4))
        assert hi >= lo

    def test_chain(self):
        rng = np.random.default_rng(5)
        bounds = choose_blocks_mc(0.9, 1000, rng, count=3)
        assert len(bounds) == 3
        assert bounds[0] < bounds[1] < bounds[2]


class TestAdaptivePath:
    def test_constant_oracle_block_sizes(self):
        # with unit mass per coordinate, block l needs ceil(4^l) coordinates
        def oracle(ns, th, radii):
            return np.ones(len(ns)), np.full(len(ns), radii[-1])

        res = adaptive_block_path(oracle, np.zeros(1000), levels=3, coord_cap=1000)
        assert res.reached
        assert res.boundaries == (4, 20, 84)
        assert res.block_sums == (4.0, 16.0, 64.0)

    def test_zero_oracle_partial_report(self):
        def oracle(ns, th, radii):
            return np.zeros(len(ns)), np.zeros(len(ns))

        res = adaptive_block_path(oracle, np.zeros(500), levels=2, coord_cap=500)
        assert not res.reached
        assert res.boundaries == (500,)
        assert res.block_sums == (0.0,)

    def test_path_is_monotone_and_inside_disc(self):
        rng = np.random.default_rng(6)

        def oracle(ns, th, radii):
            vals = rng.uniform(0.5, 1.0, size=len(ns))
            return vals, np.full(len(ns), radii[len(radii) // 2])

        res = adaptive_block_path(oracle, np.zeros(2000), levels=2, coord_cap=2000)
        assert res.reached
        assert res.path.monotone
        for s in res.path.steps:
            assert s.head_radius < 1.0
            assert all(b < 1.0 for b in s.block)

    def test_theta_must_cover_cap(self):
        def oracle(ns, th, radii):
            return np.ones(len(ns)), np.ones(len(ns))

        with pytest.raises(ConfigError):
            adaptive_block_path(oracle, np.zeros(10), levels=1, coord_cap=100)


class TestPathText:
    def test_step_line_format(self):
        step = PathStep(3, 0.5, (0.0, 0.25))
        text = path_to_text(ApproachPath((step,)))
        assert text == "3 0.5 | 0,0.25\n"

    def test_bit_exact_floats(self):
        vals = (1.0 - 1e-6, 1 / 3, 0.1)
        path = ApproachPath((PathStep(1, vals[0], vals[1:]),))
        back = path_from_text(path_to_text(path))
        assert back.steps[0].head_radius == vals[0]
        assert back.steps[0].block == vals[1:]
