import warnings
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wallachflow.core import Parameters
from wallachflow.equilibria import (
    CensusWarning,
    FamilyTag,
    newton_census,
    normalize_unit_volume,
    quartic_coefficients,
    quartic_discriminant,
    residual,
    solve_all,
    solve_general,
    solve_sum_half,
    solve_two_equal,
)
from wallachflow.flow import MetricPoint, log_volume

wallach = st.fractions(
    min_value=Fraction(1, 18), max_value=Fraction(9, 20), max_denominator=24
)


def keys(rays):
    return sorted(r.key() for r in rays)


class TestResidual:
    @pytest.mark.parametrize(
        "a, x",
        [
            ((Fraction(1, 6),) * 3, (1, 2, 1)),
            ((Fraction(1, 8), Fraction(1, 8), Fraction(1, 4)), (Fraction(3, 4), Fraction(3, 4), Fraction(1, 2))),
            ((Fraction(1, 4),) * 3, (1, 1, 1)),
        ],
    )
    def test_known_equilibria(self, a, x):
        p = Parameters(*a)
        assert residual(p, MetricPoint(*x)) == (0, 0)

    @given(wallach, wallach, wallach,
           st.fractions(min_value=Fraction(1, 5), max_value=5, max_denominator=12))
    @settings(max_examples=50)
    def test_degree_two_homogeneity(self, a1, a2, a3, lam):
        p = Parameters(a1, a2, a3)
        x = MetricPoint(Fraction(2, 3), Fraction(7, 5), Fraction(1, 2))
        base = residual(p, x)
        scaled = residual(p, x.scaled(lam))
        assert scaled == (lam * lam * base[0], lam * lam * base[1])


class TestTwoEqualCase:
    def test_all_equal_generic(self):
        rays, disc = solve_two_equal(Fraction(1, 6), Fraction(1, 6))
        assert disc.D1 == Fraction(1, 9)
        reps = keys(rays)
        assert reps == [(0.5, 0.5), (1.0, 1.0), (1.0, 2.0), (2.0, 1.0)]
        assert all(r.rep.exact for r in rays)

    def test_quarter_collapses_to_diagonal(self):
        rays, disc = solve_two_equal(Fraction(1, 4), Fraction(1, 4))
        assert disc.D1 == 0 and disc.T == 0
        merged = {r.key() for r in rays}
        assert merged == {(1.0, 1.0)}

    def test_seven_fifteenths(self):
        rays, _ = solve_two_equal(Fraction(7, 15), Fraction(7, 15))
        inv14 = float(Fraction(1, 14))
        assert keys(rays) == [(inv14, 1.0), (1.0, inv14), (1.0, 1.0), (14.0, 14.0)]
        assert all(r.rep.exact for r in rays)

    def test_c_half_single_diagonal_family(self):
        rays, disc = solve_two_equal(Fraction(1, 3), Fraction(1, 2))
        assert disc.D1 == 1
        diagonal = [r for r in rays if r.family_tag is FamilyTag.TWO_EQUAL_DIAGONAL]
        assert len(diagonal) == 1
        # x3 = 2b(x1 + x2) with x1 = x2 = (b+c) q, x3 = q
        assert diagonal[0].rep.x1 == Fraction(5, 6)

    def test_b_half_has_no_off_diagonal(self):
        rays, _ = solve_two_equal(Fraction(1, 2), Fraction(1, 3))
        assert all(r.family_tag is FamilyTag.TWO_EQUAL_DIAGONAL for r in rays)

    def test_rejects_out_of_range(self):
        with pytest.raises(ValueError):
            solve_two_equal(Fraction(3, 5), Fraction(1, 4))

    @given(wallach, wallach)
    @settings(max_examples=40)
    def test_all_returned_rays_are_equilibria(self, b, c):
        # exact reps solve the equations exactly; square-root reps to rounding
        rays, _ = solve_two_equal(b, c)
        p = Parameters(b, b, c)
        for ray in rays:
            r1, r2 = residual(p, ray.rep)
            if ray.rep.exact:
                assert (r1, r2) == (0, 0)
            else:
                scale = (1 + max(abs(float(v)) for v in ray.rep.x)) ** 2
                assert max(abs(float(r1)), abs(float(r2))) < 1e-12 * scale


class TestSumHalfCase:
    def test_example_families(self):
        p = Parameters(Fraction(1, 10), Fraction(3, 20), Fraction(1, 4))
        rays = solve_sum_half(p)
        assert len(rays) == 4
        by_tag = {r.family_tag: r for r in rays}
        first = by_tag[FamilyTag.SUM_HALF_1].rep
        # ((1 - 2a1) q, (1 - 2a2) q, 2(a1 + a2) q) scaled to x3 = 1
        assert (first.x1, first.x2) == (Fraction(8, 5), Fraction(7, 5))
        second = by_tag[FamilyTag.SUM_HALF_2].rep
        # third component 2(1 - a1 - a2) q = (3/2) q before normalization
        assert second.x1 == Fraction(4, 5) / Fraction(3, 2)

    def test_all_families_satisfy_equations(self):
        p = Parameters(Fraction(1, 10), Fraction(3, 20), Fraction(1, 4))
        for ray in solve_sum_half(p):
            assert residual(p, ray.rep) == (0, 0)

    def test_rejects_wrong_sum(self):
        with pytest.raises(ValueError):
            solve_sum_half(Parameters(Fraction(1, 6), Fraction(1, 4), Fraction(1, 3)))

    def test_rejects_equal_values(self):
        with pytest.raises(ValueError):
            solve_sum_half(Parameters(Fraction(1, 8), Fraction(1, 8), Fraction(1, 4)))


class TestQuartic:
    def test_coefficients_for_reference_triple(self):
        p = Parameters(Fraction(1, 6), Fraction(1, 4), Fraction(1, 3))
        assert quartic_coefficients(p) == [
            Fraction(-49, 162),
            Fraction(203, 216),
            Fraction(-691, 648),
            Fraction(115, 216),
            Fraction(-125, 1296),
        ]

    @given(wallach, wallach, wallach)
    @settings(max_examples=50)
    def test_constant_coefficient_sign_interior(self, a1, a2, a3):
        p = Parameters(a1, a2, a3)
        c0 = quartic_coefficients(p)[4]
        assert c0 == (2 * a3 - 1) * (2 * a3 + 1) * (a1 + a2) ** 2
        if p.interior:
            assert c0 < 0

    def test_discriminant_zero_at_multiplicity_case(self):
        p = Parameters(Fraction(5, 36), Fraction(1, 6), Fraction(1, 4))
        assert quartic_discriminant(p) == 0

    def test_discriminant_matches_root_product(self):
        # oracle: disc = c4^6 * prod_{i<j} (r_i - r_j)^2 for a generic quartic
        rng = np.random.default_rng(0)
        for _ in range(5):
            roots = rng.uniform(-2, 2, 4)
            c4 = rng.uniform(0.5, 2)
            coeffs = c4 * np.poly(roots)
            p = Parameters(Fraction(1, 6), Fraction(1, 4), Fraction(1, 3))
            from wallachflow._poly import quartic_discriminant_coeffs

            disc = quartic_discriminant_coeffs(*coeffs)
            want = c4**6 * np.prod(
                [(roots[i] - roots[j]) ** 2 for i in range(4) for j in range(i + 1, 4)]
            )
            assert abs(disc - want) < 1e-8 * max(1.0, abs(want))


class TestSolveGeneral:
    def test_reference_case_roots(self):
        p = Parameters(Fraction(1, 6), Fraction(1, 4), Fraction(1, 3))
        rays = solve_general(p)
        assert len(rays) == 2
        exact = [r for r in rays if r.rep.exact]
        assert len(exact) == 1
        assert exact[0].rep.x == (1, Fraction(3, 4), Fraction(5, 4))
        assert exact[0].convention == "x1=1"
        other = [r for r in rays if not r.rep.exact][0].key()
        assert abs(other[0] - 2.284185494) < 1e-6
        assert abs(other[1] - 2.372799295) < 1e-6

    def test_double_root_case(self):
        p = Parameters(Fraction(5, 36), Fraction(1, 6), Fraction(1, 4))
        rays = solve_general(p)
        assert len(rays) == 3
        assert sorted(r.multiplicity for r in rays) == [1, 1, 2]
        doubled = [r for r in rays if r.multiplicity == 2][0]
        assert doubled.rep.exact

    def test_rejects_equal_parameters(self):
        with pytest.raises(ValueError):
            solve_general(Parameters(Fraction(1, 6), Fraction(1, 6), Fraction(1, 4)))


class TestSolveAll:
    @pytest.mark.parametrize(
        "a, count",
        [
            ((Fraction(1, 6), Fraction(1, 6), Fraction(1, 6)), 4),
            ((Fraction(1, 6), Fraction(1, 4), Fraction(1, 3)), 2),
            ((Fraction(1, 4), Fraction(1, 4), Fraction(1, 4)), 1),
            ((Fraction(5, 36), Fraction(1, 6), Fraction(1, 4)), 3),
        ],
    )
    def test_counts(self, a, count):
        assert len(solve_all(Parameters(*a))) == count

    def test_equal_pair_in_other_slots(self):
        # the two-equal case must work regardless of which pair coincides
        for a in [
            (Fraction(1, 4), Fraction(1, 6), Fraction(1, 6)),
            (Fraction(1, 6), Fraction(1, 4), Fraction(1, 6)),
        ]:
            p = Parameters(*a)
            rays = solve_all(p)
            assert 1 <= len(rays) <= 4
            for ray in rays:
                r1, r2 = residual(p, ray.rep)
                scale = (1 + max(abs(float(v)) for v in ray.rep.x)) ** 2
                assert max(abs(float(r1)), abs(float(r2))) < 1e-12 * scale

    def test_results_sorted_and_positive(self):
        rays = solve_all(Parameters(Fraction(1, 6), Fraction(1, 6), Fraction(1, 6)))
        ks = [r.key() for r in rays]
        assert ks == sorted(ks)
        assert all(v > 0 for r in rays for v in r.rep.x)

    def test_closed_form_and_census_agree_two_equal(self):
        rng = np.random.default_rng(123)
        with warnings.catch_warnings():
            warnings.simplefilter("error", CensusWarning)
            for _ in range(400):
                b, c = rng.uniform(0.05, 0.48, 2)
                solve_all(Parameters(b, b, c))

    def test_closed_form_and_census_agree_general(self):
        rng = np.random.default_rng(124)
        with warnings.catch_warnings():
            warnings.simplefilter("error", CensusWarning)
            for _ in range(400):
                a = rng.uniform(0.05, 0.48, 3)
                solve_all(Parameters(*a))

    def test_closed_form_and_census_agree_sum_half(self):
        rng = np.random.default_rng(125)
        with warnings.catch_warnings():
            warnings.simplefilter("error", CensusWarning)
            n = 0
            while n < 200:
                a1, a2 = rng.uniform(0.05, 0.3, 2)
                a3 = 0.5 - a1 - a2
                if not 0.05 < a3 < 0.48:
                    continue
                n += 1
                rays = solve_all(Parameters(a1, a2, a3))
                assert len(rays) == 4

    def test_census_found_by_newton_alone(self):
        p = Parameters(Fraction(1, 6), Fraction(1, 6), Fraction(1, 6))
        points = newton_census(p)
        assert len(points) == 4
        assert all(
            max(abs(float(v)) for v in residual(p, MetricPoint(x1, x2, 1.0))) < 1e-10
            for x1, x2 in points
        )


class TestNormalizeUnitVolume:
    def test_fixed_point(self):
        p = Parameters(Fraction(1, 6), Fraction(1, 4), Fraction(1, 3))
        rays = solve_all(p)
        exact = [r for r in rays if r.rep.exact][0]
        m = normalize_unit_volume(p, exact)
        assert abs(log_volume(p, m)) < 1e-12

    def test_known_scaling(self):
        p = Parameters(Fraction(1, 6), Fraction(1, 6), Fraction(1, 6))
        ray = [r for r in solve_all(p) if r.key() == (2.0, 1.0)][0]
        m = normalize_unit_volume(p, ray)
        assert abs(float(m.x1) - 2 ** (2 / 3)) < 1e-12
        assert abs(float(m.x2) - 2 ** (-1 / 3)) < 1e-12

    def test_identity_when_already_normalized(self):
        p = Parameters(Fraction(1, 6), Fraction(1, 6), Fraction(1, 6))
        ray = [r for r in solve_all(p) if r.key() == (1.0, 1.0)][0]
        assert normalize_unit_volume(p, ray).x == (1, 1, 1)
