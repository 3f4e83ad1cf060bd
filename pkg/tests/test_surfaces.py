import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wallachflow.core import Parameters
from wallachflow.linearize import SIGMA_ZERO_S_HIGH, SIGMA_ZERO_S_LOW
from wallachflow.surfaces import (
    Region,
    component_classify,
    edge_curve,
    grad_q,
    grad_q1,
    omega_slice_a1_half,
    q1_eval,
    q_eval,
    scan_grid,
)

wallach = st.fractions(
    min_value=Fraction(1, 18), max_value=Fraction(9, 20), max_denominator=24
)


def _perms(t):
    a, b, c = t
    return [(a, b, c), (a, c, b), (b, a, c), (b, c, a), (c, a, b), (c, b, a)]


class TestDegeneracyPolynomial:
    def test_umbilic_point(self):
        p = Parameters(Fraction(1, 4), Fraction(1, 4), Fraction(1, 4))
        assert q_eval(p) == 0
        assert grad_q(p) == (0, 0, 0)

    @pytest.mark.parametrize("s", [Fraction(1, 6), Fraction(1, 3), Fraction(2, 5)])
    def test_diagonal_closed_form(self, s):
        q = q_eval(Parameters(s, s, s))
        assert q == -((2 * s + 1) ** 4) * (4 * s - 1) ** 8

    def test_two_equal_family_closed_form_exact(self):
        for s in (Fraction(1, 2), Fraction(3, 5), Fraction(7, 10)):
            s2 = s * s
            eq = (2 * s2 - 1) ** 2 / (8 * s2)
            dist = (4 * s2 * s2 + 4 * s2 - 1) / (8 * s2)
            q = q_eval(Parameters(eq, eq, dist))
            assert q == s**8 * (1 - 8 * s2 - 4 * s2 * s2) * (1 - 2 * s2) ** 3 * (3 - 2 * s2) ** 3

    def test_two_equal_family_roots_outside_interval(self):
        # positive zeros of the family restriction, none interior to the
        # family's parameter interval
        roots = [math.sqrt(2 * math.sqrt(5) - 4) / 2, math.sqrt(2) / 2, math.sqrt(6) / 2]
        for r in roots:
            s2 = r * r
            val = r**8 * (1 - 8 * s2 - 4 * s2 * s2) * (1 - 2 * s2) ** 3 * (3 - 2 * s2) ** 3
            assert abs(val) < 1e-12
            assert not SIGMA_ZERO_S_LOW < r < SIGMA_ZERO_S_HIGH

    @given(wallach, wallach, wallach)
    @settings(max_examples=30)
    def test_permutation_invariance(self, a1, a2, a3):
        vals = {q_eval(Parameters(*t)) for t in _perms((a1, a2, a3))}
        assert len(vals) == 1
        vals = {q1_eval(Parameters(*t)) for t in _perms((a1, a2, a3))}
        assert len(vals) == 1

    def test_gradient_matches_finite_differences(self):
        p = Parameters(0.21, 0.37, 0.44)
        g = [float(v) for v in grad_q(p)]
        h = 1e-6
        for i in range(3):
            a_up = list(p.a)
            a_dn = list(p.a)
            a_up[i] += h
            a_dn[i] -= h
            fd = (float(q_eval(Parameters(*a_up))) - float(q_eval(Parameters(*a_dn)))) / (2 * h)
            assert abs(fd - g[i]) <= 1e-6 * max(1.0, abs(g[i]))


class TestEdgeCurves:
    def test_passes_through_umbilic(self):
        ec = edge_curve(Fraction(1, 4))
        assert ec.params.a == (Fraction(1, 4),) * 3

    @pytest.mark.parametrize("t", [Fraction(3, 10), Fraction(2, 5), Fraction(9, 20)])
    @pytest.mark.parametrize("i", [1, 2, 3])
    def test_on_surface_with_vanishing_gradient(self, t, i):
        # the edge curves consist of singular points of the surface
        ec = edge_curve(t, i)
        assert q_eval(ec.params) == 0
        assert grad_q(ec.params) == (0, 0, 0)

    def test_permutation_symmetry(self):
        t = Fraction(3, 10)
        a1 = edge_curve(t, 1).params.a
        a2 = edge_curve(t, 2).params.a
        assert a2 == (a1[2], a1[0], a1[1]) or a2 == (a1[1], a1[2], a1[0])

    def test_near_pole_blows_up(self):
        # the pole sits at the irrational 8 t^2 = 1, unreachable exactly;
        # nearby the distinguished coordinate grows without bound
        ec = edge_curve(1 / math.sqrt(8))
        assert abs(float(ec.params.a1)) > 1e6


class TestFaceSlice:
    @pytest.mark.parametrize(
        "a2, a3",
        [(Fraction(1, 5), Fraction(1, 10)), (Fraction(2, 5), Fraction(9, 20)),
         (Fraction(3, 7), Fraction(1, 11))],
    )
    def test_exact_factorization_on_face(self, a2, a3):
        # on the face a1 = 1/2 the full polynomial is the slice quartic times
        # the positive factor 4 (a2 + a3)^2
        q = q_eval(Parameters(Fraction(1, 2), a2, a3))
        assert q == 4 * (a2 + a3) ** 2 * omega_slice_a1_half(a2, a3)

    def test_sign_agreement_on_grid(self):
        for a2 in np.linspace(0.02, 0.5, 25):
            for a3 in np.linspace(0.02, 0.5, 25):
                q = float(q_eval(Parameters(0.5, a2, a3)))
                s = float(omega_slice_a1_half(a2, a3))
                assert q * s >= 0

    def test_cusp_and_endpoints(self):
        c = (math.sqrt(5) - 1) / 4
        assert abs(omega_slice_a1_half(c, c)) < 1e-12
        assert abs(omega_slice_a1_half(math.sqrt(2) / 4, 0.5)) < 1e-12
        assert abs(omega_slice_a1_half(0.5, math.sqrt(2) / 4)) < 1e-12

    def test_three_quarter_sum_factorization(self):
        # restricted to s1 = 3/4 the polynomial factors with a squared term
        for a1, a2 in [(Fraction(1, 5), Fraction(3, 10)), (Fraction(1, 8), Fraction(2, 5)),
                       (Fraction(7, 20), Fraction(3, 10))]:
            a3 = Fraction(3, 4) - a1 - a2
            p = Parameters(a1, a2, a3)
            s2, s3 = p.s2, p.s3
            factored = (
                (24 * s2**2 + 8 * s2 + 64 * s2 * s3 - 8 * s3 - 128 * s3**2 + 1)
                * (32 * s2 - 64 * s3 - 5) ** 2
            )
            assert q_eval(p) == factored / 32

    def test_half_sum_has_no_interior_zeros(self):
        rng = np.random.default_rng(4)
        for _ in range(40):
            a1, a2 = rng.uniform(0.02, 0.46, 2)
            a3 = 0.5 - a1 - a2
            if not 0.0 < a3 < 0.5:
                continue
            p = Parameters(a1, a2, a3)
            bracket = (
                -5 * a1 * a2 + a1 - 2 * a1**2 + a2 - 2 * a2**2
                + 6 * a1 * a2 * (a1 + a2)
            )
            assert bracket > 0
            assert abs(float(q_eval(p))) > 1e-12


class TestTraceSurfacePolynomial:
    def test_values(self):
        assert q1_eval(Parameters(Fraction(1, 4), Fraction(1, 4), Fraction(1, 4))) == 0
        assert q1_eval(Parameters(Fraction(1, 6), Fraction(1, 6), Fraction(1, 6))) == Fraction(4, 27)
        assert grad_q1(Parameters(Fraction(1, 4), Fraction(1, 4), Fraction(1, 4))) == (0, 0, 0)

    @given(wallach, wallach, wallach)
    @settings(max_examples=30)
    def test_pairwise_sum_substitution(self, a1, a2, a3):
        # with z_i the pairwise sums, the polynomial is 4 z1 z2 z3 - z1 - z2 - z3 + 1
        p = Parameters(a1, a2, a3)
        z1, z2, z3 = a1 + a2, a1 + a3, a2 + a3
        assert q1_eval(p) == 4 * z1 * z2 * z3 - z1 - z2 - z3 + 1


class TestComponents:
    def test_reference_points(self):
        assert component_classify(Parameters(Fraction(1, 6), Fraction(1, 6), Fraction(1, 6))) is Region.O1
        assert component_classify(Parameters(Fraction(7, 15), Fraction(7, 15), Fraction(7, 15))) is Region.O2
        assert component_classify(Parameters(Fraction(1, 6), Fraction(1, 4), Fraction(1, 3))) is Region.O3
        assert component_classify(Parameters(Fraction(1, 4), Fraction(1, 4), Fraction(1, 4))) is Region.ON_OMEGA

    def test_half_sum_plane_lies_in_first_component(self):
        p = Parameters(Fraction(1, 10), Fraction(3, 20), Fraction(1, 4))
        assert component_classify(p) is Region.O1


class TestScanGrid:
    def test_degenerate_box(self):
        samples = scan_grid(Fraction(1, 4), Fraction(1, 4), 2)
        assert len(samples) == 1
        assert samples[0].Q == 0
        assert samples[0].region is Region.ON_OMEGA

    def test_count_and_order(self):
        samples = scan_grid(Fraction(1, 5), Fraction(2, 5), 3)
        assert len(samples) == 27
        coords = [tuple(float(v) for v in s.params.a) for s in samples]
        assert coords == sorted(coords)

    def test_small_sum_is_first_component(self):
        # interior triples with a1+a2+a3 < 1/2 always classify into the
        # component of (1/6, 1/6, 1/6)
        samples = scan_grid(Fraction(1, 20), Fraction(3, 20), 3)
        assert all(s.region is Region.O1 for s in samples)
        assert all(s.Q != 0 for s in samples)
