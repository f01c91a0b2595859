import json

import numpy as np
import pytest
from hypothesis import given, strategies as st

from frozen_spectra.funcrep import (
    PI,
    PiecewisePoly,
    Rho,
    TrigSeries,
    UnsupportedVariantError,
    affine_compose,
    evaluate,
    fourier_coeff,
    from_dict,
    integral,
    l2_norm,
    linear_combine,
    moment_integral,
    shift_reflect,
)
from frozen_spectra.oracles import moment_quad, quad

from conftest import piecewise_polys, trig_series

RHO_GRID = [0.01, 0.5, 1.0, 2.5, 7.0, 15.5]
GRID = np.linspace(-0.5, PI + 0.5, 1000)


def half_box():
    return PiecewisePoly.indicator(0.0, PI / 2)


class TestEval:
    def test_indicator_inside(self):
        assert evaluate(half_box(), PI / 4) == 1

    def test_zero_extension(self):
        assert evaluate(half_box(), -1.0) == 0
        assert evaluate(PiecewisePoly.constant(2.0), PI) == 0
        assert evaluate(TrigSeries("cosine", [1.0]), 0.0) == 0

    def test_sine_series(self):
        assert evaluate(TrigSeries("sine", [0.0, 1.0]), PI / 4) == pytest.approx(1.0, abs=1e-15)

    @given(piecewise_polys())
    def test_outside_is_exact_zero(self, f):
        t = np.array([-3.0, -1e-12, 0.0, PI, PI + 1e-9, 7.0])
        assert np.all(f(t) == 0)


class TestValidation:
    def test_breakpoints_must_span(self):
        with pytest.raises(ValueError):
            PiecewisePoly(np.array([0.0, 1.0]), np.zeros((1, 4)))

    def test_breakpoints_increasing(self):
        with pytest.raises(ValueError):
            PiecewisePoly(np.array([0.0, 2.0, 1.0, PI]), np.zeros((3, 4)))

    def test_degree_cap(self):
        with pytest.raises(ValueError):
            PiecewisePoly(np.array([0.0, PI]), np.ones((1, 5)))

    def test_unknown_basis(self):
        with pytest.raises(ValueError):
            TrigSeries("legendre", [1.0])

    def test_from_dict_names_field(self):
        with pytest.raises(ValueError, match="breakpoints"):
            from_dict({"type": "piecewise_poly", "coeffs": []})

    @given(st.one_of(piecewise_polys(), trig_series()))
    def test_json_round_trip(self, f):
        g = from_dict(json.loads(json.dumps(f.to_dict())))
        t = np.linspace(0.01, PI - 0.01, 50)
        np.testing.assert_array_equal(f(t), g(t))
        assert g.to_dict() == f.to_dict()

    def test_rho(self):
        r = Rho.from_lambda(-4.0)
        assert r.lam == pytest.approx(-4.0)
        assert Rho(2 + 1j).lam == (2 + 1j) ** 2


class TestMoments:
    def test_sine_reflected_constant(self):
        one = PiecewisePoly.constant(1.0)
        assert moment_integral(one, 1.0, "sin", 0.0, PI, "d-t") == pytest.approx(2.0, abs=1e-14)

    def test_cos_at_zero(self):
        one = PiecewisePoly.constant(1.0)
        assert moment_integral(one, 0.0, "cos", 0.0, PI) == pytest.approx(PI, abs=1e-14)

    def test_linear_piece_frozen(self):
        # int_0^1 t cos(3.7 t) dt, from 30-digit quadrature
        f = PiecewisePoly.from_pieces([(0.0, 1.0, [0.0, 1.0])])
        assert abs(moment_integral(f, 3.7, "cos", 0.0, PI) - (-0.278195307017664955)) < 1e-12

    @pytest.mark.parametrize("c,d", [(1.0, 1.0), (2.0, 1.0), (-0.1, 1.0), (0.0, 3.5)])
    def test_bad_interval(self, c, d):
        with pytest.raises(ValueError):
            moment_integral(PiecewisePoly.constant(1.0), 1.0, "sin", c, d)

    @pytest.mark.parametrize("r", RHO_GRID + [1j * x for x in RHO_GRID])
    @pytest.mark.parametrize("kind", ["sin", "cos"])
    def test_against_quadrature(self, r, kind):
        fs = [PiecewisePoly.indicator(0.4, 2.2, 1 - 2j),
              PiecewisePoly(np.array([0.0, 1.3, PI]), np.array([[0.5, 1.0, -0.2, 0.1], [1j, 0.0, 0.3, 0.0]])),
              TrigSeries("half_sine", [1.0, -0.5]), TrigSeries("cosine", [0.2, 0.0, 1.0])]
        for f in fs:
            for mode in ("t", "d-t", "t-c"):
                got = moment_integral(f, r, kind, 0.2, 2.9, mode)
                ref = moment_quad(f, r, kind, 0.2, 2.9, mode)
                assert abs(got - ref) <= 1e-11 * max(1.0, np.cosh(abs(r.imag) * 2.9))

    @given(piecewise_polys(), st.sampled_from(RHO_GRID), st.sampled_from(["t", "d-t", "t-c"]))
    def test_parity_in_rho(self, f, r, mode):
        for rho in (r, 1j * r):
            s_p, s_m = (moment_integral(f, x, "sin", 0.0, PI, mode) for x in (rho, -rho))
            c_p, c_m = (moment_integral(f, x, "cos", 0.0, PI, mode) for x in (rho, -rho))
            scale = max(1.0, abs(s_p), abs(c_p))
            assert abs(s_p + s_m) <= 1e-13 * scale
            assert abs(c_p - c_m) <= 1e-13 * scale

    @given(st.one_of(piecewise_polys(), trig_series()), st.floats(0.4, 0.6),
           st.sampled_from(["sin", "cos"]), st.sampled_from([1.0, 1j]))
    def test_series_and_closed_form_agree(self, f, r, kind, phase):
        rho = r * phase
        a = moment_integral(f, rho, kind, 0.0, PI, branch="series")
        b = moment_integral(f, rho, kind, 0.0, PI, branch="closed")
        assert abs(a - b) <= 1e-12 * max(1.0, abs(a))

    @pytest.mark.parametrize("branch", ["auto", "series", "closed"])
    def test_resonant_frequency(self, branch):
        # rho equals the basis frequency 1/2: int_0^pi sin(t/2)^2 dt = pi/2
        f = TrigSeries("half_sine", [1.0])
        got = moment_integral(f, 0.5, "sin", 0.0, PI, branch=branch)
        assert abs(got - PI / 2) <= 1e-14

    def test_small_rho_series_relative(self):
        f = PiecewisePoly.constant(1.0)
        for r in (1e-3, 1e-6, 1e-9):
            # int_0^pi sin(r t) dt = (1 - cos(r pi))/r, written without cancellation
            exact = 2 * np.sin(r * PI / 2) ** 2 / r
            got = moment_integral(f, r, "sin", 0.0, PI)
            assert abs(got - exact) <= 1e-14 * abs(exact)


class TestShiftReflect:
    def test_box_centred_half_pi(self):
        g = PiecewisePoly.indicator(0.0, PI / 4)
        s = shift_reflect(g, PI / 2, even=True)
        t = GRID
        inside = (t > PI / 4) & (t < 3 * PI / 4)
        ok = np.abs(t - PI / 4) > 1e-12
        ok &= np.abs(t - 3 * PI / 4) > 1e-12
        np.testing.assert_array_equal(s(t)[ok], inside[ok].astype(float))

    def test_box_at_quarter_pi(self):
        g = PiecewisePoly.indicator(0.0, PI / 4)
        r = shift_reflect(g, PI / 4, even=True)
        t = GRID[(np.abs(GRID - PI / 2) > 1e-9)]
        np.testing.assert_array_equal(r(t), ((t > 0) & (t < PI / 2)).astype(float))

    @given(piecewise_polys(), st.floats(0.0, PI))
    def test_involution(self, g, c):
        # reflecting twice returns g where c - t stays in (0, pi)
        twice = shift_reflect(shift_reflect(g, c), c)
        t = GRID[(GRID > 0) & (GRID < c)]
        t = t[np.min(np.abs(t[:, None] - g.breakpoints[None, :]), axis=1) > 1e-9] if t.size else t
        np.testing.assert_allclose(twice(t), g(t), atol=1e-12)

    def test_trig_rejected(self):
        with pytest.raises(UnsupportedVariantError):
            shift_reflect(TrigSeries("sine", [1.0]), 1.0)

    def test_affine_compose_matches_pointwise(self, rng):
        g = PiecewisePoly(np.array([0.0, 1.0, 2.5, PI]), rng.normal(size=(3, 4)))
        for sigma, c in ((1, -0.7), (-1, PI + 0.4), (1, 1.1), (-1, 2.0)):
            h = affine_compose(g, sigma, c)
            t = np.linspace(0.013, PI - 0.013, 333)
            np.testing.assert_allclose(h(t), g(sigma * t + c), atol=1e-12)


class TestFourier:
    def test_sine_one(self):
        assert fourier_coeff(PiecewisePoly.constant(1.0), "sine", 1) == pytest.approx(2.0, abs=1e-15)

    def test_sine_two(self):
        assert abs(fourier_coeff(PiecewisePoly.constant(1.0), "sine", 2)) < 1e-15

    def test_cosine_half_box(self):
        assert fourier_coeff(half_box(), "cosine", 1) == pytest.approx(1.0, abs=1e-15)

    def test_index_range(self):
        with pytest.raises(ValueError):
            fourier_coeff(half_box(), "sine", 0)
        fourier_coeff(half_box(), "cosine", 0)

    @given(st.one_of(piecewise_polys(), trig_series()),
           st.sampled_from(["sine", "cosine", "half_sine", "half_cosine"]), st.integers(1, 40))
    def test_against_quadrature(self, f, basis, n):
        mu = n - 0.5 if basis.startswith("half") else n
        k = np.sin if basis in ("sine", "half_sine") else np.cos
        bps = f.breakpoints if isinstance(f, PiecewisePoly) else np.linspace(0, PI, 9)
        ref = quad(lambda t: k(mu * t) * f(t), 0.0, PI, bps)
        assert abs(fourier_coeff(f, basis, n) - ref) < 1e-11


class TestCombine:
    @given(piecewise_polys(), piecewise_polys())
    def test_identity(self, f, g):
        h = linear_combine(1.0, f, 0.0, g)
        t = np.linspace(0.001, PI - 0.001, 200)
        np.testing.assert_allclose(h(t), f(t), atol=1e-13)

    @given(st.one_of(piecewise_polys(), trig_series()))
    def test_cancellation(self, f):
        z = linear_combine(1.0, f, -1.0, f)
        assert l2_norm(z) == 0.0

    def test_box_difference(self):
        s = PiecewisePoly.indicator(PI / 4, 3 * PI / 4)
        r = -PiecewisePoly.indicator(0.0, PI / 2)
        h = linear_combine(1.0, s, 1.0, r)
        t = np.array([0.3, 1.0, 1.8, 2.2, 2.5, 3.0])
        # -1 on [0, pi/4], 0 on [pi/4, pi/2], 1 on [pi/2, 3pi/4], 0 beyond
        np.testing.assert_array_equal(h(t), [-1, 0, 1, 1, 0, 0])

    def test_incompatible(self):
        with pytest.raises(UnsupportedVariantError):
            linear_combine(1.0, TrigSeries("sine", [1]), 1.0, PiecewisePoly.constant(1.0))
        with pytest.raises(UnsupportedVariantError):
            linear_combine(1.0, TrigSeries("sine", [1]), 1.0, TrigSeries("cosine", [1]))


class TestNorms:
    @given(st.one_of(piecewise_polys(), trig_series()))
    def test_l2_matches_quadrature(self, f):
        bps = f.breakpoints if isinstance(f, PiecewisePoly) else np.linspace(0, PI, 9)
        ref = np.sqrt(quad(lambda t: abs(f(t)) ** 2, 0.0, PI, bps).real)
        assert l2_norm(f) == pytest.approx(ref, rel=1e-10, abs=1e-12)

    @given(piecewise_polys())
    def test_integral_is_zero_frequency(self, f):
        ref = quad(f, 0.0, PI, f.breakpoints)
        assert abs(integral(f) - ref) < 1e-11

    def test_trig_to_piecewise(self):
        f = TrigSeries("half_sine", [1.0, 0.0, -0.5j])
        g = f.to_piecewise(512)
        t = np.linspace(0.001, PI - 0.001, 777)
        np.testing.assert_allclose(g(t), f(t), atol=1e-9)
