import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from frozen_spectra import fixtures as fx
from frozen_spectra.charfn import Problem, a_term, delta, w_function
from frozen_spectra.funcrep import PI, PiecewisePoly, TrigSeries, fourier_coeff, l2_norm
from frozen_spectra.inverse import (
    MAX_WINDOWS,
    CancellationError,
    SpectraPair,
    delta_from_spectrum,
    reconstruct,
    recover_A,
    recover_W,
    relative_l2,
    sample_points,
    staircase_solve,
    w_series,
    window_count,
)
from frozen_spectra.spectrum import Spectrum, locate_eigenvalues, unperturbed

LAM = 10.3


@pytest.fixture(scope="module")
def spectra():
    out = {}
    for name, prob in fx.forward_fixtures().items():
        out[name] = {j: locate_eigenvalues(prob, j, 200) for j in (0, 1)}
    out["right_smooth"] = {j: locate_eigenvalues(fx.right_supported_smooth(), j, 200) for j in (0, 1)}
    return out


def zero_spectra(N=40):
    return {j: Spectrum.from_lambdas(j, unperturbed(j, np.arange(1, N + 1))) for j in (0, 1)}


def projection(W, basis, M):
    """L2-optimal truncation of ``W`` to ``M`` terms of ``basis``."""
    c = np.array([fourier_coeff(W, basis, m) for m in range(1, M + 1)]) * 2 / PI
    return TrigSeries(basis, np.concatenate([[0.0], c]) if basis == "cosine" else c)


class TestProduct:
    @pytest.mark.parametrize("j", [0, 1])
    def test_unperturbed(self, j):
        spec = zero_spectra()[j]
        lam = np.array([0.3, 10.3, -5.0, 2.0 + 3j, 4.0, 2.25])
        rho = np.sqrt(lam + 0j)
        ref = np.sin(rho * PI) / rho if j == 0 else np.cos(rho * PI)
        np.testing.assert_allclose(delta_from_spectrum(j, spec, lam), ref, rtol=1e-13, atol=1e-15)

    @pytest.mark.parametrize("j", [0, 1])
    def test_box_pair(self, spectra, j):
        prob = fx.forward_fixtures()["box_pair1"]
        ref = delta(j, LAM, prob)
        assert abs(delta_from_spectrum(j, spectra["box_pair1"][j], LAM) - ref) <= 5e-4 * abs(ref)

    def test_at_zero(self, spectra):
        spec = spectra["right_box"][0]
        n = np.arange(1, 201)
        prod = PI * np.prod(spec.lambdas / n**2)
        assert delta_from_spectrum(0, spec, 0.0) == pytest.approx(prod, rel=1e-13)
        assert abs(prod - delta(0, 0.0, fx.right_supported())) <= 5e-4 * abs(prod)

    @pytest.mark.parametrize("j", [0, 1])
    def test_on_own_zero(self, spectra, j):
        # the nearest pole is folded into phi_j: finite on the unperturbed grid
        prob = fx.right_supported()
        lam = sample_points(j, 5)
        got = delta_from_spectrum(j, spectra["right_box"][j], lam)
        ref = delta(j, lam, prob)
        assert np.all(np.isfinite(got))
        assert np.max(np.abs(got - ref)) <= 5e-4 * np.max(np.abs(ref))

    def test_beyond_spectrum(self):
        with pytest.raises(CancellationError):
            delta_from_spectrum(0, zero_spectra(10)[0], 11.0**2)

    @pytest.mark.parametrize("name", sorted(fx.forward_fixtures()))
    @pytest.mark.parametrize("j", [0, 1])
    def test_monotone_in_N(self, spectra, name, j):
        prob = fx.forward_fixtures()[name]
        ref = delta(j, LAM, prob)
        lams = spectra[name][j].lambdas
        errs = [abs(delta_from_spectrum(j, Spectrum.from_lambdas(j, lams[:N]), LAM) - ref)
                for N in (25, 50, 100, 200)]
        assert all(x > y for x, y in zip(errs, errs[1:])), errs


class TestRecoverA:
    def test_unperturbed(self):
        for j, spec in zero_spectra().items():
            assert np.max(np.abs(recover_A(j, spec, sample_points(j, 30)))) <= 1e-14

    def test_rho_three(self, spectra):
        prob = fx.right_supported()
        ref = a_term(0, 0, 9.0, prob) + a_term(0, 1, 9.0, prob)
        assert abs(recover_A(0, spectra["right_box"][0], 9.0) - ref) <= 5e-4

    @pytest.mark.parametrize("j", [0, 1])
    def test_exact_A_gives_fourier(self, rng, j):
        prob = fx.random_problem(rng)
        M = 40
        lam = sample_points(j, M)
        A = a_term(j, 0, lam, prob) + a_term(j, 1, lam, prob)
        W = w_function(j, prob.p, prob.q, prob.a, prob.b)
        basis = "cosine" if j == 0 else "half_sine"
        ref = np.array([fourier_coeff(W, basis, m) for m in range(1, M + 1)]) * 2 / PI
        got = w_series(j, A).coeffs[1:] if j == 0 else w_series(j, A).coeffs
        assert np.max(np.abs(got - ref)) <= 1e-12 * max(1.0, np.max(np.abs(ref)))


class TestRecoverW:
    def test_unperturbed(self):
        for j, spec in zero_spectra().items():
            # rounding in A is amplified by the m^2 weight of the coefficients
            assert l2_norm(recover_W(j, spec, 30)) <= 1e-11

    def test_zero_mean(self, spectra):
        W0 = recover_W(0, spectra["right_box"][0], 150)
        assert W0.coeffs[0] == 0

    def test_M_range(self, spectra):
        with pytest.raises(ValueError):
            recover_W(0, spectra["right_box"][0], 201)
        with pytest.raises(ValueError):
            recover_W(0, spectra["right_box"][0], 0)

    @pytest.mark.parametrize("j", [0, 1])
    def test_box_fixture_band(self, spectra, j):
        prob = fx.right_supported()
        W = w_function(j, prob.p, prob.q, prob.a, prob.b)
        assert relative_l2(recover_W(j, spectra["right_box"][j], 150), W) <= 1e-2

    @pytest.mark.parametrize("j", [0, 1])
    def test_box_fixture_is_projection(self, spectra, j):
        # W_j of a box fixture has jumps; no 150-term series gets closer than its projection
        prob = fx.right_supported()
        W = w_function(j, prob.p, prob.q, prob.a, prob.b)
        basis = "cosine" if j == 0 else "half_sine"
        got = recover_W(j, spectra["right_box"][j], 150)
        assert relative_l2(got, projection(W, basis, 150)) <= 1e-5

    @pytest.mark.parametrize("j", [0, 1])
    def test_smooth_fixture(self, spectra, j):
        prob = fx.right_supported_smooth()
        W = w_function(j, prob.p, prob.q, prob.a, prob.b)
        assert relative_l2(recover_W(j, spectra["right_smooth"][j], 150), W) <= 1e-5


class TestStaircase:
    @pytest.mark.parametrize("a,b", [(1.0, 1.8), (1.4, 2.0), (0.5, 0.9), (2.0, 2.9)])
    def test_exact_data(self, a, b):
        prob = fx.right_supported(a, b)
        W0 = w_function(0, prob.p, prob.q, a, b)
        W1 = w_function(1, prob.p, prob.q, a, b)
        res = staircase_solve(W0, W1, a, b)
        assert relative_l2(res.p, prob.p) <= 1e-10
        assert relative_l2(res.q, prob.q) <= 1e-10
        assert res.residuals["g0_leak"] <= 1e-12
        assert res.residuals["junction"] <= 1e-12

    @settings(max_examples=20)
    @given(st.floats(0.2, 2.6), st.floats(0.05, 1.0), st.integers(0, 10_000))
    def test_exact_random(self, a, gap, seed):
        b = a + gap
        if b >= PI - 0.05:
            return
        rng = np.random.default_rng(seed)
        p = fx.random_piecewise(rng).restrict(b, PI)
        q = fx.random_piecewise(rng).restrict(b, PI)
        res = staircase_solve(w_function(0, p, q, a, b), w_function(1, p, q, a, b), a, b)
        t = np.linspace(0.001, PI - 0.001, 997)
        scale = 1 + np.max(np.abs(p(t))) + np.max(np.abs(q(t)))
        assert np.max(np.abs(res.p(t) - p(t))) <= 1e-9 * scale * res.window_count
        assert np.max(np.abs(res.q(t) - q(t))) <= 1e-9 * scale * res.window_count

    def test_zero(self):
        z = PiecewisePoly.zero()
        res = staircase_solve(z, z, 1.0, 2.0)
        assert l2_norm(res.p) == 0 and l2_norm(res.q) == 0

    @settings(max_examples=200)
    @given(st.floats(0.01, 3.0), st.floats(1e-3, 3.0))
    def test_window_count_scan(self, a, gap):
        b = a + gap
        if b >= PI:
            return
        n = window_count(a, b)
        first = next(k for k in range(1, 10**6) if b + k * (b - a) >= PI)
        assert n == first

    def test_too_many_windows(self):
        z = PiecewisePoly.zero()
        with pytest.raises(ValueError, match="windows"):
            staircase_solve(z, z, 1.0, 1.0 + (PI - 1.0) / (2 * MAX_WINDOWS))

    def test_support(self, spectra):
        pair = SpectraPair(spectra["right_box"][0], spectra["right_box"][1])
        rec = reconstruct(pair, 1.0, 1.8, 150)
        t = np.linspace(0.0, 1.8 - 1e-12, 500)
        assert np.all(rec.p(t) == 0) and np.all(rec.q(t) == 0)
        assert rec.window_count == window_count(1.0, 1.8)
        assert len(rec.residuals["windows"]) == rec.window_count


class TestReconstruct:
    def test_zero_spectra(self):
        z = zero_spectra(60)
        rec = reconstruct(SpectraPair(z[0], z[1]), 1.0, 1.8, 50)
        assert l2_norm(rec.p) <= 1e-10 and l2_norm(rec.q) <= 1e-10

    @pytest.mark.parametrize("a,b,name", [(1.0, 1.8, "right_box"), (1.4, 2.0, "right_box_wide")])
    def test_box_fixture_band(self, spectra, a, b, name):
        prob = fx.right_supported(a, b)
        rec = reconstruct(SpectraPair(spectra[name][0], spectra[name][1]), a, b, 150)
        assert relative_l2(rec.p, prob.p) <= 1e-2
        assert relative_l2(rec.q, prob.q) <= 1e-2

    def test_smooth_fixture(self, spectra):
        prob = fx.right_supported_smooth()
        s = spectra["right_smooth"]
        rec = reconstruct(SpectraPair(s[0], s[1]), 1.0, 1.8, 150)
        assert relative_l2(rec.p, prob.p) <= 1e-5
        assert relative_l2(rec.q, prob.q) <= 1e-5
        assert rec.residuals["junction"] <= 1e-6

    def test_uniqueness_witness(self, spectra):
        A, B = fx.right_supported(), fx.right_supported_smooth()
        recA = reconstruct(SpectraPair(*spectra["right_box"].values()), 1.0, 1.8, 150)
        recB = reconstruct(SpectraPair(*spectra["right_smooth"].values()), 1.0, 1.8, 150)
        assert relative_l2(recA.p, B.p) > 0.1 and relative_l2(recB.p, A.p) > 0.1
        assert relative_l2(recA.p, recB.p) > 0.1

    def test_M_exceeds_N(self, spectra):
        pair = SpectraPair(spectra["right_box"][0], spectra["right_box"][1])
        with pytest.raises(ValueError):
            reconstruct(pair, 1.0, 1.8, 201)

    def test_pair_validation(self, spectra):
        s = spectra["right_box"]
        with pytest.raises(ValueError):
            SpectraPair(s[1], s[0])
        gappy = Spectrum.from_records(0, [{"n": 1, "lambda": [1.0, 0.0]}, {"n": 3, "lambda": [9.0, 0.0]}])
        with pytest.raises(ValueError):
            SpectraPair(gappy, s[1])
        assert SpectraPair(s[0], s[1]).N == 200

    def test_result_dict(self, spectra):
        rec = reconstruct(SpectraPair(*spectra["right_smooth"].values()), 1.0, 1.8, 20)
        d = rec.to_dict()
        assert d["M"] == 20 and set(d) == {"p", "q", "M", "window_count", "residuals"}
        Problem.from_dict({"a": 1.0, "b": 1.8, "p": d["p"], "q": d["q"]})
