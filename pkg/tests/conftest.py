import numpy as np
import pytest
from hypothesis import HealthCheck, settings, strategies as st

from frozen_spectra.charfn import Problem
from frozen_spectra.funcrep import PI, PiecewisePoly, TrigSeries

settings.register_profile("default", deadline=None, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

finite = st.floats(-3.0, 3.0, allow_nan=False, allow_infinity=False)
cplx = st.builds(complex, finite, finite)


@st.composite
def piecewise_polys(draw, max_pieces=4, max_degree=3):
    n = draw(st.integers(1, max_pieces))
    inner = draw(st.lists(st.floats(0.05, PI - 0.05), min_size=n - 1, max_size=n - 1, unique=True))
    inner = sorted(inner)
    if any(b - a < 1e-3 for a, b in zip([0.0, *inner], [*inner, PI])):
        inner = list(np.linspace(0, PI, n + 1)[1:-1])
    deg = draw(st.integers(0, max_degree))
    rows = [draw(st.lists(cplx, min_size=deg + 1, max_size=deg + 1)) for _ in range(n)]
    return PiecewisePoly(np.array([0.0, *inner, PI]), np.array(rows))


@st.composite
def trig_series(draw, basis=None):
    basis = basis or draw(st.sampled_from(["sine", "cosine", "half_sine", "half_cosine"]))
    return TrigSeries(basis, draw(st.lists(cplx, min_size=1, max_size=5)))


@st.composite
def frozen_points(draw):
    a = draw(st.floats(0.1, PI - 0.3))
    b = draw(st.floats(a + 0.1, PI - 0.1))
    return a, b


@st.composite
def problems(draw):
    a, b = draw(frozen_points())
    return Problem(a, b, draw(piecewise_polys(max_degree=2)), draw(piecewise_polys(max_degree=2)))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    import test_acceptance
    if test_acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for res in sorted(test_acceptance.RESULTS, key=lambda r: r.number):
            terminalreporter.write_line(res.line())
