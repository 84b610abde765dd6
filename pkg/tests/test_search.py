import numpy as np
import pytest
from hypothesis import given, strategies as st

from hcnsim.errors import InvalidArgumentError
from hcnsim.numerics import quasiconcave_line_search


def test_parabola_peak():
    res = quasiconcave_line_search(lambda x: -(x - 2.0) ** 2, 0.0, 10.0, tol=1e-12, x0=1.0)
    assert res.x == pytest.approx(2.0, abs=1e-3)


def test_decreasing_returns_lower_end():
    res = quasiconcave_line_search(lambda x: -x, 1.0, 10.0, x0=1.0)
    assert res.x == 1.0


def test_increasing_returns_upper_end():
    res = quasiconcave_line_search(lambda x: np.log(x), 1.0, 10.0, tol=1e-9, x0=1.0)
    assert res.x == pytest.approx(10.0)


def test_empty_interval_rejected():
    with pytest.raises(InvalidArgumentError):
        quasiconcave_line_search(lambda x: x, 2.0, 1.0)


def test_step_must_exceed_one():
    with pytest.raises(InvalidArgumentError):
        quasiconcave_line_search(lambda x: x, 1.0, 2.0, step=1.0)


def test_result_stays_in_bounds():
    res = quasiconcave_line_search(lambda x: -(x - 50.0) ** 2, 1.0, 3.0, x0=2.0)
    assert 1.0 <= res.x <= 3.0
    assert all(1.0 <= x <= 3.0 for x in res.path)


@given(st.floats(0.5, 50.0), st.floats(0.05, 2.0))
def test_unimodal_peak_matches_dense_grid(peak, width):
    # EE-like shape: log-rate over affine power, peak set by the parameters
    f = lambda x: np.log1p(x / width) / (x + peak)
    grid = np.linspace(0.01, 100.0, 20001)
    best = grid[np.argmax(f(grid))]
    res = quasiconcave_line_search(f, 0.01, 100.0, tol=1e-12, x0=1.0)
    assert abs(res.x - best) <= 2 * (grid[1] - grid[0]) + 1e-3 * best
