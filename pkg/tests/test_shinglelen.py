import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from shinglesync.errors import InvalidParameterError
from shinglesync.shinglelen import (
    lambert_w,
    lambert_w_from_log,
    recommend_shingle_len,
    shingle_len_bound,
)


def w_bisect(log_z: float) -> float:
    """Independent bisection solver for W + ln W = log_z."""
    lo, hi = 1e-300, max(log_z, 2.0) + 10.0
    for _ in range(300):
        mid = (lo + hi) / 2
        if mid + math.log(mid) < log_z:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2


@given(st.floats(min_value=1e-3, max_value=1e12))
def test_lambert_w_inverts_w_exp_w(z):
    w = lambert_w(z)
    assert abs(w * math.exp(w) - z) <= 1e-9 * max(1.0, z)


@pytest.mark.parametrize("log_z", [-3.0, -1.0, 0.0, 1.0, 44.62, 293.4, 2091.66, 1e6])
def test_log_space_solver_matches_bisection(log_z):
    assert abs(lambert_w_from_log(log_z) - w_bisect(log_z)) <= 1e-6 * max(1.0, abs(log_z))


def test_lambert_w_rejects_nonpositive():
    with pytest.raises(InvalidParameterError):
        lambert_w(0.0)


def bound_bisect(n: int, p: float) -> float:
    """The sizing threshold recovered by bisecting on W directly."""
    ln_p = math.log(p)
    log_z = math.log(-ln_p) - n * ln_p
    return n + 1 + w_bisect(log_z) / ln_p


def test_recommendation_matches_independent_solve():
    for n, p in [(64, 0.6), (1024, 0.75), (4096, 0.6), (1 << 20, 0.9)]:
        assert abs(shingle_len_bound(n, p) - bound_bisect(n, p)) < 1e-6
        assert recommend_shingle_len(n, p) == max(2, math.ceil(bound_bisect(n, p) - 1e-9))


def test_fixture_values():
    assert recommend_shingle_len(1024, 0.75) == 26
    assert recommend_shingle_len(4096, 0.6) == 18


def test_logarithmic_growth():
    ratio = recommend_shingle_len(2**20, 0.6) / recommend_shingle_len(2**10, 0.6)
    assert ratio <= 2.5


def test_monotone_in_n():
    values = [recommend_shingle_len(n, 0.6) for n in range(2, 3000, 53)]
    assert all(a <= b for a, b in zip(values, values[1:]))


def test_parameter_validation():
    for bad_p in (0.5, 1.0, 0.2, 1.5):
        with pytest.raises(InvalidParameterError):
            recommend_shingle_len(100, bad_p)
    with pytest.raises(InvalidParameterError):
        recommend_shingle_len(1, 0.6)


def test_floor_of_two():
    assert recommend_shingle_len(2, 0.9) == 2
