import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sparselms.sparse_ops import (
    complex_sign,
    hard_threshold,
    selective_penalty,
    ser,
    support,
    theorem2_check,
    theorem3_check,
)
from sparselms.verification import topk_reference

# squared-magnitude comparisons underflow below ~1e-154, turning distinct tiny
# values into ties (kept conservatively); keep generated magnitudes above that
finite_complex = st.one_of(
    st.just(0j),
    st.complex_numbers(min_magnitude=1e-6, max_magnitude=10, allow_nan=False),
)


# -- hard threshold -----------------------------------------------------------


def test_hard_threshold_keeps_two_largest():
    np.testing.assert_array_equal(hard_threshold([2, -2, 1, 0], 2), [2, -2, 0, 0])


def test_hard_threshold_keeps_ties():
    np.testing.assert_array_equal(hard_threshold([2, -2, 1, 0], 1), [2, -2, 0, 0])


def test_hard_threshold_s_equals_n_is_identity():
    v = np.array([0.3, -1.2, 0.0, 5.0])
    np.testing.assert_array_equal(hard_threshold(v, 4), v)


def test_hard_threshold_complex_magnitude():
    np.testing.assert_array_equal(hard_threshold([3 + 4j, 2, 1], 1), [3 + 4j, 0, 0])


def test_hard_threshold_s_out_of_range():
    with pytest.raises(ValueError):
        hard_threshold([1.0, 2.0], 0)
    with pytest.raises(ValueError):
        hard_threshold([1.0, 2.0], 3)


def test_hard_threshold_zeroed_entries_exact():
    out = hard_threshold(np.array([1.0, 0.25, -0.1]), 1)
    assert out[1] == 0.0 and out[2] == 0.0


def test_hard_threshold_fewer_nonzeros_than_budget():
    v = np.array([0.0, 2.0, 0.0, 0.0])
    out = hard_threshold(v, 3)
    np.testing.assert_array_equal(out, v)
    assert len(support(out)) == 1  # min(s, ||v||_0)


@settings(max_examples=300, deadline=None)
@given(st.lists(finite_complex, min_size=1, max_size=24), st.data())
def test_hard_threshold_idempotent(values, data):
    v = np.array(values)
    s = data.draw(st.integers(1, v.size))
    once = hard_threshold(v, s)
    np.testing.assert_array_equal(hard_threshold(once, s), once)


@settings(max_examples=300, deadline=None)
@given(st.lists(finite_complex, min_size=1, max_size=24), st.data())
def test_hard_threshold_support_cardinality(values, data):
    v = np.array(values)
    s = data.draw(st.integers(1, v.size))
    kept = support(hard_threshold(v, s))
    nnz = int(np.count_nonzero(v))
    assert len(kept) >= min(s, nnz)
    mags = np.abs(v)
    boundary_distinct = np.unique(mags).size == mags.size
    if boundary_distinct:
        assert len(kept) == min(s, nnz)


def test_hard_threshold_matches_pairwise_count_reference():
    rng = np.random.default_rng(3)
    for _ in range(500):
        n = int(rng.integers(1, 13))
        v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        s = int(rng.integers(1, n + 1))
        np.testing.assert_array_equal(hard_threshold(v, s), topk_reference(v, s))


def test_hard_threshold_engineered_ties_match_reference():
    v = np.array([1.0, -1.0, 1.0j, 0.5, -1.0j, 0.0])
    for s in range(1, 7):
        np.testing.assert_array_equal(hard_threshold(v, s), topk_reference(v, s))


# -- complex sign -------------------------------------------------------------


def test_sign_at_zero():
    assert complex_sign(0) == 0


def test_sign_negative_real():
    assert complex_sign(-3) == -1


def test_sign_complex():
    assert complex_sign(3 + 4j) == pytest.approx(0.6 + 0.8j)


def test_sign_vector():
    out = complex_sign(np.array([0.0, -2.0, 3 + 4j]))
    np.testing.assert_allclose(out, [0, -1, 0.6 + 0.8j])


# -- selective penalty --------------------------------------------------------


def test_selective_penalty_two_kept():
    np.testing.assert_allclose(selective_penalty([2, -2, 1, 0], 2), [0, 0, 1, 0])


def test_selective_penalty_zero_vector():
    np.testing.assert_array_equal(selective_penalty(np.zeros(5), 2), np.zeros(5))


def test_selective_penalty_tie_kept_in_support():
    np.testing.assert_allclose(selective_penalty([2, -2, 1, 0], 1), [0, 0, 1, 0])


def test_selective_penalty_full_budget_vanishes():
    v = np.array([1.0, -2.0, 3.0])
    np.testing.assert_array_equal(selective_penalty(v, 3), np.zeros(3))


# -- support ------------------------------------------------------------------


def test_support_exact():
    assert support([2, -2, 0, 0]) == frozenset({0, 1})


def test_support_tolerance():
    assert support([1e-16, 1.0], tol=1e-12) == frozenset({1})


def test_support_negative_tol_rejected():
    with pytest.raises(ValueError):
        support([1.0], tol=-1.0)


# -- SER ----------------------------------------------------------------------


def test_ser_zero_estimate():
    assert ser([1.0, 2.0], [0.0, 0.0]) == 1.0


def test_ser_exact_estimate():
    assert ser([1.0, 2.0], [1.0, 2.0]) == math.inf


def test_ser_zero_reference_rejected():
    with pytest.raises(ValueError):
        ser([0.0, 0.0], [1.0, 0.0])


def test_ser_exceeds_2s_under_theorem2_premise():
    rng = np.random.default_rng(11)
    for _ in range(200):
        n = int(rng.integers(2, 24))
        s = int(rng.integers(1, n // 2 + 1))
        w = np.zeros(n, dtype=complex)
        pos = rng.choice(n, size=s, replace=False)
        w[pos] = rng.uniform(0.5, 2.0, s) * np.exp(1j * rng.uniform(0, 2 * np.pi, s))
        q2 = (np.abs(w[pos]) ** 2).min()
        u = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        u *= math.sqrt(rng.uniform(0.01, 0.95) * q2 / 2) / np.linalg.norm(u)
        w_hat = w + u
        assert theorem2_check(w, w_hat).premise
        assert ser(w, w_hat) > 2 * s


# -- theorem checks -----------------------------------------------------------


def test_theorem2_inside_ball():
    check = theorem2_check([1.0, 0.0], [0.8, 0.3])
    assert check == (True, True)


def test_theorem2_outside_ball_near_tight():
    check = theorem2_check([1.0, 0.0], [0.49, 0.51])
    assert check == (False, False)


def test_theorem2_exact_estimate():
    check = theorem2_check([1.0, 0.0], [1.0, 0.0])
    assert check == (True, True)


def test_theorem2_zero_reference_rejected():
    with pytest.raises(ValueError):
        theorem2_check([0.0, 0.0], [1.0, 0.0])


def test_theorem3_worked_example():
    check = theorem3_check([1.0, 0, 0, 0], [0.6, 0.3, 0.3, 0.3], tau=1)
    assert check == (True, True)


def test_theorem3_padded_estimate():
    w = np.array([1.0, 0, 0, 0, 0], dtype=complex)
    w_hat = np.array([1.0, 0.3, 0.3, 0, 0], dtype=complex)  # tau=2 small extras
    check = theorem3_check(w, w_hat, tau=2)
    assert check.conclusion


def test_theorem3_threshold_looser_than_theorem2():
    # premise radius q^2 (1 - 1/(tau+2)) exceeds q^2/2 for any tau >= 1
    for tau in (1, 2, 3, 100):
        assert 1.0 - 1.0 / (tau + 2.0) > 0.5


def test_theorem3_dimension_guard():
    with pytest.raises(ValueError):
        theorem3_check([1.0, 0.0], [1.0, 0.0], tau=1)  # s + tau = N


@settings(max_examples=200, deadline=None)
@given(st.data())
def test_theorem2_implication_property(data):
    rng_seed = data.draw(st.integers(0, 2**31))
    rng = np.random.default_rng(rng_seed)
    n = int(rng.integers(2, 17))
    s = int(rng.integers(1, n // 2 + 1))
    w = np.zeros(n, dtype=complex)
    pos = rng.choice(n, size=s, replace=False)
    w[pos] = rng.uniform(0.3, 2.0, s) * np.exp(1j * rng.uniform(0, 2 * np.pi, s))
    q2 = (np.abs(w[pos]) ** 2).min()
    u = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    u *= math.sqrt(rng.uniform(0.01, 0.99) * q2 / 2) / np.linalg.norm(u)
    check = theorem2_check(w, w + u)
    assert check.premise and check.conclusion
