import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from sphericalmax import _kernels
from sphericalmax.entropy import (ResolutionError, UnboundedSpecError, brute_force_cover_count,
                                  check_mainassu, count_table, cover_count, mainassu_terms,
                                  scan_sup)
from sphericalmax.setgen import (Cantor, ExplicitPoints, FullInterval, Lacunary, LogInterval,
                                 SequenceSet, Union, sample, window_restrict)

UNIT = LogInterval(0.0, 1.0)


def _points_sample(logs, j=12):
    radii = tuple(sorted(set(2.0 ** np.asarray(logs))))
    return sample(ExplicitPoints(radii), LogInterval(-1.0, 3.0), j)


def test_brute_force_small_cases():
    assert brute_force_cover_count([0.0], 1.0) == 1
    assert brute_force_cover_count([0.0, 0.5, 1.0], 1.0) == 1
    assert brute_force_cover_count([0.0, 0.5, 1.0], 0.4) == 3
    assert brute_force_cover_count([], 0.3) == 0


def test_cover_count_examples():
    S = _points_sample([0.0])
    assert cover_count(S, LogInterval(-1, 2), 0.01) == 1
    S = _points_sample([0.0, 0.5, 1.0])
    assert cover_count(S, LogInterval(-1, 2), 0.4) == 3
    assert cover_count(S, LogInterval(-1, 2), 1.0) == 1
    assert cover_count(S, LogInterval(2.5, 3.0), 0.4) == 0


def test_cover_count_rejects_coarse_sample():
    with pytest.raises(ResolutionError):
        cover_count(sample(FullInterval(), UNIT, 2), UNIT, 2.0 ** -10)


@settings(max_examples=200, deadline=None)
@given(pts=st.lists(st.floats(0.0, 2.0), min_size=1, max_size=12),
       delta=st.floats(0.005, 0.8))
def test_greedy_matches_brute_force(pts, delta):
    p = np.sort(np.asarray(pts))
    assert _kernels.greedy_count(p, p, -1.0, 10.0, delta) == brute_force_cover_count(p, delta)


@settings(max_examples=60, deadline=None)
@given(pts=st.lists(st.floats(0.0, 2.0), min_size=1, max_size=30),
       d1=st.floats(0.01, 0.5), d2=st.floats(0.01, 0.5))
def test_greedy_monotone_in_delta(pts, d1, d2):
    p = np.sort(np.asarray(pts))
    lo, hi = sorted((d1, d2))
    assert _kernels.greedy_count(p, p, -1.0, 10.0, lo) >= _kernels.greedy_count(p, p, -1.0, 10.0, hi)


@settings(max_examples=60, deadline=None)
@given(pts=st.lists(st.floats(0.0, 2.0), min_size=2, max_size=30), cut=st.floats(0.0, 2.0),
       delta=st.floats(0.01, 0.5))
def test_greedy_subadditive(pts, cut, delta):
    p = np.sort(np.asarray(pts))
    a, b = p[p <= cut], p[p > cut]
    whole = _kernels.greedy_count(p, p, -1.0, 10.0, delta)
    parts = sum(_kernels.greedy_count(q, q, -1.0, 10.0, delta) for q in (a, b) if q.size)
    assert whole <= parts


def test_solid_segment_count():
    # [0, 1] at delta = 2^-10 needs exactly 2^10 closed intervals
    S = sample(FullInterval(), UNIT, 10)
    assert cover_count(S, UNIT, 2.0 ** -10) == 1024


def test_scan_interval_and_lacunary():
    sc = scan_sup(FullInterval(), 10, 0.0)
    assert sc.max_value == 1024
    assert (sc.argmax_window.lo, sc.argmax_window.hi) == (0.0, 1.0)
    # closed unit windows [0,1] see both lacunary points 2^0 and 2^1
    assert scan_sup(Lacunary(), 10, 0.0).max_value == 2


def test_scan_rho_zero_is_plain_count():
    sc = scan_sup(SequenceSet(1.0), 8, 0.0)
    np.testing.assert_array_equal(sc.value, sc.count)


def test_scan_unbounded_needs_range():
    with pytest.raises(UnboundedSpecError):
        scan_sup(Union((Lacunary(2.0), Lacunary(3.0))), 4, 0.0)


def test_table_agrees_with_scan():
    spec = Cantor(1 / 3, 1.0, 2.0)
    t = count_table(spec, 10)
    S = sample(spec, LogInterval(0.0, 2.5), 10)
    for j in (3, 7, 10):
        for rho in (-0.5, 0.0, 0.7, 1.5):
            want = math.log2(scan_sup(spec, j, rho, S=S).max_value)
            assert t.log2_sup(j, rho) == pytest.approx(want)


def test_table_threads_match_serial():
    spec = SequenceSet(0.5)
    a = count_table(spec, 12)
    b = count_table(spec, 12, threads=4)
    np.testing.assert_array_equal(a.counts, b.counts)


def test_mainassu_interval_closed_form():
    # N(E cap I, 2^-j) = 2^(j - i) for a window of length 2^-i inside [0, 1]
    p, alpha, eps, d = 2.5, -0.5, 0.1, 2
    terms = mainassu_terms(FullInterval(), p, alpha, eps, 12, d)
    for j in range(1, 13):
        i = np.arange(j + 1)
        want = np.max((j - i) - j * ((d - 1) * (p - 1) - eps) - i * (alpha + (d - 1) * (2 - p)))
        assert math.log2(terms[j - 1]) == pytest.approx(want)


def test_mainassu_lacunary_bounded():
    spec = window_restrict(Lacunary(), 1.0)
    a, b = (check_mainassu(spec, 1.5, 0.0, 0.1, jm) for jm in (10, 16))
    assert a == pytest.approx(b)


@pytest.mark.parametrize("alpha", [0.5, -0.5])
def test_mainassu_interval_at_p2_grows(alpha):
    # at p = 2 the i = 0 term is 2^(eps j), whatever alpha is
    a, b = (check_mainassu(FullInterval(), 2.0, alpha, 0.1, jm) for jm in (10, 16))
    assert b / a == pytest.approx(2.0 ** 0.6)


def test_mainassu_needs_unit_subset():
    with pytest.raises(ValueError):
        check_mainassu(Lacunary(), 2.0, 0.0, 0.1, 8)
