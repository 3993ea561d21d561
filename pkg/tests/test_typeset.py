import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from sphericalmax.dimension import closed_form_profile, known_profile
from sphericalmax.setgen import Cantor, FullInterval, FullRay, Lacunary, SequenceSet
from sphericalmax.typeset import (L, TypeSetError, U, benchmark_contains, contains, convexity_check,
                                  dagger, explicit_contains, membership_grid, necessary_conditions,
                                  p_beta, p_gamma, profile_for_components, region_boundary, theta,
                                  union_L, union_crossings, verify_equivalence)

CF = closed_form_profile(0.5, 1.0)


def test_dagger_examples():
    np.testing.assert_allclose(dagger(closed_form_profile(0.6, 0.6), [0.6, 0.8, 1.5]), [0.6, 0.8, 1.5])
    assert dagger(known_profile(FullInterval()), 1.5) == 1.5
    # linear piece inverted: gamma (s - beta) / (gamma - beta)
    for s in (0.5, 0.6, 0.8, 1.0):
        assert dagger(CF, s) == pytest.approx((s - 0.5) / 0.5)
    with pytest.raises(TypeSetError):
        dagger(CF, 0.3)


@settings(max_examples=100, deadline=None)
@given(b=st.floats(0, 1), g=st.floats(0, 1), s=st.floats(0, 3))
def test_dagger_is_generalized_inverse(b, g, s):
    b, g = min(b, g), max(b, g)
    prof = closed_form_profile(b, g)
    s = max(s, b)
    r = dagger(prof, s)
    assert prof.evaluate(r) >= s - 1e-9
    if r > 1e-9:
        assert prof.evaluate(r - 1e-6) <= s + 1e-9


def test_thresholds_and_boundaries():
    assert U(2.0, 0.5, 2) == 0.5
    assert p_beta(0.5, 2) == 1.5
    assert p_gamma(1.0, 2) == 2.0
    assert L(1.75, CF, 2) == pytest.approx(-0.75)
    for p in (2.0, 2.5, 4.0):
        assert L(p, CF, 2) == pytest.approx(-1.0)
    with pytest.raises(TypeSetError):
        U(1.2, 0.5, 2)


@pytest.mark.parametrize("prof,rho_star", [(CF, 0.0), (known_profile(FullInterval()), 1.0),
                                           (known_profile(Cantor(1 / 3, 1, 2)), math.log(2) / math.log(3))])
@pytest.mark.parametrize("d", [2, 3])
def test_lower_at_p_beta(prof, rho_star, d):
    assert L(p_beta(prof.beta, d), prof, d) == pytest.approx(1 - d + prof.beta - rho_star)


def test_theta_examples():
    assert theta(3.0, 0.0, known_profile(FullInterval()), 2) == 1.0
    assert theta(2.0, -0.5, CF, 2) == pytest.approx(0.75)
    assert theta(1.0, 0.0, known_profile(Lacunary()), 2) == 0.0


def test_contains_examples():
    assert not contains(2.0, -1.01, CF, 2)
    assert contains(2.0, U(2.0, 0.5, 2), CF, 2)
    assert not contains(2.0, U(2.0, 0.5, 2) + 1, CF, 2)


@pytest.mark.parametrize("d", [2, 3])
def test_benchmarks(d):
    rng = np.random.default_rng(d)
    p = rng.uniform(1.01, 6, 3000)
    a = rng.uniform(-d, (d - 1) * 5, 3000)
    lac = known_profile(Lacunary())
    inside = (1 - d <= a) & (a <= (d - 1) * (p - 1))
    far = (np.abs(a - (1 - d)) > 1e-6) & (np.abs(a - (d - 1) * (p - 1)) > 1e-6)
    np.testing.assert_array_equal(contains(p, a, lac, d)[far], inside[far])
    full = known_profile(FullRay())
    inside = (1 - d <= a) & (a <= (d - 1) * p - d) & (p >= 1 + 1 / (d - 1))
    np.testing.assert_array_equal(contains(p, a, full, d), inside)
    np.testing.assert_array_equal(benchmark_contains("lacunary", p, a, d)[far],
                                  contains(p, a, lac, d)[far])


@pytest.mark.parametrize("d", [2, 3])
@pytest.mark.parametrize("prof", [CF, closed_form_profile(0.25, 0.5), known_profile(SequenceSet(2.0))])
def test_equivalence_and_necessity(prof, d):
    rep = verify_equivalence(prof, d)
    assert rep.ok and rep.n_disagree == 0
    assert rep.n_necessary_violations == 0
    _, _, P, A, _ = membership_grid(prof, d)
    inside = explicit_contains(P, A, prof, d)
    assert np.all(necessary_conditions(P[inside], A[inside], prof.beta, d, tol=1e-6))


@pytest.mark.parametrize("d", [2, 3])
def test_convexity(d):
    for prof in (CF, known_profile(Lacunary()), known_profile(Cantor(0.25, 1, 2))):
        assert convexity_check(prof, d).ok


def test_union_single_component_matches_closed_form():
    p = np.linspace(1.6, 3.5, 40)
    np.testing.assert_allclose(union_L(p, [(0.3, 0.7)], 2), L(p, closed_form_profile(0.3, 0.7), 2))


def test_union_regular_components():
    np.testing.assert_allclose(union_L(np.array([1.8, 2.0, 3.0]), [(0.3, 0.3), (0.7, 0.7)], 2), -1.0)


def test_union_matches_union_profile():
    comps = [(0.25, 0.5), (0.4, 1.0)]
    p = np.linspace(1.4, 3.0, 33)
    np.testing.assert_allclose(union_L(p, comps, 2), L(p, profile_for_components(comps), 2),
                               atol=1e-12)


def test_union_crossing_reported():
    # the two linear pieces (p - 2) - 2(p - 1.25) and (p - 2) - (p - 1.4)/0.6 meet at p = 0.5
    (c,) = union_crossings([(0.25, 0.5), (0.4, 1.0)], 2)
    assert c["p"] == pytest.approx(0.5)
    assert not c["admissible"]


def test_region_boundary_summary():
    r = region_boundary(CF, 2)
    s = r.summary()
    assert s["x_gamma"] == 0.5
    assert s["L_at_p_beta"] == pytest.approx(-0.5)
    assert s["lower_le_upper"] and s["lower_nonincreasing"]
    assert np.all(r.lower * r.p >= -1 - 1e-12)


def test_region_csv(tmp_path):
    r = region_boundary(CF, 2)
    r.to_csv(tmp_path / "r.csv", ["x"])
    lines = (tmp_path / "r.csv").read_text().splitlines()
    assert lines[1] == "inv_p,lower,upper"
