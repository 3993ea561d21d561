import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from sphericalmax.dimension import (DimensionError, assouad_spectrum, assouad_spectrum_estimate,
                                    beta_estimate, closed_form_profile, gamma_estimate,
                                    known_profile, nu_sharp_estimate, rho_star, union_profile)
from sphericalmax.entropy import count_table
from sphericalmax.setgen import (Cantor, ExplicitPoints, FullInterval, FullRay, Lacunary, Periodize,
                                 Scale, SequenceSet, Union)

LOG3_2 = math.log(2) / math.log(3)


@pytest.fixture(scope="module")
def seq1_table():
    return count_table(SequenceSet(1.0), 20)


def test_closed_form_values():
    cf = closed_form_profile(0.5, 1.0)
    np.testing.assert_allclose(cf.evaluate([-1.0, 0.0, 0.5, 1.0, 2.0]), [0.5, 0.5, 0.75, 1.0, 2.0])
    reg = closed_form_profile(0.6309, 0.6309)
    assert reg.evaluate(0.4) == pytest.approx(0.6309)
    assert reg.evaluate(1.0) == 1.0


@settings(max_examples=100, deadline=None)
@given(b=st.floats(0, 1), g=st.floats(0, 1), rho=st.floats(-2, 3))
def test_closed_form_formula(b, g, rho):
    b, g = min(b, g), max(b, g)
    cf = closed_form_profile(b, g)
    if rho <= 0:
        want = b
    elif g > 0 and rho <= g:
        want = (1 - b / g) * rho + b
    else:
        want = rho
    assert cf.evaluate(rho) == pytest.approx(max(want, b), abs=1e-12)


@settings(max_examples=100, deadline=None)
@given(b=st.floats(0, 1), g=st.floats(0, 1))
def test_closed_form_in_envelope_and_convex(b, g):
    cf = closed_form_profile(min(b, g), max(b, g))
    r = np.linspace(-1, 3, 401)
    v = cf.evaluate(r)
    assert np.all(v >= np.maximum(r, cf.beta) - 1e-12)
    assert np.all(v <= np.maximum(1.0, r) + 1e-12)
    assert np.all(np.diff(v, 2) >= -1e-12)


def test_known_profiles():
    np.testing.assert_allclose(known_profile(FullInterval()).evaluate([0, 0.5, 1, 1.5, 2]),
                               [1, 1, 1, 1.5, 2])
    assert known_profile(Cantor(1 / 3, 1.0, 2.0)).beta == pytest.approx(LOG3_2)
    assert known_profile(Scale(3.0, Periodize(SequenceSet(2.0)))).beta == pytest.approx(1 / 3)
    assert known_profile(FullRay()).beta == 1.0
    assert known_profile(ExplicitPoints((1.0, 1.5))) is None


def test_union_profile_is_pointwise_max():
    comps = [(0.25, 0.5), (0.4, 1.0)]
    up = union_profile(comps)
    r = np.linspace(-0.5, 2, 51)
    want = np.max([closed_form_profile(b, g).evaluate(r) for b, g in comps], axis=0)
    np.testing.assert_allclose(up.evaluate(r), want, atol=1e-12)
    u = known_profile(Union((Lacunary(), SequenceSet(1.0))))
    np.testing.assert_allclose(u.evaluate([0, 0.5, 1, 2]), [0.5, 0.75, 1, 2])


def test_rho_star_and_gamma_closed_forms():
    assert rho_star(known_profile(FullInterval())) == 1.0
    assert gamma_estimate(known_profile(FullInterval())) == 1.0
    assert rho_star(closed_form_profile(0.5, 1.0)) == 0.0
    assert rho_star(known_profile(Lacunary())) == 0.0
    assert gamma_estimate(closed_form_profile(0.5, 1.0)) == pytest.approx(1.0)
    assert gamma_estimate(closed_form_profile(LOG3_2, LOG3_2)) == pytest.approx(LOG3_2)


@pytest.mark.parametrize("spec,want,tol", [(FullInterval(), 1.0, 0.02), (Lacunary(), 0.0, 0.02),
                                           (Cantor(1 / 3, 1.0, 2.0), LOG3_2, 0.05),
                                           (SequenceSet(1.0), 0.5, 0.07)])
def test_beta_estimates(spec, want, tol):
    b, diag = beta_estimate(spec, 20)
    assert abs(b - want) <= tol


def test_beta_interval_j16():
    assert beta_estimate(FullInterval(), 16)[0] == pytest.approx(1.0, abs=0.02)


def test_beta_needs_enough_scales():
    with pytest.raises(DimensionError):
        beta_estimate(FullInterval(), 6)


def test_beta_scale_invariant():
    a = beta_estimate(SequenceSet(1.0), 18)[0]
    b = beta_estimate(Scale(4.0, SequenceSet(1.0)), 18)[0]
    assert a == pytest.approx(b, abs=1e-12)


@pytest.mark.parametrize("spec,want,tol", [(FullInterval(), 1.0, 0.05), (Lacunary(), 0.0, 0.05),
                                           (SequenceSet(1.0), 1.0, 0.1)])
def test_spectrum_half(spec, want, tol):
    assert abs(assouad_spectrum_estimate(spec, 0.5, 20) - want) <= tol


def test_spectrum_report_monotone_in_theta(seq1_table):
    rep = assouad_spectrum(SequenceSet(1.0), [0.1, 0.3, 0.5], 20, table=seq1_table)
    assert np.all(np.diff(rep.dims) >= -0.05)


def test_sampled_profile_envelope_and_left_constancy(seq1_table):
    grid = np.arange(-0.5, 2.01, 0.25)
    p = nu_sharp_estimate(SequenceSet(1.0), grid, 20, table=seq1_table)
    assert p.evaluate(-1.0) == pytest.approx(p.beta)
    assert p.envelope_violation() <= 1e-12
    assert np.all(np.diff(p.evaluate(np.linspace(-1, 2, 61))) >= -1e-12)
    np.testing.assert_allclose(p.evaluate(np.linspace(0, 1, 11)), 0.5 * np.linspace(0, 1, 11) + 0.5,
                               atol=0.1)


def test_sampled_profile_band_brackets(seq1_table):
    p = nu_sharp_estimate(SequenceSet(1.0), np.linspace(0, 2, 9), 20, table=seq1_table)
    lo, hi = p.band()
    r = np.linspace(0, 2, 41)
    assert np.all(lo.evaluate(r) <= hi.evaluate(r) + 1e-12)


def test_profile_csv(tmp_path, seq1_table):
    p = nu_sharp_estimate(SequenceSet(1.0), [0.0, 0.5, 1.0], 20, table=seq1_table)
    path = tmp_path / "p.csv"
    p.to_csv(path, ["config test"])
    lines = path.read_text().splitlines()
    assert lines[0] == "# config test"
    assert lines[1].split(",")[:2] == ["rho", "value"]
    assert len(lines) == 5
