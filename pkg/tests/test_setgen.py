import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from sphericalmax.setgen import (Cantor, ExplicitPoints, FullInterval, FullRay, Lacunary, LogInterval,
                                 Periodize, SamplingResourceError, Scale, SequenceSet,
                                 SpecParameterError, SpecSyntaxError, Union, parse_set_spec, sample,
                                 window_restrict)

UNIT = LogInterval(0.0, 1.0)


def test_parse_basic_forms():
    assert parse_set_spec("seq(a=1.0)") == SequenceSet(1.0)
    assert parse_set_spec("lacunary") == Lacunary(2.0)
    assert parse_set_spec("full") == FullRay()
    u = parse_set_spec("union(lacunary, cantor(ratio=0.3333333333, lo=1, hi=2))")
    assert isinstance(u, Union)
    assert u.parts[0] == Lacunary(2.0)
    assert u.parts[1] == Cantor(0.3333333333, 1.0, 2.0)


@pytest.mark.parametrize("text", ["seq(a=-1)", "lacunary(base=1)", "cantor(ratio=0.7,lo=1,hi=2)",
                                  "interval(lo=2,hi=1)", "scale(-1,full)"])
def test_parameter_errors(text):
    with pytest.raises(SpecParameterError):
        parse_set_spec(text)


@pytest.mark.parametrize("text", ["seq(a=1", "bogus", "union(", "seq(a=1))", ""])
def test_syntax_errors_carry_position(text):
    with pytest.raises(SpecSyntaxError) as exc:
        parse_set_spec(text)
    assert exc.value.position >= 0


def test_points_file(tmp_path):
    f = tmp_path / "pts.txt"
    f.write_text("# radii\n1.0\n1.5\n\n2.0\n")
    spec = parse_set_spec(f"pointsfile({f})")
    assert isinstance(spec, ExplicitPoints)
    np.testing.assert_allclose(sorted(spec.points), [1.0, 1.5, 2.0])


@settings(max_examples=40, deadline=None)
@given(a=st.floats(0.1, 5), lam=st.floats(0.1, 10), ratio=st.floats(0.05, 0.5))
def test_to_text_round_trip(a, lam, ratio):
    spec = Union((Scale(lam, Periodize(SequenceSet(a))), Cantor(ratio, 1.0, 3.0)))
    assert parse_set_spec(spec.to_text()) == spec


def test_lacunary_unit_window():
    S = sample(Lacunary(), UNIT, 10)
    np.testing.assert_array_equal(S.comp_lo, [0.0, 1.0])
    np.testing.assert_array_equal(S.comp_hi, [0.0, 1.0])


def test_sequence_sample_is_faithful():
    S = sample(SequenceSet(1.0), UNIT, 4)
    true = np.log2(1 + 1 / np.arange(1, 200_000))
    h = S.spacing
    # every true point lies on or within h of a component
    idx = np.searchsorted(S.comp_hi, true - h)
    ok = (idx < S.n_components) & (S.comp_lo[np.minimum(idx, S.n_components - 1)] <= true + h)
    assert ok.all()
    # every component endpoint lies within h of the closure of the set
    closure = np.append(true, 0.0)
    ends = np.concatenate([S.comp_lo, S.comp_hi])
    assert np.abs(ends[:, None] - closure[None, :]).min(axis=1).max() <= h
    assert S.comp_hi[-1] == pytest.approx(1.0)


def test_cantor_generation_count():
    c = Cantor(1 / 3, 1.0, 2.0)
    for j in (4, 8, 10):
        S = sample(c, UNIT, j)
        assert S.n_components == 2 ** c.generation_for(S.spacing)


def test_window_restrict_examples():
    S = sample(window_restrict(Lacunary(), 4), UNIT, 10)
    np.testing.assert_array_equal(S.comp_lo, [0.0, 1.0])
    for R in (0.3, 1.0, 7.7):
        S = sample(window_restrict(FullRay(), R), UNIT, 10)
        assert (S.comp_lo.tolist(), S.comp_hi.tolist()) == ([0.0], [1.0])


@pytest.mark.parametrize("k", [-2, 1, 3])
def test_periodization_dyadic_invariance(k):
    P = Periodize(SequenceSet(1.0))
    a = sample(window_restrict(P, 2.0 ** k), UNIT, 12)
    b = sample(window_restrict(P, 1.0), UNIT, 12)
    assert a.equals(b)


def test_scale_by_power_of_two_shifts_samples():
    base = SequenceSet(0.5)
    a = sample(Scale(2.0, base), LogInterval(1.0, 2.0), 10)
    b = sample(base, UNIT, 10)
    np.testing.assert_allclose(a.comp_lo - 1.0, b.comp_lo, atol=1e-12)
    np.testing.assert_allclose(a.comp_hi - 1.0, b.comp_hi, atol=1e-12)


def test_interval_is_one_component():
    S = sample(FullInterval(1.0, 2.0), LogInterval(-1.0, 2.0), 8)
    assert S.n_components == 1
    assert (S.comp_lo[0], S.comp_hi[0]) == (0.0, pytest.approx(1.0))


def test_empty_intersection():
    assert sample(FullInterval(1.0, 2.0), LogInterval(3.0, 4.0), 8).empty


def test_resource_cap():
    with pytest.raises(SamplingResourceError):
        sample(Lacunary(1.0000001), LogInterval(0.0, 100.0), 4)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.floats(1.0, 64.0), min_size=1, max_size=20))
def test_components_sorted_and_disjoint(radii):
    S = sample(ExplicitPoints(tuple(sorted(set(radii)))), LogInterval(0.0, 6.0), 12)
    assert np.all(S.comp_lo <= S.comp_hi)
    assert np.all(S.comp_hi[:-1] < S.comp_lo[1:])
    assert 1 <= S.n_components <= len({math.log2(r) for r in radii})
