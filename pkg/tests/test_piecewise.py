import json
import math

import pytest
from hypothesis import given, strategies as st

from configbounds import DomainError
from configbounds.piecewise import (
    PiecewiseConstant,
    common_refinement,
    linf_distance,
    lp_distance,
)


def pwc(breaks, values):
    return PiecewiseConstant(breaks, values)


@st.composite
def piecewise_functions(draw, max_pieces=6):
    t = draw(st.integers(1, max_pieces))
    interior = draw(
        st.lists(
            st.floats(0.01, 0.99, allow_nan=False),
            min_size=t - 1,
            max_size=t - 1,
            unique=True,
        )
    )
    breaks = [0.0] + sorted(interior) + [1.0]
    values = draw(st.lists(st.floats(0.0, 1.0), min_size=t, max_size=t))
    return PiecewiseConstant(breaks, values)


class TestConstruction:
    def test_basic(self):
        f = pwc([0, 0.25, 1], [0.0, 1.0])
        assert f.lo == 0.0 and f.hi == 1.0
        assert f.segment_count == 2
        assert f.breakpoints == (0.0, 0.25, 1.0)

    def test_canonical_merge(self):
        f = pwc([0, 0.3, 0.6, 1], [0.4, 0.4, 0.9])
        assert f.breakpoints == (0.0, 0.6, 1.0)
        assert f.values == (0.4, 0.9)

    def test_merge_cascades(self):
        f = pwc([0, 0.2, 0.4, 0.6, 1], [0.5, 0.5, 0.5, 0.5])
        assert f.segment_count == 1

    def test_rejects_nonincreasing_breaks(self):
        with pytest.raises(ValueError):
            pwc([0, 0.5, 0.5, 1], [0.1, 0.2, 0.3])
        with pytest.raises(ValueError):
            pwc([0, 0.7, 0.4, 1], [0.1, 0.2, 0.3])

    def test_rejects_out_of_range_values(self):
        with pytest.raises(ValueError):
            pwc([0, 1], [1.5])
        with pytest.raises(ValueError):
            pwc([0, 1], [-0.1])
        with pytest.raises(ValueError):
            pwc([0, 1], [float("nan")])

    def test_rejects_length_mismatch(self):
        with pytest.raises(ValueError):
            pwc([0, 0.5, 1], [0.1])

    def test_rejects_too_few_breakpoints(self):
        with pytest.raises(ValueError):
            pwc([0.0], [])

    def test_immutable(self):
        f = pwc([0, 1], [0.5])
        with pytest.raises(AttributeError):
            f.values = (0.1,)

    def test_equality_is_canonical(self):
        a = pwc([0, 0.5, 1], [0.3, 0.3])
        b = pwc([0, 1], [0.3])
        assert a == b


class TestEval:
    def test_segment_lookup(self):
        f = pwc([0, 0.2, 0.7, 1], [0.1, 0.9, 0.5])
        assert f.value_at(0.0) == 0.1
        assert f.value_at(0.69) == 0.9
        assert f.value_at(0.7) == 0.5  # right-open: breakpoint belongs to the right segment
        assert f(0.2) == 0.9

    def test_domain_errors(self):
        f = pwc([0, 1], [0.5])
        with pytest.raises(DomainError):
            f.value_at(1.0)
        with pytest.raises(DomainError):
            f.value_at(-0.001)

    @given(piecewise_functions(), st.floats(0.0, 1.0, exclude_max=True))
    def test_eval_matches_linear_scan(self, f, r):
        expected = None
        for a, b, v in f.segments():
            if a <= r < b:
                expected = v
                break
        assert f.value_at(r) == expected


class TestRefinementAndDistances:
    def test_refinement_breaks_and_values(self):
        f = pwc([0, 0.5, 1], [0.2, 0.8])
        g = pwc([0, 0.25, 1], [0.4, 0.6])
        breaks, fv, gv = common_refinement(f, g)
        assert breaks == (0.0, 0.25, 0.5, 1.0)
        assert fv == (0.2, 0.2, 0.8)
        assert gv == (0.4, 0.6, 0.6)

    def test_domain_mismatch_rejected(self):
        f = pwc([0, 1], [0.5])
        g = pwc([0, 2], [0.5])
        with pytest.raises(ValueError):
            common_refinement(f, g)

    def test_linf_example(self):
        f = pwc([0, 0.5, 1], [0.2, 0.8])
        assert linf_distance(f, PiecewiseConstant.constant(0.5)) == pytest.approx(0.3, abs=1e-15)

    def test_lp_example_p1(self):
        f = pwc([0, 0.5, 1], [0.2, 0.8])
        assert lp_distance(f, PiecewiseConstant.constant(0.5), 1) == pytest.approx(0.3, abs=1e-15)

    def test_lp_rejects_bad_p(self):
        f = pwc([0, 1], [0.5])
        with pytest.raises(ValueError):
            lp_distance(f, f, 0.5)

    @given(piecewise_functions(), piecewise_functions())
    def test_distance_axioms(self, f, g):
        d = linf_distance(f, g)
        assert d >= 0.0
        assert d == linf_distance(g, f)
        assert linf_distance(f, f) == 0.0

    @given(piecewise_functions(), piecewise_functions(), st.floats(1.0, 8.0))
    def test_lp_bounded_by_linf(self, f, g, p):
        # |domain| = 1, so the L^p norm never exceeds the sup norm
        assert lp_distance(f, g, p) <= linf_distance(f, g) * (1 + 1e-12) + 1e-15

    @given(piecewise_functions(), piecewise_functions())
    def test_lp_monotone_in_p_on_unit_domain(self, f, g):
        # On a probability-measure domain, p -> ||.||_p is nondecreasing
        d1 = lp_distance(f, g, 1)
        d2 = lp_distance(f, g, 2)
        assert d1 <= d2 + 1e-12


class TestSerialization:
    def test_roundtrip(self):
        f = pwc([0, 0.2, 0.7, 1], [0.1, 0.9, 0.5])
        payload = json.loads(f.to_json())
        assert payload == {
            "lo": 0.0,
            "hi": 1.0,
            "breaks": [0.0, 0.2, 0.7, 1.0],
            "values": [0.1, 0.9, 0.5],
        }
        assert PiecewiseConstant.from_json(f.to_json()) == f

    def test_from_dict_validates_endpoints(self):
        with pytest.raises(ValueError):
            PiecewiseConstant.from_dict(
                {"lo": 0.0, "hi": 2.0, "breaks": [0.0, 1.0], "values": [0.5]}
            )

    def test_from_dict_missing_key(self):
        with pytest.raises(ValueError):
            PiecewiseConstant.from_dict({"lo": 0.0, "hi": 1.0, "breaks": [0.0, 1.0]})

    @given(piecewise_functions())
    def test_roundtrip_property(self, f):
        assert PiecewiseConstant.from_dict(json.loads(f.to_json())) == f
