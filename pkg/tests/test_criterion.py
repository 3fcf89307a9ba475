"""Decision engine: window condition, enumeration shifts, exponent reindexing."""

import math

import pytest
from hypothesis import given, settings, strategies as st

from smallfock.core import (
    Side,
    SpecError,
    TailedSpec,
    UnsupportedSideError,
    node,
)
from smallfock.criterion import (
    Decision,
    Failure,
    check_bounded,
    check_condition_iii,
    decide_cis,
    reindex_for_exponent,
    shift_enumeration,
    window_sup,
)

from conftest import gamma_one, gamma_two, make_spec


class TestCheckBounded:
    def test_constant(self):
        ok, sup = check_bounded(make_spec(TailedSpec.const(0.3), TailedSpec.const(0.0)))
        assert ok and sup == 0.3

    def test_periodic(self):
        ok, sup = check_bounded(
            make_spec(TailedSpec.periodic([0.4, -0.4]), TailedSpec.const(0.0)))
        assert ok and sup == 0.4

    def test_table(self):
        ok, sup = check_bounded(
            make_spec(TailedSpec.table({5: 2.0}), TailedSpec.const(0.0)))
        assert ok and sup == 2.0


class TestWindowSup:
    def test_constant(self):
        spec = make_spec(TailedSpec.const(0.5), TailedSpec.const(0.0))
        assert window_sup(spec, 7) == 0.5

    def test_periodic_cancellation(self):
        spec = make_spec(TailedSpec.periodic([0.4, -0.4]), TailedSpec.const(0.0))
        assert window_sup(spec, 2) == 0.0

    def test_table_spike(self):
        spec = make_spec(TailedSpec.table({0: 0.9}), TailedSpec.const(0.0))
        assert window_sup(spec, 3) == pytest.approx(0.3)

    def test_invalid_length(self):
        with pytest.raises(SpecError):
            window_sup(gamma_one(), 0)


class TestConditionIII:
    def test_one_sided_small_constant(self):
        holds, N, eps, m = check_condition_iii(
            make_spec(TailedSpec.const(0.3), TailedSpec.const(0.0)))
        assert holds and N == 1 and eps == pytest.approx(0.1) and m is None

    def test_half_fails_both_sides(self):
        for side in (Side.ONE_SIDED, Side.TWO_SIDED):
            holds, *_ = check_condition_iii(
                make_spec(TailedSpec.const(0.5), TailedSpec.const(0.0), side=side))
            assert not holds

    def test_large_constant_two_sided_shift(self):
        holds, N, eps, m = check_condition_iii(
            make_spec(TailedSpec.const(0.8), TailedSpec.const(0.0),
                      side=Side.TWO_SIDED))
        assert holds and m == -1 and eps == pytest.approx(0.15) and N == 1

    def test_large_constant_one_sided_fails(self):
        holds, *_ = check_condition_iii(
            make_spec(TailedSpec.const(0.8), TailedSpec.const(0.0)))
        assert not holds


class TestDecideCis:
    def test_unperturbed_yes(self):
        for spec in (gamma_one(), gamma_two(), gamma_one(alpha=0.5, p=1.0)):
            v = decide_cis(spec)
            assert v.decision is Decision.YES and not v.failures
            assert v.window_N is not None and v.epsilon is not None

    def test_two_sided_shift_witness(self):
        v = decide_cis(make_spec(TailedSpec.const(0.8), TailedSpec.const(0.0),
                                 side=Side.TWO_SIDED))
        assert v.decision is Decision.YES and v.shift_m == -1

    def test_one_sided_window_failure(self):
        v = decide_cis(make_spec(TailedSpec.const(0.8), TailedSpec.const(0.0)))
        assert v.decision is Decision.NO and v.failures == (Failure.WINDOW,)

    def test_separation_failure(self):
        v = decide_cis(make_spec(TailedSpec.table({0: 0.0, 1: -1.0}),
                                 TailedSpec.const(0.0)))
        assert v.decision is Decision.NO and Failure.SEPARATION in v.failures

    def test_verdict_json_shape(self):
        payload = decide_cis(gamma_one()).to_json()
        assert payload["decision"] == "yes"
        assert payload["failures"] == []
        assert set(payload) == {"decision", "sep_const", "sup_delta", "N",
                                "epsilon", "shift_m", "failures"}


class TestShiftEnumeration:
    def test_constant_shift(self):
        spec = make_spec(TailedSpec.const(0.8), TailedSpec.const(0.0),
                         side=Side.TWO_SIDED)
        shifted = shift_enumeration(spec, -1)
        assert shifted.delta.constant == pytest.approx(-0.2)

    def test_identity_shift(self):
        spec = gamma_two()
        assert shift_enumeration(spec, 0) == spec

    def test_periodic_shift(self):
        spec = make_spec(TailedSpec.periodic([0.2, -0.1, 0.3]),
                         TailedSpec.const(0.0), side=Side.TWO_SIDED)
        shifted = shift_enumeration(spec, 3)
        assert shifted.delta.values == pytest.approx((3.2, 2.9, 3.3))

    def test_point_set_identity(self):
        spec = make_spec(TailedSpec.periodic([0.2, -0.1, 0.3]),
                         TailedSpec.periodic([0.1, 0.4]), side=Side.TWO_SIDED)
        for m in (-3, -1, 1, 2):
            shifted = shift_enumeration(spec, m)
            for k in range(-6, 7):
                assert node(shifted, k).logmod == pytest.approx(
                    node(spec, k + m).logmod, abs=1e-12)
                assert node(shifted, k).phase == node(spec, k + m).phase

    def test_one_sided_rejected(self):
        with pytest.raises(UnsupportedSideError):
            shift_enumeration(gamma_one(), 1)


class TestReindexForExponent:
    def test_to_inf(self):
        spec = reindex_for_exponent(gamma_one(p=2.0), math.inf)
        assert spec.delta.constant == pytest.approx(1.0)
        assert math.isinf(spec.space.p)

    def test_to_one(self):
        spec = reindex_for_exponent(gamma_one(p=2.0), 1.0)
        assert spec.delta.constant == pytest.approx(-1.0)

    def test_to_four(self):
        spec = reindex_for_exponent(gamma_one(p=2.0), 4.0)
        assert spec.delta.constant == pytest.approx(0.5)

    def test_point_set_identity(self):
        spec = make_spec(TailedSpec.periodic([0.2, -0.3]), TailedSpec.const(0.0),
                         p=2.0, side=Side.TWO_SIDED)
        re = reindex_for_exponent(spec, 1.0)
        for k in range(-5, 6):
            assert node(re, k).logmod == pytest.approx(node(spec, k).logmod,
                                                       abs=1e-12)


def test_contrast_witness_p_dependence():
    spec = make_spec(TailedSpec.periodic([0.3, -0.3]), TailedSpec.const(0.0),
                     p=2.0, side=Side.TWO_SIDED)
    assert decide_cis(spec).decision is Decision.YES
    assert decide_cis(reindex_for_exponent(spec, 4.0)).decision is Decision.NO
    assert decide_cis(reindex_for_exponent(spec, 1.0)).decision is Decision.YES


def test_witness_soundness():
    for spec in (gamma_two(),
                 make_spec(TailedSpec.const(0.8), TailedSpec.const(0.0),
                           side=Side.TWO_SIDED),
                 make_spec(TailedSpec.periodic([0.4, -0.4]), TailedSpec.const(0.0),
                           side=Side.TWO_SIDED)):
        v = decide_cis(spec)
        assert v.decision is Decision.YES
        shifted = shift_enumeration(spec, v.shift_m)
        assert window_sup(shifted, v.window_N) <= 0.5 - v.epsilon


deltas = st.one_of(
    st.floats(min_value=-2.0, max_value=2.0, allow_nan=False).map(TailedSpec.const),
    st.lists(st.floats(min_value=-2.0, max_value=2.0, allow_nan=False),
             min_size=1, max_size=4).map(TailedSpec.periodic),
    st.builds(
        TailedSpec.table,
        st.dictionaries(st.integers(min_value=-4, max_value=4),
                        st.floats(min_value=-2.0, max_value=2.0, allow_nan=False),
                        max_size=4),
        st.floats(min_value=-2.0, max_value=2.0, allow_nan=False),
        st.floats(min_value=-2.0, max_value=2.0, allow_nan=False),
    ),
)


@settings(max_examples=50, deadline=None)
@given(deltas, st.integers(min_value=-5, max_value=5))
def test_shift_invariance(delta, m):
    spec = make_spec(delta, TailedSpec.const(0.0), side=Side.TWO_SIDED)
    base = decide_cis(spec).decision
    assert decide_cis(shift_enumeration(spec, m)).decision is base


@settings(max_examples=50, deadline=None)
@given(deltas, st.sampled_from([1.0, 2.0, math.inf]),
       st.sampled_from([1.0, 2.0, math.inf]))
def test_p_periodicity(delta, p, q):
    spec = make_spec(delta, TailedSpec.const(0.0), p=p, side=Side.TWO_SIDED)
    assert decide_cis(reindex_for_exponent(spec, q)).decision \
        is decide_cis(spec).decision
