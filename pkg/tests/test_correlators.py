"""Correlator engines: one-point series, trace products, cycle sums."""

from unittest import mock

import pytest

from p1gw import correlators
from p1gw.correlators import (
    _n_point_product,
    correlator,
    default_depth,
    n_point,
    one_point,
    split_by_genus,
    stability_check,
    two_point,
)
from p1gw.eps import EPS_ZERO, EpsLaurent
from p1gw.errors import (
    CancellationFailure,
    IndexOutOfRange,
    MalformedValue,
    UnstableExtraction,
)
from p1gw.rational import Rat, factorial
from p1gw import reference


@pytest.mark.parametrize("k", [0, 2, 4])
def test_one_point_matches_frozen_heads(k):
    head = reference.one_point_head(k)
    scaled = (one_point(k) * factorial(k + 1)).shift(1)
    assert dict(scaled.terms) == head


def test_one_point_odd_vanishes_and_validates():
    assert one_point(1) == EPS_ZERO
    assert one_point(7) == EPS_ZERO
    with pytest.raises(IndexOutOfRange):
        one_point(-2)


def test_two_point_is_symmetric():
    assert two_point(0, 4) == two_point(4, 0)
    assert two_point(3, 5) == two_point(5, 3)


def test_two_point_flagship_row():
    want = {e: v for e, v in reference.flagship_series()[4][1].items()}
    assert dict(two_point(6, 6).terms) == want


def test_n_point_flagship_six_ones():
    want = reference.flagship_series()[0][1]
    assert dict(n_point((1,) * 6).terms) == want


@pytest.mark.parametrize("ks", [(2, 1, 1), (2, 2, 2), (1, 1, 1, 1), (3, 2, 1)])
def test_cycle_sum_agrees_with_product_expansion(ks):
    assert n_point(ks) == _n_point_product(ks)


def test_n_point_odd_total_vanishes():
    assert n_point((1, 1, 1)) == EPS_ZERO
    assert n_point((2, 2, 1)) == EPS_ZERO


def test_jobs_do_not_change_values():
    ks = (2, 2, 1, 1)
    assert n_point(ks, jobs=1) == n_point(ks, jobs=3)


def test_validation_errors():
    with pytest.raises(MalformedValue):
        n_point((1, 1))  # too few for the cycle engine
    with pytest.raises(MalformedValue):
        correlator(())
    with pytest.raises(MalformedValue):
        correlator((0,) * 9)
    with pytest.raises(IndexOutOfRange):
        correlator((1, -1))


def test_correlator_record_fields():
    rec = correlator((2, 2, 2))
    assert rec.insertions == (2, 2, 2)
    assert rec.stability_verified
    want = [Rat("1"), Rat("25/24"), Rat("19/192"), Rat("1/13824")]
    got = [v for _, _, v in rec.by_genus]
    assert got[: len(want)] == want
    assert all(v == 0 for v in got[len(want):])
    # degrees descend as genus grows
    assert [(g, d) for g, d, _ in rec.by_genus][:2] == [(0, 4), (1, 3)]


def test_correlator_canonicalizes_order():
    assert correlator((1, 3, 2)).insertions == (3, 2, 1)


def test_split_by_genus_rejects_stray_exponent():
    bad = EpsLaurent({-1: Rat(1)})
    with pytest.raises(MalformedValue):
        split_by_genus(bad, (0, 0))


def test_split_by_genus_keeps_explicit_zeros():
    rows = split_by_genus(two_point(1, 1), (1, 1))
    assert (1, 1, Rat(0)) in rows  # odd insertions kill the d=1 cell


def test_stability_check_passes_and_fails():
    assert stability_check((2, 2, 2), 12, 16)
    with pytest.raises(UnstableExtraction):
        stability_check((2, 2, 2), 4, 16)


def test_unstable_explicit_depth_in_correlator():
    with pytest.raises(UnstableExtraction):
        correlator((2, 2, 2), depth=4)


def test_two_point_cancellation_probe_fires_on_corruption():
    orig = correlators._lifted_resolvent

    def bad(depth, nvars, var):
        m = orig(depth, nvars, var)
        from p1gw.series import Mat2, MultiSeries, LambdaSeries
        from p1gw.eps import EPS_ONE

        spike = MultiSeries.from_lambda(LambdaSeries({-1: EPS_ONE}, depth), nvars, var)
        return Mat2(m.a + spike, m.b, m.c, m.d)

    with mock.patch.object(correlators, "_lifted_resolvent", bad):
        with pytest.raises(CancellationFailure):
            two_point(0, 0, depth=8)


def test_n_point_probe_fires_when_shallow_sum_survives():
    orig = correlators._cycle_sum

    def bad(targets, depth, jobs=1):
        if any(t > -2 for t in targets):
            return EpsLaurent.const(1)
        return orig(targets, depth, jobs)

    with mock.patch.object(correlators, "_cycle_sum", bad):
        with pytest.raises(CancellationFailure):
            n_point((0, 0, 0), depth=8)


def test_default_depth_covers_all_contributions():
    ks = (4, 2)
    d = default_depth(ks)
    assert two_point(*ks, depth=d) == two_point(*ks, depth=d + 6)
