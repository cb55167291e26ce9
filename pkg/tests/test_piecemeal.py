"""Graph maps and piecemealing validation / application."""

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ssde import (
    AffineGraphMap,
    ArgumentOutOfRangeError,
    DegenerateMapError,
    DomainMismatchError,
    Interval,
    Piecemealing,
    SegmentedFunction,
    ShiftMismatchError,
    TilingError,
    image_interval,
    make_sampled,
)

from conftest import random_exact_piecemealing, seeded_rng


def test_graph_map_coercion_and_exactness():
    m = AffineGraphMap("-1/2", 2, Fraction(1), 0)
    assert m.exact == (Fraction(-1, 2), Fraction(2), Fraction(1), Fraction(0))
    assert (m.a, m.d, m.e, m.f) == (-0.5, 2.0, 1.0, 0.0)
    assert AffineGraphMap(0.5, 2, 0, 0).exact is None  # a float poisons exactness
    assert AffineGraphMap("1/2", 2, 0, 0) == AffineGraphMap(Fraction(1, 2), 2, 0, 0)


def test_graph_map_zero_scale_rejected():
    with pytest.raises(DegenerateMapError):
        AffineGraphMap(0, 1, 0, 0)


def test_graph_map_image():
    dom = Interval(0.0, 1.0)
    assert AffineGraphMap(-1, 1, 1, 0).image(dom) == Interval(0.0, 1.0)
    assert AffineGraphMap("-1/2", 2, 1, 0).image(dom) == Interval(0.5, 1.0)
    m = AffineGraphMap("1/3", "2/3", "2/3", 0)
    assert image_interval(m, Interval(1.0, 4.0)) == Interval(1.0, 2.0)


def test_validate_transition(transition_pm):
    assert transition_pm.is_exact
    assert transition_pm.n == 2
    assert transition_pm.width == 1.0
    assert transition_pm.exact_breakpoints == (Fraction(0), Fraction(1, 2), Fraction(1))
    np.testing.assert_array_equal(transition_pm.breakpoints, [0.0, 0.5, 1.0])


def test_validate_rejects_bad_tiling():
    with pytest.raises(TilingError):
        Piecemealing.validate(
            (0, 1), (AffineGraphMap("1/2", 1, 0, 0), AffineGraphMap("1/3", 1, "2/3", 0))
        )
    with pytest.raises(TilingError):
        Piecemealing.validate((0, 1), ())


def test_validate_float_tiling_tolerance():
    a2 = 0.5 + 5e-13  # inside the tiling tolerance
    pm = Piecemealing.validate(
        (0.0, 1.0), (AffineGraphMap(0.5, 1.0, 0.0, 0.0), AffineGraphMap(a2, 1.0, 1.0 - a2, 0.0))
    )
    assert not pm.is_exact
    assert pm.breakpoints[-1] == 1.0  # snapped to the right endpoint
    with pytest.raises(TilingError):
        Piecemealing.validate(
            (0.0, 1.0),
            (AffineGraphMap(0.5, 1.0, 0.0, 0.0), AffineGraphMap(0.5 + 1e-9, 1.0, 0.5 - 1e-9, 0.0)),
        )


def test_validate_rejects_shift_mismatch():
    with pytest.raises(ShiftMismatchError):
        Piecemealing.validate(
            (0, 1), (AffineGraphMap("1/2", 2, "1/10", 0), AffineGraphMap("-1/2", 2, 1, 0))
        )
    with pytest.raises(ShiftMismatchError):
        Piecemealing.validate(
            (0.0, 1.0),
            (AffineGraphMap(0.5, 2.0, 1e-6, 0.0), AffineGraphMap(-0.5, 2.0, 1.0, 0.0)),
        )


def test_exact_strip_reconstruction_random():
    rng = seeded_rng(104)
    for _ in range(50):
        pm = random_exact_piecemealing(rng)
        xs = pm.exact_breakpoints
        w = xs[-1] - xs[0]
        assert sum(abs(m.exact[0]) for m in pm.maps) == 1
        for i, m in enumerate(pm.maps):
            assert xs[i + 1] - xs[i] == abs(m.exact[0]) * w
        np.testing.assert_array_equal(pm.breakpoints, [float(x) for x in xs])


def test_apply_transition_tent(transition_pm):
    y = make_sampled(lambda u: u, transition_pm.breakpoints, 256)
    z = transition_pm.apply(y)
    np.testing.assert_allclose(z.segment_values(0), 4.0 * z.nodes(0), rtol=0, atol=1e-14)
    np.testing.assert_allclose(z.segment_values(1), 4.0 - 4.0 * z.nodes(1), rtol=0, atol=1e-14)
    assert z(0.5) == pytest.approx(2.0, abs=1e-14)
    assert z.is_continuous(1e-14)
    assert z.same_shape(y)


def test_apply_reflection_flips(reflection_pm):
    y = make_sampled(lambda u: u, reflection_pm.breakpoints, 128)
    z = reflection_pm.apply(y)
    np.testing.assert_allclose(z.segment_values(0), 1.0 - z.nodes(0), rtol=0, atol=1e-14)
    back = reflection_pm.apply(z)
    np.testing.assert_allclose(back.values, y.values, rtol=0, atol=1e-14)


def test_apply_zero_gives_forcing_steps(inconsistent_pm):
    zero = SegmentedFunction.constant(0.0, inconsistent_pm.breakpoints, 16)
    z = inconsistent_pm.apply(zero)
    np.testing.assert_array_equal(z.segment_values(0), np.full(17, 1.0))
    np.testing.assert_array_equal(z.segment_values(1), np.full(17, -1.0))
    assert z.jump_at(1) == -2.0


def test_apply_adds_vertical_scale_times_constant(transition_pm):
    y = make_sampled(lambda u: np.sin(3 * u), transition_pm.breakpoints, 64)
    c = 0.7
    yc = y.with_values(y.values + c)
    dz = transition_pm.apply(yc).values - transition_pm.apply(y).values
    # both strips scale by d = 2, so the offset pattern is d * c everywhere
    np.testing.assert_allclose(dz, 2.0 * c, rtol=0, atol=1e-12)


def test_apply_folds_extra_breakpoints(transition_pm):
    y = make_sampled(lambda u: u, [0, 0.25, 0.5, 1], (8, 8, 16))
    z = transition_pm.apply(y)
    np.testing.assert_array_equal(z.node_counts, [16, 16])
    np.testing.assert_allclose(z.segment_values(0), 4.0 * z.nodes(0), rtol=0, atol=1e-14)


def test_apply_domain_checks(transition_pm):
    with pytest.raises(DomainMismatchError):
        transition_pm.apply(make_sampled(lambda u: u, [0, 2], 16))
    with pytest.raises(DomainMismatchError):
        # missing the internal breakpoint at 1/2
        transition_pm.apply(make_sampled(lambda u: u, [0, 1], 16))


def test_apply_out_of_range_argument():
    # raw constructor skips validation; this shift back-maps outside [0, 1]
    bad = Piecemealing(
        Interval(0.0, 1.0),
        (AffineGraphMap(0.5, 1.0, 0.25, 0.0), AffineGraphMap(0.5, 1.0, 0.5, 0.0)),
        np.array([0.0, 0.5, 1.0]),
        None,
    )
    y = make_sampled(lambda u: u, [0, 0.5, 1], 8)
    with pytest.raises(ArgumentOutOfRangeError):
        bad.apply(y)


def test_strip_integral_bookkeeping_affine():
    # for affine y every interpolation and trapezoid is exact, so the
    # per-strip totals of the assembled graph match the closed bookkeeping
    rng = seeded_rng(105)
    for _ in range(25):
        pm = random_exact_piecemealing(rng)
        c0, c1 = rng.normal(size=2)
        y = make_sampled(lambda u: c0 + c1 * u, pm.breakpoints, 64)
        prefix = pm.apply(y).integrate_prefix(0.0)
        total_y = y.integrate()
        acc = 0.0
        for k, m in enumerate(pm.maps):
            dx = float(pm.breakpoints[k + 1] - pm.breakpoints[k])
            acc += abs(m.a) * m.d * total_y + m.f * dx
            got = prefix(float(pm.breakpoints[k + 1]))
            assert got == pytest.approx(acc, abs=1e-10 * (1 + abs(acc)))


@settings(max_examples=60, deadline=None)
@given(
    ks=st.lists(st.integers(1, 5), min_size=1, max_size=4),
    signs=st.lists(st.booleans(), min_size=4, max_size=4),
    lo=st.integers(-3, 3),
    width=st.integers(1, 3),
)
def test_validated_breakpoints_partition_domain(ks, signs, lo, width):
    tot = sum(ks)
    lo = Fraction(lo)
    hi = lo + width
    xs = [lo]
    maps = []
    for k, pos in zip(ks, signs):
        a = Fraction(k, tot) if pos else Fraction(-k, tot)
        xs.append(xs[-1] + abs(a) * width)
        anchor = hi if a > 0 else lo
        maps.append(AffineGraphMap(a, 1, xs[-1] - a * anchor, 0))
    pm = Piecemealing.validate((lo, hi), maps)
    assert pm.exact_breakpoints[0] == lo and pm.exact_breakpoints[-1] == hi
    assert all(b > a for a, b in zip(pm.exact_breakpoints, pm.exact_breakpoints[1:]))
    assert sum(abs(m.exact[0]) for m in pm.maps) == 1
    # nudging any one shift must break validation
    bent = list(maps)
    bent[0] = AffineGraphMap(maps[0].exact[0], 1, maps[0].exact[2] + Fraction(1, 1000), 0)
    with pytest.raises(ShiftMismatchError):
        Piecemealing.validate((lo, hi), bent)
