"""Fixed-point iteration, gating, and the transition helpers."""

import numpy as np
import pytest
from fractions import Fraction

from ssde import (
    AffineGraphMap,
    DomainMismatchError,
    InitialIntegralMismatchError,
    LConditionViolatedError,
    MissingTargetAError,
    NoAdmissibleAError,
    NotContractiveError,
    OrderingError,
    Piecemealing,
    SegmentedFunction,
    ShapeMismatchError,
    SsdeProblem,
    TargetMismatchError,
    bump,
    build_initial,
    classic_transition,
    iterate_and_record,
    make_sampled,
    picard_step,
    residual,
    second_difference,
    solve,
    solve_transition,
    transition_problem,
)


@pytest.fixture
def strong_prob():
    pm = Piecemealing.validate(
        (0, 1), (AffineGraphMap("1/2", 5, 0, 0), AffineGraphMap("-1/2", 5, 1, 0))
    )
    return SsdeProblem(piecemealing=pm, y0=0)


def test_problem_order_validation(transition_pm):
    with pytest.raises(ValueError):
        SsdeProblem(piecemealing=transition_pm, order=3)
    with pytest.raises(ValueError):
        SsdeProblem(piecemealing=transition_pm, order=2)  # no yprime0
    with pytest.raises(ValueError):
        SsdeProblem(piecemealing=transition_pm, order=1, yprime0=0)


def test_admissible_A_paths(transition_pm, transition_prob, chart_pm, chart_prob, inconsistent_pm, cam_prob):
    assert transition_prob.admissible_A() == Fraction(1, 2)
    assert chart_prob.admissible_A() == 9
    with pytest.raises(MissingTargetAError):
        SsdeProblem(piecemealing=transition_pm, y0=0).admissible_A()
    with pytest.raises(TargetMismatchError):
        SsdeProblem(piecemealing=chart_pm, y0=1, target_A=8).admissible_A()
    # a matching target on a pinned system is fine
    assert SsdeProblem(piecemealing=chart_pm, y0=1, target_A=9).admissible_A() == 9
    with pytest.raises(NoAdmissibleAError):
        SsdeProblem(piecemealing=inconsistent_pm, y0=0).admissible_A()
    identity = Piecemealing.validate((0, 1), (AffineGraphMap(1, 1, 0, 0),))
    with pytest.raises(LConditionViolatedError):
        SsdeProblem(piecemealing=identity, y0=0).admissible_A()
    assert cam_prob.admissible_A() is None  # order 2 passes the target through


def test_picard_step_first_order(transition_prob):
    y = build_initial(transition_prob, "linear", nodes_per_segment=512)
    z = picard_step(transition_prob, y)
    assert z.same_shape(y)
    # prefix integral of the assembled tent: 2u^2 then 1 - 2(1-u)^2
    assert z(0.25) == pytest.approx(0.125, abs=1e-12)
    assert z(0.5) == pytest.approx(0.5, abs=1e-12)
    assert z(1.0) == pytest.approx(1.0, abs=1e-12)
    assert z(0.0) == 0.0
    # the first correction tops out at the quarter points, exactly on a dyadic grid
    assert z.sup_distance(y) == 0.125


def test_picard_step_second_order(cam_prob):
    y = build_initial(cam_prob, {"type": "constant", "coeffs": [0]}, nodes_per_segment=128)
    z = picard_step(cam_prob, y)
    assert z.same_shape(y)
    # double prefix of the forcing steps, hand-integrated
    assert z(0.0) == 0.0
    assert z(0.5) == pytest.approx(1.0 / 3.0, abs=1e-12)
    assert z(1.0) == pytest.approx(1.0, abs=1e-12)


def test_build_initial_variants(transition_prob, cam_prob):
    f = SegmentedFunction.constant(0.5, (0, 0.5, 1), 8)
    assert build_initial(transition_prob, f) is f
    y = build_initial(transition_prob, None, nodes_per_segment=16)
    np.testing.assert_array_equal(y.values, 0.5)  # admissible A over width 1
    y = build_initial(transition_prob, "constant", nodes_per_segment=16)
    np.testing.assert_array_equal(y.values, 0.5)
    y = build_initial(transition_prob, {"type": "constant", "coeffs": [0.25]}, nodes_per_segment=16)
    np.testing.assert_array_equal(y.values, 0.25)
    y = build_initial(transition_prob, "linear", nodes_per_segment=16)
    assert y(0.75) == pytest.approx(0.75, abs=1e-15)
    y = build_initial(transition_prob, "one-minus-x", nodes_per_segment=16)
    assert y(0.75) == pytest.approx(0.25, abs=1e-15)
    y = build_initial(transition_prob, "classic-transition", nodes_per_segment=16)
    assert y(0.5) == 0.5
    y = build_initial(transition_prob, {"type": "polynomial", "coeffs": [1, 2]}, nodes_per_segment=16)
    assert y(0.5) == pytest.approx(2.0, abs=1e-15)
    y = build_initial(transition_prob, lambda u: u * u, nodes_per_segment=16)
    assert y(0.5) == pytest.approx(0.25, abs=1e-15)


def test_build_initial_errors(transition_prob, cam_prob):
    with pytest.raises(ValueError):
        build_initial(cam_prob, "constant")  # no coeffs and no target integral
    with pytest.raises(ValueError):
        build_initial(transition_prob, {"type": "polynomial"})
    with pytest.raises(ValueError):
        build_initial(transition_prob, "cubic-spline")


def test_solve_zero_fixed_point(transition_pm):
    prob = SsdeProblem(piecemealing=transition_pm, y0=0, target_A=0)
    report = solve(prob, {"type": "constant", "coeffs": [0]}, nodes_per_segment=64)
    assert report.converged
    assert report.iterations == 1
    assert report.deltas == (0.0,)
    assert report.residual == 0.0
    assert report.A_achieved == 0.0
    assert report.a_posteriori_bound == 0.0
    np.testing.assert_array_equal(report.solution.values, 0.0)


def test_solve_transition_report():
    report = solve_transition(512, tol=1e-10, max_iter=200)
    assert report.converged
    assert report.iterations <= 60
    assert report.deltas[0] == 0.125
    ratios = np.diff(np.log(np.asarray(report.deltas)))
    assert np.all(np.exp(ratios) <= 0.5 + 1e-12)
    sol = report.solution
    assert sol(0.5) == pytest.approx(0.5, abs=1e-6)
    assert sol(1.0) == pytest.approx(1.0, abs=1e-6)
    assert report.A_achieved == pytest.approx(0.5, abs=1e-12)
    assert report.contraction == 0.5
    # with contraction 1/2 the tail bound equals the last correction
    assert report.a_posteriori_bound == report.deltas[-1]
    assert report.residual <= 1e-3
    assert not report.experimental
    assert report.residual_excluded_nodes == 2


def test_solve_gates(transition_pm, strong_prob):
    with pytest.raises(NotContractiveError):
        solve(strong_prob)
    prob = SsdeProblem(piecemealing=transition_pm, y0=0, target_A=Fraction(1, 2))
    with pytest.raises(InitialIntegralMismatchError):
        solve(prob, {"type": "constant", "coeffs": [5]})
    with pytest.raises(MissingTargetAError):
        solve(SsdeProblem(piecemealing=transition_pm, y0=0))


def test_solve_forced_expansion(strong_prob):
    # integral-0 start matches the pinned total; the expanding map never settles
    report = solve(
        strong_prob,
        {"type": "polynomial", "coeffs": [-6, 12]},
        nodes_per_segment=64,
        max_iter=3,
        force=True,
    )
    assert not report.converged
    assert report.iterations == 3
    assert report.contraction == 1.25
    assert report.a_posteriori_bound is None


def test_solve_second_order_cam(cam_prob):
    report = solve(
        cam_prob,
        {"type": "constant", "coeffs": [0]},
        nodes_per_segment=256,
        max_iter=400,
    )
    assert report.converged
    assert report.experimental
    assert report.iterations <= 20
    ds = np.asarray(report.deltas)
    assert np.all(ds[1:] / ds[:-1] <= 0.2)
    assert report.residual <= 1e-2
    assert report.A_achieved == pytest.approx(0.5, abs=1e-9)
    assert report.a_posteriori_bound == pytest.approx(report.deltas[-1], rel=1e-12)


def test_iterate_and_record_first_order(transition_prob):
    record = iterate_and_record(transition_prob, "linear", steps=4, nodes_per_segment=256)
    assert len(record.iterates) == 5
    assert len(record.deltas) == 4
    assert record.p_of_last is None
    assert record.second_diff_nodes is None
    assert record.deltas[0] == 0.125
    assert all(b < a for a, b in zip(record.deltas, record.deltas[1:]))
    redo = picard_step(transition_prob, record.iterates[0])
    np.testing.assert_array_equal(redo.values, record.iterates[1].values)


def test_iterate_and_record_second_order(cam_prob):
    record = iterate_and_record(
        cam_prob, {"type": "constant", "coeffs": [0]}, steps=2, nodes_per_segment=128
    )
    assert len(record.iterates) == 3
    last = record.iterates[-1]
    assert record.p_of_last.same_shape(last)
    assert record.second_diff_nodes.shape == record.second_diff_values.shape
    # six segments, each contributing all but three interior nodes
    assert record.second_diff_nodes.size == 6 * (128 - 3)


def test_second_difference_cubic():
    f = make_sampled(lambda u: u**3, (0, 1), 64)
    xs, vals = second_difference(f)
    np.testing.assert_allclose(vals, 6.0 * xs, rtol=0, atol=1e-9)
    assert xs.size == 64 - 3


def test_second_difference_short_segments():
    f = SegmentedFunction.from_segments([0, 1], [np.zeros(4)])
    xs, vals = second_difference(f)
    assert xs.size == 0 and vals.size == 0


def test_residual_values(transition_prob):
    zero = SegmentedFunction.constant(0.0, (0, 0.5, 1), 512)
    assert residual(transition_prob, zero) == 0.0
    linear = build_initial(transition_prob, "linear", nodes_per_segment=512)
    # slope 1 against the assembled tent, worst two nodes in from the peak
    assert residual(transition_prob, linear) == pytest.approx(0.9921875, abs=1e-12)
    refined = SegmentedFunction.from_callable(lambda u: u, (0, 0.25, 0.5, 1), (8, 8, 16))
    with pytest.raises(ShapeMismatchError):
        residual(transition_prob, refined)  # assembly folds the extra breakpoint
    off_grid = make_sampled(lambda u: u, (0, 1), 512)
    with pytest.raises(DomainMismatchError):
        residual(transition_prob, off_grid)


def test_classic_transition_values():
    assert classic_transition(0.5) == 0.5
    assert classic_transition(0.25) == pytest.approx(0.06496916912866407, rel=1e-14)
    assert classic_transition(0.0) == 0.0
    assert classic_transition(1.0) == 1.0
    assert classic_transition(-3.0) == 0.0
    assert classic_transition(5.0) == 1.0
    # the exponent difference saturates tanh well before the endpoints
    assert classic_transition(0.01) == 0.0
    assert classic_transition(0.99) == 1.0
    xs = np.linspace(0.0, 1.0, 101)
    ys = classic_transition(xs)
    assert ys.shape == xs.shape
    np.testing.assert_allclose(ys + ys[::-1], 1.0, rtol=0, atol=1e-15)
    assert np.all(np.diff(ys) >= 0.0)
    assert isinstance(classic_transition(0.3), float)


def test_bump_shape():
    xs = np.array([-1.0, 0.0, 1.0, 1.5, 2.0, 3.0, 4.0])
    vals = bump(xs, 0, 1, 2, 3)
    np.testing.assert_array_equal(vals[[0, 1, 5, 6]], 0.0)
    np.testing.assert_array_equal(vals[[2, 3, 4]], 1.0)
    assert bump(0.5, 0, 1, 2, 3) == 0.5
    assert isinstance(bump(0.5, 0, 1, 2, 3), float)
    # rise and fall mirror each other
    assert bump(0.25, 0, 1, 2, 3) == pytest.approx(bump(2.75, 0, 1, 2, 3), abs=1e-15)


def test_bump_custom_step():
    assert bump(0.5, 0, 1, 2, 3, step=lambda t: t) == 0.5

    def scalar_only(t):
        if np.ndim(t):
            raise TypeError("scalar only")
        return float(t) ** 2

    # scalar-only transitions are applied pointwise
    assert bump(0.5, 0, 1, 2, 3, step=scalar_only) == 0.25


def test_bump_ordering():
    with pytest.raises(OrderingError):
        bump(0.5, 0, 0, 1, 2)
    with pytest.raises(OrderingError):
        bump(0.5, 3, 2, 1, 0)


def test_transition_problem_factory():
    prob = transition_problem()
    assert prob.order == 1
    assert prob.target_A == Fraction(1, 2)
    assert prob.piecemealing.exact_breakpoints == (0, Fraction(1, 2), 1)
    report = solve_transition(64)
    assert report.converged
    assert report.deltas[0] == 0.125
