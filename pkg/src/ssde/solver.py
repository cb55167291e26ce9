"""Fixed-point solution of self-similar differential equations.

A problem couples a piecemealing P with boundary data. For order 1 the
equation is y' = P(y): one Picard step maps y to the prefix integral of the
assembled graph P(y), pinned to y(x0) = y0. For order 2 (y'' = P(y)) a step
integrates twice, pinning y'(x0) and y(x0); order-2 solving is experimental
and skips the admissibility gates that are specific to the first-order
theory.

The iteration contracts at rate m = (w/2) max|a_i d_i| in sup norm for
order 1; solve() refuses m >= 1 unless forced.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .analysis import SolutionKind, contraction_factor, solve_system
from .errors import (
    InitialIntegralMismatchError,
    MissingTargetAError,
    NoAdmissibleAError,
    NotContractiveError,
    OrderingError,
    ShapeMismatchError,
    TargetMismatchError,
)
from .funcrep import SegmentedFunction, make_sampled
from .piecemeal import AffineGraphMap, Piecemealing, _to_exact

DEFAULT_NODES = 512
DEFAULT_TOL = 1e-10
DEFAULT_MAX_ITER = 200
INITIAL_INTEGRAL_TOL = 1e-9
TARGET_MATCH_TOL = 1e-12
RESIDUAL_EXCLUDED_NODES = 2


def _as_float(value):
    return float(Fraction(value) if isinstance(value, str) else value)


@dataclass(frozen=True)
class SsdeProblem:
    """A self-similar differential equation with boundary data.

    Attributes:
        piecemealing: the validated piecemealing P.
        order: 1 for y' = P(y), 2 for y'' = P(y).
        y0: y at the left domain endpoint.
        yprime0: y' at the left endpoint; required iff order == 2.
        target_A: requested total integral of the solution. Optional; for
            order 1 it must agree with the boundary system when that system
            pins A uniquely, and it is required when the system admits a
            family.
    """

    piecemealing: Piecemealing
    order: int = 1
    y0: object = 0
    yprime0: object = None
    target_A: object = None

    def __post_init__(self):
        if self.order not in (1, 2):
            raise ValueError(f"order must be 1 or 2, got {self.order}")
        if self.order == 2 and self.yprime0 is None:
            raise ValueError("order 2 requires yprime0")
        if self.order == 1 and self.yprime0 is not None:
            raise ValueError("yprime0 only applies to order 2")

    def admissible_A(self):
        """The total integral the solution must have.

        For order 1 this consults the boundary system; for order 2 it is
        just the requested target (possibly None). May raise
        NoAdmissibleAError, MissingTargetAError, TargetMismatchError, or
        LConditionViolatedError.
        """
        if self.order == 2:
            return self.target_A
        system = solve_system(self.piecemealing, self.y0)
        if system.kind is SolutionKind.INCONSISTENT:
            raise NoAdmissibleAError(
                f"boundary system is inconsistent (alpha = {system.alpha}, beta = {system.beta})"
            )
        if system.kind is SolutionKind.UNIQUE:
            if self.target_A is not None:
                t_exact = _to_exact(self.target_A)
                if system.exact and t_exact is not None:
                    ok = t_exact == system.A
                else:
                    av = float(system.A)
                    ok = abs(_as_float(self.target_A) - av) <= TARGET_MATCH_TOL * (1 + abs(av))
                if not ok:
                    raise TargetMismatchError(
                        f"target_A = {self.target_A} but the boundary system pins A = {system.A}"
                    )
            return system.A
        if self.target_A is None:
            raise MissingTargetAError(
                "boundary system admits a family of solutions; a target total "
                "integral is required to pick one"
            )
        return self.target_A


def picard_step(problem: SsdeProblem, y: SegmentedFunction) -> SegmentedFunction:
    """One fixed-point step: integrate the assembled graph P(y).

    Order 1 returns y0 + prefix integral of P(y); order 2 integrates twice,
    seeding the inner prefix with yprime0.
    """
    z = problem.piecemealing.apply(y)
    if problem.order == 1:
        return z.integrate_prefix(_as_float(problem.y0))
    g = z.integrate_prefix(_as_float(problem.yprime0))
    return g.integrate_prefix(_as_float(problem.y0))


def build_initial(problem: SsdeProblem, spec=None, nodes_per_segment=DEFAULT_NODES):
    """Build an initial function for the iteration.

    Args:
        problem: the problem, for its grid and admissible total integral.
        spec: None or "constant" (constant A/w, or coeffs[0] if given),
            "linear" (u -> u), "one-minus-x" (u -> 1 - u),
            "classic-transition", or {"type": ..., "coeffs": [...]} where
            type "polynomial" takes ascending coefficients. A callable is
            sampled; a SegmentedFunction passes through.
    """
    if isinstance(spec, SegmentedFunction):
        return spec
    breaks = problem.piecemealing.breakpoints
    if callable(spec):
        return make_sampled(spec, breaks, nodes_per_segment)
    if spec is None:
        spec = {"type": "constant"}
    if isinstance(spec, str):
        spec = {"type": spec}
    kind = spec.get("type", "constant")
    coeffs = spec.get("coeffs")
    if kind == "constant":
        if coeffs:
            value = _as_float(coeffs[0])
        else:
            A = problem.admissible_A()
            if A is None:
                raise ValueError(
                    "a constant initial needs coeffs or an admissible total integral"
                )
            value = _as_float(A) / problem.piecemealing.width
        return SegmentedFunction.constant(value, breaks, nodes_per_segment)
    if kind == "linear":
        return make_sampled(lambda u: u, breaks, nodes_per_segment)
    if kind == "one-minus-x":
        return make_sampled(lambda u: 1.0 - u, breaks, nodes_per_segment)
    if kind == "classic-transition":
        return make_sampled(classic_transition, breaks, nodes_per_segment)
    if kind == "polynomial":
        if not coeffs:
            raise ValueError("polynomial initial needs coeffs")
        cs = [_as_float(c) for c in coeffs]
        return make_sampled(
            lambda u: np.polynomial.polynomial.polyval(u, cs), breaks, nodes_per_segment
        )
    raise ValueError(f"unknown initial type {kind!r}")


@dataclass(frozen=True)
class SolveReport:
    """Outcome of a fixed-point solve.

    deltas[j] is the sup distance between consecutive iterates at step j+1.
    When the contraction factor m is below 1, a_posteriori_bound is
    deltas[-1] * m / (1 - m), a rigorous sup-norm distance bound to the true
    fixed point of the discretized step. residual measures |Dy - P(y)| by
    central differences over interior nodes, skipping
    residual_excluded_nodes nodes next to each breakpoint. Order-2 reports
    are stamped experimental.
    """

    solution: SegmentedFunction
    converged: bool
    iterations: int
    deltas: tuple
    residual: float
    A_achieved: float
    contraction: float
    a_posteriori_bound: object
    experimental: bool
    residual_excluded_nodes: int = RESIDUAL_EXCLUDED_NODES


def _gated_initial(problem, initial, nodes_per_segment, force):
    """Shared solve/iterate preamble: gates, then the initial iterate."""
    m = float(contraction_factor(problem.piecemealing))
    A = problem.admissible_A()
    if problem.order == 1 and m >= 1.0 and not force:
        raise NotContractiveError(
            f"contraction factor {m} >= 1; pass force=True to iterate anyway"
        )
    y = build_initial(problem, initial, nodes_per_segment)
    if problem.order == 1:
        got = y.integrate()
        want = _as_float(A)
        if abs(got - want) > INITIAL_INTEGRAL_TOL * (1 + abs(want)):
            raise InitialIntegralMismatchError(
                f"initial integral {got} != admissible total {want} "
                f"(tolerance {INITIAL_INTEGRAL_TOL} * (1 + |A|))"
            )
    return y, m


def solve(
    problem: SsdeProblem,
    initial=None,
    *,
    nodes_per_segment=DEFAULT_NODES,
    tol=DEFAULT_TOL,
    max_iter=DEFAULT_MAX_ITER,
    force=False,
) -> SolveReport:
    """Iterate Picard steps to the fixed point.

    Args:
        problem: the equation and boundary data.
        initial: starting function; anything build_initial accepts.
        nodes_per_segment: grid resolution for sampled initials.
        tol: stop when consecutive iterates differ by at most this.
        max_iter: iteration cap; the report's converged flag records
            whether tol was reached.
        force: iterate even when the contraction factor is >= 1.

    Raises:
        NoAdmissibleAError, MissingTargetAError, TargetMismatchError,
        LConditionViolatedError, NotContractiveError,
        InitialIntegralMismatchError.
    """
    y, m = _gated_initial(problem, initial, nodes_per_segment, force)
    deltas = []
    converged = False
    for _ in range(int(max_iter)):
        y_next = picard_step(problem, y)
        deltas.append(y_next.sup_distance(y))
        y = y_next
        if deltas[-1] <= tol:
            converged = True
            break
    bound = deltas[-1] * m / (1.0 - m) if (deltas and m < 1.0) else None
    return SolveReport(
        solution=y,
        converged=converged,
        iterations=len(deltas),
        deltas=tuple(deltas),
        residual=residual(problem, y),
        A_achieved=y.integrate(),
        contraction=m,
        a_posteriori_bound=bound,
        experimental=problem.order == 2,
    )


@dataclass(frozen=True)
class IterationRecord:
    """Iterates f_0..f_k plus, for order 2, the assembled graph of the last
    iterate and its second difference (for eyeballing y'' = P(y))."""

    iterates: tuple
    deltas: tuple
    p_of_last: object = None
    second_diff_nodes: object = None
    second_diff_values: object = None


def iterate_and_record(
    problem: SsdeProblem,
    initial=None,
    steps=4,
    *,
    nodes_per_segment=DEFAULT_NODES,
    force=False,
) -> IterationRecord:
    """Run exactly `steps` Picard steps, keeping every iterate.

    Preconditions match solve(). For order 2 the record also carries
    P(f_k) and the central second difference of f_k.
    """
    y, _ = _gated_initial(problem, initial, nodes_per_segment, force)
    iterates = [y]
    deltas = []
    for _ in range(int(steps)):
        y_next = picard_step(problem, iterates[-1])
        deltas.append(y_next.sup_distance(iterates[-1]))
        iterates.append(y_next)
    last = iterates[-1]
    if problem.order == 2:
        xs, vals = second_difference(last)
        return IterationRecord(
            iterates=tuple(iterates),
            deltas=tuple(deltas),
            p_of_last=problem.piecemealing.apply(last),
            second_diff_nodes=xs,
            second_diff_values=vals,
        )
    return IterationRecord(iterates=tuple(iterates), deltas=tuple(deltas))


def second_difference(y: SegmentedFunction):
    """Central second difference over interior nodes, two nodes clear of
    every breakpoint. Returns (positions, values)."""
    xs_out = []
    vals_out = []
    for j in range(y.n_segments):
        v = y.segment_values(j)
        m = len(v) - 1
        if m < 4:
            continue
        h = (y.breakpoints[j + 1] - y.breakpoints[j]) / m
        nodes = y.nodes(j)
        d2 = (v[4 : m + 1] - 2.0 * v[2 : m - 1] + v[0 : m - 3]) / (4.0 * h * h)
        xs_out.append(nodes[2 : m - 1])
        vals_out.append(d2)
    if not xs_out:
        return np.empty(0), np.empty(0)
    return np.concatenate(xs_out), np.concatenate(vals_out)


def residual(problem: SsdeProblem, y: SegmentedFunction) -> float:
    """Sup difference between the difference-quotient derivative of y (of
    the problem's order) and the assembled graph P(y), over interior nodes
    excluding the 2 nodes adjacent to each breakpoint.

    The function must live exactly on the piecemealing's breakpoints.
    """
    z = problem.piecemealing.apply(y)
    if not y.same_shape(z):
        raise ShapeMismatchError("residual needs y sampled on the piecemealing's breakpoints")
    sup = 0.0
    for j in range(y.n_segments):
        v = y.segment_values(j)
        t = z.segment_values(j)
        m = len(v) - 1
        if m < 4:
            continue
        h = (y.breakpoints[j + 1] - y.breakpoints[j]) / m
        if problem.order == 1:
            approx = (v[3:m] - v[1 : m - 2]) / (2.0 * h)
        else:
            approx = (v[4 : m + 1] - 2.0 * v[2 : m - 1] + v[0 : m - 3]) / (4.0 * h * h)
        gap = np.abs(approx - t[2 : m - 1])
        if gap.size:
            sup = max(sup, float(gap.max()))
    return sup


def classic_transition(x):
    """The classical smooth 0-to-1 transition built from exp(-1/x).

    Evaluates g(x) / (g(x) + g(1 - x)) with g(x) = exp(-1/x), extended by 0
    for x <= 0 and 1 for x >= 1. Stable for all floats: the interior value
    is computed as a tanh of the exponent difference, never forming the
    under/overflowing exponentials. Accepts scalars or arrays.
    """
    xs = np.asarray(x, dtype=np.float64)
    scalar = xs.ndim == 0
    xs = np.atleast_1d(xs)
    out = np.where(xs >= 1.0, 1.0, 0.0)
    inner = (xs > 0.0) & (xs < 1.0)
    xi = xs[inner]
    expo = 1.0 / xi - 1.0 / (1.0 - xi)
    out[inner] = 0.5 * (1.0 - np.tanh(0.5 * expo))
    return float(out[0]) if scalar else out


def _step_values(t, transition):
    """Step extension of a transition: 0 below 0, 1 above 1, transition between."""
    out = np.where(t >= 1.0, 1.0, 0.0)
    inner = (t > 0.0) & (t < 1.0)
    if np.any(inner):
        ti = t[inner]
        try:
            vals = np.asarray(transition(ti), dtype=np.float64)
            if vals.shape != ti.shape:
                raise TypeError
        except TypeError:
            vals = np.array([float(transition(u)) for u in ti])
        out[inner] = vals
    return out


def bump(x, a, b, c, d, step=classic_transition):
    """Smooth plateau function: 0 outside (a, d), 1 on [b, c].

    Rises over (a, b) and falls over (c, d) using the given transition
    evaluator through its step extension. Requires a < b < c < d.

    Raises:
        OrderingError: the knots are not strictly increasing.
    """
    if not (a < b < c < d):
        raise OrderingError(f"bump knots must satisfy a < b < c < d, got {(a, b, c, d)}")
    xs = np.asarray(x, dtype=np.float64)
    scalar = xs.ndim == 0
    xs = np.atleast_1d(xs)
    rise = _step_values((xs - a) / (b - a), step)
    fall = _step_values((d - xs) / (d - c), step)
    out = rise * fall
    return float(out[0]) if scalar else out


def transition_problem() -> SsdeProblem:
    """The standard two-branch transition equation on [0, 1].

    Its unique monotone solution rises smoothly from 0 to 1; the boundary
    system admits a family, pinned here to total integral 1/2.
    """
    maps = (
        AffineGraphMap("1/2", 2, 0, 0),
        AffineGraphMap("-1/2", 2, 1, 0),
    )
    pm = Piecemealing.validate((0, 1), maps)
    return SsdeProblem(piecemealing=pm, order=1, y0=0, target_A=Fraction(1, 2))


def solve_transition(
    nodes_per_segment=DEFAULT_NODES, tol=DEFAULT_TOL, max_iter=DEFAULT_MAX_ITER
) -> SolveReport:
    """Solve the standard transition equation from the linear initial."""
    return solve(
        transition_problem(),
        initial="linear",
        nodes_per_segment=nodes_per_segment,
        tol=tol,
        max_iter=max_iter,
    )
