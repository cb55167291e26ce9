"""Boundary analysis of a piecemealing: the linear system tying the unknown
total integral A to the strip-boundary values of a solution, plus the
diagnostic quantities that govern solvability and iteration speed.

All quantities are computed in exact rational arithmetic whenever the
piecemealing (and the supplied boundary value) carry exact coefficients;
otherwise the same formulas run in floating point and zero tests use a
relative pivot tolerance.
"""

from __future__ import annotations

from collections import namedtuple
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from .errors import LConditionViolatedError
from .funcrep import SegmentedFunction
from .piecemeal import Piecemealing, _to_exact

Rational = Fraction

PIVOT_TOL = 1e-12
L_CONDITION_TOL = 1e-12


class SolutionKind(Enum):
    UNIQUE = "Unique"
    FAMILY = "Family"
    INCONSISTENT = "Inconsistent"


def _entries(piecemealing: Piecemealing, exact: bool):
    """Coefficient lists (a, d, f, dx, w) in exact or float form."""
    if exact:
        a = [m.exact[0] for m in piecemealing.maps]
        d = [m.exact[1] for m in piecemealing.maps]
        f = [m.exact[3] for m in piecemealing.maps]
        x = list(piecemealing.exact_breakpoints)
    else:
        a = [m.a for m in piecemealing.maps]
        d = [m.d for m in piecemealing.maps]
        f = [m.f for m in piecemealing.maps]
        x = [float(b) for b in piecemealing.breakpoints]
    dx = [x[i + 1] - x[i] for i in range(len(x) - 1)]
    w = x[-1] - x[0]
    return a, d, f, dx, w


def l_condition_sum(piecemealing: Piecemealing):
    """Orientation-weighted scale sum: sum of sign(a_i) a_i^2 d_i.

    The boundary system below closes only when this vanishes; the solver
    treats a nonzero value as a hard error while diagnostics merely report
    it.

    Returns a Fraction in exact mode, else a float.
    """
    a, d, _, _, _ = _entries(piecemealing, piecemealing.is_exact)
    return sum((x * x * y if x > 0 else -(x * x) * y) for x, y in zip(a, d))


def negative_mass(piecemealing: Piecemealing):
    """Sum of a_i^2 d_i over orientation-reversing maps (a_i < 0)."""
    a, d, _, _, _ = _entries(piecemealing, piecemealing.is_exact)
    return sum((x * x * y for x, y in zip(a, d) if x < 0), start=_zero(piecemealing))


def forcing_mass(piecemealing: Piecemealing):
    """Sum of a_i^2 f_i over all maps."""
    a, _, f, _, _ = _entries(piecemealing, piecemealing.is_exact)
    return sum((x * x * y for x, y in zip(a, f)), start=_zero(piecemealing))


def contraction_factor(piecemealing: Piecemealing):
    """Iteration contraction factor: half the domain width times max |a_i d_i|."""
    a, d, _, _, w = _entries(piecemealing, piecemealing.is_exact)
    peak = max(abs(x * y) for x, y in zip(a, d))
    return w * peak / 2


def _zero(piecemealing: Piecemealing):
    return Fraction(0) if piecemealing.is_exact else 0.0


@dataclass(frozen=True)
class Diagnostics:
    """Summary quantities of a piecemealing.

    Fields are Fractions when the piecemealing is exact, floats otherwise;
    `exact` records which. A nonzero l_condition_sum is reported, not
    raised.
    """

    l_condition_sum: object
    contraction_factor: object
    negative_mass: object
    forcing_mass: object
    width: object
    exact: bool

    @classmethod
    def from_piecemealing(cls, piecemealing: Piecemealing) -> "Diagnostics":
        _, _, _, _, w = _entries(piecemealing, piecemealing.is_exact)
        return cls(
            l_condition_sum=l_condition_sum(piecemealing),
            contraction_factor=contraction_factor(piecemealing),
            negative_mass=negative_mass(piecemealing),
            forcing_mass=forcing_mass(piecemealing),
            width=w,
            exact=piecemealing.is_exact,
        )


@dataclass(frozen=True)
class SystemSolution:
    """Solved boundary system for a first-order problem.

    The strip-boundary values of any solution satisfy
    y_k = p_k + q_k * A for k = 1..n, where A is the solution's total
    integral; `family` holds the (p_k, q_k) pairs. Eliminating the y_k
    leaves the scalar equation alpha * A = beta, classified as:

      UNIQUE        alpha != 0; `A` and `boundary_values` are filled in.
      FAMILY        alpha == 0 and beta == 0; any A is admissible.
      INCONSISTENT  alpha == 0 and beta != 0; no A is admissible.

    Entries are Fractions when `exact`, floats otherwise.
    """

    kind: SolutionKind
    alpha: object
    beta: object
    family: tuple
    A: object = None
    boundary_values: tuple = None
    exact: bool = False


def solve_system(piecemealing: Piecemealing, y0) -> SystemSolution:
    """Solve the boundary linear system for the total integral A.

    Args:
        piecemealing: the validated piecemealing.
        y0: the solution's value at the left domain endpoint; int, float,
            Fraction, or rational string.

    Raises:
        LConditionViolatedError: the orientation-weighted scale sum is
            nonzero (beyond 1e-12 in float mode), so the elimination that
            produces the scalar equation does not close.
    """
    y0_exact = _to_exact(y0)
    exact = piecemealing.is_exact and y0_exact is not None
    a, d, f, dx, w = _entries(piecemealing, exact)
    y0v = y0_exact if exact else float(Fraction(y0) if isinstance(y0, str) else y0)

    lsum = l_condition_sum(piecemealing)
    if exact:
        if lsum != 0:
            raise LConditionViolatedError(f"orientation-weighted scale sum is {lsum}, not 0")
    else:
        scale = 1.0 + sum(abs(x * x * y) for x, y in zip(a, d))
        if abs(float(lsum)) > L_CONDITION_TOL * scale:
            raise LConditionViolatedError(
                f"orientation-weighted scale sum is {float(lsum):.3e}, not 0"
            )

    n = len(a)
    zero = Fraction(0) if exact else 0.0
    q = [zero]
    p = [y0v]
    for i in range(n):
        q.append(q[-1] + abs(a[i]) * d[i])
        p.append(p[-1] + f[i] * dx[i])

    negm = sum((a[i] * a[i] * d[i] for i in range(n) if a[i] < 0), start=zero)
    fm = sum((a[i] * a[i] * f[i] for i in range(n)), start=zero)

    alpha = 1 - sum(q[i] * dx[i] for i in range(n)) - w * negm
    beta = sum(p[i] * dx[i] for i in range(n)) + w * w * fm / 2

    family = tuple((p[k], q[k]) for k in range(1, n + 1))

    if exact:
        alpha_zero = alpha == 0
        beta_zero = beta == 0
    else:
        alpha_scale = 1.0 + sum(abs(q[i] * dx[i]) for i in range(n)) + abs(w * negm)
        beta_scale = 1.0 + sum(abs(p[i] * dx[i]) for i in range(n)) + abs(w * w * fm / 2)
        alpha_zero = abs(alpha) <= PIVOT_TOL * alpha_scale
        beta_zero = abs(beta) <= PIVOT_TOL * beta_scale

    if not alpha_zero:
        A = beta / alpha
        bvals = tuple(pk + qk * A for pk, qk in family)
        return SystemSolution(
            kind=SolutionKind.UNIQUE,
            alpha=alpha,
            beta=beta,
            family=family,
            A=A,
            boundary_values=bvals,
            exact=exact,
        )
    if beta_zero:
        return SystemSolution(
            kind=SolutionKind.FAMILY, alpha=alpha, beta=beta, family=family, exact=exact
        )
    return SystemSolution(
        kind=SolutionKind.INCONSISTENT, alpha=alpha, beta=beta, family=family, exact=exact
    )


def predicted_boundary_values(piecemealing: Piecemealing, y0, A) -> tuple:
    """Strip-boundary values y_1..y_n implied by y0 and a total integral A.

    Exact when the piecemealing, y0, and A are all exact.
    """
    y0_exact = _to_exact(y0)
    A_exact = _to_exact(A)
    exact = piecemealing.is_exact and y0_exact is not None and A_exact is not None
    a, d, f, dx, _ = _entries(piecemealing, exact)
    y0v = y0_exact if exact else float(Fraction(y0) if isinstance(y0, str) else y0)
    Av = A_exact if exact else float(Fraction(A) if isinstance(A, str) else A)
    out = []
    acc = y0v
    for i in range(len(a)):
        acc = acc + abs(a[i]) * d[i] * Av + f[i] * dx[i]
        out.append(acc)
    return tuple(out)


DoubleIntegralTerms = namedtuple(
    "DoubleIntegralTerms", ["carried", "orientation", "reversal", "forcing"]
)


def double_integral_terms(piecemealing: Piecemealing, y: SegmentedFunction) -> DoubleIntegralTerms:
    """The four closed-form pieces of the double prefix integral of the
    mapped graph, integral from x0 to xn of the prefix integral of P(y).

    With I the prefix integral of P(y), Y the prefix integral of y, and
    w the domain width:

      carried      sum_i dx_i * I(x_{i-1})
      orientation  (integral of Y) * sum_i sign(a_i) a_i^2 d_i
      reversal     w * (integral of y) * sum over a_i < 0 of a_i^2 d_i
      forcing      w^2 / 2 * sum_i a_i^2 f_i

    The identity states the double integral equals the SUM of all four;
    note the reversal term enters with a plus sign.
    """
    z = piecemealing.apply(y)
    prefix = z.integrate_prefix(0.0)
    breaks = piecemealing.breakpoints
    a, d, f, dx, w = _entries(piecemealing, False)
    carried = sum(dx[i] * prefix(float(breaks[i])) for i in range(len(a)))
    Y = y.integrate_prefix(0.0)
    orientation = Y.integrate() * float(l_condition_sum(piecemealing))
    reversal = w * y.integrate() * float(negative_mass(piecemealing))
    forcing = 0.5 * w * w * float(forcing_mass(piecemealing))
    return DoubleIntegralTerms(carried, orientation, reversal, forcing)


def double_integral_identity(piecemealing: Piecemealing, y: SegmentedFunction) -> float:
    """Closed form of the double prefix integral of the mapped graph."""
    return float(sum(double_integral_terms(piecemealing, y)))
