"""Brute-force quadrature oracles and seeded random test functions.

Everything here cross-checks the closed forms in the analysis module by
independent means: the oracles consume raw evaluators (or sampled
functions) and refine composite midpoint sums across levels, extrapolating
the final pair. They never call the closed-form formulas they are used to
check.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NonConvergentError
from .funcrep import Interval, SegmentedFunction
from .piecemeal import Piecemealing

GROWTH_FACTOR = 10.0 / 3.0  # successive-difference blowup that flags divergence


@dataclass(frozen=True)
class QuadratureSpec:
    """Refinement schedule for the brute integrators.

    levels are per-piece node-interval counts, strictly increasing, at
    least two of them; richardson controls whether the final pair is
    extrapolated (one step, assuming second-order convergence).
    """

    levels: tuple = (256, 512, 1024, 2048)
    richardson: bool = True

    def __post_init__(self):
        object.__setattr__(self, "levels", tuple(int(n) for n in self.levels))
        if len(self.levels) < 2:
            raise ValueError("need at least two refinement levels")
        if any(n < 2 for n in self.levels):
            raise ValueError("levels must be at least 2")
        if any(b <= a for a, b in zip(self.levels, self.levels[1:])):
            raise ValueError("levels must be strictly increasing")


@dataclass(frozen=True)
class IntegralEstimate:
    """A brute integral: the value, a conservative error estimate, and the
    raw per-level quadrature values it was distilled from."""

    value: float
    error: float
    level_values: tuple


def _edges(interval, breakpoints):
    if isinstance(interval, Interval):
        lo, hi = interval.lo, interval.hi
    else:
        lo, hi = float(interval[0]), float(interval[1])
    pts = [lo, hi]
    if breakpoints is not None:
        pts.extend(float(b) for b in breakpoints)
    edges = np.unique(np.asarray(pts, dtype=np.float64))
    if edges[0] < lo or edges[-1] > hi:
        raise ValueError("breakpoints must lie inside the interval")
    return edges


def _call(fn, xs):
    try:
        ys = np.asarray(fn(xs), dtype=np.float64)
        if ys.shape != xs.shape:
            raise TypeError
    except TypeError:
        ys = np.array([float(fn(x)) for x in xs])
    return ys


def _midpoints(lo, hi, n):
    h = (hi - lo) / n
    return lo + h * (np.arange(n) + 0.5), h


def _level_single(fn, edges, n):
    # Composite midpoint per piece: piece edges (where the integrand may
    # jump) are never sampled, so declared discontinuities cost nothing.
    total = 0.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        mids, h = _midpoints(lo, hi, n)
        total += float(_call(fn, mids).sum()) * h
    return total


def _level_double(fn, edges, n):
    # Midpoint panel sums give the prefix integral at panel edges; the
    # prefix is continuous even across jumps of fn, so the outer integral
    # can safely use the trapezoid of those edge values.
    run = 0.0
    total = 0.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        mids, h = _midpoints(lo, hi, n)
        panel = _call(fn, mids) * h
        prefix = np.empty(n + 1)
        prefix[0] = run
        np.cumsum(panel, out=prefix[1:])
        prefix[1:] += run
        total += (0.5 * (prefix[0] + prefix[-1]) + float(prefix[1:-1].sum())) * h
        run = prefix[-1]
    return total


def _refine(level_fn, fn, interval, spec, breakpoints):
    edges = _edges(interval, breakpoints)
    vals = [level_fn(fn, edges, n) for n in spec.levels]
    if not all(np.isfinite(v) for v in vals):
        raise NonConvergentError(f"non-finite quadrature values across levels: {vals}")
    diffs = [abs(b - a) for a, b in zip(vals, vals[1:])]
    floor = 1e-13 * (1.0 + abs(vals[-1]))
    for prev, cur in zip(diffs, diffs[1:]):
        if cur > GROWTH_FACTOR * prev + floor:
            raise NonConvergentError(
                f"refinements disagree increasingly (successive gaps {prev!r} then {cur!r})"
            )
    if spec.richardson:
        corr = (vals[-1] - vals[-2]) / 3.0
        return IntegralEstimate(vals[-1] + corr, abs(corr), tuple(vals))
    return IntegralEstimate(vals[-1], diffs[-1], tuple(vals))


def brute_integral(fn, interval, spec=None, breakpoints=None) -> IntegralEstimate:
    """Integral of fn over the interval by refined composite midpoint sums.

    Args:
        fn: evaluator (vectorized preferred; pointwise works).
        interval: Interval or (lo, hi) pair.
        spec: QuadratureSpec; defaults to levels (256, 512, 1024, 2048)
            with extrapolation.
        breakpoints: known kink or jump locations; each refinement level
            integrates piecewise between them (and never samples them), so
            they never degrade the convergence order.

    Raises:
        NonConvergentError: refinement values blow up or go non-finite.

    The error field conservatively bounds the true error for integrands
    that are smooth between the declared breakpoints.
    """
    return _refine(_level_single, fn, interval, spec or QuadratureSpec(), breakpoints)


def brute_double_integral(fn, interval, spec=None, breakpoints=None) -> IntegralEstimate:
    """Iterated integral: midpoint panel sums build the running prefix
    integral of fn at panel edges; the outer integral applies the trapezoid
    to those edge values (the prefix is continuous even where fn jumps)."""
    return _refine(_level_double, fn, interval, spec or QuadratureSpec(), breakpoints)


def transformed_evaluator(piecemealing: Piecemealing, fn):
    """Pointwise evaluator of the assembled graph of a raw evaluator.

    Returns a vectorized callable x -> d_i fn((x - e_i)/a_i) + f_i with i
    the strip containing x (left strip at shared boundaries). Back-mapped
    arguments are clamped to the domain. This deliberately bypasses
    sampling so oracle quadrature sees the continuum object.
    """
    breaks = piecemealing.breakpoints
    lo, hi = float(breaks[0]), float(breaks[-1])
    n = piecemealing.n

    def evaluator(x):
        xs = np.atleast_1d(np.asarray(x, dtype=np.float64))
        seg = np.clip(np.searchsorted(breaks, xs, side="left") - 1, 0, n - 1)
        out = np.empty_like(xs)
        for i, m in enumerate(piecemealing.maps):
            mask = seg == i
            if not np.any(mask):
                continue
            u = np.clip((xs[mask] - m.e) / m.a, lo, hi)
            out[mask] = m.d * _call(fn, u) + m.f
        return out if np.asarray(x).ndim else float(out[0])

    return evaluator


def random_zero_mean(interval, seed) -> SegmentedFunction:
    """A random continuous piecewise-linear function with zero integral.

    Deterministic in the seed: segment layout, node counts, and values all
    come from one numpy Generator. The zero integral holds to rounding
    (about 1e-14 relative to the function's scale).
    """
    if isinstance(interval, Interval):
        lo, hi = interval.lo, interval.hi
    else:
        lo, hi = float(interval[0]), float(interval[1])
    rng = np.random.default_rng(seed)
    nseg = int(rng.integers(1, 4))
    weights = rng.uniform(0.5, 1.5, nseg)
    weights /= weights.sum()
    edges = lo + (hi - lo) * np.concatenate([[0.0], np.cumsum(weights)])
    edges[-1] = hi
    counts = rng.integers(8, 33, nseg)
    segs = []
    last = None
    for j in range(nseg):
        v = rng.normal(0.0, 1.0, int(counts[j]) + 1)
        if last is not None:
            v[0] = last
        last = v[-1]
        segs.append(v)
    f = SegmentedFunction.from_segments(edges, segs)
    mean = f.integrate() / (hi - lo)
    return f.with_values(f.values - mean)
