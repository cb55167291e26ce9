"""Piecewise-linear functions on segmented uniform grids.

A SegmentedFunction holds sample values on a grid made of consecutive
segments [b_0, b_1], ..., [b_{n-1}, b_n]. Each segment carries its own
uniform node spacing, and evaluation interpolates linearly between nodes.
Values may jump across internal breakpoints: the samples just left and just
right of a breakpoint are stored independently, and evaluation at the
breakpoint itself returns the left segment's value.

Instances are immutable (the arrays are marked read-only), so they can be
shared freely across threads; every operation returns a new object.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._backend import kernels
from .errors import DomainError, ShapeMismatchError


@dataclass(frozen=True)
class Interval:
    """A nondegenerate closed interval [lo, hi]."""

    lo: float
    hi: float

    def __post_init__(self):
        if not (np.isfinite(self.lo) and np.isfinite(self.hi)):
            raise ValueError("interval endpoints must be finite")
        if not self.lo < self.hi:
            raise ValueError(f"interval requires lo < hi, got [{self.lo}, {self.hi}]")

    @property
    def width(self) -> float:
        return self.hi - self.lo

    def contains(self, x, slack: float = 0.0) -> bool:
        return bool(np.all((np.asarray(x) >= self.lo - slack) & (np.asarray(x) <= self.hi + slack)))


def _as_readonly(arr, dtype):
    # Adopts the array when it already has the right dtype and layout; the
    # constructor contract is that passed-in arrays become frozen.
    out = np.ascontiguousarray(arr, dtype=dtype)
    out.flags.writeable = False
    return out


@dataclass(frozen=True, eq=False)
class SegmentedFunction:
    """Sampled piecewise-linear function with per-segment uniform grids.

    Attributes:
        breakpoints: strictly increasing array (n+1,) of segment boundaries.
        values: flat float array of node samples, all segments concatenated.
        offsets: int array (n+1,); segment j owns values[offsets[j]:offsets[j+1]].

    Each segment must carry at least 3 samples (2 node intervals). Use
    `from_segments`, `from_callable`, or `constant` rather than the raw
    constructor when convenient.
    """

    breakpoints: np.ndarray
    values: np.ndarray
    offsets: np.ndarray

    def __post_init__(self):
        breaks = _as_readonly(self.breakpoints, np.float64)
        values = _as_readonly(self.values, np.float64)
        offsets = _as_readonly(self.offsets, np.longlong)
        object.__setattr__(self, "breakpoints", breaks)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "offsets", offsets)
        if breaks.ndim != 1 or len(breaks) < 2:
            raise ValueError("need at least two breakpoints")
        if not np.all(np.diff(breaks) > 0):
            raise ValueError("breakpoints must be strictly increasing")
        if not np.all(np.isfinite(breaks)):
            raise ValueError("breakpoints must be finite")
        if len(offsets) != len(breaks):
            raise ValueError("offsets and breakpoints disagree on segment count")
        if offsets[0] != 0 or offsets[-1] != len(values):
            raise ValueError("offsets must start at 0 and end at len(values)")
        ms = np.diff(offsets) - 1
        if np.any(ms < 2):
            raise ValueError("every segment needs at least 2 node intervals")
        if not np.all(np.isfinite(values)):
            raise ValueError("node values must be finite")
        hs = np.diff(breaks) / ms
        hs.flags.writeable = False
        ms = np.ascontiguousarray(ms, dtype=np.longlong)
        ms.flags.writeable = False
        object.__setattr__(self, "_hs", hs)
        object.__setattr__(self, "_ms", ms)

    # -- construction -----------------------------------------------------

    @classmethod
    def from_segments(cls, breakpoints, segments) -> "SegmentedFunction":
        """Build from explicit per-segment sample arrays.

        Args:
            breakpoints: n+1 boundaries.
            segments: n arrays; the j-th holds the M_j + 1 samples of segment j.
        """
        segments = [np.asarray(s, dtype=np.float64) for s in segments]
        if len(segments) != len(breakpoints) - 1:
            raise ValueError("need one sample array per segment")
        offsets = np.zeros(len(segments) + 1, dtype=np.longlong)
        offsets[1:] = np.cumsum([len(s) for s in segments])
        values = np.concatenate(segments) if segments else np.empty(0)
        return cls(np.asarray(breakpoints, dtype=np.float64), values, offsets)

    @classmethod
    def from_callable(cls, fn, breakpoints, nodes_per_segment=512) -> "SegmentedFunction":
        """Sample a callable on per-segment uniform grids.

        Args:
            fn: evaluator; called with a node array per segment, with a
                pointwise fallback if the vectorized call fails.
            breakpoints: n+1 boundaries.
            nodes_per_segment: node-interval count M, one int for all
                segments or a sequence of n ints.

        Evaluator exceptions propagate unchanged.
        """
        breaks = np.asarray(breakpoints, dtype=np.float64)
        nseg = len(breaks) - 1
        if np.isscalar(nodes_per_segment):
            counts = [int(nodes_per_segment)] * nseg
        else:
            counts = [int(m) for m in nodes_per_segment]
        segs = []
        for j in range(nseg):
            xs = np.linspace(breaks[j], breaks[j + 1], counts[j] + 1)
            try:
                ys = np.asarray(fn(xs), dtype=np.float64)
                if ys.shape != xs.shape:
                    raise TypeError
            except TypeError:
                ys = np.array([float(fn(x)) for x in xs])
            segs.append(ys)
        return cls.from_segments(breaks, segs)

    @classmethod
    def constant(cls, value, breakpoints, nodes_per_segment=512) -> "SegmentedFunction":
        value = float(value)
        return cls.from_callable(lambda xs: np.full_like(xs, value), breakpoints, nodes_per_segment)

    # -- shape -------------------------------------------------------------

    @property
    def domain(self) -> Interval:
        return Interval(float(self.breakpoints[0]), float(self.breakpoints[-1]))

    @property
    def n_segments(self) -> int:
        return len(self.breakpoints) - 1

    @property
    def node_counts(self) -> np.ndarray:
        """Node-interval count M_j per segment."""
        return self._ms.copy()

    def nodes(self, j) -> np.ndarray:
        """Node positions of segment j (endpoints exact)."""
        return np.linspace(self.breakpoints[j], self.breakpoints[j + 1], int(self._ms[j]) + 1)

    def segment_values(self, j) -> np.ndarray:
        return self.values[int(self.offsets[j]) : int(self.offsets[j + 1])]

    def same_shape(self, other: "SegmentedFunction") -> bool:
        return np.array_equal(self.breakpoints, other.breakpoints) and np.array_equal(
            self.offsets, other.offsets
        )

    def with_values(self, values) -> "SegmentedFunction":
        """Same grid, new samples."""
        return SegmentedFunction(self.breakpoints, values, self.offsets)

    # -- evaluation and calculus -------------------------------------------

    def __call__(self, x):
        """Evaluate at a scalar or array of points inside the domain.

        At internal breakpoints the left segment's endpoint value is
        returned. Points outside [b_0, b_n] raise DomainError.
        """
        xs = np.asarray(x, dtype=np.float64)
        scalar = xs.ndim == 0
        xs = np.ascontiguousarray(np.atleast_1d(xs))
        if xs.size and (
            not np.all(np.isfinite(xs))
            or xs.min() < self.breakpoints[0]
            or xs.max() > self.breakpoints[-1]
        ):
            raise DomainError(
                f"evaluation outside domain [{self.breakpoints[0]}, {self.breakpoints[-1]}]"
            )
        out = np.empty_like(xs)
        kernels.eval_nodes(self.breakpoints, self.offsets, self.values, self._hs, self._ms, xs, out)
        return float(out[0]) if scalar else out

    def integrate(self) -> float:
        """Trapezoid integral over the whole domain (exact for this class)."""
        return kernels.trapz(self.offsets, self.values, self._hs)

    def integrate_prefix(self, c0) -> "SegmentedFunction":
        """Running integral from the left endpoint, starting at value c0.

        Returns a function on the same grid; it is continuous across
        breakpoints by construction even when the integrand jumps.
        """
        out = np.empty_like(self.values)
        kernels.cumtrapz(self.offsets, self.values, self._hs, float(c0), out)
        return self.with_values(out)

    def sup_distance(self, other: "SegmentedFunction") -> float:
        """Max absolute node-value difference; shapes must match exactly."""
        if not self.same_shape(other):
            raise ShapeMismatchError("functions do not share a grid")
        return kernels.sup_abs_diff(self.values, other.values)

    def is_continuous(self, tol: float = 0.0) -> bool:
        """True when every internal left/right value gap is within tol."""
        for j in range(1, self.n_segments):
            off = int(self.offsets[j])
            if abs(self.values[off - 1] - self.values[off]) > tol:
                return False
        return True

    def jump_at(self, j) -> float:
        """Right minus left value at internal breakpoint j (1 <= j <= n-1)."""
        off = int(self.offsets[j])
        return float(self.values[off] - self.values[off - 1])


def make_sampled(fn, breakpoints, nodes_per_segment=512) -> SegmentedFunction:
    """Sample a callable onto a segmented grid; see from_callable."""
    return SegmentedFunction.from_callable(fn, breakpoints, nodes_per_segment)


def sup_distance(f: SegmentedFunction, g: SegmentedFunction) -> float:
    """Max absolute node-value difference of two same-shaped functions."""
    return f.sup_distance(g)
