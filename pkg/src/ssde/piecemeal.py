"""Affine graph maps and piecemealings.

A piecemealing is an ordered list of affine diagonal maps
T_i(x, y) = (a_i x + e_i, d_i y + f_i) whose images of a function's graph
tile the domain in consecutive vertical strips. The strip widths are forced
by the horizontal scales (each is |a_i| times the domain width, so the |a_i|
sum to 1), and each horizontal shift e_i is forced by the strip boundaries,
up to the orientation of the map.

Coefficients given as int, Fraction, or a rational string like "2/3" are
kept exactly alongside the float working values; a piecemealing built only
from such values supports exact rational analysis downstream.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ._backend import kernels
from .errors import (
    ArgumentOutOfRangeError,
    DegenerateMapError,
    DomainMismatchError,
    ShiftMismatchError,
    TilingError,
)
from .funcrep import Interval, SegmentedFunction

SHIFT_TOL = 1e-9  # times domain width, for float-mode shift checks
TILING_TOL = 1e-12
CLAMP_TOL = 1e-12  # times domain width, rounding slack for back-mapped points


def _to_exact(value):
    """Fraction for exactly representable inputs, None for plain floats."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    return None


class AffineGraphMap:
    """One affine diagonal graph map (x, y) -> (a x + e, d y + f).

    Args:
        a: horizontal scale, nonzero.
        d: vertical scale.
        e: horizontal shift.
        f: vertical shift.

    Each argument may be an int, float, Fraction, or rational string such as
    "-1/2". The map records exact rational coefficients whenever all four
    are given in a non-float form.
    """

    __slots__ = ("a", "d", "e", "f", "exact")

    def __init__(self, a, d, e, f):
        exacts = tuple(_to_exact(v) for v in (a, d, e, f))
        self.exact = exacts if all(v is not None for v in exacts) else None
        self.a = float(Fraction(a) if isinstance(a, str) else a)
        self.d = float(Fraction(d) if isinstance(d, str) else d)
        self.e = float(Fraction(e) if isinstance(e, str) else e)
        self.f = float(Fraction(f) if isinstance(f, str) else f)
        if self.a == 0.0:
            raise DegenerateMapError("horizontal scale a must be nonzero")

    def image(self, domain: Interval) -> Interval:
        """Horizontal extent of the mapped graph over the given domain."""
        p = self.a * domain.lo + self.e
        q = self.a * domain.hi + self.e
        return Interval(min(p, q), max(p, q))

    def __eq__(self, other):
        if not isinstance(other, AffineGraphMap):
            return NotImplemented
        if self.exact is not None and other.exact is not None:
            return self.exact == other.exact
        return (self.a, self.d, self.e, self.f) == (other.a, other.d, other.e, other.f)

    def __hash__(self):
        return hash((self.a, self.d, self.e, self.f))

    def __repr__(self):
        if self.exact is not None:
            a, d, e, f = (str(v) for v in self.exact)
        else:
            a, d, e, f = self.a, self.d, self.e, self.f
        return f"AffineGraphMap(a={a}, d={d}, e={e}, f={f})"


def image_interval(graph_map: AffineGraphMap, domain: Interval) -> Interval:
    """Horizontal extent of a map's image; see AffineGraphMap.image."""
    return graph_map.image(domain)


@dataclass(frozen=True, eq=False)
class Piecemealing:
    """A validated ordered family of graph maps tiling a domain.

    Build instances through `Piecemealing.validate`; the raw constructor
    trusts its arguments.
    """

    domain: Interval
    maps: tuple
    breakpoints: np.ndarray
    exact_breakpoints: tuple | None

    def __post_init__(self):
        breaks = np.ascontiguousarray(self.breakpoints, dtype=np.float64)
        breaks.flags.writeable = False
        object.__setattr__(self, "breakpoints", breaks)
        object.__setattr__(self, "maps", tuple(self.maps))
        object.__setattr__(self, "_a", np.array([m.a for m in self.maps]))
        object.__setattr__(self, "_d", np.array([m.d for m in self.maps]))
        object.__setattr__(self, "_e", np.array([m.e for m in self.maps]))
        object.__setattr__(self, "_f", np.array([m.f for m in self.maps]))

    @property
    def n(self) -> int:
        return len(self.maps)

    @property
    def is_exact(self) -> bool:
        return self.exact_breakpoints is not None

    @property
    def width(self) -> float:
        return self.domain.width

    @classmethod
    def validate(cls, domain, maps) -> "Piecemealing":
        """Check the tiling and shift constraints and derive breakpoints.

        Args:
            domain: Interval, or a (lo, hi) pair; pair entries may be exact
                (int, Fraction, rational string).
            maps: ordered sequence of AffineGraphMap.

        Raises:
            TilingError: the |a_i| do not sum to 1.
            ShiftMismatchError: some e_i is inconsistent with the derived
                strip [x_{i-1}, x_i] and the map's orientation.
            DegenerateMapError: some a_i is zero (raised at map creation).
        """
        maps = tuple(maps)
        if not maps:
            raise TilingError("a piecemealing needs at least one map")
        if isinstance(domain, Interval):
            lo_raw, hi_raw = domain.lo, domain.hi
        else:
            lo_raw, hi_raw = domain
        exact_lo, exact_hi = _to_exact(lo_raw), _to_exact(hi_raw)
        exact = (
            exact_lo is not None
            and exact_hi is not None
            and all(m.exact is not None for m in maps)
        )
        lo, hi = float(lo_raw if not isinstance(lo_raw, str) else Fraction(lo_raw)), float(
            hi_raw if not isinstance(hi_raw, str) else Fraction(hi_raw)
        )
        interval = Interval(lo, hi)

        if exact:
            width = exact_hi - exact_lo
            total = sum(abs(m.exact[0]) for m in maps)
            if total != 1:
                raise TilingError(f"|a| values sum to {total}, expected exactly 1")
            xs = [exact_lo]
            for m in maps:
                xs.append(xs[-1] + abs(m.exact[0]) * width)
            for i, m in enumerate(maps, start=1):
                a_i, _, e_i, _ = m.exact
                anchor = exact_hi if a_i > 0 else exact_lo
                expected = xs[i] - a_i * anchor
                if e_i != expected:
                    raise ShiftMismatchError(
                        f"map {i}: shift e={e_i} does not match the derived "
                        f"strip end {xs[i]} (expected e={expected})"
                    )
            return cls(interval, maps, np.array([float(x) for x in xs]), tuple(xs))

        width = hi - lo
        total = float(sum(abs(m.a) for m in maps))
        if abs(total - 1.0) > TILING_TOL:
            raise TilingError(f"|a| values sum to {total!r}, expected 1 within {TILING_TOL}")
        xs = [lo]
        for m in maps:
            xs.append(xs[-1] + abs(m.a) * width)
        xs[-1] = hi
        for i, m in enumerate(maps, start=1):
            anchor = hi if m.a > 0 else lo
            expected = xs[i] - m.a * anchor
            if abs(m.e - expected) > SHIFT_TOL * width:
                raise ShiftMismatchError(
                    f"map {i}: shift e={m.e} is {abs(m.e - expected):.3e} from the "
                    f"value {expected} derived from the strip ends"
                )
        return cls(interval, maps, np.array(xs), None)

    def apply(self, y: SegmentedFunction) -> SegmentedFunction:
        """Assemble the mapped graph: strip i carries d_i y((x - e_i)/a_i) + f_i.

        Args:
            y: function on this piecemealing's domain whose breakpoints
                include this piecemealing's breakpoints.

        Returns:
            A function on this piecemealing's breakpoints. When y lives on
            exactly these breakpoints the per-segment node counts carry
            over; extra breakpoints in y fold their node counts into the
            enclosing strip.

        Raises:
            DomainMismatchError: domain or breakpoint containment fails.
            ArgumentOutOfRangeError: a back-mapped argument leaves the
                domain by more than rounding slack.
        """
        pb = self.breakpoints
        yb = y.breakpoints
        if yb[0] != pb[0] or yb[-1] != pb[-1]:
            raise DomainMismatchError(
                f"function domain [{yb[0]}, {yb[-1]}] != piecemealing domain [{pb[0]}, {pb[-1]}]"
            )
        pos = np.searchsorted(yb, pb)
        if not np.array_equal(yb[np.minimum(pos, len(yb) - 1)], pb):
            raise DomainMismatchError("function breakpoints must include the piecemealing's")

        y_ms = np.diff(y.offsets) - 1
        dst_ms = np.array(
            [int(np.sum(y_ms[pos[i] : pos[i + 1]])) for i in range(self.n)], dtype=np.longlong
        )
        offsets = np.zeros(self.n + 1, dtype=np.longlong)
        offsets[1:] = np.cumsum(dst_ms + 1)
        out = np.empty(int(offsets[-1]), dtype=np.float64)

        lo, hi = float(yb[0]), float(yb[-1])
        slack = CLAMP_TOL * (hi - lo)
        y_hs = y._hs
        y_ms_ll = y._ms
        for i, m in enumerate(self.maps):
            xs = np.linspace(pb[i], pb[i + 1], int(dst_ms[i]) + 1)
            u0 = (xs[0] - m.e) / m.a
            u1 = (xs[-1] - m.e) / m.a
            umin, umax = (u0, u1) if u0 <= u1 else (u1, u0)
            if umin < lo - slack or umax > hi + slack:
                raise ArgumentOutOfRangeError(
                    f"map {i + 1}: back-mapped arguments span [{umin}, {umax}], "
                    f"outside [{lo}, {hi}] beyond rounding slack"
                )
            kernels.affine_gather(
                yb,
                y.offsets,
                y.values,
                y_hs,
                y_ms_ll,
                lo,
                hi,
                m.a,
                m.d,
                m.e,
                m.f,
                xs,
                out[int(offsets[i]) : int(offsets[i + 1])],
            )
        return SegmentedFunction(pb, out, offsets)
