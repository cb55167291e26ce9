"""NumPy implementations of the hot kernels.

These are the reference semantics; ssde._kernels is a compiled mirror with
identical signatures and arithmetic. The package picks one implementation at
import time (see ssde._backend). All functions assume validated inputs; the
wrappers in funcrep and piecemeal own error checking.

Data layout: a segmented function with n segments is carried as
  breaks  (n+1,) float64, strictly increasing
  offsets (n+1,) int64, segment s occupies values[offsets[s]:offsets[s+1]]
  values  flat float64 node samples
  hs      (n,) float64 node spacing per segment
  ms      (n,) int64 node-interval count per segment (offsets diff minus 1)
"""

import numpy as np


def eval_nodes(breaks, offsets, values, hs, ms, xs, out):
    """Piecewise-linear evaluation at in-domain points xs.

    Points equal to an internal breakpoint take the left segment's endpoint
    value, bit-exactly.
    """
    n = len(breaks) - 1
    idx = np.searchsorted(breaks, xs, side="left")
    hit = (idx >= 1) & (breaks[np.minimum(idx, n)] == xs)
    if np.any(hit):
        out[hit] = values[offsets[np.minimum(idx[hit], n)] - 1]
    rest = ~hit
    if np.any(rest):
        seg = np.clip(idx[rest] - 1, 0, n - 1)
        t = (xs[rest] - breaks[seg]) / hs[seg]
        k = np.clip(np.floor(t).astype(np.int64), 0, ms[seg] - 1)
        frac = np.clip(t - k, 0.0, 1.0)
        base = offsets[seg] + k
        out[rest] = values[base] * (1.0 - frac) + values[base + 1] * frac
    return out


def cumtrapz(offsets, values, hs, c0, out):
    """Running trapezoid integral of the node samples, starting at c0.

    The output shares the input layout and is continuous across segment
    joins by construction.
    """
    run = c0
    for s in range(len(hs)):
        lo = offsets[s]
        hi = offsets[s + 1]
        v = values[lo:hi]
        steps = (v[:-1] + v[1:]) * (0.5 * hs[s])
        out[lo] = run
        np.cumsum(steps, out=out[lo + 1 : hi])
        out[lo + 1 : hi] += run
        run = out[hi - 1]
    return out


def trapz(offsets, values, hs):
    """Trapezoid integral over the whole domain."""
    total = 0.0
    for s in range(len(hs)):
        lo = offsets[s]
        hi = offsets[s + 1]
        v = values[lo:hi]
        steps = (v[:-1] + v[1:]) * (0.5 * hs[s])
        total += float(np.cumsum(steps)[-1]) if len(steps) else 0.0
    return total


def sup_abs_diff(a, b):
    """Max absolute difference of two equally shaped value arrays."""
    return float(np.max(np.abs(a - b)))


def affine_gather(breaks, offsets, values, hs, ms, lo, hi, a, d, e, fshift, xs, out):
    """Evaluate d * f((x - e) / a) + fshift at the points xs.

    Back-mapped arguments are clamped to [lo, hi]; the caller has already
    verified that any overshoot is rounding-level.
    """
    u = (xs - e) / a
    np.clip(u, lo, hi, out=u)
    eval_nodes(breaks, offsets, values, hs, ms, u, out)
    out *= d
    out += fshift
    return out
