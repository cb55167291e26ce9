"""Shared fixtures: the worked piecemealings and seeded random factories."""

import os
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest

from ssde import AffineGraphMap, Piecemealing, SsdeProblem

PROBLEMS_DIR = Path(__file__).resolve().parents[1] / "problems"


def seeded_rng(offset=0):
    """One Generator per randomized suite; SSDE_SEED shifts all of them."""
    base = int(os.environ.get("SSDE_SEED", "0"))
    seed = base + offset
    print(f"[rng seed {seed}]")
    return np.random.default_rng(seed)


def random_exact_piecemealing(rng, n_max=4, force_negative=False):
    """Random all-rational piecemealing on a small integer interval.

    The |a_i| come from an integer partition (so they sum to exactly 1),
    the shifts are derived from the strip ends, and d_i, f_i are small
    rationals.
    """
    n = int(rng.integers(1, n_max + 1))
    ks = [int(rng.integers(1, 5)) for _ in range(n)]
    tot = sum(ks)
    signs = [1 if rng.random() < 0.5 else -1 for _ in range(n)]
    if force_negative and not any(s < 0 for s in signs):
        signs[int(rng.integers(0, n))] = -1
    lo = Fraction(int(rng.integers(-2, 1)))
    width = Fraction(int(rng.integers(1, 3)))
    hi = lo + width
    a = [Fraction(s * k, tot) for s, k in zip(signs, ks)]
    xs = [lo]
    for ai in a:
        xs.append(xs[-1] + abs(ai) * width)
    maps = []
    for i, ai in enumerate(a):
        anchor = hi if ai > 0 else lo
        maps.append(
            AffineGraphMap(
                ai,
                Fraction(int(rng.integers(-4, 5)), int(rng.integers(1, 4))),
                xs[i + 1] - ai * anchor,
                Fraction(int(rng.integers(-4, 5)), int(rng.integers(1, 4))),
            )
        )
    return Piecemealing.validate((lo, hi), maps)


@pytest.fixture
def rng_factory():
    return seeded_rng


@pytest.fixture
def make_piecemealing():
    return random_exact_piecemealing


@pytest.fixture
def problems_dir():
    return PROBLEMS_DIR


@pytest.fixture
def transition_pm():
    """Two mirrored strips doubling the function: the transition equation."""
    return Piecemealing.validate(
        (0, 1), (AffineGraphMap("1/2", 2, 0, 0), AffineGraphMap("-1/2", 2, 1, 0))
    )


@pytest.fixture
def transition_prob(transition_pm):
    return SsdeProblem(piecemealing=transition_pm, y0=0, target_A=Fraction(1, 2))


@pytest.fixture
def chart_pm():
    """Two-strip chart on [1, 4] whose boundary system pins A uniquely."""
    return Piecemealing.validate(
        (1, 4),
        (
            AffineGraphMap("1/3", "2/3", "2/3", "-22/15"),
            AffineGraphMap("2/3", "-1/6", "4/3", "17/6"),
        ),
    )


@pytest.fixture
def chart_prob(chart_pm):
    return SsdeProblem(piecemealing=chart_pm, y0=1)


@pytest.fixture
def cam_pm():
    """Six equal strips describing a second-order cam motion profile."""
    d = (6, 0, -6, -6, 0, 6)
    e = (0, "1/6", "1/3", "1/2", "2/3", "5/6")
    f = (0, 6, 6, 0, -6, -6)
    maps = tuple(AffineGraphMap("1/6", d[i], e[i], f[i]) for i in range(6))
    return Piecemealing.validate((0, 1), maps)


@pytest.fixture
def cam_prob(cam_pm):
    return SsdeProblem(piecemealing=cam_pm, order=2, y0=0, yprime0=0)


@pytest.fixture
def reflection_pm():
    """Single temporal-reversing strip: P(y)(x) = y(1 - x)."""
    return Piecemealing.validate((0, 1), (AffineGraphMap(-1, 1, 1, 0),))


@pytest.fixture
def inconsistent_pm():
    """Transition strips with opposing vertical shifts; no admissible total."""
    return Piecemealing.validate(
        (0, 1), (AffineGraphMap("1/2", 2, 0, 1), AffineGraphMap("-1/2", 2, 1, -1))
    )
