"""Slow, obviously-correct reference computations used to cross-check the
fast paths (tests and ``selftest``)."""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .set_systems import SetSystem, density
from .rng import TWO_64


def brute_force_discrepancy(sample, stream, system: SetSystem) -> Fraction:
    """Max density gap by enumerating every range of the system."""
    return max(abs(density(r, stream) - density(r, sample)) for r in system.ranges())


def bernoulli_replay(stream, p, key: int) -> list:
    """Straight-line Bernoulli sampling: one Philox draw per element."""
    p = Fraction(p)
    draws = np.random.Philox(key=key).random_raw(len(stream)).tolist()
    cut = p.numerator * TWO_64 // p.denominator
    return [x for x, u in zip(stream, draws) if u < cut]


def is_beta_center(c: int, stream, beta) -> bool:
    """Both closed half-lines through ``c`` hold at least ``beta * n`` stream elements."""
    need = Fraction(beta) * len(stream)
    return sum(1 for x in stream if x <= c) >= need and sum(1 for x in stream if x >= c) >= need
