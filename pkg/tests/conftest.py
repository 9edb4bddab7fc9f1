import random
from fractions import Fraction

import numpy as np
import pytest

from robust_sampling.set_systems import Interval, SetSystem, SystemKind, decode_point


def enumerated_discrepancy(sample, stream, system: SetSystem):
    """Max gap over *every* range, counting members with a dense membership matrix.

    Independent of the sweep: no sorting, no thresholds, just enumeration.
    Returns (gap, set of maximizing ranges).
    """
    ranges = list(system.ranges())
    n, k = len(stream), len(sample)
    if system.kind is SystemKind.BOXES:
        d = system.d
        lo = np.array([r.lo for r in ranges])  # (R, d)
        hi = np.array([r.hi for r in ranges])

        def counts(seq):
            pts = np.array([decode_point(x, system.m, d) for x in seq])  # (n, d)
            inside = (lo[:, None, :] <= pts[None]) & (pts[None] <= hi[:, None, :])
            return inside.all(axis=2).sum(axis=1)
    else:
        lo = np.array([r.lo for r in ranges])
        hi = np.array([r.hi for r in ranges])

        def counts(seq):
            v = np.array(seq)
            return ((lo[:, None] <= v[None]) & (v[None] <= hi[:, None])).sum(axis=1)

    num = np.abs(k * counts(stream) - n * counts(sample))
    best = int(num.max())
    return Fraction(best, n * k), {ranges[i] for i in np.flatnonzero(num == best)}


def random_instance(rng: random.Random, kind: str, max_n: int = 100, max_N: int = 100):
    if kind == "boxes":
        system = SetSystem.boxes(rng.randint(1, 5), rng.randint(1, 2))
    else:
        system = SetSystem(kind, rng.randint(1, max_N))
    N = system.universe_size
    # small value pools make ties and repeated elements common
    pool = [rng.randint(1, N) for _ in range(rng.randint(1, 12))]
    n = rng.randint(1, max_n)
    stream = [rng.choice(pool) if rng.random() < 0.5 else rng.randint(1, N) for _ in range(n)]
    size = rng.randint(1, n)
    idx = sorted(rng.sample(range(n), size))
    sample = [stream[i] for i in idx]
    return system, stream, sample


@pytest.fixture
def rng():
    return random.Random(12345)
