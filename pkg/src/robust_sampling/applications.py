"""Queries answered from a sample: ranks, quantiles, heavy hitters, range
counts and 1-D center points."""

from __future__ import annotations

import math
from bisect import bisect_right
from collections import Counter
from fractions import Fraction
from typing import Sequence

from .set_systems import DomainError, Range


def _require(sample):
    if not sample:
        raise DomainError("query needs a non-empty sample")


def estimate_rank(target: int, sample: Sequence[int], n: int) -> Fraction:
    """Estimated number of stream elements ``<= target``."""
    _require(sample)
    below = sum(1 for s in sample if s <= target)
    return Fraction(n * below, len(sample))


def estimate_quantile(q, sample: Sequence[int]) -> int:
    """The ``ceil(q |S|)``-th smallest sample element (lower median at q = 1/2)."""
    _require(sample)
    q = Fraction(q)
    if not 0 < q < 1:
        raise ValueError("q must lie strictly between 0 and 1")
    idx = math.ceil(q * len(sample))
    return sorted(sample)[idx - 1]


def heavy_hitters(sample: Sequence[int], alpha, eps) -> list[int]:
    """Distinct sample elements with sample density ``>= alpha - eps/3``, ascending.

    Meant for a sample that is an (eps/3)-approximation under singletons.
    """
    _require(sample)
    alpha, eps = Fraction(alpha), Fraction(eps)
    if not 0 < eps < alpha:
        raise ValueError("need 0 < eps < alpha")
    cut = (alpha - eps / 3) * len(sample)
    return sorted(x for x, c in Counter(sample).items() if c >= cut)


def answer_range_query(r: Range, sample: Sequence[int], n: int) -> Fraction:
    """Estimated count of stream elements in ``r``: ``|r & S| * n / |S|``."""
    _require(sample)
    return Fraction(sum(1 for s in sample if s in r) * n, len(sample))


def center_point_1d(sample: Sequence[int], beta) -> int:
    """Sample median, checked to be a (6 beta / 5)-center of the sample.

    If the sample is a (beta/5)-approximation w.r.t. intervals, the result is
    a beta-center of the stream.
    """
    _require(sample)
    beta = Fraction(beta)
    if not 0 < beta <= Fraction(1, 2):
        raise ValueError("beta must lie in (0, 1/2]")
    k = len(sample)
    lo = math.ceil(Fraction(6, 5) * beta * k)
    hi = k - lo + 1
    if lo > hi:
        raise ValueError(f"no (6 beta / 5)-center exists for beta={beta} and |S|={k}")
    pos = (k + 1) // 2
    return sorted(sample)[pos - 1]


def true_rank(target: int, stream: Sequence[int]) -> int:
    s = sorted(stream)
    return bisect_right(s, target)
