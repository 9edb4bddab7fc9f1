"""Set systems over the universe {1..N}, densities and eps-approximation checks.

All verdicts use exact integer/rational arithmetic.  For a sample of size k
drawn from a stream of size n, the discrepancy of a range R is

    |d_R(X) - d_R(S)| = |k * |R & X| - n * |R & S|| / (n * k),

so the checks accumulate the integer numerator and divide once at the end.
"""

from __future__ import annotations

import enum
import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Iterator, Sequence

import numpy as np

from .sampling import ConfigError

# above this many ranges a box system is checked on the compressed grid
FULL_BOX_ENUMERATION = 10**6
MAX_BOX_CELLS = 5 * 10**7
_INT64_SAFE = 1 << 62


class DomainError(ValueError):
    """Density or approximation requested for an empty sequence."""


class SystemKind(str, enum.Enum):
    PREFIX = "prefix"
    INTERVALS = "intervals"
    SINGLETONS = "singletons"
    BOXES = "boxes"


@dataclass(frozen=True)
class Interval:
    """The closed integer interval ``[lo, hi]``; prefixes and singletons too."""

    lo: int
    hi: int

    def __contains__(self, x: int) -> bool:
        return self.lo <= x <= self.hi

    def to_dict(self) -> dict:
        return {"lo": str(self.lo), "hi": str(self.hi)}


@dataclass(frozen=True)
class Box:
    """Axis-parallel box in ``[m]^d``; elements are encoded integers."""

    lo: tuple[int, ...]
    hi: tuple[int, ...]
    m: int

    def __contains__(self, x: int) -> bool:
        return all(a <= c <= b for a, c, b in zip(self.lo, decode_point(x, self.m, len(self.lo)), self.hi))

    def to_dict(self) -> dict:
        return {"lo": list(self.lo), "hi": list(self.hi)}


Range = Interval | Box


def decode_point(x: int, m: int, d: int) -> tuple[int, ...]:
    """Element in ``[1, m**d]`` -> coordinates in ``[1, m]^d`` (axis 0 least significant)."""
    x -= 1
    coords = []
    for _ in range(d):
        x, c = divmod(x, m)
        coords.append(c + 1)
    return tuple(coords)


def encode_point(coords: Sequence[int], m: int) -> int:
    x = 0
    for c in reversed(coords):
        x = x * m + (c - 1)
    return x + 1


@dataclass(frozen=True)
class SetSystem:
    kind: SystemKind
    universe_size: int
    m: int | None = None
    d: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "kind", SystemKind(self.kind))
        if self.kind is SystemKind.BOXES:
            if not self.m or not self.d or self.m < 1 or self.d < 1:
                raise ConfigError("boxes: m and d must be positive integers")
            object.__setattr__(self, "universe_size", self.m**self.d)
        if self.universe_size < 1:
            raise ConfigError("N: universe size must be at least 1")

    @classmethod
    def prefix(cls, N: int) -> "SetSystem":
        return cls(SystemKind.PREFIX, N)

    @classmethod
    def intervals(cls, N: int) -> "SetSystem":
        return cls(SystemKind.INTERVALS, N)

    @classmethod
    def singletons(cls, N: int) -> "SetSystem":
        return cls(SystemKind.SINGLETONS, N)

    @classmethod
    def boxes(cls, m: int, d: int) -> "SetSystem":
        return cls(SystemKind.BOXES, m**d, m, d)

    @property
    def N(self) -> int:
        return self.universe_size

    @property
    def cardinality(self) -> int:
        N = self.universe_size
        if self.kind is SystemKind.INTERVALS:
            return N * (N + 1) // 2
        if self.kind is SystemKind.BOXES:
            return (self.m * (self.m + 1) // 2) ** self.d
        return N

    def ranges(self) -> Iterator[Range]:
        """Enumerate every range.  Only sensible for small universes."""
        N = self.universe_size
        if self.kind is SystemKind.PREFIX:
            for b in range(1, N + 1):
                yield Interval(1, b)
        elif self.kind is SystemKind.SINGLETONS:
            for a in range(1, N + 1):
                yield Interval(a, a)
        elif self.kind is SystemKind.INTERVALS:
            for a in range(1, N + 1):
                for b in range(a, N + 1):
                    yield Interval(a, b)
        else:
            axis = [(a, b) for a in range(1, self.m + 1) for b in range(a, self.m + 1)]
            for sides in product(axis, repeat=self.d):
                yield Box(tuple(s[0] for s in sides), tuple(s[1] for s in sides), self.m)

    def is_member(self, r: Range) -> bool:
        N = self.universe_size
        if self.kind is SystemKind.BOXES:
            return (
                isinstance(r, Box)
                and r.m == self.m
                and len(r.lo) == self.d
                and all(1 <= a <= b <= self.m for a, b in zip(r.lo, r.hi))
            )
        if not isinstance(r, Interval) or not 1 <= r.lo <= r.hi <= N:
            return False
        if self.kind is SystemKind.PREFIX:
            return r.lo == 1
        if self.kind is SystemKind.SINGLETONS:
            return r.lo == r.hi
        return True

    def to_dict(self) -> dict:
        d = {"kind": self.kind.value, "N": str(self.universe_size)}
        if self.kind is SystemKind.BOXES:
            d.update(m=self.m, d=self.d)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "SetSystem":
        kind = SystemKind(d["kind"])
        if kind is SystemKind.BOXES:
            return cls.boxes(int(d["m"]), int(d["d"]))
        return cls(kind, int(d["N"]))


def density(r: Range, seq: Sequence[int]) -> Fraction:
    if not seq:
        raise DomainError("density of an empty sequence is undefined")
    return Fraction(sum(1 for x in seq if x in r), len(seq))


@dataclass(frozen=True)
class Approximation:
    ok: bool
    gap: Fraction
    witness: Range

    def __bool__(self) -> bool:
        return self.ok


def max_discrepancy(sample: Sequence[int], stream: Sequence[int], system: SetSystem) -> tuple[Fraction, Range]:
    """Largest ``|d_R(stream) - d_R(sample)|`` over the system, with a maximizing range."""
    if not sample:
        raise DomainError("eps-approximation is only defined for a non-empty sample")
    if not stream:
        raise DomainError("stream is empty")
    n, k = len(stream), len(sample)
    N = system.universe_size
    lo = min(min(stream), min(sample))
    hi = max(max(stream), max(sample))
    if lo < 1 or hi > N:
        raise ValueError(f"element outside the universe [1, {N}]")

    if system.kind is SystemKind.BOXES:
        num, witness = _boxes(sample, stream, system)
    else:
        fast = hi < _INT64_SAFE and n * k * (n + k) < _INT64_SAFE
        sweep = _sweep_numpy if fast else _sweep_python
        num, witness = sweep(sample, stream, system)
    return Fraction(num, n * k), witness


def is_eps_approximation(sample, stream, system: SetSystem, eps) -> Approximation:
    gap, witness = max_discrepancy(sample, stream, system)
    return Approximation(gap <= Fraction(eps), gap, witness)


# -- one-dimensional sweeps --------------------------------------------------
#
# D(t) = k * #{x in X : x <= t} - n * #{s in S : s <= t} is piecewise constant
# and only changes at values that occur in X or S, so its extrema over all
# thresholds t in [0, N] are attained at t = 0 or an occurring value.


def _sweep_python(sample, stream, system):
    n, k = len(stream), len(sample)
    cx, cs = Counter(stream), Counter(sample)
    values = sorted(cx.keys() | cs.keys())
    kind = system.kind

    if kind is SystemKind.SINGLETONS:
        best, arg = -1, values[0]
        for v in values:
            g = abs(k * cx[v] - n * cs[v])
            if g > best:
                best, arg = g, v
        return best, Interval(arg, arg)

    d = 0
    best, arg = 0, system.universe_size  # prefix: [1, N] has gap 0
    dmax, tmax, dmin, tmin = 0, 0, 0, 0
    for v in values:
        d += k * cx[v] - n * cs[v]
        if abs(d) > best:
            best, arg = abs(d), v
        if d > dmax:
            dmax, tmax = d, v
        if d < dmin:
            dmin, tmin = d, v
    if kind is SystemKind.PREFIX:
        return best, Interval(1, arg)
    return _interval_witness(dmax, tmax, dmin, tmin, system.universe_size)


def _interval_witness(dmax, tmax, dmin, tmin, N):
    gap = dmax - dmin
    if gap == 0:
        return 0, Interval(1, N)
    return gap, Interval(min(tmax, tmin) + 1, max(tmax, tmin))


def _sweep_numpy(sample, stream, system):
    n, k = len(stream), len(sample)
    xs = np.sort(np.asarray(stream, dtype=np.int64))
    ss = np.sort(np.asarray(sample, dtype=np.int64))
    values = np.unique(np.concatenate((xs, ss)))
    cx = np.searchsorted(xs, values, side="right")
    cs = np.searchsorted(ss, values, side="right")
    kind = system.kind

    if kind is SystemKind.SINGLETONS:
        cx = cx - np.searchsorted(xs, values, side="left")
        cs = cs - np.searchsorted(ss, values, side="left")
        g = np.abs(k * cx - n * cs)
        i = int(np.argmax(g))
        v = int(values[i])
        return int(g[i]), Interval(v, v)

    d = k * cx - n * cs
    if kind is SystemKind.PREFIX:
        g = np.abs(d)
        i = int(np.argmax(g))
        if g[i] == 0:
            return 0, Interval(1, system.universe_size)
        return int(g[i]), Interval(1, int(values[i]))

    # prepend threshold t = 0 where D = 0
    d = np.concatenate(([0], d))
    t = np.concatenate(([0], values))
    imax, imin = int(np.argmax(d)), int(np.argmin(d))
    return _interval_witness(int(d[imax]), int(t[imax]), int(d[imin]), int(t[imin]), system.universe_size)


# -- boxes ---------------------------------------------------------------------


def _boxes(sample, stream, system):
    n, k = len(stream), len(sample)
    m, dim = system.m, system.d
    if n * k * (n + k) >= _INT64_SAFE:
        raise ValueError("boxes check: stream too large for exact int64 accumulation")
    px = np.array([decode_point(x, m, dim) for x in stream], dtype=np.int64).reshape(n, dim)
    ps = np.array([decode_point(x, m, dim) for x in sample], dtype=np.int64).reshape(k, dim)

    if system.cardinality <= FULL_BOX_ENUMERATION:
        axes = [np.arange(1, m + 1)] * dim
    else:
        # boxes with corners at occurring coordinates realise every point subset
        both = np.concatenate((px, ps))
        axes = [np.unique(both[:, j]) for j in range(dim)]
        cells = math.prod(len(a) * (len(a) + 1) // 2 for a in axes)
        if cells > MAX_BOX_CELLS:
            raise ValueError(f"boxes check: {cells} compressed boxes exceeds the desk-scale limit")

    shape = tuple(len(a) for a in axes)
    grid = np.zeros(shape, dtype=np.int64)
    ix = tuple(np.searchsorted(axes[j], px[:, j]) for j in range(dim))
    iss = tuple(np.searchsorted(axes[j], ps[:, j]) for j in range(dim))
    np.add.at(grid, ix, k)
    np.add.at(grid, iss, -n)

    sides = []
    for j, s in enumerate(shape):
        a, b = np.triu_indices(s + 1, 1)  # 0 <= a < b <= s -> cells [a, b)
        pref = np.concatenate((np.zeros_like(grid.take([0], axis=j)), np.cumsum(grid, axis=j)), axis=j)
        grid = pref.take(b, axis=j) - pref.take(a, axis=j)
        sides.append((a, b))

    flat = np.abs(grid)
    pos = np.unravel_index(int(np.argmax(flat)), flat.shape)
    lo = tuple(int(axes[j][sides[j][0][i]]) for j, i in enumerate(pos))
    hi = tuple(int(axes[j][sides[j][1][i] - 1]) for j, i in enumerate(pos))
    return int(flat[pos]), Box(lo, hi, m)


def approx_after_substitution(alpha, v: int, k: int) -> Fraction:
    """Approximation level after overwriting ``v`` of ``k`` sample slots."""
    if k < 1 or not 0 <= v <= k:
        raise ValueError("need k >= 1 and 0 <= v <= k")
    return Fraction(alpha) + Fraction(v, k)


def approx_after_growth(alpha, beta) -> Fraction:
    """Approximation level once the stream grows by at most a factor ``1 + beta``."""
    alpha, beta = Fraction(alpha), Fraction(beta)
    if alpha < 0 or beta < 0:
        raise ValueError("alpha and beta must be non-negative")
    return alpha + beta
