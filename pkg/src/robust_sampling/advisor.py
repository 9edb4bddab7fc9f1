"""Closed-form sample-size calculators for robust and attackable regimes.

Logarithms are evaluated in mpmath interval arithmetic and the bound is
rounded in the safe direction: probabilities and sample sizes are never
below the exact threshold.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction

from mpmath import iv, mpf

iv.dps = 40

DEFAULT_CONTINUOUS_C = Fraction(8)
DEFAULT_ATTACK_C = Fraction(1, 12)


def _iv(x) -> "iv.mpf":
    x = Fraction(x)
    return iv.mpf(x.numerator) / iv.mpf(x.denominator)


def _mpf_fraction(x) -> Fraction:
    man, exp = mpf(x).man_exp
    return Fraction(int(man)) * Fraction(2) ** int(exp)


def _ceil_upper(v) -> int:
    """Smallest integer that is provably >= the value enclosed by ``v``."""
    return math.ceil(_mpf_fraction(v.b))


def ln_upper(x) -> Fraction:
    """Rational upper bound on ``ln x`` (exact to ~40 digits)."""
    return _mpf_fraction(iv.log(_iv(x)).b)


def ln_over_n_upper(n: int) -> Fraction:
    """Rational upper bound on ``ln(n) / n``."""
    return _mpf_fraction((iv.log(_iv(n)) / n).b)


@dataclass(frozen=True)
class RobustnessSpec:
    eps: Fraction
    delta: Fraction
    n: int
    cardinality: int
    vc_dimension: int | None = None

    def __post_init__(self):
        eps, delta = Fraction(self.eps), Fraction(self.delta)
        if not (0 < eps < 1 and 0 < delta < 1):
            raise ValueError("eps and delta must lie strictly between 0 and 1")
        if self.n < 1 or self.cardinality < 1:
            raise ValueError("n and |R| must be at least 1")
        object.__setattr__(self, "eps", eps)
        object.__setattr__(self, "delta", delta)


def _card_log(spec: RobustnessSpec):
    return iv.log(iv.mpf(spec.cardinality))


def bernoulli_p_robust(spec: RobustnessSpec) -> Fraction:
    """``10 (ln|R| + ln(4/delta)) / (eps^2 n)``, capped at 1."""
    v = 10 * (_card_log(spec) + iv.log(4 / _iv(spec.delta))) / (_iv(spec.eps) ** 2 * spec.n)
    return min(Fraction(1), _mpf_fraction(v.b))


def reservoir_k_robust(spec: RobustnessSpec) -> int:
    """``ceil(2 (ln|R| + ln(2/delta)) / eps^2)``."""
    v = 2 * (_card_log(spec) + iv.log(2 / _iv(spec.delta))) / _iv(spec.eps) ** 2
    return _ceil_upper(v)


def single_range_bounds(spec: RobustnessSpec) -> tuple[Fraction, int]:
    """Per-range thresholds with no dependence on |R|."""
    single = RobustnessSpec(spec.eps, spec.delta, spec.n, 1)
    return bernoulli_p_robust(single), reservoir_k_robust(single)


def reservoir_k_continuous(spec: RobustnessSpec, c=DEFAULT_CONTINUOUS_C) -> int:
    """``ceil(c (ln|R| + ln(1/delta) + ln(1/eps) + ln ln n) / eps^2)``.

    ``ln ln n`` is clamped at 0 for ``n <= e``.
    """
    c = Fraction(c)
    if c <= 0:
        raise ValueError("c must be positive")
    eps = _iv(spec.eps)
    lnln = iv.log(iv.log(iv.mpf(spec.n))) if spec.n >= 3 else iv.mpf(0)
    v = _iv(c) * (_card_log(spec) + iv.log(1 / _iv(spec.delta)) + iv.log(1 / eps) + lnln) / eps**2
    return _ceil_upper(v)


@dataclass(frozen=True)
class AttackRegime:
    bernoulli_p_threshold: Fraction
    reservoir_k_threshold: Fraction
    universe_ok: bool
    log_lower: Fraction  # lower bound on 6 (ln n)^2, in nats
    log_upper: Fraction  # upper bound on (n/2) ln 2, in nats


def attack_regime(spec: RobustnessSpec, N: int, c=DEFAULT_ATTACK_C) -> AttackRegime:
    """Thresholds below which the binary-search attack defeats the samplers.

    Uses ``|R| = N`` (prefix ranges) and reports whether
    ``n^(6 ln n) <= N <= 2^(n/2)``.
    """
    c = Fraction(c)
    if c <= 0:
        raise ValueError("c must be positive")
    n = spec.n
    ln_n = iv.log(iv.mpf(n))
    ln_N = iv.log(iv.mpf(N))
    p = _iv(c) * ln_N / (n * ln_n) if n > 1 else None
    k = _iv(c) * ln_N / ln_n if n > 1 else None
    lo = 6 * ln_n**2
    hi = iv.mpf(n) / 2 * iv.log(iv.mpf(2))
    ok = bool(ln_N.a >= lo.b and ln_N.b <= hi.a)
    return AttackRegime(
        _mpf_fraction(p.a) if p is not None else Fraction(0),
        _mpf_fraction(k.a) if k is not None else Fraction(0),
        ok,
        _mpf_fraction(lo.a),
        _mpf_fraction(hi.b),
    )


def default_attack_universe(n: int) -> int:
    """``2**ceil(6 (ln n)^2)`` clamped to at most ``2**(n // 2)``."""
    e = _ceil_upper(6 * iv.log(iv.mpf(n)) ** 2) if n > 1 else 1
    return 2 ** max(1, min(e, n // 2))


class Application(str, enum.Enum):
    QUANTILES = "quantiles"
    HEAVY_HITTERS = "heavy-hitters"
    BOXES = "boxes"


def application_params(app, spec: RobustnessSpec, m: int | None = None, d: int | None = None) -> tuple[Fraction, int]:
    """(p, k) for an application; ``spec.cardinality`` is |U| for the 1-D ones."""
    app = Application(app)
    if app is Application.BOXES:
        if not m or not d:
            raise ValueError("boxes need m and d")
        spec = RobustnessSpec(spec.eps, spec.delta, spec.n, (m * (m + 1) // 2) ** d)
    elif app is Application.HEAVY_HITTERS:
        spec = RobustnessSpec(spec.eps / 3, spec.delta, spec.n, spec.cardinality)
    return bernoulli_p_robust(spec), reservoir_k_robust(spec)
