"""Adversary strategies: the binary-search attack, its dyadic [0, 1] variant,
and static baselines.

An adversary sees exactly the elements it already submitted and the
sampler's state after the previous round.  The engine hands it a single
``AdversaryContext`` that is updated in place every round; strategies must
treat it as read-only.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction

from .advisor import ln_over_n_upper
from .rng import DrawStream
from .sampling import ConfigError, SampleState, SamplerConfig, SamplerKind

STRATEGIES = ("attack", "midpoint-attack", "static-sorted", "static-random", "constant")


class AttackExhausted(RuntimeError):
    """The attack window has no interior point left to submit."""


@dataclass
class AdversaryContext:
    prior: list[int]
    state: SampleState
    round: int
    n: int
    N: int
    eps: Fraction
    sampler: SamplerConfig


@dataclass(frozen=True)
class AttackState:
    a: int
    b: int
    p_prime: Fraction
    last: int | None = None


def attack_p_prime(sampler: SamplerConfig, n: int) -> Fraction:
    """``max(p, ln n / n)``; a reservoir of size k is attacked with ``p = k/n``.

    A sampler that keeps every element (p = 1 or k >= n) cannot be steered;
    the attack then splits windows at 1/2 so the game still runs.
    """
    p = sampler.p if sampler.kind is SamplerKind.BERNOULLI else Fraction(min(sampler.k, n), n)
    p = max(p, ln_over_n_upper(n)) if n > 1 else p
    return p if p < 1 else Fraction(1, 2)


def attack_start(N: int, p_prime: Fraction) -> AttackState:
    if not 0 < p_prime < 1:
        raise ConfigError(f"attack needs 0 < p' < 1, got p' = {p_prime}")
    if N < 3:
        raise ConfigError("attack needs a universe of at least 3 elements")
    return AttackState(1, N, Fraction(p_prime))


def attack_step(state: AttackState, was_sampled: bool, strict: bool = True) -> tuple[int, AttackState]:
    """Apply the outcome for the previous element, then emit the next one.

    ``x = floor(a + (1 - p') (b - a))``.  With ``strict`` the attack raises
    :class:`AttackExhausted` once ``x`` cannot lie strictly inside ``(a, b)``;
    otherwise it keeps submitting the (degenerate) formula value.
    """
    a, b = state.a, state.b
    if state.last is not None:
        if was_sampled:
            a = state.last
        else:
            b = state.last
    q = state.p_prime
    x = a + ((q.denominator - q.numerator) * (b - a)) // q.denominator
    if strict and not a < x < b:
        raise AttackExhausted(f"window ({a}, {b}) exhausted")
    return x, replace(state, a=a, b=b, last=x)


@dataclass(frozen=True)
class MidpointState:
    a: Fraction = Fraction(0)
    b: Fraction = Fraction(1)
    last: Fraction | None = None


def midpoint_attack_step(state: MidpointState, was_sampled: bool) -> tuple[Fraction, MidpointState]:
    a, b = state.a, state.b
    if state.last is not None:
        if was_sampled:
            a = state.last
        else:
            b = state.last
    x = (a + b) / 2
    return x, MidpointState(a, b, x)


class Adversary:
    name = ""

    def next(self, ctx: AdversaryContext) -> int:
        raise NotImplementedError


class ConstantAdversary(Adversary):
    name = "constant"

    def __init__(self, c: int = 1):
        self.c = c

    def next(self, ctx):
        return self.c


class SortedStaticAdversary(Adversary):
    """Submits 1, 2, ..., wrapping around the universe if n > N."""

    name = "static-sorted"

    def next(self, ctx):
        return (ctx.round - 1) % ctx.N + 1


class RandomStaticAdversary(Adversary):
    name = "static-random"

    def __init__(self, seed: int):
        self._draws = DrawStream(seed)

    def next(self, ctx):
        return self._draws.below(ctx.N) + 1


class _Observer:
    """Turns the observed state into "was the previous element accepted"."""

    def __init__(self):
        self._seen = 0

    def observe(self, state: SampleState) -> bool:
        sampled = state.ever_sampled > self._seen
        self._seen = state.ever_sampled
        return sampled


class AttackAdversary(Adversary):
    """Binary-search attack over ``[1, N]``.

    ``on_exhaust="abort"`` raises :class:`AttackExhausted` when the window
    closes; ``"saturate"`` keeps submitting the formula value so the stream
    always reaches length n.  Same arithmetic as :func:`attack_step`, kept
    on plain ints because this runs once per round in every trial.
    """

    name = "attack"

    def __init__(self, on_exhaust: str = "abort"):
        if on_exhaust not in ("abort", "saturate"):
            raise ConfigError(f"on_exhaust: expected 'abort' or 'saturate', got {on_exhaust!r}")
        self.strict = on_exhaust == "abort"
        self._window: list[int] | None = None  # [a, b, last]
        self._seen = 0

    @property
    def state(self) -> AttackState | None:
        if self._window is None:
            return None
        a, b, last = self._window
        return AttackState(a, b, self._p_prime, last)

    def next(self, ctx):
        w = self._window
        if w is None:
            start = attack_start(ctx.N, attack_p_prime(ctx.sampler, ctx.n))
            self._p_prime = start.p_prime
            self._num = start.p_prime.denominator - start.p_prime.numerator
            self._den = start.p_prime.denominator
            w = self._window = [start.a, start.b, None]
        else:
            seen = ctx.state.ever_sampled
            if seen > self._seen:
                w[0] = w[2]
            else:
                w[1] = w[2]
            self._seen = seen
        a, b = w[0], w[1]
        x = a + (self._num * (b - a)) // self._den
        if self.strict and not a < x < b:
            raise AttackExhausted(f"window ({a}, {b}) exhausted")
        w[2] = x
        return x


class MidpointAttackAdversary(Adversary):
    """Dyadic midpoint attack on [0, 1], submitted as ``x * 2**n``.

    The integer encoding keeps the stream inside ``[1, 2**n - 1]``, so games
    using it need ``N >= 2**n``.
    """

    name = "midpoint-attack"

    def __init__(self):
        self.state = MidpointState()
        self._obs = _Observer()

    def next(self, ctx):
        if ctx.N < 2**ctx.n:
            raise ConfigError("midpoint-attack needs N >= 2**n")
        x, self.state = midpoint_attack_step(self.state, self._obs.observe(ctx.state))
        return int(x * 2**ctx.n)


def make_adversary(name: str, seed: int = 0, **params) -> Adversary:
    if name == "attack":
        return AttackAdversary(params.get("on_exhaust", "abort"))
    if name == "midpoint-attack":
        return MidpointAttackAdversary()
    if name == "static-sorted":
        return SortedStaticAdversary()
    if name == "static-random":
        return RandomStaticAdversary(seed)
    if name == "constant":
        return ConstantAdversary(int(params.get("c", 1)))
    raise ConfigError(f"adversary: unknown strategy {name!r} (choose from {', '.join(STRATEGIES)})")


def ordering_holds(elements, sampled) -> bool:
    """Every submitted element lies strictly above all accepted earlier
    elements and strictly below all rejected ones."""
    top_sampled = None
    low_rejected = None
    for x, s in zip(elements, sampled):
        if top_sampled is not None and not x > top_sampled:
            return False
        if low_rejected is not None and not x < low_rejected:
            return False
        if s:
            top_sampled = x
        else:
            low_rejected = x
    return True
