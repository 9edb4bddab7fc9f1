"""Bernoulli and reservoir samplers over a stream of integer elements."""

from __future__ import annotations

import enum
import hashlib
import json
from dataclasses import dataclass, field
from fractions import Fraction

from .rng import TWO_64, DrawStream


class ConfigError(ValueError):
    """Raised for an invalid sampler, system or game configuration."""


class SamplerKind(str, enum.Enum):
    BERNOULLI = "bernoulli"
    RESERVOIR = "reservoir"


@dataclass(frozen=True)
class SamplerConfig:
    kind: SamplerKind
    p: Fraction | None = None
    k: int | None = None
    rng_seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "kind", SamplerKind(self.kind))
        if self.kind is SamplerKind.BERNOULLI:
            if self.p is None:
                raise ConfigError("p: Bernoulli sampler needs an inclusion probability")
            p = Fraction(self.p)
            if not 0 <= p <= 1:
                raise ConfigError(f"p: must lie in [0, 1], got {p}")
            object.__setattr__(self, "p", p)
        else:
            if self.k is None or int(self.k) != self.k or self.k < 1:
                raise ConfigError(f"k: reservoir capacity must be a positive integer, got {self.k}")
        if not 0 <= self.rng_seed < (1 << 128):
            raise ConfigError("rng_seed: must be a non-negative integer below 2**128")

    @classmethod
    def bernoulli(cls, p, rng_seed: int = 0) -> "SamplerConfig":
        return cls(SamplerKind.BERNOULLI, p=Fraction(p), rng_seed=rng_seed)

    @classmethod
    def reservoir(cls, k: int, rng_seed: int = 0) -> "SamplerConfig":
        return cls(SamplerKind.RESERVOIR, k=k, rng_seed=rng_seed)

    @property
    def param(self) -> Fraction | int:
        return self.p if self.kind is SamplerKind.BERNOULLI else self.k

    def with_seed(self, rng_seed: int) -> "SamplerConfig":
        return SamplerConfig(self.kind, p=self.p, k=self.k, rng_seed=rng_seed)


@dataclass
class SampleState:
    """Sampler memory: the held sample plus round and acceptance counters.

    ``ever_sampled`` counts every accepted element, including reservoir
    entries that were later overwritten.
    """

    held: list[int] = field(default_factory=list)
    round: int = 0
    ever_sampled: int = 0

    def digest(self) -> str:
        h = hashlib.blake2b(digest_size=8)
        for x in self.held:
            h.update(str(x).encode())
            h.update(b",")
        return h.hexdigest()


class Sampler:
    """Common interface: ``step(x)`` consumes one element and reports acceptance."""

    config: SamplerConfig
    state: SampleState

    def step(self, x: int) -> bool:
        raise NotImplementedError

    def sample(self) -> list[int]:
        """The current sample, as a copy."""
        return list(self.state.held)

    def to_json(self) -> str:
        return json.dumps(state_to_dict(self.config, self.state), sort_keys=True)


class BernoulliSampler(Sampler):
    def __init__(self, config: SamplerConfig):
        self.config = config
        self.state = SampleState()
        self._draws = DrawStream(config.rng_seed)
        # u < floor(p * 2**64); quantization error is at most 2**-64
        self._threshold = (config.p.numerator * TWO_64) // config.p.denominator

    def step(self, x: int) -> bool:
        st = self.state
        st.round += 1
        if self._draws.next_u64() < self._threshold:
            st.held.append(x)
            st.ever_sampled += 1
            return True
        return False


class ReservoirSampler(Sampler):
    def __init__(self, config: SamplerConfig):
        self.config = config
        self.state = SampleState()
        self._draws = DrawStream(config.rng_seed)
        self._k = config.k

    def step(self, x: int) -> bool:
        st = self.state
        st.round += 1
        i = st.round
        k = self._k
        if i <= k:
            st.held.append(x)
            st.ever_sampled += 1
            return True
        # r = floor(u * i / 2**64) is uniform on [0, i); r < k happens with
        # probability k/i and then r is a uniform slot in [0, k)
        r = (self._draws.next_u64() * i) >> 64
        if r < k:
            st.held[r] = x
            st.ever_sampled += 1
            return True
        return False


def sampler_init(config: SamplerConfig) -> Sampler:
    if config.kind is SamplerKind.BERNOULLI:
        return BernoulliSampler(config)
    return ReservoirSampler(config)


def bernoulli_step(sampler: BernoulliSampler, x: int) -> SampleState:
    if not isinstance(sampler, BernoulliSampler):
        raise TypeError("bernoulli_step needs a Bernoulli sampler")
    sampler.step(x)
    return sampler.state


def reservoir_step(sampler: ReservoirSampler, x: int) -> SampleState:
    if not isinstance(sampler, ReservoirSampler):
        raise TypeError("reservoir_step needs a reservoir sampler")
    sampler.step(x)
    return sampler.state


def current_sample(sampler: Sampler) -> list[int]:
    return sampler.sample()


def state_to_dict(config: SamplerConfig, state: SampleState) -> dict:
    d = {
        "kind": config.kind.value,
        "round": state.round,
        "ever_sampled": state.ever_sampled,
        "held": [str(x) for x in state.held],
    }
    if config.kind is SamplerKind.BERNOULLI:
        d["p"] = str(config.p)
    else:
        d["k"] = config.k
    return d
