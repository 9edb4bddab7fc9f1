import json
import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from robust_sampling.oracles import bernoulli_replay
from robust_sampling.rng import TWO_64, derive_seed
from robust_sampling.sampling import (
    BernoulliSampler,
    ConfigError,
    ReservoirSampler,
    SamplerConfig,
    bernoulli_step,
    current_sample,
    reservoir_step,
    sampler_init,
)


def feed(sampler, stream):
    for x in stream:
        sampler.step(x)
    return sampler


class TestInit:
    def test_bernoulli_starts_empty(self):
        s = sampler_init(SamplerConfig.bernoulli(Fraction(1, 2), rng_seed=7))
        assert isinstance(s, BernoulliSampler)
        assert s.state.held == [] and s.state.round == 0 and s.state.ever_sampled == 0

    def test_reservoir_starts_empty(self):
        s = sampler_init(SamplerConfig.reservoir(3, rng_seed=7))
        assert isinstance(s, ReservoirSampler)
        assert current_sample(s) == [] and s.state.round == 0

    @pytest.mark.parametrize("bad", [dict(kind="reservoir", k=0), dict(kind="reservoir", k=None),
                                     dict(kind="bernoulli", p=Fraction(3, 2)), dict(kind="bernoulli", p=-1),
                                     dict(kind="bernoulli")])
    def test_invalid_configs(self, bad):
        with pytest.raises(ConfigError):
            SamplerConfig(**bad)


class TestBernoulli:
    def test_p_one_keeps_everything_with_multiplicity(self):
        s = feed(sampler_init(SamplerConfig.bernoulli(1)), [1, 1, 2])
        assert current_sample(s) == [1, 1, 2]
        assert s.state.ever_sampled == 3

    def test_p_zero_keeps_nothing(self):
        s = sampler_init(SamplerConfig.bernoulli(0))
        for i in range(1, 11):
            st_ = bernoulli_step(s, i)
            assert st_.held == [] and st_.round == i

    def test_replay_matches_straight_line_draws(self):
        for seed in range(20):
            s = feed(sampler_init(SamplerConfig.bernoulli(Fraction(1, 2), rng_seed=seed)), [1, 2, 3, 4])
            assert s.sample() == bernoulli_replay([1, 2, 3, 4], Fraction(1, 2), seed)

    def test_replay_long_stream_odd_p(self):
        stream = list(range(1, 3001))
        p = Fraction(7, 23)
        s = feed(sampler_init(SamplerConfig.bernoulli(p, rng_seed=derive_seed(5))), stream)
        assert s.sample() == bernoulli_replay(stream, p, derive_seed(5))

    def test_size_mean_is_np(self):
        n, p, trials = 200, Fraction(1, 10), 2000
        sizes = [len(feed(sampler_init(SamplerConfig.bernoulli(p, rng_seed=derive_seed(1, t))), range(1, n + 1)).state.held)
                 for t in range(trials)]
        mean = sum(sizes) / trials
        se = math.sqrt(n * p * (1 - p) / trials)
        assert abs(mean - n * p) <= 3 * se

    def test_wrong_sampler_kind(self):
        with pytest.raises(TypeError):
            bernoulli_step(sampler_init(SamplerConfig.reservoir(2)), 1)


class TestReservoir:
    def test_first_k_kept_in_order(self):
        s = sampler_init(SamplerConfig.reservoir(3, rng_seed=7))
        for x in (5, 6, 7):
            reservoir_step(s, x)
        assert current_sample(s) == [5, 6, 7]

    def test_fill_phase_sample(self):
        assert current_sample(feed(sampler_init(SamplerConfig.reservoir(2)), [9, 4])) == [9, 4]

    def test_k1_i2_acceptance_is_exactly_half(self):
        # acceptance iff floor(u * 2 / 2**64) < 1 iff u < 2**63: exactly half of all u
        i, k = 2, 1
        boundary = (k * TWO_64 + i - 1) // i  # smallest u with (u * i) >> 64 >= k
        assert boundary == 2**63
        assert ((boundary - 1) * i) >> 64 < k <= (boundary * i) >> 64

    def test_k1_i2_replacement_frequency(self):
        trials, hits = 20000, 0
        for t in range(trials):
            s = feed(sampler_init(SamplerConfig.reservoir(1, rng_seed=derive_seed(3, t))), [1, 2])
            hits += s.sample() == [2]
        assert abs(hits / trials - 0.5) <= 3 * math.sqrt(0.25 / trials)

    def test_inclusion_frequency_k2_n10(self):
        k, n, trials = 2, 10, 100_000
        counts = [0] * (n + 1)
        for t in range(trials):
            for x in feed(sampler_init(SamplerConfig.reservoir(k, rng_seed=derive_seed(11, t))), range(1, n + 1)).state.held:
                counts[x] += 1
        for x in range(1, n + 1):
            assert abs(counts[x] / trials - k / n) <= 0.01

    def test_ever_sampled_counts_evicted(self):
        s = feed(sampler_init(SamplerConfig.reservoir(2, rng_seed=1)), range(1, 501))
        assert len(s.state.held) == 2
        assert s.state.ever_sampled > 2


@settings(max_examples=150, deadline=None)
@given(
    kind=st.sampled_from(["bernoulli", "reservoir"]),
    k=st.integers(1, 8),
    p=st.fractions(0, 1),
    stream=st.lists(st.integers(1, 20), max_size=60),
    seed=st.integers(0, 2**64 - 1),
)
def test_state_invariants(kind, k, p, stream, seed):
    cfg = SamplerConfig.bernoulli(p, seed) if kind == "bernoulli" else SamplerConfig.reservoir(k, seed)
    s = sampler_init(cfg)
    last_ever = 0
    for i, x in enumerate(stream, 1):
        s.step(x)
        st_ = s.state
        assert st_.round == i
        assert st_.ever_sampled >= last_ever
        last_ever = st_.ever_sampled
        if kind == "reservoir":
            assert len(st_.held) == min(i, k)
        else:
            assert len(st_.held) == st_.ever_sampled <= i
    if kind == "bernoulli":
        # Bernoulli keeps stream order, so held is a subsequence
        it = iter(stream)
        assert all(any(x == y for y in it) for x in s.state.held)
    else:
        from collections import Counter

        assert not Counter(s.state.held) - Counter(stream)


def test_state_json_is_canonical():
    s = feed(sampler_init(SamplerConfig.reservoir(2, rng_seed=3)), [2**70, 5, 6])
    d = json.loads(s.to_json())
    assert d["kind"] == "reservoir" and d["k"] == 2 and d["round"] == 3
    assert all(isinstance(x, str) for x in d["held"])
    assert s.to_json() == feed(sampler_init(SamplerConfig.reservoir(2, rng_seed=3)), [2**70, 5, 6]).to_json()
