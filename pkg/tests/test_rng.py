import numpy as np
import pytest

from robust_sampling.rng import DrawStream, derive_seed


def test_derive_seed_is_stable_and_128_bit():
    a = derive_seed(7, 3)
    assert a == derive_seed(7, 3)
    assert a != derive_seed(7, 4)
    assert a != derive_seed(3, 7)
    assert 0 <= a < 2**128
    assert derive_seed(2**200, "sampler") != derive_seed(2**200, "adversary")


def test_buffering_does_not_change_the_sequence():
    key = derive_seed(1, 2)
    stream = DrawStream(key, chunk=3)
    got = [stream.next_u64() for _ in range(1000)]
    assert got == np.random.Philox(key=key).random_raw(1000).tolist()


def test_below_stays_in_range():
    s = DrawStream(99)
    vals = [s.below(7) for _ in range(2000)]
    assert min(vals) == 0 and max(vals) == 6


def test_key_range_checked():
    with pytest.raises(ValueError):
        DrawStream(2**128)
