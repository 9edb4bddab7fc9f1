import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from robust_sampling import set_systems
from robust_sampling.set_systems import (
    Box,
    DomainError,
    Interval,
    SetSystem,
    _sweep_numpy,
    _sweep_python,
    approx_after_growth,
    approx_after_substitution,
    decode_point,
    density,
    encode_point,
    is_eps_approximation,
    max_discrepancy,
)

from conftest import enumerated_discrepancy, random_instance


class TestCardinality:
    def test_formulas(self):
        assert SetSystem.prefix(10).cardinality == 10
        assert SetSystem.intervals(10).cardinality == 55
        assert SetSystem.singletons(10).cardinality == 10
        assert SetSystem.boxes(10, 2).cardinality == 55**2

    @pytest.mark.parametrize("system", [SetSystem.prefix(7), SetSystem.intervals(7), SetSystem.singletons(7), SetSystem.boxes(3, 2)])
    def test_enumeration_matches_cardinality(self, system):
        rs = list(system.ranges())
        assert len(rs) == len(set(rs)) == system.cardinality
        assert all(system.is_member(r) for r in rs)

    def test_json_round_trip(self):
        for s in (SetSystem.prefix(2**80), SetSystem.boxes(4, 3)):
            assert SetSystem.from_dict(s.to_dict()) == s
        assert SetSystem.prefix(2**80).to_dict()["N"] == str(2**80)


def test_point_encoding_round_trip():
    for x in range(1, 5**3 + 1):
        c = decode_point(x, 5, 3)
        assert all(1 <= v <= 5 for v in c)
        assert encode_point(c, 5) == x


class TestDensity:
    def test_examples(self):
        assert density(Interval(1, 3), [1, 2, 3, 4]) == Fraction(3, 4)
        assert density(Interval(1, 10), [3, 10, 1]) == 1
        assert density(Interval(5, 5), [5, 5, 7]) == Fraction(2, 3)

    def test_empty_is_domain_error(self):
        with pytest.raises(DomainError):
            density(Interval(1, 3), [])


class TestApproximation:
    def test_identical_sample_passes_at_zero(self):
        seq = [3, 1, 4, 1, 5, 9, 2, 6]
        for s in (SetSystem.prefix(10), SetSystem.intervals(10), SetSystem.singletons(10)):
            res = is_eps_approximation(seq, seq, s, 0)
            assert res.ok and res.gap == 0

    def test_smallest_ten_of_hundred(self):
        res = is_eps_approximation(list(range(1, 11)), list(range(1, 101)), SetSystem.prefix(100), Fraction(1, 2))
        assert not res.ok
        assert res.witness == Interval(1, 10)
        assert res.gap == Fraction(9, 10)

    def test_empty_sample_is_domain_error(self):
        with pytest.raises(DomainError):
            is_eps_approximation([], [1, 2], SetSystem.prefix(3), Fraction(1, 2))

    def test_out_of_universe_rejected(self):
        with pytest.raises(ValueError):
            max_discrepancy([5], [5, 11], SetSystem.prefix(10))

    @pytest.mark.parametrize("kind", ["prefix", "intervals", "singletons", "boxes"])
    def test_sweep_equals_enumeration(self, kind):
        rng = random.Random(hash(kind) & 0xFFFF)
        for _ in range(150):
            system, stream, sample = random_instance(rng, kind, max_n=50, max_N=50)
            gap, witness = max_discrepancy(sample, stream, system)
            oracle_gap, maximizers = enumerated_discrepancy(sample, stream, system)
            assert gap == oracle_gap
            assert witness in maximizers
            assert system.is_member(witness)

    def test_prefix_property_up_to_200(self):
        rng = random.Random(7)
        for _ in range(60):
            system, stream, sample = random_instance(rng, "prefix", max_n=200, max_N=200)
            assert max_discrepancy(sample, stream, system)[0] == enumerated_discrepancy(sample, stream, system)[0]

    @pytest.mark.parametrize("kind", ["prefix", "intervals", "singletons"])
    def test_python_and_numpy_sweeps_agree(self, kind):
        rng = random.Random(3)
        for _ in range(200):
            system, stream, sample = random_instance(rng, kind, max_n=60, max_N=60)
            assert _sweep_python(sample, stream, system) == _sweep_numpy(sample, stream, system)

    def test_big_integer_universe(self):
        N = 2**200
        stream = [2**199 + i for i in range(20)] + [7, 7, N]
        sample = [7, 2**199 + 3, N]
        for kind in ("prefix", "intervals", "singletons"):
            system = SetSystem(kind, N)
            gap, w = max_discrepancy(sample, stream, system)
            # compress to small ranks and compare against enumeration there
            ranks = {v: i + 1 for i, v in enumerate(sorted(set(stream)))}
            small = SetSystem(kind, len(ranks))
            assert gap == enumerated_discrepancy([ranks[x] for x in sample], [ranks[x] for x in stream], small)[0]
            assert abs(density(w, stream) - density(w, sample)) == gap

    def test_compressed_boxes_equal_enumeration(self, monkeypatch):
        monkeypatch.setattr(set_systems, "FULL_BOX_ENUMERATION", 0)
        rng = random.Random(99)
        for _ in range(80):
            system, stream, sample = random_instance(rng, "boxes", max_n=40)
            gap, w = max_discrepancy(sample, stream, system)
            assert gap == enumerated_discrepancy(sample, stream, system)[0]
            assert abs(density(w, stream) - density(w, sample)) == gap

    def test_three_dimensional_boxes(self):
        rng = random.Random(5)
        system = SetSystem.boxes(3, 3)
        for _ in range(20):
            stream = [rng.randint(1, 27) for _ in range(30)]
            sample = rng.sample(stream, 9)
            assert max_discrepancy(sample, stream, system)[0] == enumerated_discrepancy(sample, stream, system)[0]

    def test_box_membership(self):
        b = Box((2, 1), (3, 2), 4)
        assert encode_point((2, 2), 4) in b
        assert encode_point((4, 2), 4) not in b


@settings(max_examples=200, deadline=None)
@given(
    stream=st.lists(st.integers(1, 30), min_size=1, max_size=40),
    data=st.data(),
    eps=st.fractions(0, 1),
    bump=st.fractions(0, 1),
)
def test_monotone_in_eps(stream, data, eps, bump):
    sample = data.draw(st.lists(st.sampled_from(stream), min_size=1, max_size=40))
    system = SetSystem.intervals(30)
    if is_eps_approximation(sample, stream, system, eps).ok:
        assert is_eps_approximation(sample, stream, system, eps + bump).ok


class TestApproximationAlgebra:
    def test_substitution_examples(self):
        assert approx_after_substitution(0, 0, 5) == 0
        assert approx_after_substitution(Fraction(1, 4), 1, 4) == Fraction(1, 2)
        with pytest.raises(ValueError):
            approx_after_substitution(0, 6, 5)

    def test_growth_examples(self):
        assert approx_after_growth(0, 0) == 0
        assert approx_after_growth(Fraction(1, 8), Fraction(1, 8)) == Fraction(1, 4)
        with pytest.raises(ValueError):
            approx_after_growth(-1, 0)

    def test_substitution_bound_holds(self):
        rng = random.Random(21)
        system = SetSystem.intervals(12)
        for _ in range(300):
            k = rng.randint(1, 20)
            t = [rng.randint(1, 12) for _ in range(k)]
            v = rng.randint(0, k)
            t2 = list(t)
            for pos in rng.sample(range(k), v):
                t2[pos] = rng.randint(1, 12)
            gap = max(abs(density(r, t) - density(r, t2)) for r in system.ranges())
            assert gap <= approx_after_substitution(0, v, k)
            # second part: T' approximates X within alpha + v/k
            x = t + t2 + [rng.randint(1, 12) for _ in range(rng.randint(0, 10))]
            alpha = enumerated_discrepancy(t, x, system)[0]
            assert enumerated_discrepancy(t2, x, system)[0] <= approx_after_substitution(alpha, v, k)

    def test_growth_bound_holds(self):
        rng = random.Random(22)
        system = SetSystem.intervals(12)
        for _ in range(300):
            x = [rng.randint(1, 12) for _ in range(rng.randint(1, 30))]
            t = rng.sample(x, rng.randint(1, len(x)))
            extra = [rng.randint(1, 12) for _ in range(rng.randint(0, len(x)))]
            beta = Fraction(len(extra), len(x))
            before = enumerated_discrepancy(t, x, system)[0]
            after = enumerated_discrepancy(t, x + extra, system)[0]
            assert after <= approx_after_growth(before, beta)
