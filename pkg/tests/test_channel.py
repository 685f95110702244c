import math

import numpy as np
import pytest

from gicbounds import (
    MUserChannel,
    TwoUserChannel,
    m_user_interference_powers,
    single_user_capacities,
    tdm_fdm_sum_rate,
    tin_rates,
)

FIG1 = TwoUserChannel(a=0.04, b=0.09, p1=10, p2=20)


class TestTinRates:
    def test_no_interference_matches_awgn(self):
        r = tin_rates(TwoUserChannel(0, 0, 3, 3))
        assert r.r1 == pytest.approx(1.0, abs=1e-12)
        assert r.r2 == pytest.approx(1.0, abs=1e-12)

    def test_weak_interference_values(self):
        r = tin_rates(FIG1)
        assert r.r1 == pytest.approx(0.5 * math.log2(1 + 10 / 1.8), abs=1e-15)
        assert r.r2 == pytest.approx(0.5 * math.log2(1 + 20 / 1.9), abs=1e-15)
        assert r.r1 == pytest.approx(1.3564, abs=5e-5)
        assert r.r2 == pytest.approx(1.7634, abs=5e-5)

    def test_unit_gain_unit_power(self):
        r = tin_rates(TwoUserChannel(1, 1, 1, 1))
        assert r.r1 == pytest.approx(0.5 * math.log2(1.5), abs=1e-15)
        assert r.r2 == pytest.approx(0.2925, abs=5e-5)


class TestSingleUserCapacities:
    @pytest.mark.parametrize(
        "p1,p2,c1,c2",
        [(3, 15, 1.0, 2.0), (1, 1, 0.5, 0.5), (10, 20, 1.7297, 2.1962)],
    )
    def test_values(self, p1, p2, c1, c2):
        r = single_user_capacities(TwoUserChannel(0.3, 0.7, p1, p2))
        assert r.r1 == pytest.approx(c1, abs=5e-5)
        assert r.r2 == pytest.approx(c2, abs=5e-5)


class TestTdmFdm:
    def test_symmetric_split(self):
        ch = TwoUserChannel(0.1, 0.1, 4, 4)
        assert tdm_fdm_sum_rate(ch, 0.5) == pytest.approx(0.5 * math.log2(9), abs=1e-12)

    def test_all_time_to_user2_limit(self):
        val = tdm_fdm_sum_rate(FIG1, 1e-9)
        assert val == pytest.approx(0.5 * math.log2(21), abs=1e-6)

    def test_even_split(self):
        expected = 0.25 * math.log2(21) + 0.25 * math.log2(41)
        assert tdm_fdm_sum_rate(FIG1, 0.5) == pytest.approx(expected, abs=1e-12)
        assert tdm_fdm_sum_rate(FIG1, 0.5) == pytest.approx(2.4375, abs=5e-5)

    @pytest.mark.parametrize("alpha", [0.0, 1.0, -0.2, 1.7])
    def test_alpha_domain(self, alpha):
        with pytest.raises(ValueError):
            tdm_fdm_sum_rate(FIG1, alpha)


class TestInterferencePowers:
    def test_single_user(self):
        ch = MUserChannel(gains=np.eye(1), powers=np.array([2.0]))
        assert m_user_interference_powers(ch).tolist() == [0.0]

    def test_symmetric_three_user(self):
        ch = MUserChannel.symmetric(3, 0.05, 5.0)
        assert m_user_interference_powers(ch) == pytest.approx([0.5, 0.5, 0.5])

    def test_two_user_embedding(self):
        q = m_user_interference_powers(MUserChannel.from_two_user(FIG1))
        assert q == pytest.approx([FIG1.a * FIG1.p2, FIG1.b * FIG1.p1])


class TestInvariants:
    def test_tin_never_exceeds_single_user(self):
        rng = np.random.default_rng(0)
        for _ in range(200):
            a, b = rng.uniform(0, 3, 2)
            p1, p2 = np.exp(rng.uniform(-2, 7, 2))
            ch = TwoUserChannel(a, b, p1, p2)
            tin = tin_rates(ch)
            cap = single_user_capacities(ch)
            assert 0 <= tin.r1 <= cap.r1 + 1e-12
            assert 0 <= tin.r2 <= cap.r2 + 1e-12
            assert math.isfinite(tin.r1) and math.isfinite(tin.r2)

    def test_zero_gain_collapses_to_single_user(self):
        rng = np.random.default_rng(1)
        for _ in range(50):
            p1, p2 = np.exp(rng.uniform(-2, 7, 2))
            ch = TwoUserChannel(0, 0, p1, p2)
            assert tin_rates(ch) == single_user_capacities(ch)


class TestValidation:
    @pytest.mark.parametrize(
        "kwargs",
        [
            dict(a=-0.1, b=0, p1=1, p2=1),
            dict(a=0, b=math.inf, p1=1, p2=1),
            dict(a=0, b=0, p1=0, p2=1),
            dict(a=0, b=0, p1=1, p2=-3),
            dict(a=math.nan, b=0, p1=1, p2=1),
        ],
    )
    def test_two_user_rejects(self, kwargs):
        with pytest.raises(ValueError):
            TwoUserChannel(**kwargs)

    def test_m_user_rejects_bad_diagonal(self):
        with pytest.raises(ValueError):
            MUserChannel(gains=np.array([[2.0, 0.1], [0.1, 1.0]]), powers=np.array([1.0, 1.0]))

    def test_m_user_rejects_negative_gain(self):
        with pytest.raises(ValueError):
            MUserChannel(gains=np.array([[1.0, -0.1], [0.1, 1.0]]), powers=np.array([1.0, 1.0]))

    def test_m_user_rejects_power_shape(self):
        with pytest.raises(ValueError):
            MUserChannel(gains=np.eye(2), powers=np.array([1.0, 2.0, 3.0]))

    def test_m_user_gains_read_only(self):
        ch = MUserChannel.symmetric(3, 0.1, 1.0)
        with pytest.raises(ValueError):
            ch.gains[0, 1] = 0.5
