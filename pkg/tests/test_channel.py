import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from superfec import channel
from superfec.channel import ChannelPoint, DomainError, RngStream


def test_ber_matches_high_precision_erfc():
    mpmath.mp.dps = 40
    for ebn0, rate in [(5.6, 917760 / 979104), (0.0, 1.0), (6.9, 122368 / 130560), (12.0, 0.5)]:
        ref = 0.5 * mpmath.erfc(mpmath.sqrt(rate * mpmath.power(10, mpmath.mpf(ebn0) / 10)))
        got = channel.ebn0_to_ber(ebn0, rate)
        assert abs(got - float(ref)) <= 1e-12 * float(ref)


def test_sp_bch_operating_point():
    pt = ChannelPoint.at(5.6, 917760 / 979104)
    assert pt.e_in == pytest.approx(4.541e-3, rel=1e-3)


def test_uncoded_1e15_needs_about_15_db():
    assert channel.ber_to_ebn0(1e-15, 1.0) == pytest.approx(15.0, abs=0.05)
    assert channel.q_factor(1e-15) == pytest.approx(7.94, abs=0.01)


@settings(max_examples=200, deadline=None)
@given(st.floats(0.0, 16.0), st.floats(0.5, 1.0))
def test_round_trip(ebn0, rate):
    e = channel.ebn0_to_ber(ebn0, rate)
    assert channel.ber_to_ebn0(e, rate) == pytest.approx(ebn0, abs=1e-9)


def test_strictly_decreasing():
    x = np.linspace(0, 16, 200)
    assert np.all(np.diff(channel.ebn0_to_ber(x, 0.9)) < 0)
    assert channel.ebn0_to_ber(60.0) < 1e-300


def test_ncg_identities():
    assert channel.ncg(1e-6, 1e-6, 1.0) == pytest.approx(0.0, abs=1e-12)
    assert channel.ncg(1e-15, 1e-3, 0.9) == pytest.approx(
        20 * math.log10(channel.q_factor(1e-15) / channel.q_factor(1e-3)) + 10 * math.log10(0.9))
    # NCG equals the Eb/N0 gap between uncoded and coded operation.
    rate, e = 0.937, 4.5e-3
    gap = channel.ber_to_ebn0(1e-15, 1.0) - channel.ber_to_ebn0(e, rate)
    assert channel.ncg(1e-15, e, rate) == pytest.approx(gap, abs=1e-9)


def test_sp_bch_projected_ncg():
    rate = 917760 / 979104
    e = channel.ebn0_to_ber(5.6, rate)
    assert channel.ncg(1e-15, e, rate) == pytest.approx(9.4, abs=0.05)


def test_domain_errors():
    for bad in (0.0, 0.5, 0.7, -1e-3):
        with pytest.raises(DomainError):
            channel.ncg(bad, 1e-3, 0.9)
    with pytest.raises(DomainError):
        channel.ebn0_to_ber(5.0, 0.0)
    with pytest.raises(DomainError):
        channel.ebn0_to_ber(5.0, 1.2)
    with pytest.raises(DomainError):
        channel.flip_bits(np.zeros(4, np.uint8), 0.5, RngStream(0))


def test_flip_statistics():
    bits = np.zeros(1_000_000, dtype=np.uint8)
    out, n = channel.flip_bits(bits, 1e-2, RngStream(7).generator(0))
    assert n == int(out.sum())
    assert abs(n - 10_000) < 3 * 99.5


@pytest.mark.parametrize("seed", range(5))
def test_flip_rate_within_four_sigma(seed):
    bits = np.zeros(200_000, dtype=np.uint8)
    e = 3e-3
    _, n = channel.flip_bits(bits, e, RngStream(seed).generator(3))
    assert abs(n - e * bits.size) < 4 * math.sqrt(bits.size * e * (1 - e))


def test_zero_rate_is_identity():
    bits = np.random.default_rng(0).integers(0, 2, 100, dtype=np.uint8)
    out, n = channel.flip_bits(bits, 0.0, RngStream(1))
    assert n == 0 and (out == bits).all() and out is not bits


def test_streams_are_deterministic_and_distinct():
    bits = np.zeros(5000, dtype=np.uint8)
    a, _ = channel.flip_bits(bits, 0.1, RngStream(5, 2).generator(9))
    b, _ = channel.flip_bits(bits, 0.1, RngStream(5, 2).generator(9))
    c, _ = channel.flip_bits(bits, 0.1, RngStream(5, 3).generator(9))
    d, _ = channel.flip_bits(bits, 0.1, RngStream(5, 2).generator(10))
    assert (a == b).all()
    assert (a != c).any() and (a != d).any()


def test_flips_are_uniform_over_positions():
    rs = RngStream(11)
    bits = np.zeros(40, dtype=np.uint8)
    hits = np.zeros(40)
    counts = []
    for i in range(20_000):
        out, n = channel.flip_bits(bits, 0.1, rs.generator(i))
        hits += out
        counts.append(n)
    sigma = math.sqrt(20_000 * 0.1 * 0.9)
    assert np.all(np.abs(hits - 2000) < 4.5 * sigma)
    assert np.var(counts) == pytest.approx(40 * 0.1 * 0.9, rel=0.05)
