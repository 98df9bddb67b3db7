"""Unit tests for the key-rate bounds and mutual information."""

import math

import numpy as np
import pytest

from cvkey import (
    COHERENT,
    COLLECTIVE,
    DIRECT,
    GENERAL,
    GENERAL_W,
    REVERSE,
    SQUEEZED,
    BivariateCov,
    ChannelParams,
    ProtocolParams,
    holevo,
    key_rate,
    key_rate_collective,
    key_rate_general,
    key_rate_general_w,
    mutual_information,
)


def test_mutual_information_closed_form():
    assert mutual_information(BivariateCov(2.0, 2.0, 1.0)) == pytest.approx(
        0.5 * math.log(4.0 / 3.0), abs=1e-15
    )
    assert mutual_information(BivariateCov(1.0, 1.0, 0.0)) == 0.0


def test_mutual_information_rejects_singular_cov():
    with pytest.raises(ValueError):
        mutual_information(BivariateCov(1.0, 1.0, 1.0))
    with pytest.raises(ValueError):
        BivariateCov(-1.0, 1.0, 0.0)


def test_report_base_conversion():
    p = ProtocolParams(modulation=1.0, kind=COHERENT)
    ch = ChannelParams(transmission=0.8, excess_noise=0.05)
    report = key_rate_general(p, ch)
    bits = report.in_bits()
    assert bits.base == "bits"
    assert bits.key_rate == pytest.approx(report.key_rate / math.log(2.0), rel=1e-14)
    assert bits.i_ab == pytest.approx(report.i_ab / math.log(2.0), rel=1e-14)


def test_general_rate_at_perfect_channel():
    p = ProtocolParams(modulation=1.0, kind=COHERENT)
    ch = ChannelParams(transmission=1.0, excess_noise=0.0)
    report = key_rate_general(p, ch)
    assert report.eve_term == 0.0
    assert report.key_rate == report.i_ab
    assert report.i_ab > 0.0


def test_disclosure_never_hurts():
    # conditioning Eve on the disclosed quadrature cannot decrease the rate
    rng = np.random.default_rng(13)
    for _ in range(15):
        p = ProtocolParams(modulation=float(rng.uniform(0.2, 3.0)), kind=COHERENT)
        ch = ChannelParams(
            transmission=float(rng.uniform(0.1, 0.99)),
            excess_noise=float(rng.uniform(0.0, 0.4)),
        )
        plain = key_rate_general(p, ch).key_rate
        disclosed = key_rate_general_w(p, ch).key_rate
        assert disclosed >= plain - 1e-10


def test_collective_bound_is_weaker_than_general():
    # collective attacks give Eve less, so the rate bound is at least as large
    rng = np.random.default_rng(17)
    for _ in range(15):
        kind = COHERENT if rng.integers(2) else SQUEEZED
        p = ProtocolParams(modulation=float(rng.uniform(0.2, 3.0)), kind=kind)
        ch = ChannelParams(
            transmission=float(rng.uniform(0.1, 0.99)),
            excess_noise=float(rng.uniform(0.0, 0.4)),
        )
        general = key_rate_general(p, ch).key_rate
        for direction in (DIRECT, REVERSE):
            collective = key_rate_collective(p, ch, direction).key_rate
            assert collective >= general - 1e-10


def test_rate_degrades_with_noise():
    p = ProtocolParams(modulation=1.0, kind=COHERENT)
    rates = [
        key_rate_collective(
            p, ChannelParams(transmission=0.5, excess_noise=eps), REVERSE
        ).key_rate
        for eps in np.linspace(0.0, 0.5, 6)
    ]
    assert all(b <= a + 1e-12 for a, b in zip(rates, rates[1:]))


def test_holevo_nonnegative():
    rng = np.random.default_rng(19)
    for _ in range(10):
        p = ProtocolParams(modulation=float(rng.uniform(0.1, 2.5)), kind=COHERENT)
        ch = ChannelParams(
            transmission=float(rng.uniform(0.1, 0.99)),
            excess_noise=float(rng.uniform(0.0, 0.5)),
        )
        for direction in (DIRECT, REVERSE):
            assert holevo(p, ch, direction) >= 0.0


def test_reverse_reconciliation_has_no_loss_limit():
    p = ProtocolParams(modulation=1.0, kind=COHERENT)
    for t in (0.02, 0.1, 0.3):
        report = key_rate_collective(p, ChannelParams(transmission=t, excess_noise=0.0), REVERSE)
        assert report.key_rate > 0.0


def test_direct_reconciliation_dies_below_half():
    p = ProtocolParams(modulation=15.0, kind=COHERENT)
    below = key_rate_collective(p, ChannelParams(transmission=0.45, excess_noise=0.0), DIRECT)
    above = key_rate_collective(p, ChannelParams(transmission=0.55, excess_noise=0.0), DIRECT)
    assert below.key_rate < 0.0
    assert above.key_rate > 0.0


def test_general_w_requires_coherent_kind():
    p = ProtocolParams(modulation=1.0, kind=SQUEEZED)
    ch = ChannelParams(transmission=0.8, excess_noise=0.0)
    with pytest.raises(ValueError):
        key_rate_general_w(p, ch)


def test_dispatcher_validates_direction():
    p = ProtocolParams(modulation=1.0, kind=COHERENT)
    ch = ChannelParams(transmission=0.8, excess_noise=0.0)
    with pytest.raises(ValueError):
        key_rate(COLLECTIVE, p, ch)  # missing direction
    with pytest.raises(ValueError):
        key_rate(GENERAL, p, ch, DIRECT)  # direction on a general bound
    with pytest.raises(ValueError):
        key_rate("individual", p, ch)
    report = key_rate(GENERAL_W, p, ch)
    assert report.bound == GENERAL_W
    assert report.direction is None
