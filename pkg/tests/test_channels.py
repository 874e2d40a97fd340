import math

import numpy as np
import pytest

from iontoric.channels import (FaultKind, GateErrorChannel, IDENTITY_CHANNEL,
                               assemble_channels, build_channel,
                               depolarizing_channel, sample_fault)
from iontoric.config import ExperimentConfig
from iontoric.constants import hyperfine_profile, zeeman_profile


def test_hyperfine_channel_split():
    # total scattering budget 1.274e-4 splits half into leakage, quarter
    # each into X and Y
    ch = build_channel(hyperfine_profile(), 1.274e-4, 0.0, "two_qubit")
    assert ch.p_leak == pytest.approx(6.37e-5, rel=1e-3)
    assert ch.p_x == pytest.approx(3.185e-5, rel=1e-3)
    assert ch.p_y == ch.p_x
    assert ch.p_leak == pytest.approx(ch.p_x + ch.p_y, rel=1e-9)
    assert 0 < ch.p_z < 1e-10  # residual Rayleigh only
    assert ch.p_seep == ch.p_leak


def test_zeeman_channel_split():
    ch = build_channel(zeeman_profile(), 2.52e-4, 0.0, "two_qubit")
    assert ch.p_z == pytest.approx(1.26e-4, rel=1e-3)
    assert ch.p_x == pytest.approx(6.3e-5, rel=1e-3)
    assert ch.p_y == ch.p_x
    assert ch.p_leak == 0.0 and ch.p_seep == 0.0


def test_dephasing_adds_to_z():
    ch0 = build_channel(zeeman_profile(), 2.52e-4, 0.0, "two_qubit")
    ch = build_channel(zeeman_profile(), 2.52e-4, 1e-3, "two_qubit")
    assert ch.p_z == pytest.approx(ch0.p_z + 1e-3, rel=1e-12)
    assert ch.p_x == ch0.p_x


def test_identity_at_zero():
    for iso in (zeeman_profile(), hyperfine_profile()):
        ch = build_channel(iso, 0.0, 0.0, "two_qubit")
        assert ch.p_total == 0.0 and ch.p_seep == 0.0


def test_single_qubit_scaling_ratio():
    ch2 = build_channel(hyperfine_profile(), 1e-3, 0.0, "two_qubit")
    ch1 = build_channel(hyperfine_profile(), 1e-3, 0.0, "one_qubit")
    assert ch1.p_leak == pytest.approx(0.038 * ch2.p_leak, rel=1e-9)
    assert ch1.p_x == pytest.approx(0.038 * ch2.p_x, rel=1e-9)


def test_overflow_names_parameters():
    with pytest.raises(ValueError, match="p_x"):
        GateErrorChannel(0.5, 0.4, 0.2, 0.0, 0.0, "two_qubit")
    with pytest.raises(ValueError, match="outside"):
        GateErrorChannel(-0.1, 0.0, 0.0, 0.0, 0.0, "two_qubit")


def test_build_channel_deterministic():
    a = build_channel(hyperfine_profile(), 3e-4, 1e-6, "two_qubit")
    b = build_channel(hyperfine_profile(), 3e-4, 1e-6, "two_qubit")
    assert a == b


def test_depolarizing_channel():
    ch = depolarizing_channel(3e-3)
    assert ch.p_x == ch.p_y == ch.p_z == pytest.approx(1e-3)
    assert ch.p_leak == 0.0


def test_assemble_channels_uses_gate_times():
    cfg = ExperimentConfig(distance=3, cycles=3, trials=1,
                           isotope=zeeman_profile(), sigma_b=1e-3,
                           p_scatter=0.0, seed=0)
    chans = assemble_channels(cfg)
    # dephasing at 200us is much larger than at 1us
    assert chans["two_qubit"].p_z > 100 * chans["one_qubit"].p_z
    assert chans["idle"] is IDENTITY_CHANNEL


def test_sample_fault_edges():
    assert sample_fault(IDENTITY_CHANNEL, False, 0.3) is FaultKind.NONE
    full_seep = GateErrorChannel(0, 0, 0, 0, 1.0, "two_qubit")
    assert sample_fault(full_seep, True, 0.999) is FaultKind.SEEP
    ch = GateErrorChannel(0.1, 0.2, 0.3, 0.2, 0.5, "two_qubit")
    assert sample_fault(ch, False, 0.05) is FaultKind.PAULI_X
    assert sample_fault(ch, False, 0.15) is FaultKind.PAULI_Y
    assert sample_fault(ch, False, 0.45) is FaultKind.PAULI_Z
    assert sample_fault(ch, False, 0.7) is FaultKind.LEAK
    assert sample_fault(ch, False, 0.9) is FaultKind.NONE
    assert sample_fault(ch, True, 0.4) is FaultKind.SEEP
    assert sample_fault(ch, True, 0.6) is FaultKind.NONE


def test_sample_fault_frequencies_match_channel():
    # frequency-count oracle: empirical rates within 4 sigma binomial
    ch = GateErrorChannel(0.05, 0.1, 0.15, 0.2, 0.0, "two_qubit")
    n = 10**6
    rng = np.random.default_rng(2024)
    us = rng.random(n)
    counts = {}
    for u in us:
        kind = sample_fault(ch, False, float(u))
        counts[kind] = counts.get(kind, 0) + 1
    expected = {
        FaultKind.PAULI_X: 0.05, FaultKind.PAULI_Y: 0.1,
        FaultKind.PAULI_Z: 0.15, FaultKind.LEAK: 0.2, FaultKind.NONE: 0.5,
    }
    for kind, p in expected.items():
        se = math.sqrt(p * (1 - p) / n)
        assert abs(counts.get(kind, 0) / n - p) < 4 * se
