import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from iontoric.constants import DEFAULT_HYPERFINE_SPLITTING
from iontoric.field_noise import (FieldNoiseParams, dephasing_probability,
                                  hyperfine_quadratic_coefficient,
                                  hyperfine_shift, phase_spread, zeeman_shift)

# Reference error budget for the electron-spin qubit: (sigma_G, tau_s) -> p.
ZEEMAN_TABLE = {
    (1e-2, 200e-6): 0.50,
    (1e-3, 200e-6): 0.39,
    (1e-4, 200e-6): 7.69e-3,
    (1e-5, 200e-6): 7.75e-5,
    (1e-6, 200e-6): 7.75e-7,
    (1e-2, 1e-6): 1.93e-3,
    (1e-3, 1e-6): 1.93e-5,
    (1e-4, 1e-6): 1.93e-7,
    (1e-5, 1e-6): 1.93e-9,
    (1e-6, 1e-6): 1.93e-11,
}

# Clock-qubit budget at zero average field (accepted at factor 2; the
# shift-to-probability convention is not uniquely fixed).
HYPERFINE_TABLE = {
    (1e-2, 1e-6): 1.90e-14,
    (1e-3, 1e-6): 1.90e-18,
    (1e-4, 1e-6): 1.90e-22,
    (1e-5, 1e-6): 1.90e-26,
    (1e-6, 1e-6): 1.90e-30,
    (1e-2, 200e-6): 7.62e-10,
    (1e-3, 200e-6): 7.62e-14,
    (1e-4, 200e-6): 7.62e-18,
    (1e-5, 200e-6): 7.62e-22,
    (1e-6, 200e-6): 7.62e-26,
}


def zparams(sigma, tau):
    return FieldNoiseParams(sigma_b=sigma, b0=0.0, tau=tau, kind="zeeman")


def hparams(sigma, tau, b0=0.0):
    return FieldNoiseParams(sigma_b=sigma, b0=b0, tau=tau, kind="hyperfine",
                            hyperfine_splitting=DEFAULT_HYPERFINE_SPLITTING)


def test_zeeman_shift_values():
    assert zeeman_shift(0.0) == 0.0
    assert math.isclose(zeeman_shift(1.0), 1.76e7, rel_tol=5e-3)


@given(st.floats(-1.0, 1.0, allow_nan=False))
def test_zeeman_shift_odd(x):
    assert zeeman_shift(-x) == -zeeman_shift(x)


def test_hyperfine_shift_values():
    assert hyperfine_shift(0.0, 0.0, DEFAULT_HYPERFINE_SPLITTING) == 0.0
    coeff = hyperfine_quadratic_coefficient(DEFAULT_HYPERFINE_SPLITTING)
    assert 1.5e3 < coeff < 2.5e3  # rad/s/G^2 scale
    val = hyperfine_shift(1e-2, 0.0, DEFAULT_HYPERFINE_SPLITTING)
    assert 0.1 < val < 0.3  # ~1.9e-1 rad/s
    # pure quadratic at zero average field
    a = hyperfine_shift(2e-3, 0.0, DEFAULT_HYPERFINE_SPLITTING)
    b = hyperfine_shift(1e-3, 0.0, DEFAULT_HYPERFINE_SPLITTING)
    assert math.isclose(a, 4 * b, rel_tol=1e-12)


def test_hyperfine_shift_requires_splitting():
    with pytest.raises(ValueError):
        hyperfine_shift(1e-3, 0.0, 0.0)


@pytest.mark.parametrize("cell,expected", sorted(ZEEMAN_TABLE.items()))
def test_zeeman_table(cell, expected):
    sigma, tau = cell
    p = dephasing_probability(zparams(sigma, tau))
    assert math.isclose(p, expected, rel_tol=0.02)


@pytest.mark.parametrize("cell,expected", sorted(HYPERFINE_TABLE.items()))
def test_hyperfine_table_within_factor_two(cell, expected):
    sigma, tau = cell
    p = dephasing_probability(hparams(sigma, tau))
    assert expected / 2 <= p <= expected * 2


def test_zero_sigma_and_zero_tau():
    assert dephasing_probability(zparams(0.0, 1e-3)) == 0.0
    assert dephasing_probability(zparams(1e-3, 0.0)) == 0.0
    assert dephasing_probability(hparams(0.0, 1e-3)) == 0.0


def test_asymptote_half():
    params = zparams(1e-1, 200e-6)
    assert phase_spread(params) > 10.0
    assert abs(dephasing_probability(params) - 0.5) < 1e-3


def test_quartic_scaling_hyperfine():
    lo = dephasing_probability(hparams(1e-4, 200e-6))
    hi = dephasing_probability(hparams(2e-4, 200e-6))
    assert math.isclose(hi / lo, 16.0, rel_tol=0.01)


def test_quadratic_scaling_zeeman():
    lo = dephasing_probability(zparams(1e-7, 200e-6))
    hi = dephasing_probability(zparams(1e-6, 200e-6))
    assert math.isclose(hi / lo, 100.0, rel_tol=0.01)


def test_monotone_in_sigma_and_tau():
    sigmas = np.logspace(-7, -1, 25)
    ps = [dephasing_probability(zparams(s, 200e-6)) for s in sigmas]
    assert all(a <= b + 1e-18 for a, b in zip(ps, ps[1:]))
    taus = np.logspace(-7, -2, 25)
    ph = [dephasing_probability(hparams(1e-3, t)) for t in taus]
    assert all(a <= b + 1e-30 for a, b in zip(ph, ph[1:]))
    assert all(0.0 <= p <= 0.5 for p in ps + ph)


def test_equivalence_claim_field_scaled():
    # B0 chosen so the clock qubit's residual splitting is ~1 MHz: its
    # dephasing at sigma should match the spin qubit at 1e-4*sigma within
    # an order of magnitude.
    b0 = 2 * math.pi * 1e6 / zeeman_shift(1.0)
    sigma = 1e-3
    p_h = dephasing_probability(hparams(sigma, 200e-6, b0=b0))
    p_z = dephasing_probability(zparams(1e-4 * sigma, 200e-6))
    assert p_z / 10 <= p_h <= p_z * 10


def _mc_oracle(params: FieldNoiseParams, n=10**6, seed=123):
    """Monte Carlo average of (1 - cos phi(dB))/2 under the module's phase
    convention; returns (estimate, standard_error)."""
    rng = np.random.default_rng(seed)
    db = rng.normal(0.0, params.sigma_b, size=n)
    if params.kind == "zeeman":
        phi = zeeman_shift(db) * params.tau / 2.0
    else:
        coeff = hyperfine_quadratic_coefficient(params.hyperfine_splitting)
        phi = coeff * (2.0 * params.b0 * db + db * db) * params.tau
    samples = 0.5 * (1.0 - np.cos(phi))
    return samples.mean(), samples.std(ddof=1) / math.sqrt(n)


@pytest.mark.parametrize("cell", sorted(ZEEMAN_TABLE))
def test_sampling_oracle_zeeman(cell):
    params = zparams(*cell)
    est, se = _mc_oracle(params)
    closed = dephasing_probability(params)
    assert abs(closed - est) <= max(3 * se, 1e-15)


@pytest.mark.parametrize("cell", [(1e-2, 1e-6), (1e-2, 200e-6),
                                  (1e-3, 200e-6)])
def test_sampling_oracle_hyperfine(cell):
    params = hparams(*cell)
    est, se = _mc_oracle(params)
    closed = dephasing_probability(params)
    assert abs(closed - est) <= 3 * se


def test_sampling_oracle_hyperfine_with_field():
    params = hparams(1e-3, 200e-6, b0=0.35)
    est, se = _mc_oracle(params)
    closed = dephasing_probability(params)
    assert abs(closed - est) <= 3 * se
