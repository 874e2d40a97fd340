import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from iontoric.config import (ExperimentConfig, load_config, load_sweep,
                             write_config)
from iontoric.constants import (DEFAULT_CONSTANTS, PhysicalConstants,
                                hyperfine_profile, isotope_from_name,
                                zeeman_profile)


def test_default_constants_codata_scale():
    c = DEFAULT_CONSTANTS
    assert math.isclose(c.bohr_magneton_over_hbar, 8.79e6, rel_tol=5e-3)
    assert math.isclose(c.g_s, 2.00, rel_tol=5e-3)
    assert abs(c.g_i) < 1e-2


@pytest.mark.parametrize("field,value", [
    ("bohr_magneton_over_hbar", 9.0e6),
    ("g_s", 1.99),
    ("g_i", 0.02),
])
def test_constants_invariants(field, value):
    kwargs = {field: value}
    with pytest.raises(ValueError):
        PhysicalConstants(**kwargs)


def test_isotope_profiles():
    z = zeeman_profile()
    assert not z.leakage_capable and z.hyperfine_splitting == 0.0
    h = hyperfine_profile()
    assert h.leakage_capable and h.hyperfine_splitting > 0
    with pytest.raises(ValueError):
        isotope_from_name("rubidium")


def _write(tmp_path, text):
    path = tmp_path / "cfg.yaml"
    path.write_text(text)
    return path


def test_even_distance_rejected(tmp_path):
    path = _write(tmp_path, "distance: 4\n")
    with pytest.raises(ValueError, match="distance must be odd"):
        load_config(path)


def test_zeeman_lrc_rejected(tmp_path):
    path = _write(tmp_path, "distance: 5\nisotope: zeeman\nlrc: true\n")
    with pytest.raises(ValueError, match="LRC requires leakage-capable"):
        load_config(path)


def test_valid_config_roundtrip_values(tmp_path):
    path = _write(tmp_path, "\n".join([
        "distance: 5", "trials: 100000", "p_scatter: 1.0e-3",
        "isotope: hyperfine", "lrc: true", "sigma_b_gauss: 1.0e-5",
        "seed: 42",
    ]))
    cfg = load_config(path)
    assert cfg.distance == 5
    assert cfg.trials == 10**5
    assert cfg.p_scatter == 1e-3
    assert cfg.cycles == 5  # defaults to distance
    assert cfg.lrc_enabled and cfg.isotope.kind == "hyperfine"


def test_parse_failure_has_location(tmp_path):
    path = _write(tmp_path, "distance: [unclosed\n")
    with pytest.raises(ValueError, match="line"):
        load_config(path)


def test_unknown_key_rejected(tmp_path):
    path = _write(tmp_path, "distance: 5\nsigma_b: 1.0\n")
    with pytest.raises(ValueError, match="unknown config keys"):
        load_config(path)


@settings(max_examples=60, deadline=None)
@given(
    d=st.sampled_from([3, 5, 7, 9]),
    trials=st.integers(1, 10**7),
    sigma=st.floats(0, 1e-2, allow_nan=False),
    p=st.floats(0, 0.5, allow_nan=False),
    hyper=st.booleans(),
    lrc=st.booleans(),
    seed=st.integers(0, 2**62),
)
def test_write_then_load_is_identity(tmp_path_factory, d, trials, sigma, p,
                                     hyper, lrc, seed):
    iso = hyperfine_profile() if hyper else zeeman_profile()
    cfg = ExperimentConfig(
        distance=d, cycles=d, trials=trials, isotope=iso, sigma_b=sigma,
        p_scatter=p, lrc_enabled=lrc and hyper, seed=seed)
    path = tmp_path_factory.mktemp("cfg") / "point.yaml"
    write_config(cfg, path)
    assert load_config(path) == cfg


def test_sweep_expansion(tmp_path):
    path = _write(tmp_path, "\n".join([
        "distance: [3, 5]",
        "sigma_b_gauss: [1.0e-6, 1.0e-5]",
        "p_scatter: [1.0e-4]",
        "qubits:",
        "  - {isotope: zeeman, lrc: false}",
        "  - {isotope: hyperfine, lrc: true}",
        "trials: 10",
        "seed: 9",
    ]))
    spec = load_sweep(path)
    points = spec.points()
    assert len(points) == 8
    assert all(pt.trials == 10 and pt.seed == 9 for pt in points)
    assert points[0].isotope.kind == "zeeman"
    assert points[-1].isotope.kind == "hyperfine"
    assert all(pt.cycles == pt.distance for pt in points)


def test_sweep_invalid_point_rejected(tmp_path):
    path = _write(tmp_path, "\n".join([
        "distance: [3, 4]", "p_scatter: [0.1]", "trials: 1",
    ]))
    with pytest.raises(ValueError, match="odd"):
        load_sweep(path)
