"""Experiment configuration: YAML ingestion, validation, sweep expansion.

One config file drives one experiment point; sweeps are lists over sigma_b,
p_scatter, distance and qubit selections in the same file. All physical
quantities carry explicit units in their key names.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, replace

import yaml

from .constants import IsotopeProfile, isotope_from_name


@dataclass(frozen=True)
class ExperimentConfig:
    distance: int
    cycles: int
    trials: int
    isotope: IsotopeProfile
    sigma_b: float  # G
    p_scatter: float  # total scattering probability per two-qubit gate
    tau_1q: float = 1e-6  # s
    tau_2q: float = 200e-6  # s
    lrc_enabled: bool = False
    seed: int = 0
    idle_noise: bool = False
    seep_factor: float = 1.0  # p_seep = seep_factor * p_leak

    def __post_init__(self):
        if self.distance < 3:
            raise ValueError("distance must be >= 3")
        if self.distance % 2 == 0:
            raise ValueError("distance must be odd")
        if self.cycles < 1:
            raise ValueError("cycles must be positive")
        if self.trials < 1:
            raise ValueError("trials must be positive")
        if not (0.0 <= self.p_scatter < 1.0):
            raise ValueError("p_scatter must lie in [0, 1)")
        if self.sigma_b < 0.0:
            raise ValueError("sigma_b must be >= 0")
        if self.tau_1q < 0.0 or self.tau_2q < 0.0:
            raise ValueError("gate times must be >= 0")
        if self.lrc_enabled and not self.isotope.leakage_capable:
            raise ValueError("LRC requires leakage-capable isotope")
        if self.seep_factor < 0.0:
            raise ValueError("seep_factor must be >= 0")
        if not (-(2**63) <= self.seed < 2**63):
            raise ValueError("seed must fit in 64 bits")


@dataclass(frozen=True)
class SweepSpec:
    """Cross product of sweep axes; every point is a valid ExperimentConfig."""

    distances: tuple[int, ...]
    sigma_b_values: tuple[float, ...]
    p_scatter_values: tuple[float, ...]
    qubits: tuple[tuple[str, bool], ...]  # (isotope kind, lrc_enabled)
    trials: int
    cycles: int | None  # None -> cycles = distance
    base: ExperimentConfig  # template carrying taus, seed, etc.

    def points(self) -> list[ExperimentConfig]:
        pts = []
        for (kind, lrc), d, sigma, p in itertools.product(
            self.qubits, self.distances, self.sigma_b_values,
            self.p_scatter_values,
        ):
            iso = isotope_from_name(kind)
            pts.append(replace(
                self.base,
                distance=d,
                cycles=self.cycles if self.cycles is not None else d,
                isotope=iso,
                sigma_b=sigma,
                p_scatter=p,
                lrc_enabled=lrc,
                trials=self.trials,
            ))
        return pts


_POINT_KEYS = {
    "distance", "cycles", "trials", "seed", "isotope", "lrc",
    "sigma_b_gauss", "p_scatter", "tau_1q_seconds", "tau_2q_seconds",
    "b0_gauss", "hyperfine_splitting_rad_per_s", "idle_noise", "seep_factor",
}


def _load_yaml(path):
    try:
        with open(path) as fh:
            data = yaml.safe_load(fh)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        where = f" at line {mark.line + 1}" if mark is not None else ""
        raise ValueError(f"config parse failure in {path}{where}: {exc}") from exc
    if not isinstance(data, dict):
        raise ValueError(f"config file {path} must contain a mapping")
    return data


def _config_from_mapping(data: dict, path="<config>") -> ExperimentConfig:
    unknown = set(data) - _POINT_KEYS
    if unknown:
        raise ValueError(f"{path}: unknown config keys {sorted(unknown)}")
    try:
        iso = isotope_from_name(
            data.get("isotope", "zeeman"),
            ideal_field=data.get("b0_gauss"),
            splitting=data.get("hyperfine_splitting_rad_per_s"),
        )
        distance = int(data["distance"])
        return ExperimentConfig(
            distance=distance,
            cycles=int(data.get("cycles", distance)),
            trials=int(data.get("trials", 1)),
            isotope=iso,
            sigma_b=float(data.get("sigma_b_gauss", 0.0)),
            p_scatter=float(data.get("p_scatter", 0.0)),
            tau_1q=float(data.get("tau_1q_seconds", 1e-6)),
            tau_2q=float(data.get("tau_2q_seconds", 200e-6)),
            lrc_enabled=bool(data.get("lrc", False)),
            seed=int(data.get("seed", 0)),
            idle_noise=bool(data.get("idle_noise", False)),
            seep_factor=float(data.get("seep_factor", 1.0)),
        )
    except KeyError as exc:
        raise ValueError(f"{path}: missing required key {exc.args[0]!r}") from exc
    except (TypeError, ValueError) as exc:
        raise ValueError(f"{path}: {exc}") from exc


def load_config(path) -> ExperimentConfig:
    """Load and validate a single experiment point."""
    return _config_from_mapping(_load_yaml(path), path)


def config_to_mapping(cfg: ExperimentConfig) -> dict:
    return {
        "distance": cfg.distance,
        "cycles": cfg.cycles,
        "trials": cfg.trials,
        "seed": cfg.seed,
        "isotope": cfg.isotope.kind,
        "lrc": cfg.lrc_enabled,
        "sigma_b_gauss": cfg.sigma_b,
        "p_scatter": cfg.p_scatter,
        "tau_1q_seconds": cfg.tau_1q,
        "tau_2q_seconds": cfg.tau_2q,
        "b0_gauss": cfg.isotope.ideal_field,
        "hyperfine_splitting_rad_per_s": cfg.isotope.hyperfine_splitting,
        "idle_noise": cfg.idle_noise,
        "seep_factor": cfg.seep_factor,
    }


def write_config(cfg: ExperimentConfig, path) -> None:
    with open(path, "w") as fh:
        yaml.safe_dump(config_to_mapping(cfg), fh, sort_keys=True)


def load_sweep(path) -> SweepSpec:
    """Load a sweep file; scalar keys are promoted to single-element axes."""
    data = _load_yaml(path)

    def as_list(key, default):
        val = data.get(key, default)
        return val if isinstance(val, list) else [val]

    qubit_entries = data.get("qubits")
    if qubit_entries is None:
        qubit_entries = [{
            "isotope": data.get("isotope", "zeeman"),
            "lrc": data.get("lrc", False),
        }]
    qubits = tuple(
        (str(q["isotope"]), bool(q.get("lrc", False))) for q in qubit_entries
    )

    distances = tuple(int(d) for d in as_list("distance", 3))
    sigmas = tuple(float(s) for s in as_list("sigma_b_gauss", 0.0))
    ps = tuple(float(p) for p in as_list("p_scatter", 0.0))
    if not (distances and sigmas and ps and qubits):
        raise ValueError(f"{path}: sweep axes must be nonempty")

    scalar = {k: v for k, v in data.items()
              if k in _POINT_KEYS and not isinstance(v, list)
              and k not in ("isotope", "lrc", "distance")}
    scalar.setdefault("distance", distances[0])
    base = _config_from_mapping(
        {**scalar,
         "isotope": qubits[0][0],
         "lrc": qubits[0][1],
         "sigma_b_gauss": sigmas[0],
         "p_scatter": ps[0]},
        path,
    )
    cycles = int(data["cycles"]) if "cycles" in data else None
    spec = SweepSpec(
        distances=distances,
        sigma_b_values=sigmas,
        p_scatter_values=ps,
        qubits=qubits,
        trials=int(data.get("trials", 1)),
        cycles=cycles,
        base=base,
    )
    # Validate every point before any simulation starts.
    spec.points()
    return spec
