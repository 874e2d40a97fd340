"""Physical constants and isotope profiles shared by the noise modules.

Values are CODATA-scale defaults; everything an experiment can reasonably
override lives in the config file instead (see config.py).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

TWO_PI = 2.0 * math.pi

SPEED_OF_LIGHT = 2.99792458e8  # m/s
HBAR = 1.054571817e-34  # J s


@dataclass(frozen=True)
class PhysicalConstants:
    """Atomic constants entering the field-noise formulas.

    bohr_magneton_over_hbar is in rad s^-1 G^-1; the g-factors are
    dimensionless (the nuclear one expressed in Bohr magnetons, hence tiny).
    """

    bohr_magneton_over_hbar: float = 8.79410e6
    g_s: float = 2.00231930
    g_j: float = 2.00231930
    g_i: float = 5.377e-4

    def __post_init__(self):
        if not (8.79e6 <= self.bohr_magneton_over_hbar <= 8.80e6):
            raise ValueError(
                f"bohr_magneton_over_hbar={self.bohr_magneton_over_hbar!r} "
                "outside the accepted rad/s/G range"
            )
        if not (2.0 <= self.g_s <= 2.01):
            raise ValueError(f"g_s={self.g_s!r} outside [2.0, 2.01]")
        if abs(self.g_i) >= 1e-2:
            raise ValueError(f"|g_i|={abs(self.g_i)!r} must be < 1e-2")


DEFAULT_CONSTANTS = PhysicalConstants()

# Hyperfine splitting of the I=1/2 clock qubit (rad/s). Standard atomic datum,
# config-overridable.
DEFAULT_HYPERFINE_SPLITTING = TWO_PI * 12.6428e9


@dataclass(frozen=True)
class IsotopeProfile:
    """Which ground-manifold encoding the simulated ion uses.

    kind "zeeman" is the I=0 electron-spin qubit (no ground-state leakage,
    first-order field sensitive); "hyperfine" is the I=1/2 clock qubit
    (leakage-prone, second-order field sensitive).
    """

    kind: str
    hyperfine_splitting: float  # rad/s; 0.0 for the zeeman kind
    ideal_field: float  # B0 in G
    leakage_capable: bool

    def __post_init__(self):
        if self.kind not in ("zeeman", "hyperfine"):
            raise ValueError(f"unknown isotope kind {self.kind!r}")
        if self.kind == "zeeman" and self.leakage_capable:
            raise ValueError("zeeman isotope cannot be leakage_capable")
        if self.kind == "hyperfine":
            if not self.leakage_capable:
                raise ValueError("hyperfine isotope must be leakage_capable")
            if self.hyperfine_splitting <= 0:
                raise ValueError("hyperfine isotope requires splitting > 0")


def zeeman_profile(ideal_field: float = 5.0) -> IsotopeProfile:
    return IsotopeProfile(
        kind="zeeman",
        hyperfine_splitting=0.0,
        ideal_field=ideal_field,
        leakage_capable=False,
    )


def hyperfine_profile(
    ideal_field: float = 0.0,
    splitting: float = DEFAULT_HYPERFINE_SPLITTING,
) -> IsotopeProfile:
    return IsotopeProfile(
        kind="hyperfine",
        hyperfine_splitting=splitting,
        ideal_field=ideal_field,
        leakage_capable=True,
    )


def isotope_from_name(name: str, ideal_field: float | None = None,
                      splitting: float | None = None) -> IsotopeProfile:
    if name == "zeeman":
        return zeeman_profile(5.0 if ideal_field is None else ideal_field)
    if name == "hyperfine":
        return hyperfine_profile(
            0.0 if ideal_field is None else ideal_field,
            DEFAULT_HYPERFINE_SPLITTING if splitting is None else splitting,
        )
    raise ValueError(f"unknown isotope kind {name!r}")
