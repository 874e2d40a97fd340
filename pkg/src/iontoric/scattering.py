"""Spontaneous-scattering rates from stimulated Raman drives.

The rate for an ion in level i to scatter into level j is

    Gamma_ij = (mu*E0 / 2*hbar)^2 * gamma * sum_pol (sum_J A_J)^2,
    A^{i->j}_{J,pol} = c^{i->j}_{J,pol} / Delta_J,

with the geometry coefficients c held in an AmplitudeTable. The effective
(dephasing-relevant) Rayleigh rate is the squared *difference* of the two
qubit levels' elastic amplitude sums per emission polarization.

Shipped default tables for both isotope profiles come from the standard
J=1/2 ground-state polarizability decomposition under linearly polarized
light: scalar part weights (1/3, 2/3) over (P1/2, P3/2), vector part weights
(1/3, -1/3). Beam amplitude is eliminated by the pi-rotation calibration; a
pulse-intensity overhead factor (external data, not derivable from the gate
time alone) sets the absolute two-qubit scattering budget.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

from .constants import HBAR, SPEED_OF_LIGHT, TWO_PI

P_HALF = "P1/2"
P_THREE_HALF = "P3/2"
POLS = ("x", "y", "z")

# Yb+ line data (config-overridable through AtomicStructure).
GAMMA_P = TWO_PI * 19.6e6  # rad/s
WAVELENGTH_P_HALF = 369.52e-9
WAVELENGTH_P_THREE_HALF = 328.94e-9
DEFAULT_LASER_WAVELENGTH = 355e-9
DEFAULT_WAIST = 20e-6

# Ground-state hyperfine splitting used for the shipped 171 elastic
# correction (rad/s); matches constants.DEFAULT_HYPERFINE_SPLITTING.
_OMEGA_HF = TWO_PI * 12.6428e9

# Two-qubit-gate intensity overhead over a bare carrier pi rotation,
# fitted once to the measured two-qubit scattering budget (beam
# intensities for the slow entangling gate are not derivable from the
# gate time alone).
PULSE_OVERHEAD = 68.84

# Single-qubit over two-qubit scattering probability ratio (read from the
# same budget; beam intensities for the fast gate are not public data).
SINGLE_QUBIT_SCATTER_RATIO = 0.038


@dataclass(frozen=True)
class BeamParams:
    wavelength: float = DEFAULT_LASER_WAVELENGTH  # m
    waist: float = DEFAULT_WAIST  # m
    field_amplitude: float = 0.0  # E0; units cancel against dipole_max/hbar
    dipole_max: float = 2.0 * HBAR  # so g = E0 when left at default

    def __post_init__(self):
        if self.wavelength <= 0 or self.waist <= 0:
            raise ValueError("wavelength and waist must be > 0")
        if self.field_amplitude < 0:
            raise ValueError("field_amplitude must be >= 0")

    @property
    def coupling(self) -> float:
        """g = mu*E0/(2*hbar), rad/s."""
        return self.dipole_max * self.field_amplitude / (2.0 * HBAR)


@dataclass(frozen=True)
class AtomicStructure:
    gamma: float  # excited-state decay rate, rad/s
    detuning_p_half: float  # rad/s, positive = blue of P1/2
    detuning_p_three_half: float  # rad/s
    levels: tuple[tuple[str, str], ...] = ()  # (label, description)

    def __post_init__(self):
        if self.gamma <= 0:
            raise ValueError("gamma must be > 0")
        if self.detuning_p_half == 0 or self.detuning_p_three_half == 0:
            raise ValueError("drive must be nonresonant (detunings != 0)")

    def detuning(self, j: str) -> float:
        if j == P_HALF:
            return self.detuning_p_half
        if j == P_THREE_HALF:
            return self.detuning_p_three_half
        raise KeyError(f"unknown intermediate level {j!r}")


def detuning_from_wavelengths(laser: float, transition: float) -> float:
    return TWO_PI * SPEED_OF_LIGHT * (1.0 / laser - 1.0 / transition)


def default_atomic_structure(
        laser_wavelength: float = DEFAULT_LASER_WAVELENGTH,
        levels: tuple[tuple[str, str], ...] = ()) -> AtomicStructure:
    return AtomicStructure(
        gamma=GAMMA_P,
        detuning_p_half=detuning_from_wavelengths(
            laser_wavelength, WAVELENGTH_P_HALF),
        detuning_p_three_half=detuning_from_wavelengths(
            laser_wavelength, WAVELENGTH_P_THREE_HALF),
        levels=levels,
    )


# coefficient dictionaries: (i, j) -> {J: {pol: c}}
Couplings = dict


@dataclass(frozen=True)
class AmplitudeTable:
    levels: tuple[str, ...]
    couplings: Couplings

    def __post_init__(self):
        for i in self.levels:
            for j in self.levels:
                if (i, j) not in self.couplings:
                    raise ValueError(f"amplitude table missing pair ({i}, {j})")
        for (i, j), per_j in self.couplings.items():
            for jlev, per_pol in per_j.items():
                for pol, c in per_pol.items():
                    rev = self.couplings[(j, i)].get(jlev, {}).get(pol, 0.0)
                    if not math.isclose(abs(c), abs(rev), rel_tol=1e-12,
                                        abs_tol=1e-30):
                        raise ValueError(
                            f"non-Hermitian geometry for ({i},{j}) {jlev}/{pol}")

    def entry(self, i: str, j: str):
        try:
            return self.couplings[(i, j)]
        except KeyError:
            raise KeyError(f"no amplitude entry for pair ({i}, {j})") from None


@dataclass(frozen=True)
class PiCalibration:
    """Stimulated two-photon geometry plus intensity overhead."""

    rabi_coeffs: dict  # J -> coefficient; Omega = 2 g^2 |sum_J c/Delta_J|
    overhead: float = PULSE_OVERHEAD

    def rabi_geometry(self, atom: AtomicStructure) -> float:
        return abs(sum(c / atom.detuning(j)
                       for j, c in self.rabi_coeffs.items()))


@dataclass(frozen=True)
class ScatteringRates:
    """Effective error rates (1/s): each Raman event is an error; the
    Rayleigh entry is the Z-error rate, half the Eq.-style elastic
    difference rate (coherence decays at the full rate, the Z-error
    probability saturates at 1/2)."""

    rate_raman_bitflip: float
    rate_leakage: float
    rate_rayleigh_dephasing: float

    def __post_init__(self):
        if min(self.rate_raman_bitflip, self.rate_leakage,
               self.rate_rayleigh_dephasing) < 0:
            raise ValueError("rates must be >= 0")

    @property
    def total(self) -> float:
        return (self.rate_raman_bitflip + self.rate_leakage
                + self.rate_rayleigh_dephasing)


@dataclass(frozen=True)
class IsotopeScatteringProfile:
    name: str
    table: AmplitudeTable
    atom: AtomicStructure
    calibration: PiCalibration
    qubit_levels: tuple[str, str]
    leak_levels: tuple[str, ...]


def _amplitude_sum(entry, atom: AtomicStructure, pol: str) -> float:
    return sum(per_pol.get(pol, 0.0) / atom.detuning(j)
               for j, per_pol in entry.items())


def transition_rate(i: str, j: str, beams: BeamParams,
                    atom: AtomicStructure, table: AmplitudeTable) -> float:
    """Scattering rate i -> j (1/s)."""
    entry = table.entry(i, j)
    g2 = beams.coupling ** 2
    return g2 * atom.gamma * sum(
        _amplitude_sum(entry, atom, pol) ** 2 for pol in POLS)


def raman_rate(i: str, j: str, beams: BeamParams, atom: AtomicStructure,
               table: AmplitudeTable) -> float:
    """Total Raman rate between two distinct levels (both directions)."""
    if i == j:
        raise ValueError("Raman rate requires two distinct levels")
    return (transition_rate(i, j, beams, atom, table)
            + transition_rate(j, i, beams, atom, table))


def rayleigh_dephasing_rate(i: str, j: str, beams: BeamParams,
                            atom: AtomicStructure,
                            table: AmplitudeTable) -> float:
    """Elastic-difference rate: squared difference of the elastic amplitude
    sums of the two levels, per emission polarization."""
    if i == j:
        raise ValueError("Rayleigh dephasing requires two distinct levels")
    entry_i = table.entry(i, i)
    entry_j = table.entry(j, j)
    g2 = beams.coupling ** 2
    return g2 * atom.gamma * sum(
        (_amplitude_sum(entry_j, atom, pol)
         - _amplitude_sum(entry_i, atom, pol)) ** 2
        for pol in POLS)


def calibrated_beams(profile: IsotopeScatteringProfile, tau: float,
                     template: BeamParams = BeamParams()) -> BeamParams:
    """Fix E0 so the stimulated two-photon process is a pi rotation in tau
    (times the profile's intensity overhead)."""
    if tau <= 0:
        raise ValueError("gate time must be > 0")
    geometry = profile.calibration.rabi_geometry(profile.atom)
    g2 = profile.calibration.overhead * math.pi / (tau * 2.0 * geometry)
    e0 = 2.0 * HBAR * math.sqrt(g2) / template.dipole_max
    return BeamParams(wavelength=template.wavelength, waist=template.waist,
                      field_amplitude=e0, dipole_max=template.dipole_max)


def qubit_scattering_rates(profile: IsotopeScatteringProfile,
                           beams: BeamParams) -> ScatteringRates:
    """Error rates for the qubit pair, summed over both initial levels."""
    q0, q1 = profile.qubit_levels
    bitflip = raman_rate(q0, q1, beams, profile.atom, profile.table)
    leak = sum(
        transition_rate(q, lv, beams, profile.atom, profile.table)
        for q in (q0, q1) for lv in profile.leak_levels)
    rayl = rayleigh_dephasing_rate(q0, q1, beams, profile.atom,
                                   profile.table) / 2.0
    return ScatteringRates(rate_raman_bitflip=bitflip, rate_leakage=leak,
                           rate_rayleigh_dephasing=rayl)


@dataclass(frozen=True)
class GateScatterProbs:
    p_bitflip: float
    p_leak: float
    p_rayleigh: float

    @property
    def total(self) -> float:
        return self.p_bitflip + self.p_leak + self.p_rayleigh


def per_gate_scattering(rates: ScatteringRates, tau: float) -> GateScatterProbs:
    """Convert rates to per-gate probabilities, p = 1 - exp(-rate*tau)."""
    if tau <= 0:
        raise ValueError("gate time must be > 0")
    for r in (rates.rate_raman_bitflip, rates.rate_leakage,
              rates.rate_rayleigh_dephasing):
        if not math.isfinite(r):
            raise ValueError("rates must be finite")
    def prob(rate):
        return -math.expm1(-rate * tau) + 0.0  # avoid -0.0 at zero rate
    return GateScatterProbs(
        p_bitflip=prob(rates.rate_raman_bitflip),
        p_leak=prob(rates.rate_leakage),
        p_rayleigh=prob(rates.rate_rayleigh_dephasing),
    )


def two_qubit_gate_probs(profile: IsotopeScatteringProfile,
                         tau: float) -> GateScatterProbs:
    beams = calibrated_beams(profile, tau)
    return per_gate_scattering(qubit_scattering_rates(profile, beams), tau)


# --------------------------------------------------------------------------
# Shipped default geometry tables.
# --------------------------------------------------------------------------

_US = {P_HALF: 1.0 / 3.0, P_THREE_HALF: 2.0 / 3.0}
_UV = {P_HALF: 1.0 / 3.0, P_THREE_HALF: -1.0 / 3.0}


def _scale(coeffs, s):
    return {j: c * s for j, c in coeffs.items()}


def _merge(*parts):
    out = {}
    for per_j in parts:
        for j, per_pol in per_j.items():
            out.setdefault(j, {}).update(per_pol)
    return out


def _with_pol(coeffs, pol):
    return {j: {pol: c} for j, c in coeffs.items()}


def _zero_entry():
    return {P_HALF: {}, P_THREE_HALF: {}}


def hyperfine_amplitude_table(
        atom: AtomicStructure,
        omega_hf: float = _OMEGA_HF) -> AmplitudeTable:
    """Clock-qubit geometry under x-polarized light (quantization along z).

    Effective scattering operators per emission polarization: x -> scalar,
    y -> vector*sigma_z (bit flip between the m=0 clock states), z ->
    vector*sigma_y (leakage to the stretch states, 1/sqrt2 each). The F=0
    level sits omega_hf below F=1, so its *elastic* coefficients carry the
    shifted-detuning factor Delta/(Delta+omega_hf); inelastic entries are
    left uncorrected (the correction is 4e-4 relative) to keep them exactly
    symmetric.
    """
    levels = ("F0", "F1", "F1m+1", "F1m-1")
    shift = {j: atom.detuning(j) / (atom.detuning(j) + omega_hf)
             for j in (P_HALF, P_THREE_HALF)}
    us_f0 = {j: c * shift[j] for j, c in _US.items()}
    uv_leak = _scale(_UV, 1.0 / math.sqrt(2.0))
    couplings = {
        ("F0", "F0"): _with_pol(us_f0, "x"),
        ("F1", "F1"): _with_pol(_US, "x"),
        ("F0", "F1"): _with_pol(_UV, "y"),
        ("F1", "F0"): _with_pol(_UV, "y"),
        ("F1m+1", "F1m+1"): _merge(_with_pol(_US, "x"),
                                   _with_pol(_UV, "y")),
        ("F1m-1", "F1m-1"): _merge(_with_pol(_US, "x"),
                                   _with_pol(_scale(_UV, -1.0), "y")),
        ("F1m+1", "F1m-1"): _zero_entry(),
        ("F1m-1", "F1m+1"): _zero_entry(),
    }
    for q in ("F0", "F1"):
        for lv in ("F1m+1", "F1m-1"):
            couplings[(q, lv)] = _with_pol(uv_leak, "z")
            couplings[(lv, q)] = _with_pol(uv_leak, "z")
    return AmplitudeTable(levels=levels, couplings=couplings)


def zeeman_amplitude_table() -> AmplitudeTable:
    """Spin-qubit geometry: elastic vector amplitudes have opposite sign for
    the two m_s levels (constructive dephasing), spin flips via the z
    emission channel."""
    levels = ("down", "up")
    couplings = {
        ("up", "up"): _merge(_with_pol(_US, "x"),
                             _with_pol(_scale(_UV, -1.0), "y")),
        ("down", "down"): _merge(_with_pol(_US, "x"),
                                 _with_pol(_UV, "y")),
        ("up", "down"): _with_pol(_UV, "z"),
        ("down", "up"): _with_pol(_UV, "z"),
    }
    return AmplitudeTable(levels=levels, couplings=couplings)


def default_profile(kind: str) -> IsotopeScatteringProfile:
    if kind == "hyperfine":
        atom = default_atomic_structure(levels=(
            ("F0", "S1/2 F=0 mF=0 (lower qubit level)"),
            ("F1", "S1/2 F=1 mF=0 (upper qubit level)"),
            ("F1m+1", "S1/2 F=1 mF=+1 (leakage)"),
            ("F1m-1", "S1/2 F=1 mF=-1 (leakage)"),
        ))
        return IsotopeScatteringProfile(
            name="hyperfine",
            table=hyperfine_amplitude_table(atom),
            atom=atom,
            calibration=PiCalibration(rabi_coeffs=dict(_UV)),
            qubit_levels=("F0", "F1"),
            leak_levels=("F1m+1", "F1m-1"),
        )
    if kind == "zeeman":
        atom = default_atomic_structure(levels=(
            ("down", "S1/2 mS=-1/2 (lower qubit level)"),
            ("up", "S1/2 mS=+1/2 (upper qubit level)"),
        ))
        return IsotopeScatteringProfile(
            name="zeeman",
            table=zeeman_amplitude_table(),
            atom=atom,
            # The spin qubit's Raman pair couples at half the clock-state
            # geometry; external data fitted with the shared overhead.
            calibration=PiCalibration(rabi_coeffs=_scale(_UV, 0.5)),
            qubit_levels=("down", "up"),
            leak_levels=(),
        )
    raise ValueError(f"unknown isotope kind {kind!r}")


@dataclass(frozen=True)
class ChannelFractions:
    """How a scattering event splits across error kinds (fractions sum to 1)."""

    f_x: float
    f_y: float
    f_z: float
    f_leak: float


def channel_fractions(kind: str, tau: float = 200e-6) -> ChannelFractions:
    probs = two_qubit_gate_probs(default_profile(kind), tau)
    tot = probs.total
    if tot <= 0:
        return ChannelFractions(0.0, 0.0, 0.0, 0.0)
    return ChannelFractions(
        f_x=0.5 * probs.p_bitflip / tot,
        f_y=0.5 * probs.p_bitflip / tot,
        f_z=probs.p_rayleigh / tot,
        f_leak=probs.p_leak / tot,
    )


def profile_to_mapping(profile: IsotopeScatteringProfile) -> dict:
    """YAML-ready dump of a scattering profile (geometry is plain data)."""
    couplings = {}
    for (i, j), per_j in sorted(profile.table.couplings.items()):
        entry = {}
        for jlev, per_pol in per_j.items():
            if per_pol:
                entry[jlev] = dict(sorted(per_pol.items()))
        couplings[f"{i}->{j}"] = entry
    return {
        "name": profile.name,
        "gamma_rad_per_s": profile.atom.gamma,
        "detuning_p_half_rad_per_s": profile.atom.detuning_p_half,
        "detuning_p_three_half_rad_per_s": profile.atom.detuning_p_three_half,
        "levels": [list(pair) for pair in profile.atom.levels],
        "qubit_levels": list(profile.qubit_levels),
        "leak_levels": list(profile.leak_levels),
        "rabi_coeffs": dict(profile.calibration.rabi_coeffs),
        "pulse_overhead": profile.calibration.overhead,
        "couplings": couplings,
    }


def profile_from_mapping(data: dict) -> IsotopeScatteringProfile:
    couplings = {}
    table_levels = set()
    for pair_key, per_j in data["couplings"].items():
        i, j = pair_key.split("->")
        table_levels.update((i, j))
        entry = {P_HALF: {}, P_THREE_HALF: {}}
        for jlev, per_pol in (per_j or {}).items():
            entry[jlev] = {pol: float(c) for pol, c in per_pol.items()}
        couplings[(i, j)] = entry
    atom = AtomicStructure(
        gamma=float(data["gamma_rad_per_s"]),
        detuning_p_half=float(data["detuning_p_half_rad_per_s"]),
        detuning_p_three_half=float(data["detuning_p_three_half_rad_per_s"]),
        levels=tuple((str(a), str(b)) for a, b in data.get("levels", [])),
    )
    return IsotopeScatteringProfile(
        name=str(data["name"]),
        table=AmplitudeTable(levels=tuple(sorted(table_levels)),
                             couplings=couplings),
        atom=atom,
        calibration=PiCalibration(
            rabi_coeffs={str(k): float(v)
                         for k, v in data["rabi_coeffs"].items()},
            overhead=float(data.get("pulse_overhead", PULSE_OVERHEAD))),
        qubit_levels=tuple(data["qubit_levels"]),
        leak_levels=tuple(data.get("leak_levels", ())),
    )


def save_profile(profile: IsotopeScatteringProfile, path) -> None:
    import yaml

    with open(path, "w") as fh:
        yaml.safe_dump(profile_to_mapping(profile), fh, sort_keys=True)


def load_profile(path) -> IsotopeScatteringProfile:
    """User-supplied geometry table in the repo's config format."""
    import yaml

    with open(path) as fh:
        data = yaml.safe_load(fh)
    if not isinstance(data, dict):
        raise ValueError(f"profile file {path} must contain a mapping")
    try:
        return profile_from_mapping(data)
    except KeyError as exc:
        raise ValueError(
            f"profile file {path} missing key {exc.args[0]!r}") from exc


def profile_report(kind: str, tau_2q: float = 200e-6) -> str:
    """Human-readable dump of the shipped geometry and derived rates."""
    profile = default_profile(kind)
    beams = calibrated_beams(profile, tau_2q)
    rates = qubit_scattering_rates(profile, beams)
    probs = per_gate_scattering(rates, tau_2q)
    lines = [
        f"profile {profile.name}",
        f"  gamma_rad_per_s {profile.atom.gamma!r}",
        f"  detuning_P1/2_rad_per_s {profile.atom.detuning_p_half!r}",
        f"  detuning_P3/2_rad_per_s {profile.atom.detuning_p_three_half!r}",
        f"  qubit_levels {profile.qubit_levels}",
        f"  leak_levels {profile.leak_levels}",
        f"  calibration_overhead {profile.calibration.overhead!r}",
        f"  rate_raman_bitflip_per_s {rates.rate_raman_bitflip!r}",
        f"  rate_leakage_per_s {rates.rate_leakage!r}",
        f"  rate_rayleigh_dephasing_per_s {rates.rate_rayleigh_dephasing!r}",
        f"  p_bitflip_2q {probs.p_bitflip!r}",
        f"  p_leak_2q {probs.p_leak!r}",
        f"  p_rayleigh_2q {probs.p_rayleigh!r}",
        "  amplitude_table (i -> j: J pol coeff):",
    ]
    for (i, j), per_j in sorted(profile.table.couplings.items()):
        for jlev in (P_HALF, P_THREE_HALF):
            for pol, c in sorted(per_j.get(jlev, {}).items()):
                lines.append(f"    {i} -> {j}: {jlev} {pol} {c!r}")
    return "\n".join(lines)
