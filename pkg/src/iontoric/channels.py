"""Per-gate stochastic error channels and fault sampling.

A scattering event of total probability p splits across Pauli and leakage
kinds with the isotope's fixed fractions (from the scattering module):
hyperfine puts half the budget into leakage and a quarter each into X/Y;
the spin qubit puts half into Z and a quarter each into X/Y. Field-noise
dephasing adds to p_z on top.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

from .config import ExperimentConfig
from .constants import IsotopeProfile
from .field_noise import FieldNoiseParams, dephasing_probability
from .scattering import (SINGLE_QUBIT_SCATTER_RATIO, ChannelFractions,
                         channel_fractions)

GATE_CLASSES = ("one_qubit", "two_qubit", "idle")


class FaultKind(enum.Enum):
    NONE = "none"
    PAULI_X = "pauli_x"
    PAULI_Y = "pauli_y"
    PAULI_Z = "pauli_z"
    LEAK = "leak"
    SEEP = "seep"


@dataclass(frozen=True)
class GateErrorChannel:
    p_x: float
    p_y: float
    p_z: float
    p_leak: float
    p_seep: float
    gate_class: str

    def __post_init__(self):
        for name in ("p_x", "p_y", "p_z", "p_leak", "p_seep"):
            v = getattr(self, name)
            if not (0.0 <= v <= 1.0):
                raise ValueError(f"{name}={v!r} outside [0, 1]")
        total = self.p_x + self.p_y + self.p_z + self.p_leak
        if total > 1.0 + 1e-12:
            raise ValueError(
                "probability overflow: p_x+p_y+p_z+p_leak = "
                f"{total!r} > 1 (p_x={self.p_x!r}, p_y={self.p_y!r}, "
                f"p_z={self.p_z!r}, p_leak={self.p_leak!r})")
        if self.gate_class not in GATE_CLASSES:
            raise ValueError(f"unknown gate class {self.gate_class!r}")

    @property
    def p_total(self) -> float:
        return self.p_x + self.p_y + self.p_z + self.p_leak

    @property
    def is_trivial(self) -> bool:
        return self.p_total == 0.0 and self.p_seep == 0.0


IDENTITY_CHANNEL = GateErrorChannel(0.0, 0.0, 0.0, 0.0, 0.0, "idle")


def build_channel(isotope: IsotopeProfile, p_scatter: float,
                  p_dephase: float, gate_class: str,
                  fractions: ChannelFractions | None = None,
                  seep_factor: float = 1.0) -> GateErrorChannel:
    """Assemble a gate channel from a scattering budget and a dephasing
    probability.

    p_scatter is the *two-qubit* total scattering-event probability; the
    one-qubit class is scaled by the fixed budget ratio. p_dephase must
    already correspond to the gate class's duration.
    """
    if not (0.0 <= p_scatter <= 1.0 and 0.0 <= p_dephase <= 1.0):
        raise ValueError(
            f"probabilities outside [0,1]: p_scatter={p_scatter!r}, "
            f"p_dephase={p_dephase!r}")
    if gate_class == "idle":
        return IDENTITY_CHANNEL
    if fractions is None:
        fractions = channel_fractions(isotope.kind)
    scale = SINGLE_QUBIT_SCATTER_RATIO if gate_class == "one_qubit" else 1.0
    p = p_scatter * scale
    p_leak = p * fractions.f_leak
    if not isotope.leakage_capable and p_leak > 0.0:
        raise ValueError(
            f"isotope {isotope.kind!r} cannot leak but fractions give "
            f"f_leak={fractions.f_leak!r}")
    channel = GateErrorChannel(
        p_x=p * fractions.f_x,
        p_y=p * fractions.f_y,
        p_z=p * fractions.f_z + p_dephase,
        p_leak=p_leak,
        p_seep=seep_factor * p_leak,
        gate_class=gate_class,
    )
    return channel


def depolarizing_channel(p: float, gate_class: str = "two_qubit") -> GateErrorChannel:
    """Uniform X/Y/Z channel (no leakage) used for threshold baselines."""
    return GateErrorChannel(p / 3.0, p / 3.0, p / 3.0, 0.0, 0.0, gate_class)


def assemble_channels(config: ExperimentConfig) -> dict:
    """Channels for every gate class of an experiment point."""
    fractions = channel_fractions(config.isotope.kind)
    out = {}
    for gate_class, tau in (("one_qubit", config.tau_1q),
                            ("two_qubit", config.tau_2q)):
        params = FieldNoiseParams(
            sigma_b=config.sigma_b,
            b0=config.isotope.ideal_field,
            tau=tau,
            kind=config.isotope.kind,
            hyperfine_splitting=config.isotope.hyperfine_splitting,
        )
        out[gate_class] = build_channel(
            config.isotope, config.p_scatter, dephasing_probability(params),
            gate_class, fractions=fractions, seep_factor=config.seep_factor)
    out["idle"] = IDENTITY_CHANNEL
    return out


def sample_fault(channel: GateErrorChannel, leaked: bool, u: float) -> FaultKind:
    """Draw one fault outcome from a uniform variate u in [0, 1)."""
    if not (0.0 <= u < 1.0):
        raise ValueError("u must lie in [0, 1)")
    if leaked:
        return FaultKind.SEEP if u < channel.p_seep else FaultKind.NONE
    edge = channel.p_x
    if u < edge:
        return FaultKind.PAULI_X
    edge += channel.p_y
    if u < edge:
        return FaultKind.PAULI_Y
    edge += channel.p_z
    if u < edge:
        return FaultKind.PAULI_Z
    edge += channel.p_leak
    if u < edge:
        return FaultKind.LEAK
    return FaultKind.NONE


def channel_report(config: ExperimentConfig) -> str:
    """Audit table of assembled per-gate probabilities for both isotopes."""
    from .constants import isotope_from_name
    from dataclasses import replace

    lines = ["gate_class isotope circuit p_x p_y p_z p_leak p_seep"]
    for kind in ("zeeman", "hyperfine"):
        iso = isotope_from_name(kind)
        try:
            cfg = replace(config, isotope=iso,
                          lrc_enabled=config.lrc_enabled and iso.leakage_capable)
        except ValueError:
            cfg = replace(config, isotope=iso, lrc_enabled=False)
        circuit = "lrc" if cfg.lrc_enabled else "standard"
        chans = assemble_channels(cfg)
        for gate_class in ("one_qubit", "two_qubit"):
            ch = chans[gate_class]
            lines.append(
                f"{gate_class} {kind} {circuit} {ch.p_x!r} {ch.p_y!r} "
                f"{ch.p_z!r} {ch.p_leak!r} {ch.p_seep!r}")
    return "\n".join(lines)
