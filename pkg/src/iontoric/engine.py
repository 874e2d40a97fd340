"""Pauli-frame Monte Carlo engine with leakage.

State per physical site: x-flip bit, z-flip bit, leaked flag. Gates follow
the stochastic rules: clean CNOTs propagate frames (X on control spreads to
target, Z on target spreads to control); a CNOT between a leaked and an
unleaked qubit gives the unleaked partner one uniform random Pauli
(I/X/Y/Z) and propagates nothing; two leaked qubits do nothing. After every
CNOT each participant independently draws one fault from the gate channel
(Pauli / leak, or seepage if already leaked; seepage re-enters with a
uniformly random frame). Measurement of a leaked site yields the +1 outcome
(bit 0) and resets the site; initialization also resets.

Trials are vectorized in fixed blocks of 4096 with one RNG stream per block
(spawn_key = block index), so aggregate results are byte-identical for any
worker count. The scalar run_trial path uses one stream per trial index.
"""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .channels import FaultKind, GateErrorChannel, assemble_channels
from .config import ExperimentConfig
from .decoder import _match_parities
from .toric import build_layout, data_site_of_slot, schedule_for, X_BASIS

BLOCK = 4096


@dataclass(frozen=True)
class SyndromeHistory:
    d: int
    rounds: int
    outcomes: np.ndarray  # (rounds+1, 2*d*d), last row is the perfect readout


@dataclass(frozen=True)
class TrialResult:
    logical_x_failure: tuple
    logical_z_failure: tuple
    leak_events: int
    seep_events: int

    @property
    def failed(self) -> bool:
        return any(self.logical_x_failure) or any(self.logical_z_failure)


@dataclass(frozen=True)
class ExperimentResult:
    trials: int
    rounds: int
    failures_any: int
    failures_x: tuple
    failures_z: tuple
    leak_events: int
    seep_events: int

    @property
    def logical_fail_rate(self) -> float:
        return self.failures_any / self.trials

    @property
    def per_cycle_rate(self) -> float:
        p = self.logical_fail_rate
        if p >= 1.0:
            return 1.0
        return 1.0 - (1.0 - p) ** (1.0 / self.rounds)

    @property
    def stderr(self) -> float:
        p = self.logical_fail_rate
        return math.sqrt(max(p * (1.0 - p), 0.0) / self.trials)

    @property
    def leak_events_mean(self) -> float:
        return self.leak_events / self.trials


@dataclass(frozen=True)
class InjectedFault:
    round: int
    step: int  # CNOT timestep index within the cycle (0-based)
    gate: int  # gate index within the timestep
    qubit: str  # "control" | "target"
    kind: FaultKind


class _Compiled:
    """Schedules flattened to index arrays for vectorized execution."""

    def __init__(self, d: int, lrc: bool):
        self.d = d
        self.lrc = lrc
        self.layout = build_layout(d)
        layout = self.layout
        self.n_sites = layout.n_sites
        self.n_checks = layout.n_checks
        self.cycles = []
        for parity in (0, 1) if lrc else (0,):
            sched = schedule_for(layout, lrc, parity)
            init_sites = None
            cnot_steps = []
            measure = None
            for kind, payload in sched.steps:
                if kind == "init":
                    init_sites = np.array(payload, dtype=np.int64)
                elif kind == "cnot":
                    ctrl = np.array([p[0] for p in payload], dtype=np.int64)
                    tgt = np.array([p[1] for p in payload], dtype=np.int64)
                    cnot_steps.append((ctrl, tgt))
                else:
                    entries = sorted(payload)  # by check id
                    measure = (
                        np.array([e[1] for e in entries], dtype=np.int64),
                        np.array([e[2] == X_BASIS for e in entries]),
                    )
            self.cycles.append((init_sites, cnot_steps, measure))
        self.placement = [data_site_of_slot(layout, p) for p in (0, 1)]
        self.x_support = layout.x_support
        self.z_support = layout.z_support
        self.logical_z_idx = [np.array(loop, dtype=np.int64)
                              for loop in layout.logical_z]
        self.logical_x_idx = [np.array(loop, dtype=np.int64)
                              for loop in layout.logical_x]

    def cycle(self, round_index: int):
        return self.cycles[round_index % len(self.cycles)]


@lru_cache(maxsize=32)
def _compiled(d: int, lrc: bool) -> _Compiled:
    return _Compiled(d, lrc)


def _as_u8(mask):
    return mask.view(np.uint8) if mask.dtype == np.bool_ else mask


def _apply_faults(x, z, leaked, idx, u, pb, shift, ch: GateErrorChannel,
                  leak_counts, seep_counts, leak_possible: bool):
    """Post-gate fault draw for the sites in idx (columns), u uniform."""
    px, py, pz, pl = ch.p_x, ch.p_y, ch.p_z, ch.p_leak
    if not leak_possible:
        fx = u < (px + py)
        fz = (u >= px) & (u < px + py + pz)
        x[:, idx] ^= _as_u8(fx)
        z[:, idx] ^= _as_u8(fz)
        return
    lq = leaked[:, idx]
    live = ~lq
    fx = (u < (px + py)) & live
    fz = (u >= px) & (u < px + py + pz) & live
    x[:, idx] ^= _as_u8(fx)
    z[:, idx] ^= _as_u8(fz)
    new_leak = (u >= px + py + pz) & (u < px + py + pz + pl) & live
    seep = lq & (u < ch.p_seep)
    if new_leak.any():
        leaked[:, idx] |= new_leak
        leak_counts += new_leak.sum(axis=1)
    if seep.any():
        leaked[:, idx] &= ~seep
        sb = _as_u8(seep)
        x[:, idx] ^= ((pb >> shift) & 1) & sb
        z[:, idx] ^= ((pb >> (shift + 1)) & 1) & sb
        seep_counts += seep.sum(axis=1)


def _run_block(d: int, rounds: int, lrc: bool, ch: GateErrorChannel,
               idle_pz: float, seed: int, block_index: int, count: int,
               inject=(), leak_paulis: str = "random",
               collect_raw: bool = False):
    """Simulate one block of trials; returns aggregate counts or raw data."""
    comp = _compiled(d, lrc)
    n_sites = comp.n_sites
    dd = d * d
    rng = np.random.default_rng(
        np.random.SeedSequence(entropy=seed, spawn_key=(block_index,)))
    B = count
    x = np.zeros((B, n_sites), dtype=np.uint8)
    z = np.zeros((B, n_sites), dtype=np.uint8)
    leaked = np.zeros((B, n_sites), dtype=bool)
    leak_counts = np.zeros(B, dtype=np.int64)
    seep_counts = np.zeros(B, dtype=np.int64)
    rows = np.zeros((B, rounds + 1, comp.n_checks), dtype=np.uint8)
    leak_rounds = (np.zeros((B, rounds, n_sites), dtype=bool)
                   if collect_raw else None)

    leak_possible = ch.p_leak > 0 or ch.p_seep > 0 or any(
        f.kind == FaultKind.LEAK for f in inject)
    inject_map = {}
    for f in inject:
        inject_map.setdefault((f.round, f.step), []).append(f)

    for t in range(rounds):
        init_sites, cnot_steps, measure = comp.cycle(t)
        x[:, init_sites] = 0
        z[:, init_sites] = 0
        leaked[:, init_sites] = False
        for step_idx, (ctrl, tgt) in enumerate(cnot_steps):
            g = len(ctrl)
            if leak_possible:
                lc = leaked[:, ctrl]
                lt = leaked[:, tgt]
                clean = _as_u8(~lc & ~lt)
                x[:, tgt] ^= x[:, ctrl] & clean
                z[:, ctrl] ^= z[:, tgt] & clean
                pb = rng.integers(0, 256, size=(B, g), dtype=np.uint8)
                if leak_paulis == "random":
                    m_t = _as_u8(lc & ~lt)
                    m_c = _as_u8(lt & ~lc)
                    x[:, tgt] ^= (pb & 1) & m_t
                    z[:, tgt] ^= ((pb >> 1) & 1) & m_t
                    x[:, ctrl] ^= ((pb >> 2) & 1) & m_c
                    z[:, ctrl] ^= ((pb >> 3) & 1) & m_c
            else:
                x[:, tgt] ^= x[:, ctrl]
                z[:, ctrl] ^= z[:, tgt]
                pb = None
            if not ch.is_trivial:
                u_c = rng.random((B, g))
                u_t = rng.random((B, g))
                _apply_faults(x, z, leaked, ctrl, u_c, pb, 4, ch,
                              leak_counts, seep_counts, leak_possible)
                _apply_faults(x, z, leaked, tgt, u_t, pb, 6, ch,
                              leak_counts, seep_counts, leak_possible)
            if idle_pz > 0.0:
                busy = np.concatenate([ctrl, tgt])
                idle_sites = np.setdiff1d(np.arange(n_sites), busy)
                u_i = rng.random((B, len(idle_sites)))
                z[:, idle_sites] ^= _as_u8(u_i < idle_pz)
            for f in inject_map.get((t, step_idx), ()):
                site = int(ctrl[f.gate] if f.qubit == "control"
                           else tgt[f.gate])
                if f.kind == FaultKind.LEAK:
                    leaked[:, site] = True
                    leak_counts += 1
                else:
                    live = _as_u8(~leaked[:, site])
                    if f.kind in (FaultKind.PAULI_X, FaultKind.PAULI_Y):
                        x[:, site] ^= live
                    if f.kind in (FaultKind.PAULI_Z, FaultKind.PAULI_Y):
                        z[:, site] ^= live
        m_sites, m_basis_x = measure
        xf = x[:, m_sites]
        zf = z[:, m_sites]
        out = np.where(m_basis_x[None, :], zf, xf)
        out[leaked[:, m_sites]] = 0
        rows[:, t, :] = out
        x[:, m_sites] = 0
        z[:, m_sites] = 0
        leaked[:, m_sites] = False
        if collect_raw:
            leak_rounds[:, t, :] = leaked

    # perfect readout from the data frames at their final placement
    placement = comp.placement[rounds % 2 if lrc else 0]
    true_x = x[:, placement].copy()
    true_z = z[:, placement].copy()
    lk = leaked[:, placement]
    true_x[lk] = 0
    true_z[lk] = 0
    rows[:, rounds, :dd] = (
        true_z[:, comp.x_support].sum(axis=2) % 2).astype(np.uint8)
    rows[:, rounds, dd:] = (
        true_x[:, comp.z_support].sum(axis=2) % 2).astype(np.uint8)

    if collect_raw:
        return rows, true_x, true_z, leak_counts, seep_counts, leak_rounds

    return _decode_block(rows, true_x, true_z, comp, leak_counts, seep_counts)


def _decode_block(rows, true_x, true_z, comp: _Compiled,
                  leak_counts, seep_counts):
    d = comp.d
    dd = d * d
    B = rows.shape[0]
    diffs = rows.copy()
    diffs[:, 1:, :] ^= rows[:, :-1, :]

    tpar_x = np.stack([true_x[:, idx].sum(axis=1) % 2
                       for idx in comp.logical_z_idx], axis=1)
    tpar_z = np.stack([true_z[:, idx].sum(axis=1) % 2
                       for idx in comp.logical_x_idx], axis=1)

    fail_x = np.zeros((B, 2), dtype=np.uint8)
    fail_z = np.zeros((B, 2), dtype=np.uint8)

    for face_type, lo, hi, tpar, fail in (
            (False, 0, dd, tpar_z, fail_z),
            (True, dd, 2 * dd, tpar_x, fail_x)):
        b_idx, t_idx, k_idx = np.nonzero(diffs[:, :, lo:hi])
        if len(b_idx):
            bounds = np.searchsorted(b_idx, np.arange(B + 1))
            counts = bounds[1:] - bounds[:-1]
            if (counts % 2).any():
                raise AssertionError(
                    "odd defect count violates torus parity")
            rs = (k_idx // d).astype(np.int64)
            cs = (k_idx % d).astype(np.int64)
            ts = t_idx.astype(np.int64)
            for b in np.nonzero(counts)[0]:
                lo_i, hi_i = bounds[b], bounds[b + 1]
                p1, p2 = _match_parities(ts[lo_i:hi_i], rs[lo_i:hi_i],
                                         cs[lo_i:hi_i], d, face_type)
                if p1 < 0:
                    raise RuntimeError("matching kernel failure")
                fail[b, 0] = tpar[b, 0] ^ p1
                fail[b, 1] = tpar[b, 1] ^ p2
            silent = counts == 0
        else:
            silent = np.ones(B, dtype=bool)
        fail[silent, 0] = tpar[silent, 0]
        fail[silent, 1] = tpar[silent, 1]

    failed_any = (fail_x.any(axis=1) | fail_z.any(axis=1))
    return (int(failed_any.sum()),
            tuple(int(v) for v in fail_x.sum(axis=0)),
            tuple(int(v) for v in fail_z.sum(axis=0)),
            int(leak_counts.sum()), int(seep_counts.sum()), B)


def _block_task(args):
    (d, rounds, lrc, ch, idle_pz, seed, block_index, count) = args
    return _run_block(d, rounds, lrc, ch, idle_pz, seed, block_index, count)


def run_custom(d: int, rounds: int, trials: int, seed: int,
               channel: GateErrorChannel, lrc: bool = False,
               idle_pz: float = 0.0, workers: int = 1) -> ExperimentResult:
    """Run trials with an explicit two-qubit gate channel."""
    tasks = []
    block = 0
    remaining = trials
    while remaining > 0:
        count = min(BLOCK, remaining)
        tasks.append((d, rounds, lrc, channel, idle_pz, seed, block, count))
        block += 1
        remaining -= count
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_block_task, tasks, chunksize=1))
    else:
        results = [_block_task(t) for t in tasks]
    fa = fl = sl = 0
    fx = [0, 0]
    fz = [0, 0]
    n = 0
    for (a, bx, bz, lk, sp, cnt) in results:
        fa += a
        fx[0] += bx[0]
        fx[1] += bx[1]
        fz[0] += bz[0]
        fz[1] += bz[1]
        fl += lk
        sl += sp
        n += cnt
    return ExperimentResult(trials=n, rounds=rounds, failures_any=fa,
                            failures_x=tuple(fx), failures_z=tuple(fz),
                            leak_events=fl, seep_events=sl)


def _idle_pz(config: ExperimentConfig, channels) -> float:
    return channels["two_qubit"].p_z if config.idle_noise else 0.0


def run_experiment(config: ExperimentConfig, workers: int = 1) -> ExperimentResult:
    """Run a full experiment point from its config."""
    channels = assemble_channels(config)
    return run_custom(
        d=config.distance, rounds=config.cycles, trials=config.trials,
        seed=config.seed, channel=channels["two_qubit"],
        lrc=config.lrc_enabled, idle_pz=_idle_pz(config, channels),
        workers=workers)


def run_trial(config: ExperimentConfig, trial_index: int = 0,
              channel: GateErrorChannel | None = None,
              inject=(), leak_paulis: str = "random"):
    """Single trial with its own RNG stream; returns (TrialResult, history,
    true_x, true_z). Used by tests, fault injection and oracle cross-checks."""
    if channel is None:
        channel = assemble_channels(config)["two_qubit"]
    comp = _compiled(config.distance, config.lrc_enabled)
    idle = channel.p_z if config.idle_noise else 0.0
    rows, true_x, true_z, lk, sp, _ = _run_block(
        config.distance, config.cycles, config.lrc_enabled, channel,
        idle, config.seed, int(trial_index), 1, inject=inject,
        leak_paulis=leak_paulis, collect_raw=True)
    history = SyndromeHistory(d=config.distance, rounds=config.cycles,
                              outcomes=rows[0])
    failed_any, fx, fz, lk_tot, sp_tot, _ = _decode_block(
        rows, true_x, true_z, comp, lk, sp)
    result = TrialResult(
        logical_x_failure=fx, logical_z_failure=fz,
        leak_events=lk_tot, seep_events=sp_tot)
    return result, history, true_x[0], true_z[0]
