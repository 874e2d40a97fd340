"""Distance-d toric lattice, check supports, extraction schedules, LRC pairing.

Geometry: a d x d torus of unit cells. Horizontal edge h(r,c) joins vertices
(r,c)-(r,c+1), vertical edge v(r,c) joins (r,c)-(r+1,c). Stars (X checks)
live on vertices, plaquettes (Z checks) on faces; both list their data in
N,W,E,S order, which is also the CNOT time order. With that shared order the
star step touches only one edge orientation while the plaquette step touches
the other, so every timestep is disjoint and simultaneously extracted checks
commute.

Site ids: data edges occupy [0, 2d^2) (h first, then v), star ancillas
[2d^2, 3d^2), plaquette ancillas [3d^2, 4d^2).

The Quick-LRC swap partner is each check's south (final-CNOT) neighbor:
v(r,c) for star (r,c), h(r+1,c) for plaquette (r,c). That pairing is a
perfect matching between ancillas and data and lets one CNOT of the
decomposed SWAP cancel against the final extraction CNOT, so the compiled
cycle costs exactly one extra CNOT per check: the final extraction CNOT is
replaced by its reverse, then one forward CNOT follows.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

X_BASIS = "x"
Z_BASIS = "z"


@dataclass(frozen=True)
class ToricLayout:
    d: int
    n_data: int
    n_checks: int  # total (stars + plaquettes)
    x_support: np.ndarray  # (d^2, 4) edge ids in N,W,E,S order
    z_support: np.ndarray  # (d^2, 4)
    logical_z: tuple  # two edge-id tuples
    logical_x: tuple

    @property
    def n_sites(self) -> int:
        return 2 * self.n_data

    def x_anc_site(self, k: int) -> int:
        return self.n_data + k

    def z_anc_site(self, k: int) -> int:
        return self.n_data + self.d * self.d + k

    def h_edge(self, r: int, c: int) -> int:
        d = self.d
        return (r % d) * d + (c % d)

    def v_edge(self, r: int, c: int) -> int:
        d = self.d
        return d * d + (r % d) * d + (c % d)


def build_layout(d: int) -> ToricLayout:
    if d < 3:
        raise ValueError("distance must be >= 3")
    if d % 2 == 0:
        raise ValueError("distance must be odd")
    dd = d * d

    def h(r, c):
        return (r % d) * d + (c % d)

    def v(r, c):
        return dd + (r % d) * d + (c % d)

    x_support = np.empty((dd, 4), dtype=np.int64)
    z_support = np.empty((dd, 4), dtype=np.int64)
    for r in range(d):
        for c in range(d):
            k = r * d + c
            x_support[k] = (v(r - 1, c), h(r, c - 1), h(r, c), v(r, c))
            z_support[k] = (h(r, c), v(r, c), v(r, c + 1), h(r + 1, c))

    logical_z = (tuple(h(0, c) for c in range(d)),
                 tuple(v(r, 0) for r in range(d)))
    logical_x = (tuple(h(r, 0) for r in range(d)),
                 tuple(v(0, c) for c in range(d)))
    return ToricLayout(
        d=d, n_data=2 * dd, n_checks=2 * dd,
        x_support=x_support, z_support=z_support,
        logical_z=logical_z, logical_x=logical_x,
    )


@dataclass(frozen=True)
class RolePermutation:
    """Involution swapping each ancilla site with its partner data site."""

    pi: np.ndarray  # site -> site

    def site_of(self, site: int, parity: int) -> int:
        return int(self.pi[site]) if parity % 2 else int(site)

    def map_sites(self, sites, parity: int):
        arr = np.asarray(sites, dtype=np.int64)
        return self.pi[arr] if parity % 2 else arr


def swap_pairing(layout: ToricLayout) -> RolePermutation:
    d = layout.d
    pi = np.arange(layout.n_sites, dtype=np.int64)
    for k in range(d * d):
        star_site = layout.x_anc_site(k)
        partner = int(layout.x_support[k, 3])  # south: v(r,c)
        pi[star_site], pi[partner] = partner, star_site
        plaq_site = layout.z_anc_site(k)
        partner = int(layout.z_support[k, 3])  # south: h(r+1,c)
        pi[plaq_site], pi[partner] = partner, plaq_site
    if not np.array_equal(pi[pi], np.arange(layout.n_sites)):
        raise AssertionError("swap pairing must be an involution")
    return RolePermutation(pi=pi)


@dataclass(frozen=True)
class CircuitSchedule:
    """Timestep list: ("init", sites), ("cnot", pairs), ("measure", entries)
    with measure entries (check_id, site, basis)."""

    steps: tuple
    lrc: bool
    parity: int

    def cnot_count(self) -> int:
        return sum(len(payload) for kind, payload in self.steps
                   if kind == "cnot")


def _check_iter(layout: ToricLayout):
    dd = layout.d * layout.d
    for k in range(dd):
        yield k, layout.x_anc_site(k), layout.x_support[k], X_BASIS
    for k in range(dd):
        yield dd + k, layout.z_anc_site(k), layout.z_support[k], Z_BASIS


def _cnot(anc_site, data_site, basis):
    # X checks drive ancilla -> data, Z checks data -> ancilla.
    if basis == X_BASIS:
        return (int(anc_site), int(data_site))
    return (int(data_site), int(anc_site))


def standard_schedule(layout: ToricLayout) -> CircuitSchedule:
    init_sites = tuple(anc for _, anc, _, _ in _check_iter(layout))
    steps = [("init", init_sites)]
    for step in range(4):
        pairs = tuple(
            _cnot(anc, support[step], basis)
            for _, anc, support, basis in _check_iter(layout))
        steps.append(("cnot", pairs))
    measure = tuple(
        (k, anc, basis) for k, anc, _, basis in _check_iter(layout))
    steps.append(("measure", measure))
    return CircuitSchedule(steps=tuple(steps), lrc=False, parity=0)


def lrc_schedule(layout: ToricLayout, round_parity: int) -> CircuitSchedule:
    """Compiled Quick-LRC cycle for the given round parity.

    Parity 1 is the parity-0 circuit with every site relabeled through the
    swap pairing (roles traded), so the combinatorial structure is fixed.
    """
    perm = swap_pairing(layout)
    parity = round_parity % 2
    init_sites = tuple(
        int(perm.site_of(anc, parity)) for _, anc, _, _ in _check_iter(layout))
    steps = [("init", init_sites)]
    for step in range(3):  # N, W, E as standard
        pairs = tuple(
            _cnot(perm.site_of(anc, parity),
                  perm.site_of(support[step], parity), basis)
            for _, anc, support, basis in _check_iter(layout))
        steps.append(("cnot", pairs))
    # south partner: reversed extraction CNOT, then the forward one
    reversed_pairs = []
    forward_pairs = []
    for _, anc, support, basis in _check_iter(layout):
        a = perm.site_of(anc, parity)
        e = perm.site_of(support[3], parity)
        fwd = _cnot(a, e, basis)
        reversed_pairs.append((fwd[1], fwd[0]))
        forward_pairs.append(fwd)
    steps.append(("cnot", tuple(reversed_pairs)))
    steps.append(("cnot", tuple(forward_pairs)))
    measure = tuple(
        (k, int(perm.site_of(support[3], parity)), basis)
        for k, _, support, basis in _check_iter(layout))
    steps.append(("measure", measure))
    return CircuitSchedule(steps=tuple(steps), lrc=True, parity=parity)


def schedule_for(layout: ToricLayout, lrc: bool, round_parity: int) -> CircuitSchedule:
    if lrc:
        return lrc_schedule(layout, round_parity)
    return standard_schedule(layout)


def data_site_of_slot(layout: ToricLayout, parity: int) -> np.ndarray:
    """Where each data slot (edge id) physically lives in the given parity."""
    perm = swap_pairing(layout)
    slots = np.arange(layout.n_data, dtype=np.int64)
    return perm.map_sites(slots, parity)


def dump_layout(layout: ToricLayout) -> str:
    """Stable text dump of lattice, schedules and pairing (golden-file aid)."""
    perm = swap_pairing(layout)
    lines = [f"distance {layout.d}",
             f"data_qubits {layout.n_data}",
             f"x_checks {layout.d * layout.d}",
             f"z_checks {layout.d * layout.d}"]
    for k in range(layout.d * layout.d):
        lines.append(f"x_check {k} support {' '.join(map(str, layout.x_support[k]))}")
    for k in range(layout.d * layout.d):
        lines.append(f"z_check {k} support {' '.join(map(str, layout.z_support[k]))}")
    for i, loop in enumerate(layout.logical_z):
        lines.append(f"logical_z {i} {' '.join(map(str, loop))}")
    for i, loop in enumerate(layout.logical_x):
        lines.append(f"logical_x {i} {' '.join(map(str, loop))}")
    for site in range(layout.n_data, layout.n_sites):
        lines.append(f"pair {site} {int(perm.pi[site])}")
    for name, sched in (("standard", standard_schedule(layout)),
                        ("lrc0", lrc_schedule(layout, 0)),
                        ("lrc1", lrc_schedule(layout, 1))):
        for idx, (kind, payload) in enumerate(sched.steps):
            if kind == "init":
                body = " ".join(map(str, payload))
            elif kind == "cnot":
                body = " ".join(f"{c}>{t}" for c, t in payload)
            else:
                body = " ".join(f"{k}:{s}:{b}" for k, s, b in payload)
            lines.append(f"schedule {name} step{idx} {kind} {body}")
    return "\n".join(lines)
