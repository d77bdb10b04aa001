"""Monte-Carlo trajectory noise and the hardware-diagnostic circuit suite.

Each shot follows one pure-state trajectory: after every gate the affected
qubits independently suffer a uniformly random Pauli with the gate's error
probability, the final state is sampled once, and each measured bit is
flipped with the readout probability. Trajectories are simulated in batches
as one (batch, 2, ..., 2) array.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Mapping, Union

import numpy as np

from .config import make_spec, build_circuit, MeasurementSetting
from .sv import (MCX, RY, Circuit, H, Histogram, bitstrings, postselect_ancillas,
                 probabilities, run_circuit, single_qubit_matrix)

BATCH = 8192


@dataclass(frozen=True)
class NoiseModel:
    """Error probabilities.

    p1:   depolarizing after each single-qubit gate, on its target.
    p_mc: depolarizing on every participating qubit after a controlled-X
          gate, applied once per control qubit (an m-control gate gets m
          rounds).
    p_ro: symmetric readout bit flip.
    """

    p1: float = 0.0
    p_mc: float = 0.0
    p_ro: float = 0.0

    def __post_init__(self):
        for name in ("p1", "p_mc", "p_ro"):
            v = getattr(self, name)
            if not (0.0 <= v <= 1.0) or math.isnan(v):
                raise ValueError(f"{name}={v} is not a probability")

    @property
    def is_ideal(self) -> bool:
        return self.p1 == self.p_mc == self.p_ro == 0.0


def _view(psi: np.ndarray, qubit: int) -> np.ndarray:
    # (batch, higher qubits, this qubit, lower qubits); a view, never a copy
    return psi.reshape(psi.shape[0], 2**qubit, 2, -1)


def _apply_pauli(psi: np.ndarray, rows: np.ndarray, paulis: np.ndarray, qubit: int) -> None:
    """In place: apply X (1), Y (2) or Z (3) to `qubit` of the selected trajectories."""
    v = _view(psi, qubit)
    zrows = rows[paulis >= 2]  # Y ~ XZ up to a global phase
    if zrows.size:
        v[zrows, :, 1, :] *= -1
    xrows = rows[paulis <= 2]
    if xrows.size:
        v[xrows] = v[xrows][:, :, ::-1, :]


def _depolarize(psi: np.ndarray, qubit: int, p: float, rng: np.random.Generator) -> None:
    if p <= 0:
        return
    hit = np.flatnonzero(rng.random(psi.shape[0]) < p)
    if hit.size:
        _apply_pauli(psi, hit, rng.integers(1, 4, size=hit.size), qubit)


def _run_batch(circuit: Circuit, noise: NoiseModel, size: int, rng: np.random.Generator) -> np.ndarray:
    # every supported gate and Pauli is real up to a global phase
    nq = circuit.num_qubits
    psi = np.zeros((size, 2**nq))
    psi[:, 0] = 1.0
    idx = np.arange(2**nq)
    for g in circuit.gates:
        if isinstance(g, MCX):
            cmask = sum(1 << (nq - 1 - c) for c in g.controls)
            tbit = 1 << (nq - 1 - g.target)
            perm = np.where(idx & cmask == cmask, idx ^ tbit, idx)
            psi = psi[:, perm]
            for _ in g.controls:
                for q in g.qubits:
                    _depolarize(psi, q, noise.p_mc, rng)
        else:
            m = single_qubit_matrix(g).real
            if g.target == nq - 1:
                psi = (psi.reshape(size, -1, 2) @ m.T).reshape(size, -1)
            else:
                psi = (m @ _view(psi, g.target)).reshape(size, -1)
            _depolarize(psi, g.target, noise.p1, rng)
    probs = psi * psi
    cum = np.cumsum(probs, axis=1)
    draw = rng.random(size)[:, None] * cum[:, -1:]
    outcome = np.minimum((cum < draw).sum(axis=1), 2**nq - 1)
    if noise.p_ro > 0:
        flips = rng.random((size, nq)) < noise.p_ro
        weights = 1 << np.arange(nq - 1, -1, -1)
        outcome ^= flips @ weights
    return outcome


def run_noisy(
    circuit: Circuit,
    noise: NoiseModel,
    shots: int,
    seed: int,
    postselect: bool = True,
) -> Histogram:
    """Sample `shots` noisy trajectories.

    With `postselect` (and ancillas present) only shots whose ancillas all
    read 0 are kept and keys cover the data qubits; otherwise keys cover
    every qubit. Batches draw from seeds spawned off `seed`, so results do
    not depend on anything but the arguments.
    """
    if shots < 1:
        raise ValueError("shots must be >= 1")
    nq = circuit.num_qubits
    sizes = [BATCH] * (shots // BATCH) + ([shots % BATCH] if shots % BATCH else [])
    children = np.random.SeedSequence(seed).spawn(len(sizes))
    outcomes = np.concatenate([
        _run_batch(circuit, noise, size, np.random.default_rng(child))
        for size, child in zip(sizes, children)
    ])
    if postselect and circuit.num_ancilla:
        keep = outcomes & ((1 << circuit.num_ancilla) - 1) == 0
        outcomes = outcomes[keep] >> circuit.num_ancilla
        width = circuit.num_data
    else:
        width = nq
    counts = np.bincount(outcomes, minlength=2**width)
    kept = int(outcomes.size)
    return Histogram(dict(zip(bitstrings(width), counts.tolist())), kept, kept / shots)


def ideal_distribution(circuit: Circuit, postselect: bool = True) -> dict[str, float]:
    state = run_circuit(circuit)
    if postselect and circuit.num_ancilla:
        state, _ = postselect_ancillas(state, circuit.ancillas, 0)
    return probabilities(state)


Distribution = Union[Histogram, Mapping[str, float]]


def _normalized(h: Distribution) -> dict[str, float]:
    if isinstance(h, Histogram):
        return h.frequencies()
    total = sum(h.values())
    return {k: v / total for k, v in h.items()} if total else dict(h)


def tvd(h1: Distribution, h2: Distribution) -> float:
    """Total variation distance between two histograms or distributions."""
    p, q = _normalized(h1), _normalized(h2)
    widths = {len(k) for k in p} | {len(k) for k in q}
    if len(widths) > 1:
        raise ValueError(f"outcome strings of mismatched lengths {sorted(widths)}")
    keys = set(p) | set(q)
    return 0.5 * math.fsum(abs(p.get(k, 0.0) - q.get(k, 0.0)) for k in keys)


def single_control_circuit(n: int, gate: str = "h", theta: float | None = None) -> Circuit:
    """Per qubit: two H (or two RY(theta)) gates, then a CNOT onto its own ancilla."""
    gates: list = []
    for q in range(n):
        gates += [H(q), H(q)] if gate == "h" else [RY(theta, q), RY(theta, q)]
    gates += [MCX((q,), n + q) for q in range(n)]
    return Circuit(n, n, gates)


def multi_control_circuit(theta: float) -> Circuit:
    """Three qubits, two RY(theta) each, all three controlling one ancilla."""
    gates: list = [g for q in range(3) for g in (RY(theta, q), RY(theta, q))]
    gates.append(MCX((0, 1, 2), 3))
    return Circuit(3, 1, gates)


def overlapping_control_circuit(theta: float) -> Circuit:
    """Three qubits, two RY(theta) each, pairs (0,1), (1,2), (0,2) each on their own ancilla."""
    gates: list = [g for q in range(3) for g in (RY(theta, q), RY(theta, q))]
    gates += [MCX(pair, 3 + j) for j, pair in enumerate([(0, 1), (1, 2), (0, 2)])]
    return Circuit(3, 3, gates)


def _family_circuits() -> list[tuple[str, str, Circuit, dict]]:
    th_lo, th_hi = 0.2 * math.pi, 0.45 * math.pi
    return [
        ("qubit_count", "h_single_control_2q", single_control_circuit(2), {"qubits": 2, "gate": "H"}),
        ("qubit_count", "h_single_control_3q", single_control_circuit(3), {"qubits": 3, "gate": "H"}),
        ("theta", "ry_single_control_0.2pi", single_control_circuit(3, "ry", th_lo),
         {"qubits": 3, "theta_pi": 0.2}),
        ("theta", "ry_single_control_0.45pi", single_control_circuit(3, "ry", th_hi),
         {"qubits": 3, "theta_pi": 0.45}),
        ("control", "ry_three_control_0.45pi", multi_control_circuit(th_hi),
         {"qubits": 3, "theta_pi": 0.45, "controls_per_gate": 3}),
        ("control", "ry_overlapping_pairs_0.45pi", overlapping_control_circuit(th_hi),
         {"qubits": 3, "theta_pi": 0.45, "controls_per_gate": 2}),
    ]


def appendix_a_suite(noise: NoiseModel, shots: int = 100_000, seed: int = 2025) -> dict:
    """Run the diagnostic circuits ideal vs noisy; every qubit is measured.

    The control family is compared against the 0.45pi single-control circuit
    from the theta family.
    """
    families = []
    for i, (family, name, circ, params) in enumerate(_family_circuits()):
        ideal = ideal_distribution(circ, postselect=False)
        noisy = run_noisy(circ, noise, shots, seed + i, postselect=False)
        families.append({
            "name": name,
            "family": family,
            "ideal_vs_noisy_tvd": tvd(ideal, noisy),
            "params": params,
        })
    return {"noise": asdict(noise), "shots": shots, "seed": seed, "families": families}


def hardy_set_tvd(noise: NoiseModel, theta: float = 0.423 * math.pi, shots: int = 100_000,
                  seed: int = 7, setting: MeasurementSetting | None = None) -> float:
    """TVD between the ideal and noisy post-selected cycle(4) distribution."""
    circ = build_circuit(make_spec("cycle", 4), theta, setting or MeasurementSetting.none())
    return tvd(ideal_distribution(circ), run_noisy(circ, noise, shots, seed))
