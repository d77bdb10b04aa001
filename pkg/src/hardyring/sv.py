"""Dense statevector simulator.

Qubit 0 is the most significant bit of the amplitude index, so the leftmost
character of every bitstring belongs to qubit 0 (particle 1).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence, Union

import numpy as np

MAX_QUBITS = 24
NORM_TOL = 1e-9
POSTSELECT_MIN_WEIGHT = 1e-12


class PostSelectionError(ValueError):
    """Raised when the requested ancilla branch carries (numerically) no weight."""


@dataclass(frozen=True)
class RY:
    angle: float
    target: int

    @property
    def qubits(self) -> tuple[int, ...]:
        return (self.target,)


@dataclass(frozen=True)
class X:
    target: int

    @property
    def qubits(self) -> tuple[int, ...]:
        return (self.target,)


@dataclass(frozen=True)
class H:
    target: int

    @property
    def qubits(self) -> tuple[int, ...]:
        return (self.target,)


@dataclass(frozen=True)
class MCX:
    controls: tuple[int, ...]
    target: int

    def __post_init__(self):
        object.__setattr__(self, "controls", tuple(self.controls))
        if not self.controls:
            raise ValueError("MCX needs at least one control")
        if len(set(self.controls)) != len(self.controls):
            raise ValueError("MCX controls must be distinct")
        if self.target in self.controls:
            raise ValueError("MCX target overlaps its controls")

    @property
    def qubits(self) -> tuple[int, ...]:
        return (*self.controls, self.target)


Gate = Union[RY, X, H, MCX]


def ry_matrix(angle: float) -> np.ndarray:
    c, s = np.cos(angle / 2), np.sin(angle / 2)
    return np.array([[c, -s], [s, c]], dtype=complex)


_X = np.array([[0, 1], [1, 0]], dtype=complex)
_H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)


def single_qubit_matrix(gate: Gate) -> np.ndarray:
    if isinstance(gate, RY):
        return ry_matrix(gate.angle)
    if isinstance(gate, X):
        return _X
    if isinstance(gate, H):
        return _H
    raise TypeError(f"not a single-qubit gate: {gate!r}")


@dataclass(frozen=True)
class Statevector:
    num_qubits: int
    amplitudes: np.ndarray = field(repr=False)

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        if not 1 <= self.num_qubits <= MAX_QUBITS:
            raise ValueError(f"num_qubits must be in 1..{MAX_QUBITS}")
        if amps.size != 2**self.num_qubits:
            raise ValueError("amplitude vector length must be 2**num_qubits")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def zero(cls, num_qubits: int) -> "Statevector":
        amps = np.zeros(2**num_qubits, dtype=complex)
        amps[0] = 1.0
        return cls(num_qubits, amps)

    @classmethod
    def from_bitstring(cls, bits: str) -> "Statevector":
        amps = np.zeros(2 ** len(bits), dtype=complex)
        amps[int(bits, 2)] = 1.0
        return cls(len(bits), amps)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def tensor(self) -> np.ndarray:
        return self.amplitudes.reshape((2,) * self.num_qubits)

    def amplitude(self, bits: str) -> complex:
        return complex(self.amplitudes[int(bits, 2)])


@dataclass(frozen=True)
class Circuit:
    num_data: int
    num_ancilla: int
    gates: tuple[Gate, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(self.gates))
        total = self.num_qubits
        if total > MAX_QUBITS:
            raise ValueError(f"circuit needs {total} qubits; cap is {MAX_QUBITS}")
        for g in self.gates:
            _check_indices(g, total)

    @property
    def num_qubits(self) -> int:
        return self.num_data + self.num_ancilla

    @property
    def ancillas(self) -> tuple[int, ...]:
        return tuple(range(self.num_data, self.num_qubits))

    def count(self, kind: type) -> int:
        return sum(isinstance(g, kind) for g in self.gates)


@dataclass(frozen=True)
class Histogram:
    counts: Mapping[str, int]
    shots: int
    post_selection_rate: float = 1.0

    def __post_init__(self):
        if sum(self.counts.values()) != self.shots:
            raise ValueError("counts must sum to shots")
        if len({len(k) for k in self.counts}) > 1:
            raise ValueError("histogram keys must share one length")

    @property
    def width(self) -> int:
        return len(next(iter(self.counts))) if self.counts else 0

    def frequencies(self) -> dict[str, float]:
        if self.shots == 0:
            return {k: 0.0 for k in self.counts}
        return {k: v / self.shots for k, v in self.counts.items()}


def _check_indices(gate: Gate, num_qubits: int) -> None:
    for q in gate.qubits:
        if not 0 <= q < num_qubits:
            raise IndexError(f"qubit {q} out of range for {num_qubits}-qubit register")


def apply_gate(state: Statevector, gate: Gate) -> Statevector:
    n = state.num_qubits
    _check_indices(gate, n)
    psi = state.tensor()
    if isinstance(gate, MCX):
        out = psi.copy()
        idx: list = [slice(None)] * n
        for c in gate.controls:
            idx[c] = 1
        # flip the target only inside the all-controls-set block
        src0, src1 = list(idx), list(idx)
        src0[gate.target], src1[gate.target] = 0, 1
        out[tuple(src0)] = psi[tuple(src1)]
        out[tuple(src1)] = psi[tuple(src0)]
    else:
        m = single_qubit_matrix(gate)
        out = np.moveaxis(np.tensordot(m, psi, axes=([1], [gate.target])), 0, gate.target)
    return Statevector(n, out.reshape(-1))


def run_circuit(circuit: Circuit) -> Statevector:
    state = Statevector.zero(circuit.num_qubits)
    for g in circuit.gates:
        state = apply_gate(state, g)
    return state


def postselect_ancillas(
    state: Statevector, ancilla_set: Sequence[int], required_value: int = 0
) -> tuple[Statevector, float]:
    """Project every qubit in `ancilla_set` onto `required_value` and drop them.

    Returns the renormalised state over the remaining qubits (original order
    kept) and the weight of the kept branch before renormalisation.
    """
    anc = sorted(set(ancilla_set))
    n = state.num_qubits
    if not anc:
        raise ValueError("ancilla_set must be non-empty")
    if required_value not in (0, 1):
        raise ValueError("required_value must be 0 or 1")
    if anc[0] < 0 or anc[-1] >= n:
        raise IndexError("ancilla index out of range")
    if len(anc) == n:
        raise ValueError("at least one data qubit must remain")
    idx: list = [slice(None)] * n
    for a in anc:
        idx[a] = required_value
    branch = state.tensor()[tuple(idx)]
    weight = float(np.vdot(branch, branch).real)
    if weight < POSTSELECT_MIN_WEIGHT:
        raise PostSelectionError(
            f"post-selection impossible: branch weight {weight:.3g} below {POSTSELECT_MIN_WEIGHT}"
        )
    return Statevector(n - len(anc), branch.reshape(-1) / np.sqrt(weight)), weight


def bitstrings(n: int) -> list[str]:
    return [format(i, f"0{n}b") for i in range(2**n)]


def probabilities(state: Statevector) -> dict[str, float]:
    p = np.abs(state.amplitudes) ** 2
    return dict(zip(bitstrings(state.num_qubits), p.tolist()))


def sample_histogram(
    probs: Mapping[str, float],
    shots: int,
    seed: int,
    post_selection_rate: float = 1.0,
) -> Histogram:
    """Multinomial draw of `shots` outcomes; same (probs, shots, seed) -> same counts."""
    if shots < 1:
        raise ValueError("shots must be >= 1")
    keys = sorted(probs)
    p = np.clip(np.array([probs[k] for k in keys], dtype=float), 0.0, None)
    total = p.sum()
    if total <= 0:
        raise ValueError("probabilities sum to zero")
    rng = np.random.default_rng(seed)
    draws = rng.multinomial(shots, p / total)
    return Histogram(dict(zip(keys, draws.tolist())), shots, post_selection_rate)
