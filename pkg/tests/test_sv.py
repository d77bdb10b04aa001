import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hardyring.sv import (H, MCX, RY, X, Circuit, Histogram, PostSelectionError, Statevector,
                          apply_gate, bitstrings, postselect_ancillas, probabilities, ry_matrix,
                          run_circuit, sample_histogram)


def dense_unitary(gate, n):
    """Oracle: build the full 2^n x 2^n matrix column by column from basis states."""
    cols = []
    for i in range(2**n):
        bits = list(format(i, f"0{n}b"))
        if isinstance(gate, MCX):
            if all(bits[c] == "1" for c in gate.controls):
                bits[gate.target] = "1" if bits[gate.target] == "0" else "0"
            col = np.zeros(2**n, dtype=complex)
            col[int("".join(bits), 2)] = 1
        else:
            m = {RY: lambda g: ry_matrix(g.angle),
                 X: lambda g: np.array([[0, 1], [1, 0]]),
                 H: lambda g: np.array([[1, 1], [1, -1]]) / math.sqrt(2)}[type(gate)](gate)
            col = np.zeros(2**n, dtype=complex)
            b = int(bits[gate.target])
            for out in (0, 1):
                bits[gate.target] = str(out)
                col[int("".join(bits), 2)] += m[out, b]
        cols.append(col)
    return np.array(cols).T


def test_x_flips_leftmost_qubit():
    out = apply_gate(Statevector.zero(3), X(0))
    assert out.amplitude("100") == 1


def test_ry_pi_maps_zero_to_one():
    out = apply_gate(Statevector.zero(1), RY(math.pi, 0))
    assert abs(out.amplitude("1") - 1) < 1e-12


def test_toffoli_truth_table():
    for bits in bitstrings(3):
        out = apply_gate(Statevector.from_bitstring(bits), MCX((0, 1), 2))
        expected = bits[:2] + ("1" if bits[2] == "0" else "0") if bits[:2] == "11" else bits
        assert out.amplitude(expected) == 1


def test_bell_pair():
    psi = run_circuit(Circuit(2, 0, [H(0), MCX((0,), 1)]))
    p = probabilities(psi)
    assert p["00"] == pytest.approx(0.5) and p["11"] == pytest.approx(0.5)


gate_strategy = st.one_of(
    st.builds(RY, st.floats(-2 * math.pi, 2 * math.pi), st.integers(0, 3)),
    st.builds(H, st.integers(0, 3)),
    st.builds(X, st.integers(0, 3)),
    st.lists(st.integers(0, 3), min_size=2, max_size=4, unique=True).map(lambda q: MCX(tuple(q[:-1]), q[-1])),
)


@settings(max_examples=60, deadline=None)
@given(gate_strategy, st.integers(0, 2**32 - 1))
def test_gate_matches_dense_oracle(gate, seed):
    rng = np.random.default_rng(seed)
    v = rng.normal(size=16) + 1j * rng.normal(size=16)
    v /= np.linalg.norm(v)
    got = apply_gate(Statevector(4, v), gate).amplitudes
    np.testing.assert_allclose(got, dense_unitary(gate, 4) @ v, atol=1e-12)


@settings(max_examples=40, deadline=None)
@given(st.lists(gate_strategy, max_size=12))
def test_circuits_preserve_norm(gates):
    assert run_circuit(Circuit(4, 0, gates)).norm() == pytest.approx(1.0, abs=1e-12)


def test_postselection_matches_projection():
    circ = Circuit(2, 1, [H(0), H(1), MCX((0, 1), 2)])
    state, rate = postselect_ancillas(run_circuit(circ), circ.ancillas, 0)
    assert rate == pytest.approx(0.75)
    p = probabilities(state)
    assert p["11"] == pytest.approx(0.0)
    assert all(p[k] == pytest.approx(1 / 3) for k in ("00", "01", "10"))


def test_postselection_on_empty_branch_raises():
    circ = Circuit(1, 1, [X(0), MCX((0,), 1)])
    with pytest.raises(PostSelectionError):
        postselect_ancillas(run_circuit(circ), circ.ancillas, 0)


def test_circuit_rejects_bad_indices():
    with pytest.raises(IndexError):
        Circuit(2, 0, [X(2)])
    with pytest.raises(ValueError):
        MCX((0, 1), 1)


def test_sampling_is_deterministic():
    probs = {"00": 0.1, "01": 0.2, "10": 0.3, "11": 0.4}
    a = sample_histogram(probs, 5000, seed=11)
    b = sample_histogram(probs, 5000, seed=11)
    c = sample_histogram(probs, 5000, seed=12)
    assert a.counts == b.counts
    assert a.counts != c.counts
    assert sum(a.counts.values()) == 5000


def test_sampling_converges():
    probs = {"0": 0.3, "1": 0.7}
    h = sample_histogram(probs, 400_000, seed=1)
    assert h.frequencies()["1"] == pytest.approx(0.7, abs=4 / math.sqrt(400_000))


def test_zero_probability_outcomes_never_sampled():
    h = sample_histogram({"00": 0.5, "01": 0.0, "10": 0.5, "11": 0.0}, 10_000, seed=3)
    assert h.counts["01"] == 0 and h.counts["11"] == 0


def test_histogram_validation():
    with pytest.raises(ValueError):
        Histogram({"0": 2, "1": 2}, shots=5)
