"""End-to-end protocol verification: tableau identification plus dense oracles.

The dense route is the independent brute-force check used at d=3: encode an
arbitrary logical state as explicit amplitudes, run the protocol circuit on
the full data+ancilla register, and demand fidelity 1 with the expected
encoded output.  The tableau route scales to d=5 and names the logical gate.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .circuits import ScheduledCircuit, run_on_state
from .logical import logical_action
from .patches import PatchSpec, build_patch, embed_stack
from .protocols import (
    inverted_alternation,
    s_teleport_circuit,
    transversal_h_circuit,
    transversal_s_circuit,
    transversal_two_qubit,
)
from .tableau import DenseState


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str

    def __str__(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        return f"[{mark}] {self.name}: {self.detail}"


# -- dense encoding -------------------------------------------------------------

def _project_stabilizer(vec: np.ndarray, patch: PatchSpec, stab, n: int) -> np.ndarray:
    from .tableau import _apply_pauli_dense

    p = patch.stabilizer_pauli(stab)
    return 0.5 * (vec + _apply_pauli_dense(vec, p, n))


def encode_dense(patch: PatchSpec, alpha: complex, beta: complex) -> DenseState:
    """Amplitude encoding of alpha|0>_L + beta|1>_L with ancillas in |0>.

    Data qubits occupy the low indices (patch.index order), ancillas follow,
    all initialized |0>; X-type projectors build |0>_L, logical X gives |1>_L.
    """
    from .tableau import _apply_pauli_dense

    n = patch.num_qubits
    if n > 20:
        raise ValueError("patch too large for dense encoding")
    vec = np.zeros(2**n, dtype=complex)
    vec[0] = 1.0
    for s in patch.x_stabilizers():
        vec = _project_stabilizer(vec, patch, s, n)
    vec /= np.linalg.norm(vec)
    zero_l = vec
    one_l = _apply_pauli_dense(zero_l, patch.logical_x_pauli(), n)
    out = alpha * zero_l + beta * one_l
    st = DenseState(n)
    st.vec = out / np.linalg.norm(out)
    return st


_LOGICAL_1Q = {
    "S": np.array([[1, 0], [0, 1j]], dtype=complex),
    "SDG": np.array([[1, 0], [0, -1j]], dtype=complex),
    "H": np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
    "I": np.eye(2, dtype=complex),
}


def dense_protocol_fidelity(patch: PatchSpec, circuit: ScheduledCircuit,
                            expected_gate: str, alpha: complex, beta: complex) -> float:
    """Fidelity of the protocol output with the expected encoded state.

    Runs the full circuit (including ancilla measurements, all deterministic
    on the codespace) and compares against encode(expected_gate |psi>).
    """
    st = encode_dense(patch, alpha, beta)
    run_on_state(circuit, st, rng=None)
    u = _LOGICAL_1Q[expected_gate.upper()]
    a2, b2 = u @ np.array([alpha, beta])
    want = encode_dense(patch, a2, b2)
    return st.fidelity(want)


# -- the protocol checks --------------------------------------------------------

_TEST_STATES = [
    (1.0, 0.0),
    (1 / np.sqrt(2), 1 / np.sqrt(2)),
    (1 / np.sqrt(2), 1j / np.sqrt(2)),
    (0.6, 0.8j),
]


def verify_transversal_s(d: int, dense: bool | None = None, tol: float = 1e-9) -> list[CheckResult]:
    """Canonical pattern -> logical S, inverted -> S-dagger; dense at d=3."""
    patch = build_patch(d, "folded")
    if dense is None:
        dense = d == 3
    results = []
    act = logical_action(transversal_s_circuit(patch), patch)
    results.append(CheckResult(f"transversal-S d={d} tableau", act.name == "S",
                               f"logical action = {act.name}"))
    act_inv = logical_action(transversal_s_circuit(patch, inverted_alternation(d)), patch)
    results.append(CheckResult(f"transversal-S d={d} inverted pattern", act_inv.name == "SDG",
                               f"logical action = {act_inv.name}"))
    if dense:
        worst = 1.0
        for alpha, beta in _TEST_STATES:
            f = dense_protocol_fidelity(patch, transversal_s_circuit(patch), "S", alpha, beta)
            worst = min(worst, f)
        results.append(CheckResult(f"transversal-S d={d} dense oracle", 1 - worst < tol,
                                   f"min fidelity {worst:.12f}"))
    return results


def verify_transversal_h(d: int, dense: bool | None = None, tol: float = 1e-9) -> list[CheckResult]:
    patch = build_patch(d, "folded")
    if dense is None:
        dense = d == 3
    results = []
    act = logical_action(transversal_h_circuit(patch), patch)
    results.append(CheckResult(f"transversal-H d={d} tableau", act.name == "H",
                               f"logical action = {act.name}"))
    circ = transversal_h_circuit(patch)
    twice = circ.extended(transversal_h_circuit(patch), slot_offset=max(circ.slots()) + 1)
    act2 = logical_action(twice, patch)
    results.append(CheckResult(f"transversal-H d={d} applied twice", act2.name == "I",
                               f"logical action = {act2.name}"))
    if dense:
        worst = 1.0
        for alpha, beta in _TEST_STATES:
            f = dense_protocol_fidelity(patch, transversal_h_circuit(patch), "H", alpha, beta)
            worst = min(worst, f)
        results.append(CheckResult(f"transversal-H d={d} dense oracle", 1 - worst < tol,
                                   f"min fidelity {worst:.12f}"))
    return results


def verify_two_qubit(d: int, gate: str) -> list[CheckResult]:
    a = build_patch(d, "folded")
    b = build_patch(d, "folded")
    stack = embed_stack([a, b])
    circ = transversal_two_qubit(stack, 0, 1, gate, [a, b])
    act = logical_action(circ, [a, b])
    results = [CheckResult(f"transversal-{gate} d={d}", act.name == gate.upper(),
                           f"logical action = {act.name}")]
    if gate.upper() == "SWAP":
        twice = circ.extended(circ, slot_offset=max(circ.slots()) + 1)
        act2 = logical_action(twice, [a, b])
        results.append(CheckResult(f"transversal-SWAP d={d} applied twice", act2.name == "I",
                                   f"logical action = {act2.name}"))
    return results


def verify_s_teleport(seeds: Sequence[int] = range(50), tol: float = 1e-9) -> list[CheckResult]:
    """Both S gadgets on random single-qubit states, dense brute force."""
    s_mat = _LOGICAL_1Q["S"]
    worst_y, worst_i = 1.0, 1.0
    for seed in seeds:
        rng = np.random.default_rng(seed)
        v = rng.normal(size=2) + 1j * rng.normal(size=2)
        v /= np.linalg.norm(v)

        st = DenseState(2)
        st.vec = np.kron(v, np.array([1.0, 0.0], dtype=complex))
        rec = run_on_state(s_teleport_circuit("y_measure"), st, rng=rng)
        want = s_mat @ v
        # ancilla collapsed to |+i> or |-i>; contract it out
        anc = np.array([1.0, 1j * (-1) ** rec["y"]], dtype=complex) / np.sqrt(2)
        data = st.vec.reshape(2, 2) @ anc.conj()
        f = abs(np.vdot(want, data / np.linalg.norm(data))) ** 2
        worst_y = min(worst_y, f)

        st = DenseState(2)
        st.vec = np.kron(v, np.array([1.0, 0.0], dtype=complex))
        run_on_state(s_teleport_circuit("i_state"), st, rng=rng)
        # expected output: S|psi> on the data, Z|i> = |-i> on the resource
        minus_i = np.array([1.0, -1j], dtype=complex) / np.sqrt(2)
        expect = np.kron(s_mat @ v, minus_i)
        f = abs(np.vdot(expect, st.vec)) ** 2
        worst_i = min(worst_i, f)
    return [
        CheckResult("s-teleport y_measure dense", 1 - worst_y < tol, f"min fidelity {worst_y:.12f}"),
        CheckResult("s-teleport i_state dense", 1 - worst_i < tol, f"min fidelity {worst_i:.12f}"),
    ]


def verify_all(d_values: Sequence[int] = (3, 5)) -> list[CheckResult]:
    out: list[CheckResult] = []
    for d in d_values:
        out += verify_transversal_s(d)
        out += verify_transversal_h(d)
        out += verify_two_qubit(d, "CNOT")
        out += verify_two_qubit(d, "SWAP")
    out += verify_s_teleport()
    return out
