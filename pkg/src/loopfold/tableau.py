"""Stabilizer-tableau engine and a small dense-statevector oracle.

The tableau follows the Aaronson-Gottesman layout: 2n rows of (x | z) bits
with a sign bit per row, rows 0..n-1 destabilizers, rows n..2n-1 stabilizers.
The dense engine is the independent brute-force reference used to certify
protocol claims on small instances; it supports the non-Clifford T gate.
"""

from __future__ import annotations

from typing import Optional, Sequence

import numpy as np

from .pauli import PauliString

CLIFFORD_GATES = ("H", "S", "SDG", "X", "Y", "Z", "CNOT", "CZ", "SWAP")


class UnsupportedGateError(ValueError):
    """Raised when a gate cannot act on the given engine (e.g. T on a tableau)."""


class StabilizerState:
    """n-qubit stabilizer state, initialized to |0...0>."""

    def __init__(self, num_qubits: int):
        if num_qubits < 1:
            raise ValueError("need at least one qubit")
        n = self.n = num_qubits
        self.x = np.zeros((2 * n, n), dtype=np.uint8)
        self.z = np.zeros((2 * n, n), dtype=np.uint8)
        self.r = np.zeros(2 * n, dtype=np.uint8)  # sign bit: 0 -> +, 1 -> -
        for i in range(n):
            self.x[i, i] = 1          # destabilizer X_i
            self.z[n + i, i] = 1      # stabilizer Z_i

    # -- row helpers ---------------------------------------------------------

    def _g(self, x1, z1, x2, z2):
        # exponent of i when multiplying single-qubit Paulis (AG convention)
        if x1 == 0 and z1 == 0:
            return 0
        if x1 == 1 and z1 == 1:
            return int(z2) - int(x2)
        if x1 == 1 and z1 == 0:
            return int(z2) * (2 * int(x2) - 1)
        return int(x2) * (1 - 2 * int(z2))

    def _rowsum(self, h: int, i: int) -> None:
        """Row h := row i * row h with AG phase bookkeeping."""
        two_r = 2 * int(self.r[h]) + 2 * int(self.r[i])
        for j in range(self.n):
            two_r += self._g(self.x[i, j], self.z[i, j], self.x[h, j], self.z[h, j])
        self.r[h] = (two_r % 4) // 2
        self.x[h] ^= self.x[i]
        self.z[h] ^= self.z[i]

    # -- gates ----------------------------------------------------------------

    def apply_gate(self, gate: str, targets: Sequence[int]) -> "StabilizerState":
        g = gate.upper()
        if g == "T":
            raise UnsupportedGateError("T gate is not Clifford; use DenseState")
        if g not in CLIFFORD_GATES:
            raise UnsupportedGateError(f"unknown gate {gate!r}")
        if len(set(targets)) != len(targets):
            raise ValueError("duplicate targets")
        for q in targets:
            if not 0 <= q < self.n:
                raise ValueError(f"target {q} out of range")
        if g == "H":
            (q,) = targets
            self.r ^= self.x[:, q] & self.z[:, q]
            self.x[:, q], self.z[:, q] = self.z[:, q].copy(), self.x[:, q].copy()
        elif g == "S":
            (q,) = targets
            self.r ^= self.x[:, q] & self.z[:, q]
            self.z[:, q] ^= self.x[:, q]
        elif g == "SDG":
            self.apply_gate("S", targets)
            self.apply_gate("Z", targets)
        elif g == "X":
            (q,) = targets
            self.r ^= self.z[:, q]
        elif g == "Z":
            (q,) = targets
            self.r ^= self.x[:, q]
        elif g == "Y":
            (q,) = targets
            self.r ^= self.x[:, q] ^ self.z[:, q]
        elif g == "CNOT":
            c, t = targets
            self.r ^= self.x[:, c] & self.z[:, t] & (self.x[:, t] ^ self.z[:, c] ^ 1)
            self.x[:, t] ^= self.x[:, c]
            self.z[:, c] ^= self.z[:, t]
        elif g == "CZ":
            c, t = targets
            self.apply_gate("H", (t,))
            self.apply_gate("CNOT", (c, t))
            self.apply_gate("H", (t,))
        elif g == "SWAP":
            a, b = targets
            self.apply_gate("CNOT", (a, b))
            self.apply_gate("CNOT", (b, a))
            self.apply_gate("CNOT", (a, b))
        return self

    # -- measurement -----------------------------------------------------------

    def measure(
        self,
        qubit: int,
        basis: str = "Z",
        rng: Optional[np.random.Generator] = None,
        force: Optional[int] = None,
    ) -> tuple[int, bool]:
        """Measure a qubit in the Z or Y basis.

        Returns (outcome, deterministic).  Y measurement is conjugation by
        S-dagger, a Z measurement, and the inverse conjugation.  `force`
        selects the branch of a random outcome (used for projective state
        preparation); it must not disagree with a deterministic outcome.
        """
        b = basis.upper()
        if b == "Y":
            # H * SDG maps Y to Z; measure, then undo
            self.apply_gate("SDG", (qubit,))
            self.apply_gate("H", (qubit,))
            out = self.measure(qubit, "Z", rng, force)
            self.apply_gate("H", (qubit,))
            self.apply_gate("S", (qubit,))
            return out
        if b != "Z":
            raise ValueError(f"unsupported measurement basis {basis!r}")
        n = self.n
        p = None
        for i in range(n, 2 * n):
            if self.x[i, qubit]:
                p = i
                break
        if p is not None:
            # random outcome
            if force is not None:
                outcome = int(force)
            elif rng is not None:
                outcome = int(rng.integers(2))
            else:
                raise ValueError("random measurement needs an rng or forced branch")
            for i in range(2 * n):
                if i != p and self.x[i, qubit]:
                    self._rowsum(i, p)
            self.x[p - n] = self.x[p]
            self.z[p - n] = self.z[p]
            self.r[p - n] = self.r[p]
            self.x[p] = 0
            self.z[p] = 0
            self.r[p] = outcome
            self.z[p, qubit] = 1
            return outcome, False
        # deterministic: accumulate into scratch row
        sx = np.zeros(n, dtype=np.uint8)
        sz = np.zeros(n, dtype=np.uint8)
        two_r = 0
        for i in range(n):
            if self.x[i, qubit]:
                j = i + n
                two_r += 2 * int(self.r[j])
                for q in range(n):
                    two_r += self._g(self.x[j, q], self.z[j, q], sx[q], sz[q])
                sx ^= self.x[j]
                sz ^= self.z[j]
        outcome = (two_r % 4) // 2
        if force is not None and int(force) != outcome:
            raise ValueError("forced branch contradicts deterministic outcome")
        return outcome, True

    def measure_pauli(
        self,
        pauli: PauliString,
        rng: Optional[np.random.Generator] = None,
        force: Optional[int] = None,
    ) -> tuple[int, bool]:
        """Measure an arbitrary Hermitian Pauli by basis change onto an anchor qubit."""
        circ, anchor = _pauli_basis_change(pauli)
        sign_pre = _hermitian_sign(pauli)
        for gate, tgts in circ:
            self.apply_gate(gate, tgts)
        out, det = self.measure(anchor, "Z", rng, force if sign_pre == 1 or force is None else force ^ 1)
        for gate, tgts in reversed(circ):
            self.apply_gate(_inverse_gate(gate), tgts)
        if sign_pre == -1:
            out ^= 1
        return out, det

    # -- inspection -------------------------------------------------------------

    def _row_pauli(self, i: int) -> PauliString:
        # AG rows carry an implicit i per Y site; PauliString phases are explicit
        y_count = int(np.sum(self.x[i] & self.z[i]))
        phase = (2 * int(self.r[i]) + y_count) % 4
        return PauliString(self.n, self.x[i].copy(), self.z[i].copy(), phase)

    def stabilizer_generators(self) -> list[PauliString]:
        return [self._row_pauli(i) for i in range(self.n, 2 * self.n)]

    def destabilizer_generators(self) -> list[PauliString]:
        return [self._row_pauli(i) for i in range(self.n)]

    def expectation_sign(self, pauli: PauliString) -> Optional[int]:
        """+1/-1 if `pauli` is (up to sign) in the stabilizer group, else None."""
        st = self.copy()
        try:
            out, det = st.measure_pauli(pauli, rng=None, force=None)
        except ValueError:
            return None
        if not det:
            return None
        return 1 if out == 0 else -1

    def copy(self) -> "StabilizerState":
        st = StabilizerState.__new__(StabilizerState)
        st.n = self.n
        st.x = self.x.copy()
        st.z = self.z.copy()
        st.r = self.r.copy()
        return st

    def to_dense(self) -> "DenseState":
        """Dense amplitudes of the stabilizer state (small n only)."""
        if self.n > 14:
            raise ValueError("too many qubits for dense conversion")
        dense = DenseState(self.n)
        # find a computational basis state inside the support by measuring a
        # copy, then project it onto the stabilizer group
        probe = self.copy()
        rng = np.random.default_rng(7)
        bits = [probe.measure(q, "Z", rng=rng)[0] for q in range(self.n)]
        idx = 0
        for b in bits:
            idx = (idx << 1) | b
        vec = np.zeros(2**self.n, dtype=complex)
        vec[idx] = 1.0
        for g in self.stabilizer_generators():
            vec = 0.5 * (vec + _apply_pauli_dense(vec, g, self.n))
        dense.vec = vec / np.linalg.norm(vec)
        return dense


class DenseState:
    """Dense statevector on <= 20 qubits; the brute-force oracle engine."""

    def __init__(self, num_qubits: int):
        if not 1 <= num_qubits <= 20:
            raise ValueError("DenseState supports 1..20 qubits")
        self.n = num_qubits
        self.vec = np.zeros(2**num_qubits, dtype=complex)
        self.vec[0] = 1.0

    _GATES_1Q = {
        "H": np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2),
        "S": np.array([[1, 0], [0, 1j]], dtype=complex),
        "SDG": np.array([[1, 0], [0, -1j]], dtype=complex),
        "T": np.array([[1, 0], [0, np.exp(1j * np.pi / 4)]], dtype=complex),
        "X": np.array([[0, 1], [1, 0]], dtype=complex),
        "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
        "Z": np.array([[1, 0], [0, -1]], dtype=complex),
    }

    def apply_gate(self, gate: str, targets: Sequence[int]) -> "DenseState":
        g = gate.upper()
        if g in self._GATES_1Q:
            (q,) = targets
            self._apply_1q(self._GATES_1Q[g], q)
        elif g == "CNOT":
            c, t = targets
            self._apply_cnot(c, t)
        elif g == "CZ":
            c, t = targets
            self._apply_cz(c, t)
        elif g == "SWAP":
            a, b = targets
            self._apply_cnot(a, b)
            self._apply_cnot(b, a)
            self._apply_cnot(a, b)
        else:
            raise UnsupportedGateError(f"unknown gate {gate!r}")
        return self

    def _axes(self, q: int) -> int:
        # qubit 0 is the most significant axis so bitstrings read left to right
        return q

    def _apply_1q(self, u: np.ndarray, q: int) -> None:
        v = self.vec.reshape([2] * self.n)
        v = np.tensordot(u, v, axes=([1], [self._axes(q)]))
        v = np.moveaxis(v, 0, self._axes(q))
        self.vec = np.ascontiguousarray(v).reshape(-1)

    def _apply_cnot(self, c: int, t: int) -> None:
        v = self.vec.reshape([2] * self.n)
        idx_c = self._axes(c)
        idx_t = self._axes(t)
        sl1 = [slice(None)] * self.n
        sl1[idx_c] = 1
        block = v[tuple(sl1)]
        t_after = idx_t if idx_t < idx_c else idx_t - 1
        v[tuple(sl1)] = np.flip(block, axis=t_after).copy()
        self.vec = v.reshape(-1)

    def _apply_cz(self, c: int, t: int) -> None:
        v = self.vec.reshape([2] * self.n)
        sl = [slice(None)] * self.n
        sl[self._axes(c)] = 1
        sl[self._axes(t)] = 1
        v[tuple(sl)] *= -1
        self.vec = v.reshape(-1)

    def apply_pauli(self, pauli: PauliString) -> "DenseState":
        self.vec = _apply_pauli_dense(self.vec, pauli, self.n)
        return self

    def measure(
        self,
        qubit: int,
        basis: str = "Z",
        rng: Optional[np.random.Generator] = None,
        force: Optional[int] = None,
    ) -> tuple[int, bool]:
        b = basis.upper()
        if b == "Y":
            self.apply_gate("SDG", (qubit,))
            self.apply_gate("H", (qubit,))
            out = self.measure(qubit, "Z", rng, force)
            self.apply_gate("H", (qubit,))
            self.apply_gate("S", (qubit,))
            return out
        if b != "Z":
            raise ValueError(f"unsupported measurement basis {basis!r}")
        v = self.vec.reshape([2] * self.n)
        sl0 = [slice(None)] * self.n
        sl0[self._axes(qubit)] = 0
        p0 = float(np.sum(np.abs(v[tuple(sl0)]) ** 2))
        deterministic = p0 < 1e-12 or p0 > 1 - 1e-12
        if force is not None:
            outcome = int(force)
        elif deterministic:
            outcome = 0 if p0 > 0.5 else 1
        elif rng is not None:
            outcome = int(rng.random() >= p0)
        else:
            raise ValueError("random measurement needs an rng or forced branch")
        prob = p0 if outcome == 0 else 1.0 - p0
        if prob < 1e-12:
            raise ValueError("forced branch has zero amplitude")
        sl = [slice(None)] * self.n
        sl[self._axes(qubit)] = 1 - outcome
        v[tuple(sl)] = 0.0
        self.vec = v.reshape(-1) / np.sqrt(prob)
        return outcome, deterministic

    def branch_probability(self, qubit: int, outcome: int) -> float:
        v = self.vec.reshape([2] * self.n)
        sl = [slice(None)] * self.n
        sl[self._axes(qubit)] = outcome
        return float(np.sum(np.abs(v[tuple(sl)]) ** 2))

    def fidelity(self, other: "DenseState") -> float:
        """|<self|other>|^2 — global phase quotiented out."""
        return float(np.abs(np.vdot(self.vec, other.vec)) ** 2)

    def norm(self) -> float:
        return float(np.linalg.norm(self.vec))

    def copy(self) -> "DenseState":
        d = DenseState.__new__(DenseState)
        d.n = self.n
        d.vec = self.vec.copy()
        return d


def _apply_pauli_dense(vec: np.ndarray, pauli: PauliString, n: int) -> np.ndarray:
    out = vec.copy().reshape([2] * n)
    phase = (1j) ** pauli.phase
    for q in range(n):
        xq, zq = int(pauli.x[q]), int(pauli.z[q])
        if xq == 0 and zq == 0:
            continue
        sl1 = [slice(None)] * n
        sl1[q] = 1
        if zq:
            out[tuple(sl1)] *= -1
        if xq:
            out = np.flip(out, axis=q)
    return (phase * out).reshape(-1)


def _pauli_basis_change(pauli: PauliString) -> tuple[list[tuple[str, tuple[int, ...]]], int]:
    """Clifford circuit C with C P C^dag = Z_anchor (phase ignored)."""
    support = pauli.support()
    if not support:
        raise ValueError("cannot measure the identity")
    circ: list[tuple[str, tuple[int, ...]]] = []
    for q in support:
        xq, zq = int(pauli.x[q]), int(pauli.z[q])
        if xq and zq:      # Y -> Z
            circ.append(("SDG", (q,)))
            circ.append(("H", (q,)))
        elif xq:           # X -> Z
            circ.append(("H", (q,)))
    anchor = support[0]
    for q in support[1:]:
        circ.append(("CNOT", (q, anchor)))
    return circ, anchor


def _hermitian_sign(pauli: PauliString) -> int:
    """Sign of a Hermitian Pauli relative to its letterwise I/X/Y/Z form."""
    y_count = int(np.sum(pauli.x & pauli.z))
    k = (pauli.phase - y_count) % 4
    if k == 0:
        return 1
    if k == 2:
        return -1
    raise ValueError("Pauli is not Hermitian")


def _inverse_gate(gate: str) -> str:
    return {"S": "SDG", "SDG": "S"}.get(gate, gate)


def apply_gate(state, gate: str, targets: Sequence[int]):
    """Module-level dispatcher; works on either engine."""
    return state.apply_gate(gate, targets)
