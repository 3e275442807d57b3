"""Time-slotted gate/measure event lists shared by the code and timing layers.

A ScheduledCircuit is the common currency: the tableau engine replays its
events in slot order, and the loop simulator attaches wall-clock times to the
same structure.  The text dump is one line per event: slot, action, targets.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence


@dataclass(frozen=True)
class CircuitEvent:
    slot: int
    action: str                      # gate name, RESET, MEASURE
    targets: tuple[int, ...]
    basis: str = "Z"                 # for MEASURE
    key: Optional[str] = None        # record label for measurements
    condition: Optional[str] = None  # record key gating the event; "!key" fires on 0


@dataclass
class ScheduledCircuit:
    """Ordered list of events over named qubits."""

    num_qubits: int
    events: list[CircuitEvent] = field(default_factory=list)
    qubit_names: Optional[dict[int, str]] = None
    meta: dict = field(default_factory=dict)

    def add(self, slot: int, action: str, targets: Sequence[int],
            basis: str = "Z", key: Optional[str] = None,
            condition: Optional[str] = None) -> None:
        self.events.append(CircuitEvent(slot, action.upper(), tuple(targets), basis, key, condition))

    def sorted_events(self) -> list[CircuitEvent]:
        return sorted(self.events, key=lambda e: (e.slot,))

    def gate_count(self, name: str) -> int:
        name = name.upper()
        return sum(1 for e in self.events if e.action == name)

    def slots(self) -> list[int]:
        return sorted({e.slot for e in self.events})

    def extended(self, other: "ScheduledCircuit", slot_offset: int) -> "ScheduledCircuit":
        out = ScheduledCircuit(self.num_qubits, list(self.events), self.qubit_names, dict(self.meta))
        for e in other.events:
            out.events.append(CircuitEvent(e.slot + slot_offset, e.action, e.targets,
                                           e.basis, e.key, e.condition))
        return out

    def dump(self) -> str:
        """Line-per-event text form: slot action targets [basis] [key] [?condition]."""
        lines = []
        for e in self.sorted_events():
            parts = [str(e.slot), e.action, ",".join(str(t) for t in e.targets)]
            if e.action == "MEASURE":
                parts.append(e.basis)
            if e.key:
                parts.append(f"key={e.key}")
            if e.condition:
                parts.append(f"if={e.condition}")
            lines.append(" ".join(parts))
        return "\n".join(lines) + "\n"


def run_on_state(
    circuit: ScheduledCircuit,
    state,
    rng=None,
    forced_outcomes: Optional[dict[str, int]] = None,
) -> dict[str, int]:
    """Replay a circuit on a tableau or dense state; returns the record.

    Conditioned events fire when the referenced record bit is 1.  Measurement
    outcomes land in the record under their key (or m<index> if unnamed).
    """
    record: dict[str, int] = {}
    unnamed = 0
    for e in circuit.sorted_events():
        if e.condition is not None:
            key, want = (e.condition[1:], 0) if e.condition.startswith("!") else (e.condition, 1)
            if record.get(key, 0) != want:
                continue
        if e.action == "MEASURE":
            for q in e.targets:
                key = e.key if e.key and len(e.targets) == 1 else f"{e.key or 'm'}{q}"
                force = None
                if forced_outcomes and key in forced_outcomes:
                    force = forced_outcomes[key]
                out, _ = state.measure(q, e.basis, rng=rng, force=force)
                record[key] = out
                unnamed += 1
        elif e.action == "RESET":
            continue  # states start in |0>; explicit resets are layout markers
        else:
            state.apply_gate(e.action, e.targets)
    return record
