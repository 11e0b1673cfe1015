"""Circuit programs: ordered gate applications on qubit lines."""

from collections import Counter
from typing import Any, Dict, Iterable, List, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from .errors import DimensionError, ParameterError
from .gates import Gate
from .models import CircuitStats
from .statevector import StateVector, apply_matrix, check_targets

MAX_UNITARY_QUBITS = 12


class CircuitOp(BaseModel):
    model_config = ConfigDict(frozen=True)

    gate: Gate
    targets: Tuple[int, ...]

    @model_validator(mode="after")
    def _check_arity(self) -> "CircuitOp":
        if len(self.targets) != self.gate.arity:
            raise ValueError(
                f"{self.gate.label.value} has arity {self.gate.arity}, "
                f"got targets {list(self.targets)}"
            )
        if len(set(self.targets)) != len(self.targets):
            raise ValueError(f"duplicate targets {list(self.targets)}")
        return self

    def to_json_dict(self) -> Dict[str, Any]:
        data = self.gate.to_json_dict()
        return {"label": data.pop("label"), "targets": list(self.targets), **data}


class Circuit(BaseModel):
    """Gates applied left to right to a state on n lines."""

    n: int = Field(ge=1)
    ops: List[CircuitOp] = Field(default_factory=list)

    @model_validator(mode="after")
    def _ops_in_range(self) -> "Circuit":
        for op in self.ops:
            check_targets(self.n, op.targets, op.gate.arity)
        return self

    def __len__(self) -> int:
        return len(self.ops)

    def append(self, gate: Gate, targets: Sequence[int]) -> "Circuit":
        """Append one gate; returns self so builders can chain."""
        check_targets(self.n, targets, gate.arity)
        self.ops.append(CircuitOp(gate=gate, targets=tuple(targets)))
        return self

    def extend(self, other: "Circuit") -> "Circuit":
        """Append every op of ``other`` (same line count) after ours."""
        if other.n != self.n:
            raise DimensionError(f"cannot join circuits on {self.n} and {other.n} lines")
        self.ops.extend(other.ops)
        return self

    def to_json_dict(self) -> Dict[str, Any]:
        return {"n": self.n, "ops": [op.to_json_dict() for op in self.ops]}

    @classmethod
    def from_json_dict(cls, data: Dict[str, Any]) -> "Circuit":
        ops = [
            CircuitOp(gate=Gate.from_json_dict(item), targets=tuple(item["targets"]))
            for item in data["ops"]
        ]
        return cls(n=data["n"], ops=ops)


def compose(circuits: Iterable[Circuit]) -> Circuit:
    """Concatenate circuits in application order."""
    circuits = list(circuits)
    if not circuits:
        raise ParameterError("nothing to compose")
    result = Circuit(n=circuits[0].n)
    for circuit in circuits:
        result.extend(circuit)
    return result


def run(circuit: Circuit, state: StateVector) -> StateVector:
    if state.n != circuit.n:
        raise DimensionError(
            f"circuit acts on {circuit.n} qubits, state has {state.n}"
        )
    amplitudes = state.amplitudes
    for op in circuit.ops:
        amplitudes = apply_matrix(amplitudes, op.gate.matrix, op.targets, circuit.n)
    return StateVector(amplitudes, check_norm=False)


def inverse(circuit: Circuit) -> Circuit:
    ops = [
        CircuitOp(gate=op.gate.dagger(), targets=op.targets)
        for op in reversed(circuit.ops)
    ]
    return Circuit(n=circuit.n, ops=ops)


def unitary_of(circuit: Circuit) -> np.ndarray:
    """Dense matrix of the whole circuit, built by running it on every basis column."""
    if circuit.n > MAX_UNITARY_QUBITS:
        raise DimensionError(
            f"dense unitaries are limited to {MAX_UNITARY_QUBITS} qubits, got {circuit.n}"
        )
    matrix = np.eye(2**circuit.n, dtype=np.complex128)
    for op in circuit.ops:
        matrix = apply_matrix(matrix, op.gate.matrix, op.targets, circuit.n)
    return matrix


def cut_crossings(circuit: Circuit, cut: int) -> int:
    """Two-qubit gates with one target above and one below the line cut."""
    if not 1 <= cut < circuit.n:
        raise ParameterError(f"cut position {cut} must lie in 1..{circuit.n - 1}")
    return sum(
        1
        for op in circuit.ops
        if len(op.targets) == 2 and min(op.targets) < cut <= max(op.targets)
    )


def layers(circuit: Circuit) -> List[List[CircuitOp]]:
    """Greedy earliest-layer schedule in build order."""
    free = [0] * circuit.n
    scheduled: List[List[CircuitOp]] = []
    for op in circuit.ops:
        layer = max(free[t] for t in op.targets)
        if layer == len(scheduled):
            scheduled.append([])
        scheduled[layer].append(op)
        for t in op.targets:
            free[t] = layer + 1
    return scheduled


def stats(circuit: Circuit) -> CircuitStats:
    labels = Counter(op.gate.label.value for op in circuit.ops)
    return CircuitStats(
        total_gates=len(circuit.ops),
        gates_by_label=dict(sorted(labels.items())),
        two_qubit_gates=sum(1 for op in circuit.ops if len(op.targets) == 2),
        depth=len(layers(circuit)),
        cut_crossings={c: cut_crossings(circuit, c) for c in range(1, circuit.n)},
    )


def site_dependent_gates(circuit: Circuit) -> int:
    """Gates whose parameters depend on momentum (Fourier and Bogoliubov)."""
    return sum(1 for op in circuit.ops if op.gate.site_dependent)
