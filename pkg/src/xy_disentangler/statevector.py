"""Dense statevectors, density matrices and the gate-application kernel.

Qubit 0 is the most significant bit of a basis index everywhere in this
package: on n qubits, basis index ``x`` has qubit ``q`` in bit ``n - 1 - q``.
Amplitude arrays reshaped to ``(2,) * n`` therefore have axis ``q`` for
qubit ``q``.
"""

from typing import TYPE_CHECKING, Optional, Sequence

import numpy as np

from .errors import DimensionError, ParameterError

if TYPE_CHECKING:
    from .gates import Gate
    from .pauli import PauliSum

NORM_TOL = 1e-12
HERMITIAN_TOL = 1e-12
PSD_TOL = 1e-10
MAX_DENSITY_QUBITS = 12


def check_targets(n: int, targets: Sequence[int], arity: int) -> None:
    """Reject targets that are out of range, repeated or of the wrong count."""
    if len(targets) != arity:
        raise DimensionError(
            f"gate of arity {arity} applied to {len(targets)} targets"
        )
    for target in targets:
        if not 0 <= target < n:
            raise DimensionError(f"target {target} out of range for {n} qubits")
    if len(set(targets)) != len(targets):
        raise DimensionError(f"duplicate targets {list(targets)}")


def apply_matrix(
    amplitudes: np.ndarray, matrix: np.ndarray, targets: Sequence[int], n: int
) -> np.ndarray:
    """Apply a 2^k x 2^k matrix to the target axes of an amplitude array.

    ``amplitudes`` has shape ``(2**n,)`` or ``(2**n, batch)``; a batch axis
    is carried along untouched, which lets the same kernel build full
    circuit unitaries column by column.
    """
    k = len(targets)
    extra = amplitudes.shape[1:]
    psi = amplitudes.reshape((2,) * n + extra)
    op = np.asarray(matrix).reshape((2,) * (2 * k))
    psi = np.tensordot(op, psi, axes=(list(range(k, 2 * k)), list(targets)))
    psi = np.moveaxis(psi, list(range(k)), list(targets))
    return psi.reshape(amplitudes.shape)


class StateVector:
    """Normalized amplitudes of an n-qubit pure state."""

    __slots__ = ("_n", "_amplitudes")

    def __init__(self, amplitudes: np.ndarray, check_norm: bool = True):
        amplitudes = np.array(amplitudes, dtype=np.complex128).reshape(-1)
        size = amplitudes.shape[0]
        if size < 2 or size & (size - 1):
            raise DimensionError(f"amplitude count {size} is not 2^n with n >= 1")
        if check_norm:
            norm = float(np.vdot(amplitudes, amplitudes).real)
            if abs(norm - 1.0) > NORM_TOL:
                raise ParameterError(f"state is not normalized (|psi|^2 = {norm!r})")
        amplitudes.setflags(write=False)
        self._n = size.bit_length() - 1
        self._amplitudes = amplitudes

    @classmethod
    def basis(cls, n: int, index: int = 0) -> "StateVector":
        """Computational basis state |index> on n qubits."""
        if n < 1:
            raise DimensionError("n must be at least 1")
        if not 0 <= index < 2**n:
            raise DimensionError(f"basis index {index} out of range for {n} qubits")
        amplitudes = np.zeros(2**n, dtype=np.complex128)
        amplitudes[index] = 1.0
        return cls(amplitudes)

    @classmethod
    def from_bits(cls, bits: Sequence[int]) -> "StateVector":
        """Basis state with qubit q set to bits[q]."""
        index = 0
        for bit in bits:
            index = (index << 1) | (1 if bit else 0)
        return cls.basis(len(bits), index)

    @classmethod
    def random(cls, n: int, rng: np.random.Generator) -> "StateVector":
        """Haar-like random state from complex Gaussian amplitudes."""
        amplitudes = rng.normal(size=2**n) + 1j * rng.normal(size=2**n)
        return cls(amplitudes / np.linalg.norm(amplitudes))

    @property
    def n(self) -> int:
        return self._n

    @property
    def amplitudes(self) -> np.ndarray:
        return self._amplitudes

    def norm(self) -> float:
        return float(np.linalg.norm(self._amplitudes))

    def distance(self, other: "StateVector") -> float:
        """Euclidean distance between amplitude vectors."""
        _same_size(self.n, other.n)
        return float(np.linalg.norm(self._amplitudes - other._amplitudes))

    def __repr__(self) -> str:
        return f"StateVector(n={self._n})"


class DensityMatrix:
    """Dense mixed state on n qubits."""

    __slots__ = ("_n", "_entries")

    def __init__(self, entries: np.ndarray, validate: bool = True):
        entries = np.array(entries, dtype=np.complex128)
        side = entries.shape[0]
        if entries.ndim != 2 or entries.shape[1] != side or side < 2 or side & (side - 1):
            raise DimensionError(f"density matrix shape {entries.shape} is not 2^n square")
        n = side.bit_length() - 1
        if n > MAX_DENSITY_QUBITS:
            raise DimensionError(f"dense density matrices are limited to {MAX_DENSITY_QUBITS} qubits")
        if validate:
            if np.max(np.abs(entries - entries.conj().T)) > HERMITIAN_TOL:
                raise ParameterError("density matrix is not Hermitian")
            trace = np.trace(entries)
            if abs(trace - 1.0) > NORM_TOL:
                raise ParameterError(f"density matrix trace is {trace!r}, not 1")
            lowest = float(np.linalg.eigvalsh(entries)[0])
            if lowest < -PSD_TOL:
                raise ParameterError(f"density matrix has eigenvalue {lowest!r}")
        entries.setflags(write=False)
        self._n = n
        self._entries = entries

    @classmethod
    def maximally_mixed(cls, n: int) -> "DensityMatrix":
        return cls(np.eye(2**n, dtype=np.complex128) / 2**n)

    @classmethod
    def from_state(cls, state: StateVector) -> "DensityMatrix":
        psi = state.amplitudes
        return cls(np.outer(psi, psi.conj()))

    @property
    def n(self) -> int:
        return self._n

    @property
    def entries(self) -> np.ndarray:
        return self._entries

    def __repr__(self) -> str:
        return f"DensityMatrix(n={self._n})"


def _same_size(a: int, b: int) -> None:
    if a != b:
        raise DimensionError(f"qubit counts differ: {a} != {b}")


def apply_gate(state: StateVector, gate: "Gate", targets: Sequence[int]) -> StateVector:
    """Return the state with ``gate`` applied to ``targets`` (in gate order)."""
    check_targets(state.n, targets, gate.arity)
    amplitudes = apply_matrix(state.amplitudes, gate.matrix, targets, state.n)
    return StateVector(amplitudes, check_norm=False)


def expectation(state: StateVector, observable: "PauliSum") -> float:
    """<psi|O|psi> for a real-weighted Pauli sum."""
    from .pauli import apply_pauli_sum

    action = apply_pauli_sum(state, observable)
    value = np.vdot(state.amplitudes, action)
    if abs(value.imag) > 1e-10:
        raise ParameterError(f"expectation has imaginary part {value.imag!r}")
    return float(value.real)


def expectation_mixed(rho: DensityMatrix, observable: "PauliSum") -> float:
    """trace(rho O) for a real-weighted Pauli sum."""
    from .pauli import pauli_sum_action

    _same_size(rho.n, observable.n)
    action = pauli_sum_action(rho.entries, observable)
    value = np.trace(action)
    if abs(value.imag) > 1e-10:
        raise ParameterError(f"expectation has imaginary part {value.imag!r}")
    return float(value.real)


def fidelity(a: StateVector, b: StateVector) -> float:
    """|<a|b>|^2."""
    _same_size(a.n, b.n)
    return float(abs(np.vdot(a.amplitudes, b.amplitudes)) ** 2)


def trace_distance(a: DensityMatrix, b: DensityMatrix) -> float:
    """Half the trace norm of a - b."""
    _same_size(a.n, b.n)
    return float(0.5 * np.sum(np.abs(np.linalg.eigvalsh(a.entries - b.entries))))


def projector_fidelity(rho: DensityMatrix, state: Optional[StateVector]) -> float:
    """<psi|rho|psi>."""
    if state is None:
        raise ParameterError("a reference state is required")
    _same_size(rho.n, state.n)
    psi = state.amplitudes
    return float(np.vdot(psi, rho.entries @ psi).real)
