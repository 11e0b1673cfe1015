"""Brute-force reference results for checking the circuits.

The eigensolver is a complex cyclic Jacobi method with a round-robin
ordering: every round rotates n/2 disjoint index pairs at once, which
numpy applies as whole-column and whole-row updates.
"""

import logging
import math
from typing import List, Optional, Tuple

import numpy as np

from .circuit import Circuit, unitary_of
from .errors import ConvergenceError, DegenerateGroundStateError, DimensionError, ParameterError
from .models import ConventionChoice, ModelParams, ModeTable, VerificationReport
from .pauli import PauliSum, build_xy_hamiltonian, pauli_sum_to_matrix
from .spectrum import spectrum_levels
from .statevector import DensityMatrix, StateVector

logger = logging.getLogger(__name__)

HERMITIAN_CHECK_TOL = 1e-10
OFF_NORM_TOL = 1e-13
STAGNATION_TOL = 1e-11
MAX_SWEEPS = 100
MAX_VERIFY_QUBITS = 10
GROUND_GAP_TOL = 1e-8


def _round_robin(size: int) -> List[Tuple[np.ndarray, np.ndarray]]:
    """Rounds of disjoint pairs covering every index pair once per sweep."""
    players = list(range(size + (size % 2)))
    count = len(players)
    rounds = []
    for _ in range(count - 1):
        pairs = [
            (players[i], players[count - 1 - i])
            for i in range(count // 2)
            if max(players[i], players[count - 1 - i]) < size
        ]
        rounds.append(
            (np.array([p for p, _ in pairs]), np.array([q for _, q in pairs]))
        )
        players = [players[0], players[-1], *players[1:-1]]
    return rounds


def _off_norm(a: np.ndarray) -> float:
    total = float(np.sum(np.abs(a) ** 2))
    diagonal = float(np.sum(np.abs(np.diag(a)) ** 2))
    return math.sqrt(max(total - diagonal, 0.0))


def check_hermitian(m: np.ndarray) -> np.ndarray:
    m = np.asarray(m, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {m.shape}")
    if m.size and np.max(np.abs(m - m.conj().T)) > HERMITIAN_CHECK_TOL:
        raise ParameterError("matrix is not Hermitian")
    return m


def eigh(m: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Ascending eigenvalues and orthonormal eigenvector columns of a Hermitian matrix."""
    a = check_hermitian(m).copy()
    size = a.shape[0]
    v = np.eye(size, dtype=np.complex128)
    if size < 2:
        return np.real(np.diag(a)).copy(), v

    scale = float(np.linalg.norm(a))
    rounds = _round_robin(size)
    previous = math.inf
    for sweep in range(MAX_SWEEPS + 1):
        off = _off_norm(a)
        if off <= OFF_NORM_TOL * scale:
            break
        if off <= STAGNATION_TOL * scale and off > 0.5 * previous:
            # rounding floor: further sweeps no longer shrink the off-norm
            break
        if sweep == MAX_SWEEPS:
            raise ConvergenceError(
                f"Jacobi did not converge in {MAX_SWEEPS} sweeps (off-norm {off:.3e})"
            )
        previous = off
        for p, q in rounds:
            _rotate(a, v, p, q)
        logger.debug("Jacobi sweep %d off-norm %.3e", sweep, off)

    values = np.real(np.diag(a))
    order = np.argsort(values, kind="stable")
    return values[order], v[:, order]


def _rotate(a: np.ndarray, v: np.ndarray, p: np.ndarray, q: np.ndarray) -> None:
    """Zero a[p, q] for every pair of the round, in place."""
    apq = a[p, q]
    magnitude = np.abs(apq)
    active = magnitude > 0.0
    safe = np.where(active, magnitude, 1.0)
    phase = np.where(active, apq / safe, 1.0)
    tau = (np.real(a[q, q]) - np.real(a[p, p])) / (2.0 * safe)
    t = np.where(
        tau == 0.0, 1.0, np.sign(tau) / (np.abs(tau) + np.sqrt(1.0 + tau**2))
    )
    t = np.where(active, t, 0.0)
    c = 1.0 / np.sqrt(1.0 + t**2)
    s = t * c
    back = np.conj(phase)

    # A <- A J and V <- V J with J = [[c, s], [-s e^-i phi, c e^-i phi]]
    for target in (a, v):
        col_p = target[:, p].copy()
        col_q = target[:, q]
        target[:, p] = c * col_p - (s * back) * col_q
        target[:, q] = s * col_p + (c * back) * col_q
    # A <- J^H A
    row_p = a[p, :].copy()
    row_q = a[q, :]
    a[p, :] = c[:, None] * row_p - (s * phase)[:, None] * row_q
    a[q, :] = s[:, None] * row_p + (c * phase)[:, None] * row_q
    a[p, q] = 0.0
    a[q, p] = 0.0


def expm_hermitian(m: np.ndarray, scale: complex) -> np.ndarray:
    """exp(scale * m) through the eigendecomposition."""
    values, vectors = eigh(m)
    return (vectors * np.exp(scale * values)) @ vectors.conj().T


def gibbs_oracle(m: np.ndarray, beta: float) -> DensityMatrix:
    """exp(-beta m) / Z with the lowest level shifted to zero."""
    if beta < 0 or not math.isfinite(beta):
        raise ParameterError(f"beta must be finite and non-negative, got {beta}")
    values, vectors = eigh(m)
    weights = np.exp(-beta * (values - values[0]))
    rho = (vectors * (weights / weights.sum())) @ vectors.conj().T
    return DensityMatrix(0.5 * (rho + rho.conj().T))


def hamiltonian_matrix(
    params: ModelParams, convention: Optional[ConventionChoice] = None
) -> np.ndarray:
    convention = convention or ConventionChoice()
    return pauli_sum_to_matrix(build_xy_hamiltonian(params, convention.boundary_sign))


def oracle_spectrum(params: ModelParams) -> np.ndarray:
    """Sorted eigenvalues of the dense chain Hamiltonian."""
    values, _ = eigh(hamiltonian_matrix(params))
    return values


def oracle_ground_state(params: ModelParams) -> Tuple[float, StateVector]:
    """Ground energy and state; fails on a degenerate ground space."""
    values, vectors = eigh(hamiltonian_matrix(params))
    if len(values) > 1 and values[1] - values[0] < GROUND_GAP_TOL:
        raise DegenerateGroundStateError(
            f"ground space is degenerate (gap {values[1] - values[0]:.3e})", (0, 1)
        )
    psi = vectors[:, 0]
    return float(values[0]), StateVector(psi / np.linalg.norm(psi))


def verify_diagonalization(
    circuit: Circuit,
    h: PauliSum,
    table: ModeTable,
    tol: float = 1e-10,
    convention: Optional[ConventionChoice] = None,
    predicted: Optional[np.ndarray] = None,
    params: Optional[ModelParams] = None,
) -> VerificationReport:
    """Conjugate h by the circuit unitary and measure how diagonal it is.

    ``predicted`` optionally gives the energy expected at each basis
    index; its worst mismatch is reported as the assignment error.
    """
    if circuit.n != h.n or table.n != h.n:
        raise DimensionError(
            f"circuit ({circuit.n}), operator ({h.n}) and modes ({table.n}) disagree"
        )
    if h.n > MAX_VERIFY_QUBITS:
        raise DimensionError(f"verification is limited to {MAX_VERIFY_QUBITS} qubits")
    u = unitary_of(circuit)
    conjugated = u.conj().T @ pauli_sum_to_matrix(h) @ u
    diagonal = np.real(np.diag(conjugated))
    max_offdiag = float(np.max(np.abs(conjugated - np.diag(np.diag(conjugated)))))
    spectral_error = float(
        np.max(np.abs(np.sort(diagonal) - spectrum_levels(table)))
    )
    assignment_error = 0.0
    if predicted is not None:
        assignment_error = float(np.max(np.abs(diagonal - np.asarray(predicted))))
    return VerificationReport(
        max_offdiag=max_offdiag,
        spectral_error=spectral_error,
        assignment_error=assignment_error,
        tol=tol,
        passed=max(max_offdiag, spectral_error, assignment_error) <= tol,
        convention=convention or ConventionChoice(),
        params=params,
    )
