"""Disentangling circuits: Bogoliubov layer followed by the fermionic FFT.

Line conventions
----------------
Each input line of a disentangler carries one momentum k. The Fourier
network maps the fermion on that line to

    f_k^dagger = n^(-1/2) sum_j exp(-2 pi i k j / n) c_j^dagger

and the Bogoliubov layer rotates each pair (k, -k) into its quasi-particle
vacuum, so a computational basis state on the input lines becomes an
eigenstate of the chain. The zero-momentum mode has no gate; when its
angle is pi the particle/hole flip is carried by the prepared basis state.
"""

import itertools
import logging
from functools import lru_cache
from typing import Dict, Hashable, List, Optional, Sequence, Tuple

import numpy as np

from .circuit import Circuit, CircuitOp
from .errors import ConventionError, DegenerateGroundStateError, DimensionError, ParameterError
from .gates import GateLabel, bogoliubov_gate, fourier_gate, fswap, fuse, phase_evolution_gate
from .models import (
    BogoliubovAngle,
    BoundarySign,
    ConventionChoice,
    ConventionResolution,
    ModelParams,
    ModeLabeling,
    ModeTable,
    OccupationSign,
    is_power_of_two,
    momentum_range,
)
from .oracle import verify_diagonalization
from .pauli import build_xy_hamiltonian
from .spectrum import ZERO_MODE_TOL, mode_table

logger = logging.getLogger(__name__)

PROBE_LAMBDAS = (0.0, 0.5, 1.5)
PROBE_GAMMAS = (1.0, 0.5)
RESOLUTION_TOL = 1e-10
DEPTH_CONSTANT = 2


def _check_n(n: int) -> None:
    if n < 2 or not is_power_of_two(n):
        raise ParameterError("n must be a power of two")


def signed_momentum(label: int, n: int) -> int:
    """Map a label in 0..n-1 onto -n/2+1..n/2."""
    label %= n
    return label - n if label > n // 2 else label


def butterfly_input_order(m: int) -> List[int]:
    """Labels 0..m-1 in the order the butterfly expects them on its input lines."""
    if m == 1:
        return [0]
    return [
        label
        for inner in butterfly_input_order(m // 2)
        for label in (inner + m // 2, inner)
    ]


def route(
    circuit: Circuit,
    base: int,
    current: Sequence[Hashable],
    target: Sequence[Hashable],
) -> None:
    """Permute line contents from ``current`` to ``target`` with adjacent fSWAPs.

    Uses odd-even transposition sort, so the swaps come in at most
    len(current) parallel layers.
    """
    if sorted(map(repr, current)) != sorted(map(repr, target)):
        raise ParameterError("routing needs the same items on both sides")
    position = [list(target).index(item) for item in current]
    size = len(position)
    for sweep in range(size):
        swapped = False
        for i in range(sweep % 2, size - 1, 2):
            if position[i] > position[i + 1]:
                position[i], position[i + 1] = position[i + 1], position[i]
                circuit.append(fswap(), (base + i, base + i + 1))
                swapped = True
        if not swapped and position == sorted(position):
            break


def _fourier_block(circuit: Circuit, base: int, m: int, shifts: List[int], n: int) -> None:
    # shifts[kappa] is the exponent s of the phase exp(-2 pi i s / n) this
    # block must attach to output mode kappa
    half = m // 2
    order = butterfly_input_order(half)
    for i, inner in enumerate(order):
        k = n // 2 + shifts[inner] - shifts[inner + half]
        circuit.append(fourier_gate(k, n), (base + 2 * i, base + 2 * i + 1))
    if m == 2:
        return

    stacked = [(part, i) for i in range(half) for part in ("even", "odd")]
    route(circuit, base, stacked, sorted(stacked))
    _fourier_block(circuit, base, half, shifts[:half], n)
    odd_shifts = [shifts[inner] + inner * (n // m) for inner in range(half)]
    _fourier_block(circuit, base + half, half, odd_shifts, n)
    sites = [*range(0, m, 2), *range(1, m, 2)]
    route(circuit, base, sites, list(range(m)))


def build_fourier_network(n: int) -> Tuple[Circuit, ModeLabeling]:
    """Fermionic FFT on n adjacent lines and the momentum each input line carries."""
    _check_n(n)
    circuit = Circuit(n=n)
    _fourier_block(circuit, 0, n, [0] * n, n)
    labels = [signed_momentum(label, n) for label in butterfly_input_order(n)]
    return circuit, ModeLabeling(lines=labels)


def pairing_order(lines: Sequence[int], n: int) -> List[int]:
    """Reorder momenta so every k is immediately followed by -k."""
    placed: List[int] = []
    for k in lines:
        if k in placed:
            continue
        placed.append(k)
        partner = signed_momentum(-k, n)
        if partner != k:
            placed.append(partner)
    return placed


def disentangler_labeling(n: int) -> ModeLabeling:
    """Momenta on the input lines of the disentangler."""
    _, fourier_labels = build_fourier_network(n)
    return ModeLabeling(lines=pairing_order(fourier_labels.lines, n))


def build_bogoliubov_layer(
    params: ModelParams, labeling: ModeLabeling, convention: ConventionChoice
) -> Circuit:
    """Bogoliubov gates on adjacent (k, -k) pairs, routed to the FFT input order."""
    n = params.n
    if labeling.n != n:
        raise DimensionError(f"labeling covers {labeling.n} lines, chain has {n}")
    _, fourier_labels = build_fourier_network(n)
    paired = pairing_order(labeling.lines, n)

    circuit = Circuit(n=n)
    route(circuit, 0, labeling.lines, paired)
    line = 0
    while line < n:
        k = paired[line]
        gate = bogoliubov_gate(k, params, convention.bogoliubov_angle)
        if gate.arity == 2:
            circuit.append(gate, (line, line + 1))
            line += 2
            continue
        if k != 0:
            circuit.append(gate, (line,))
        line += 1
    route(circuit, 0, paired, fourier_labels.lines)
    return circuit


def default_convention(n: int, convention: Optional[ConventionChoice]) -> ConventionChoice:
    """The explicit choice, else the stored one, else a fresh search for n <= 4."""
    if convention is not None:
        return convention
    from .state import convention_store

    stored = convention_store.get()
    if stored is not None:
        return stored
    if n > 4:
        raise ConventionError(
            f"conventions must be resolved before building at n={n}"
        )
    return resolve_conventions(4)


def build_disentangler(
    params: ModelParams, convention: Optional[ConventionChoice] = None
) -> Tuple[Circuit, ModeTable]:
    """U_dis as a program: the Bogoliubov layer, then the Fourier network."""
    convention = default_convention(params.n, convention)
    labeling = disentangler_labeling(params.n)
    circuit = build_bogoliubov_layer(params, labeling, convention)
    fourier, _ = build_fourier_network(params.n)
    circuit.extend(fourier)
    return circuit, mode_table(params)


def fuse_bogoliubov(circuit: Circuit) -> Circuit:
    """Fold each Bogoliubov gate into the next two-qubit gate covering its lines."""
    fused = Circuit(n=circuit.n)
    pending: List[CircuitOp] = []

    def flush(lines: Sequence[int]) -> None:
        for op in [p for p in pending if set(p.targets) & set(lines)]:
            pending.remove(op)
            fused.append(op.gate, op.targets)

    for op in circuit.ops:
        if op.gate.label == GateLabel.BOGOLIUBOV:
            flush(op.targets)
            pending.append(op)
            continue
        absorbed = [p for p in pending if set(p.targets) <= set(op.targets)]
        flush([t for p in pending if p not in absorbed for t in p.targets if t in op.targets])
        if absorbed and len(op.targets) == 2:
            for p in absorbed:
                pending.remove(p)
            factors = [
                (p.gate, [op.targets.index(t) for t in p.targets]) for p in absorbed
            ]
            fused.append(fuse([*factors, (op.gate, [0, 1])]), op.targets)
        else:
            flush(op.targets)
            fused.append(op.gate, op.targets)
    flush(list(range(circuit.n)))
    return fused


def build_ising4(lam: float, convention: Optional[ConventionChoice] = None) -> Circuit:
    """Six-gate transverse-field Ising disentangler on four lines."""
    params = ModelParams(n=4, lam=lam, gamma=1.0)
    circuit, _ = build_disentangler(params, convention)
    return fuse_bogoliubov(circuit)


def flipped_lines(params: ModelParams, labeling: ModeLabeling) -> List[bool]:
    """Lines whose empty state is the excited level of their mode."""
    table = mode_table(params)
    return [
        k == 0 and table.mode(0).theta > np.pi / 2 for k in labeling.lines
    ]


def occupied_bits(params: ModelParams, convention: ConventionChoice) -> List[int]:
    """Per input line, the computational bit that means 'quasi-particle present'."""
    labeling = disentangler_labeling(params.n)
    minus = convention.occupation_sign == OccupationSign.MINUS
    return [
        int(not (flip ^ minus)) for flip in flipped_lines(params, labeling)
    ]


def occupation_to_index(
    params: ModelParams, occupation: Sequence[int], convention: ConventionChoice
) -> int:
    """Basis index whose image is the eigenstate with the given occupation.

    ``occupation`` lists n_k in momentum order -n/2+1..n/2.
    """
    n = params.n
    if len(occupation) != n:
        raise DimensionError(f"occupation has {len(occupation)} entries, expected {n}")
    if any(bit not in (0, 1) for bit in occupation):
        raise ParameterError("occupations must be 0 or 1")
    by_momentum = dict(zip(momentum_range(n), occupation))
    labeling = disentangler_labeling(n)
    index = 0
    for k, occupied in zip(labeling.lines, occupied_bits(params, convention)):
        bit = occupied if by_momentum[k] else 1 - occupied
        index = (index << 1) | bit
    return index


def predicted_energies(params: ModelParams, convention: ConventionChoice) -> np.ndarray:
    """Energy of the eigenstate each basis index is mapped to."""
    n = params.n
    table = mode_table(params)
    labeling = disentangler_labeling(n)
    index = np.arange(2**n)
    energies = np.zeros(2**n)
    for line, (k, occupied) in enumerate(
        zip(labeling.lines, occupied_bits(params, convention))
    ):
        bit = (index >> (n - 1 - line)) & 1
        present = bit == occupied
        energies += np.where(present, 1.0, -1.0) * table.mode(k).omega
    return energies


def initial_basis_state(
    params: ModelParams, convention: Optional[ConventionChoice] = None
) -> int:
    """Basis index that the disentangler maps onto the ground state."""
    convention = default_convention(params.n, convention)
    table = mode_table(params)
    index = occupation_to_index(params, [0] * params.n, convention)
    labeling = disentangler_labeling(params.n)
    free = [
        labeling.line_of(mode.k) for mode in table.modes if mode.omega <= ZERO_MODE_TOL
    ]
    if free:
        others = tuple(index ^ (1 << (params.n - 1 - line)) for line in free)
        raise DegenerateGroundStateError(
            f"zero modes on lines {free}: ground space is degenerate",
            (index, *others),
        )
    return index


def phase_layer(params: ModelParams, t: float, convention: ConventionChoice) -> Circuit:
    """exp(-i t H_free) as one phase gate per line."""
    labeling = disentangler_labeling(params.n)
    table = mode_table(params)
    circuit = Circuit(n=params.n)
    for line, (k, occupied) in enumerate(
        zip(labeling.lines, occupied_bits(params, convention))
    ):
        circuit.append(phase_evolution_gate(table.mode(k).omega, t, occupied), (line,))
    return circuit


def convention_space() -> List[ConventionChoice]:
    return [
        ConventionChoice(bogoliubov_angle=a, boundary_sign=b, occupation_sign=o)
        for a, b, o in itertools.product(BogoliubovAngle, BoundarySign, OccupationSign)
    ]


def convention_residual(
    choice: ConventionChoice, n: int, tol: float = RESOLUTION_TOL
) -> float:
    """Worst verification residual of ``choice`` over the probe grid."""
    worst = 0.0
    for lam, gamma in itertools.product(PROBE_LAMBDAS, PROBE_GAMMAS):
        params = ModelParams(n=n, lam=lam, gamma=gamma)
        circuit, table = build_disentangler(params, choice)
        report = verify_diagonalization(
            circuit,
            build_xy_hamiltonian(params, choice.boundary_sign),
            table,
            tol,
            convention=choice,
            predicted=predicted_energies(params, choice),
            params=params,
        )
        worst = max(worst, report.residual)
    return worst


def search_conventions(n: int = 4, tol: float = RESOLUTION_TOL) -> ConventionResolution:
    """Try every convention on the probe grid; exactly one must survive."""
    _check_n(n)
    residuals: Dict[str, float] = {}
    survivors = []
    for choice in convention_space():
        residual = convention_residual(choice, n, tol)
        residuals[choice.label] = residual
        logger.debug("convention %s residual %.3e", choice.label, residual)
        if residual <= tol:
            survivors.append(choice)
    if len(survivors) != 1:
        raise ConventionError(
            f"{len(survivors)} conventions pass the probe grid at tol {tol:g}",
            residuals,
        )
    logger.info("resolved conventions at n=%d: %s", n, survivors[0].label)
    return ConventionResolution(choice=survivors[0], n=n, tol=tol, residuals=residuals)


@lru_cache(maxsize=None)
def resolve_conventions(n: int = 4) -> ConventionChoice:
    return search_conventions(n).choice


def depth_bound(n: int) -> int:
    """c * n * log2(n) with the project constant c."""
    return DEPTH_CONSTANT * n * (n.bit_length() - 1)
