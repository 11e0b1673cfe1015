"""Eigenstates, time evolution, thermal states and observable scans."""

import itertools
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .builder import (
    build_disentangler,
    default_convention,
    occupation_to_index,
    phase_layer,
    predicted_energies,
)
from .circuit import Circuit, compose, inverse, run, unitary_of
from .errors import DimensionError, ParameterError
from .models import ConventionChoice, EigenLevel, ModelParams, ScanResult, ScanRow
from .pauli import PauliSum, multi_site, single_site
from .spectrum import MAX_ENUMERATED_QUBITS, mode_table, occupation_energy
from .statevector import DensityMatrix, StateVector, expectation, expectation_mixed

logger = logging.getLogger(__name__)

MAX_THERMAL_QUBITS = 10
MAX_LISTED_QUBITS = 16

OBSERVABLE_FAMILIES = ("xx", "z", "x", "xxx", "xxxx")


def prepare_eigenstate(
    params: ModelParams,
    occupation: Sequence[int],
    convention: Optional[ConventionChoice] = None,
) -> Tuple[StateVector, float]:
    """Eigenstate with quasi-particle occupation n_k (momentum order) and its energy."""
    convention = default_convention(params.n, convention)
    circuit, table = build_disentangler(params, convention)
    index = occupation_to_index(params, occupation, convention)
    state = run(circuit, StateVector.basis(params.n, index))
    return state, occupation_energy(table, list(occupation))


def evolution_circuit(
    params: ModelParams, t: float, convention: Optional[ConventionChoice] = None
) -> Circuit:
    """U_dis^dagger, one phase gate per line, then U_dis."""
    if not math.isfinite(t):
        raise ParameterError("t must be finite")
    convention = default_convention(params.n, convention)
    circuit, _ = build_disentangler(params, convention)
    return compose([inverse(circuit), phase_layer(params, t, convention), circuit])


def evolve(
    state: StateVector,
    params: ModelParams,
    t: float,
    convention: Optional[ConventionChoice] = None,
) -> StateVector:
    """exp(-i t H) |psi> with a t-independent gate count."""
    if state.n != params.n:
        raise DimensionError(f"state has {state.n} qubits, chain has {params.n}")
    return run(evolution_circuit(params, t, convention), state)


def gibbs_state(
    params: ModelParams, beta: float, convention: Optional[ConventionChoice] = None
) -> DensityMatrix:
    """exp(-beta H) / Z, built as U_dis exp(-beta H_free) U_dis^dagger.

    Weights are shifted by the lowest level, which cancels in the
    normalization and keeps large beta finite.
    """
    if not math.isfinite(beta) or beta < 0:
        raise ParameterError(f"beta must be finite and non-negative, got {beta}")
    if params.n > MAX_THERMAL_QUBITS:
        raise DimensionError(
            f"thermal states are limited to {MAX_THERMAL_QUBITS} qubits"
        )
    convention = default_convention(params.n, convention)
    circuit, _ = build_disentangler(params, convention)
    u = unitary_of(circuit)
    energies = predicted_energies(params, convention)
    weights = np.exp(-beta * (energies - energies.min()))
    rho = (u * (weights / weights.sum())) @ u.conj().T
    return DensityMatrix(0.5 * (rho + rho.conj().T))


def thermal_expectation(
    params: ModelParams,
    beta: float,
    observable: PauliSum,
    convention: Optional[ConventionChoice] = None,
) -> float:
    return expectation_mixed(gibbs_state(params, beta, convention), observable)


def observables_for(n: int, families: Iterable[str]) -> List[Tuple[str, int, Optional[int], PauliSum]]:
    """(family, site_i, site_j, operator) for every requested observable.

    ``xx`` covers all pairs i < j; ``z`` and ``x`` every site; ``xxx`` and
    ``xxxx`` contiguous windows reported by their first and last site.
    """
    selected = []
    for family in families:
        if family not in OBSERVABLE_FAMILIES:
            raise ParameterError(
                f"unknown observable {family!r}; expected one of {', '.join(OBSERVABLE_FAMILIES)}"
            )
        if family == "xx":
            for i, j in itertools.combinations(range(n), 2):
                selected.append((family, i, j, multi_site(n, (i, j), "X")))
        elif family in ("z", "x"):
            for i in range(n):
                selected.append((family, i, None, single_site(n, i, family.upper())))
        else:
            width = len(family)
            for i in range(n - width + 1):
                sites = range(i, i + width)
                selected.append((family, i, i + width - 1, multi_site(n, sites, "X")))
    return selected


def lambda_grid(start: float, stop: float, steps: int) -> List[float]:
    if steps < 1:
        raise ParameterError("steps must be at least 1")
    if steps == 1:
        return [float(start)]
    return [float(x) for x in np.linspace(start, stop, steps)]


def _scan_point(
    params: ModelParams,
    convention: Optional[ConventionChoice],
    selected: List[Tuple[str, int, Optional[int], PauliSum]],
) -> List[ScanRow]:
    state, _ = prepare_eigenstate(params, [0] * params.n, convention)
    return [
        ScanRow(
            lam=params.lam,
            observable=family,
            site_i=i,
            site_j=j,
            value=expectation(state, operator),
        )
        for family, i, j, operator in selected
    ]


def scan_correlators(
    base: ModelParams,
    lambdas: Sequence[float],
    observables: Sequence[str] = ("xx", "z"),
    convention: Optional[ConventionChoice] = None,
    workers: int = 1,
) -> ScanResult:
    """Ground-state observables over a grid of transverse fields.

    Grid points are independent; with ``workers > 1`` they run on a
    thread pool and rows still come back in grid order.
    """
    convention = default_convention(base.n, convention)
    selected = observables_for(base.n, observables)
    points = [base.with_lambda(lam) for lam in lambdas]
    logger.debug("scanning %d lambda points, %d observables", len(points), len(selected))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(lambda p: _scan_point(p, convention, selected), points))
    else:
        chunks = [_scan_point(p, convention, selected) for p in points]
    return ScanResult(rows=[row for chunk in chunks for row in chunk])


def low_energy_occupations(params: ModelParams, count: int) -> List[EigenLevel]:
    """The ``count`` lowest many-body levels with their occupations."""
    if count < 1:
        raise ParameterError("count must be at least 1")
    if params.n > min(MAX_LISTED_QUBITS, MAX_ENUMERATED_QUBITS):
        raise DimensionError(f"level listing is limited to {MAX_LISTED_QUBITS} modes")
    table = mode_table(params)
    n = params.n
    index = np.arange(2**n)
    bits = (index[:, None] >> np.arange(n - 1, -1, -1)) & 1
    energies = table.e0 + bits @ np.array([2.0 * mode.omega for mode in table.modes])
    order = np.argsort(energies, kind="stable")[:count]
    return [
        EigenLevel(occupation=[int(b) for b in bits[i]], energy=float(energies[i]))
        for i in order
    ]
