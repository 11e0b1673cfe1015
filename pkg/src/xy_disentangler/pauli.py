"""Pauli strings, real-weighted Pauli sums and the XY chain Hamiltonian."""

import math
from typing import Iterable, List, Sequence, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator, model_validator

from .errors import DimensionError, ParameterError
from .models import BoundarySign, ModelParams
from .statevector import StateVector

MAX_DENSE_QUBITS = 14

_SYMBOLS = frozenset("IXYZ")


class PauliString(BaseModel):
    """Per-qubit Pauli symbols, qubit 0 first."""

    model_config = ConfigDict(frozen=True)

    ops: str

    @field_validator("ops")
    @classmethod
    def _valid_symbols(cls, ops: str) -> str:
        ops = ops.upper()
        if not ops or set(ops) - _SYMBOLS:
            raise ValueError(f"invalid Pauli string {ops!r}")
        return ops

    @property
    def n(self) -> int:
        return len(self.ops)

    @classmethod
    def from_sites(cls, n: int, sites: Iterable[Tuple[int, str]]) -> "PauliString":
        """Identity everywhere except the given (qubit, symbol) pairs."""
        ops = ["I"] * n
        for site, symbol in sites:
            if not 0 <= site < n:
                raise DimensionError(f"site {site} out of range for {n} qubits")
            ops[site] = symbol
        return cls(ops="".join(ops))

    def masks(self) -> Tuple[int, int, int]:
        """Bit masks (flip, sign, y-count) under the qubit-0-is-MSB order."""
        n = self.n
        flip = sign = 0
        y_count = 0
        for qubit, symbol in enumerate(self.ops):
            bit = 1 << (n - 1 - qubit)
            if symbol in "XY":
                flip |= bit
            if symbol in "YZ":
                sign |= bit
            if symbol == "Y":
                y_count += 1
        return flip, sign, y_count


class PauliTerm(BaseModel):
    model_config = ConfigDict(frozen=True)

    coeff: float
    ops: PauliString

    @field_validator("coeff")
    @classmethod
    def _finite(cls, coeff: float) -> float:
        if not math.isfinite(coeff):
            raise ValueError("Pauli coefficients must be finite")
        return coeff


class PauliSum(BaseModel):
    """Real-weighted sum of Pauli strings on n qubits."""

    model_config = ConfigDict(frozen=True)

    n: int
    terms: Tuple[PauliTerm, ...] = ()

    @model_validator(mode="after")
    def _lengths_match(self) -> "PauliSum":
        for term in self.terms:
            if term.ops.n != self.n:
                raise ValueError(
                    f"term {term.ops.ops} has length {term.ops.n}, expected {self.n}"
                )
        return self

    @classmethod
    def from_terms(
        cls, n: int, terms: Iterable[Tuple[float, Union[str, PauliString]]]
    ) -> "PauliSum":
        """Build a sum, dropping exactly-zero coefficients."""
        kept: List[PauliTerm] = []
        for coeff, ops in terms:
            if coeff == 0.0:
                continue
            if isinstance(ops, str):
                ops = PauliString(ops=ops)
            kept.append(PauliTerm(coeff=coeff, ops=ops))
        return cls(n=n, terms=tuple(kept))

    def __len__(self) -> int:
        return len(self.terms)

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "terms": [{"coeff": t.coeff, "ops": t.ops.ops} for t in self.terms],
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "PauliSum":
        return cls.from_terms(
            data["n"], ((t["coeff"], t["ops"]) for t in data["terms"])
        )


def single_site(n: int, site: int, symbol: str, coeff: float = 1.0) -> PauliSum:
    return PauliSum.from_terms(n, [(coeff, PauliString.from_sites(n, [(site, symbol)]))])


def multi_site(n: int, sites: Sequence[int], symbol: str, coeff: float = 1.0) -> PauliSum:
    """coeff times the product of ``symbol`` on every listed site."""
    string = PauliString.from_sites(n, [(site, symbol) for site in sites])
    return PauliSum.from_terms(n, [(coeff, string)])


def build_xy_hamiltonian(
    params: ModelParams, boundary_sign: BoundarySign = BoundarySign.AS_WRITTEN
) -> PauliSum:
    """XY chain with transverse field and Jordan-Wigner string closure.

    Bulk two-site terms run over i = 0..n-2; the two string terms on
    (0, n-1) carry the periodic closure. At n = 2 the bulk and string terms
    act on the same pair and are kept as separate terms.
    """
    n, lam, gamma = params.n, params.lam, params.gamma
    xx = (1.0 + gamma) / 2.0
    yy = (1.0 - gamma) / 2.0
    sign = 1.0 if boundary_sign == BoundarySign.AS_WRITTEN else -1.0

    terms: List[Tuple[float, PauliString]] = []
    for i in range(n - 1):
        terms.append((xx, PauliString.from_sites(n, [(i, "X"), (i + 1, "X")])))
        terms.append((yy, PauliString.from_sites(n, [(i, "Y"), (i + 1, "Y")])))
    for i in range(n):
        terms.append((lam, PauliString.from_sites(n, [(i, "Z")])))

    middle = [(i, "Z") for i in range(1, n - 1)]
    terms.append(
        (sign * xx, PauliString.from_sites(n, [(0, "Y"), *middle, (n - 1, "Y")]))
    )
    terms.append(
        (sign * yy, PauliString.from_sites(n, [(0, "X"), *middle, (n - 1, "X")]))
    )
    return PauliSum.from_terms(n, terms)


def pauli_string_action(amplitudes: np.ndarray, string: PauliString) -> np.ndarray:
    """P applied to amplitudes of shape (2^n,) or (2^n, batch)."""
    n = string.n
    if amplitudes.shape[0] != 2**n:
        raise DimensionError(
            f"{amplitudes.shape[0]} amplitudes do not match a {n}-qubit string"
        )
    flip, sign_mask, y_count = string.masks()
    index = np.arange(2**n)
    parity = np.zeros(2**n, dtype=np.int64)
    masked = index & sign_mask
    while sign_mask:
        parity ^= masked & 1
        masked >>= 1
        sign_mask >>= 1
    phase = (1j**y_count) * (1 - 2 * parity)
    if amplitudes.ndim > 1:
        phase = phase.reshape((-1,) + (1,) * (amplitudes.ndim - 1))
    result = np.empty_like(amplitudes, dtype=np.complex128)
    result[index ^ flip] = phase * amplitudes
    return result


def pauli_sum_action(amplitudes: np.ndarray, h: PauliSum) -> np.ndarray:
    """H applied to amplitudes of shape (2^n,) or (2^n, batch)."""
    if amplitudes.shape[0] != 2**h.n:
        raise DimensionError(
            f"{amplitudes.shape[0]} amplitudes do not match {h.n} qubits"
        )
    result = np.zeros(amplitudes.shape, dtype=np.complex128)
    for term in h.terms:
        result += term.coeff * pauli_string_action(amplitudes, term.ops)
    return result


def apply_pauli_sum(state: StateVector, h: PauliSum) -> np.ndarray:
    """H|psi> as a raw, unnormalized amplitude array."""
    if state.n != h.n:
        raise DimensionError(f"state has {state.n} qubits, operator has {h.n}")
    return pauli_sum_action(state.amplitudes, h)


def pauli_sum_to_matrix(h: PauliSum) -> np.ndarray:
    """Dense 2^n x 2^n matrix of a Pauli sum."""
    if h.n > MAX_DENSE_QUBITS:
        raise DimensionError(
            f"dense matrices are limited to {MAX_DENSE_QUBITS} qubits, got {h.n}"
        )
    size = 2**h.n
    matrix = np.zeros((size, size), dtype=np.complex128)
    index = np.arange(size)
    for term in h.terms:
        flip, _, _ = term.ops.masks()
        column = pauli_string_action(np.ones(size, dtype=np.complex128), term.ops)
        # column[x ^ flip] is the phase picked up by |x>
        matrix[index ^ flip, index] += term.coeff * column[index ^ flip]
    return matrix


def diagonal_field(omegas: Sequence[float], n: int) -> PauliSum:
    """sum_i omega_i Z_i, the form of an already-free Hamiltonian."""
    if len(omegas) != n:
        raise ParameterError(f"expected {n} field strengths, got {len(omegas)}")
    return PauliSum.from_terms(
        n,
        (
            (float(w), PauliString.from_sites(n, [(i, "Z")]))
            for i, w in enumerate(omegas)
        ),
    )
