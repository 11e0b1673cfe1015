"""Gate library: fermionic swap, Fourier, Bogoliubov and phase gates.

A Gate stores the parameters it was built from; its matrix is always
recomputed from them, so a JSON round-trip reproduces the entries bit for
bit. Two-qubit matrices use the basis |00>, |01>, |10>, |11> with the first
target as the high bit.
"""

import math
from enum import Enum
from typing import Any, Dict, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, model_validator

from .errors import ParameterError
from .models import BogoliubovAngle, ModelParams, is_power_of_two
from .spectrum import bogoliubov_angle, momentum_phase
from .statevector import apply_matrix

UNITARY_TOL = 1e-12

_SQRT_HALF = 1.0 / math.sqrt(2.0)


class GateLabel(str, Enum):
    FSWAP = "FSWAP"
    FOURIER = "FOURIER"
    BOGOLIUBOV = "BOGOLIUBOV"
    PHASE = "PHASE"
    CUSTOM = "CUSTOM"


class Factor(BaseModel):
    """A gate acting on some wires of an enclosing CUSTOM gate."""

    model_config = ConfigDict(frozen=True)

    gate: "Gate"
    wires: Tuple[int, ...]


class Gate(BaseModel):
    """Parameterized one- or two-qubit unitary."""

    model_config = ConfigDict(frozen=True)

    label: GateLabel
    arity: int
    k: Optional[int] = None
    n: Optional[int] = None
    theta: Optional[float] = None
    omega_t: Optional[float] = None
    adjoint: bool = False
    factors: Tuple[Factor, ...] = ()

    @model_validator(mode="after")
    def _check_unitary(self) -> "Gate":
        if self.arity not in (1, 2):
            raise ValueError(f"gate arity must be 1 or 2, got {self.arity}")
        matrix = self.matrix
        eye = np.eye(matrix.shape[0])
        if np.max(np.abs(matrix.conj().T @ matrix - eye)) > UNITARY_TOL:
            raise ValueError(f"{self.label.value} gate is not unitary")
        return self

    @property
    def matrix(self) -> np.ndarray:
        """Entries rebuilt from the stored parameters."""
        matrix = _build_matrix(self)
        if self.adjoint:
            matrix = matrix.conj().T
        return matrix

    @property
    def site_dependent(self) -> bool:
        """Fourier and Bogoliubov gates carry site/momentum-dependent angles."""
        if self.label == GateLabel.CUSTOM:
            return any(f.gate.site_dependent for f in self.factors)
        return self.label in (GateLabel.FOURIER, GateLabel.BOGOLIUBOV)

    def dagger(self) -> "Gate":
        """The conjugate-transposed gate, kept in parameter form."""
        if self.label == GateLabel.FSWAP:
            return self
        if self.label == GateLabel.PHASE:
            return phase_gate(-self.omega_t)
        if self.label == GateLabel.BOGOLIUBOV:
            return bogoliubov_rotation(-self.theta, self.arity, self.k)
        if self.label == GateLabel.CUSTOM:
            return fuse(
                [(f.gate.dagger(), f.wires) for f in reversed(self.factors)],
                self.arity,
            )
        return Gate(
            label=self.label, arity=self.arity, k=self.k, n=self.n,
            adjoint=not self.adjoint,
        )

    def to_json_dict(self) -> Dict[str, Any]:
        params = {
            name: getattr(self, name)
            for name in ("k", "n", "theta", "omega_t")
            if getattr(self, name) is not None
        }
        data: Dict[str, Any] = {"label": self.label.value, "params": params}
        if self.adjoint:
            data["adjoint"] = True
        if self.factors:
            data["factors"] = [
                {**f.gate.to_json_dict(), "wires": list(f.wires)} for f in self.factors
            ]
        return data

    @classmethod
    def from_json_dict(cls, data: Dict[str, Any]) -> "Gate":
        """Inverse of to_json_dict; arity comes from ``targets`` or ``wires``."""
        label = GateLabel(data["label"])
        params = data.get("params", {})
        factors = tuple(
            Factor(gate=cls.from_json_dict(f), wires=tuple(f["wires"]))
            for f in data.get("factors", ())
        )
        lines = data.get("targets", data.get("wires"))
        if lines is not None:
            arity = len(lines)
        elif label == GateLabel.PHASE:
            arity = 1
        else:
            arity = 2
        return cls(
            label=label,
            arity=arity,
            adjoint=data.get("adjoint", False),
            factors=factors,
            **params,
        )


Factor.model_rebuild()


def _build_matrix(gate: Gate) -> np.ndarray:
    if gate.label == GateLabel.FSWAP:
        return np.array(
            [[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, -1]],
            dtype=np.complex128,
        )
    if gate.label == GateLabel.FOURIER:
        cos_q, sin_q = momentum_phase(gate.k, gate.n)
        alpha = complex(cos_q, sin_q)
        h = _SQRT_HALF
        return np.array(
            [
                [1, 0, 0, 0],
                [0, h, alpha * h, 0],
                [0, h, -alpha * h, 0],
                [0, 0, 0, -alpha],
            ],
            dtype=np.complex128,
        )
    if gate.label == GateLabel.BOGOLIUBOV:
        c, s = math.cos(gate.theta), math.sin(gate.theta)
        if gate.arity == 1:
            return np.array([[c, 1j * s], [1j * s, c]], dtype=np.complex128)
        return np.array(
            [[c, 0, 0, 1j * s], [0, 1, 0, 0], [0, 0, 1, 0], [1j * s, 0, 0, c]],
            dtype=np.complex128,
        )
    if gate.label == GateLabel.PHASE:
        return np.diag(
            [np.exp(-1j * gate.omega_t), np.exp(1j * gate.omega_t)]
        ).astype(np.complex128)
    matrix = np.eye(2**gate.arity, dtype=np.complex128)
    for factor in gate.factors:
        matrix = apply_matrix(matrix, factor.gate.matrix, factor.wires, gate.arity)
    return matrix


def fswap() -> Gate:
    """Fermionic swap: exchanges the two modes, -1 when both are occupied."""
    return Gate(label=GateLabel.FSWAP, arity=2)


def fourier_gate(k: int, n: int) -> Gate:
    """Two-mode Fourier gate with relative phase alpha = exp(2 pi i k / n)."""
    if n < 1 or not is_power_of_two(n):
        raise ParameterError(f"Fourier gates need n a power of two, got {n}")
    return Gate(label=GateLabel.FOURIER, arity=2, k=k % n, n=n)


def bogoliubov_rotation(angle: float, arity: int, k: Optional[int] = None) -> Gate:
    """exp(i angle (|00><11| + |11><00|)) on two lines, or exp(i angle X) on one."""
    return Gate(label=GateLabel.BOGOLIUBOV, arity=arity, theta=angle, k=k)


def bogoliubov_gate(
    k: int, params: ModelParams, angle_convention: BogoliubovAngle
) -> Gate:
    """Bogoliubov gate for momentum k on the first of its lines.

    Pairs (k, -k) get a two-qubit gate whose angle takes the sign of
    gamma * sin(2 pi k / n). The unpaired momenta 0 and n/2 get the
    one-qubit rotation exp(i phi X).
    """
    half = params.n // 2
    if not -half < k <= half:
        raise ParameterError(f"momentum {k} outside -{half - 1}..{half}")
    theta = bogoliubov_angle(k, params)
    angle = theta / 2.0 if angle_convention == BogoliubovAngle.HALF else theta
    if k % half == 0:
        return bogoliubov_rotation(angle, 1, k)
    _, sin_q = momentum_phase(k, params.n)
    return bogoliubov_rotation(math.copysign(angle, params.gamma * sin_q), 2, k)


def phase_gate(omega_t: float) -> Gate:
    """exp(-i omega_t Z)."""
    if not math.isfinite(omega_t):
        raise ParameterError("phase must be finite")
    return Gate(label=GateLabel.PHASE, arity=1, omega_t=omega_t)


def phase_evolution_gate(omega: float, t: float, occupied_bit: int = 1) -> Gate:
    """One mode's share of exp(-i t H_free).

    The line state ``occupied_bit`` has energy +omega, the other -omega.
    """
    if not (math.isfinite(omega) and math.isfinite(t)):
        raise ParameterError("omega and t must be finite")
    omega_t = omega * t
    return phase_gate(-omega_t if occupied_bit else omega_t)


def fuse(factors: Sequence[Tuple[Gate, Sequence[int]]], arity: int = 2) -> Gate:
    """A CUSTOM gate applying ``factors`` in order on local wires."""
    return Gate(
        label=GateLabel.CUSTOM,
        arity=arity,
        factors=tuple(Factor(gate=g, wires=tuple(w)) for g, w in factors),
    )
