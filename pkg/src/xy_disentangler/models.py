"""Pydantic records for model parameters, conventions and results."""

import math
from enum import Enum
from typing import Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


def is_power_of_two(n: int) -> bool:
    """Return True for 1, 2, 4, 8, ..."""
    return n >= 1 and n & (n - 1) == 0


def momentum_range(n: int) -> List[int]:
    """Momentum indices k = -n/2+1, ..., n/2."""
    return list(range(-n // 2 + 1, n // 2 + 1))


class BogoliubovAngle(str, Enum):
    """Whether a B gate rotates by theta_k or theta_k/2."""

    FULL = "FULL"
    HALF = "HALF"


class BoundarySign(str, Enum):
    """Sign of the two string boundary terms of the XY Hamiltonian."""

    AS_WRITTEN = "AS_WRITTEN"
    FLIPPED = "FLIPPED"


class OccupationSign(str, Enum):
    """Whether computational |1> on a mode line is an occupied quasi-particle."""

    PLUS = "PLUS"
    MINUS = "MINUS"


class ModelParams(BaseModel):
    """Chain length, transverse field and anisotropy."""

    model_config = ConfigDict(frozen=True, populate_by_name=True)

    n: int
    lam: float = Field(alias="lambda")
    gamma: float = 1.0

    @field_validator("n")
    @classmethod
    def _n_power_of_two(cls, n: int) -> int:
        if n < 2 or not is_power_of_two(n):
            raise ValueError("n must be a power of two")
        return n

    @field_validator("lam", "gamma")
    @classmethod
    def _finite(cls, value: float) -> float:
        if not math.isfinite(value):
            raise ValueError("model parameters must be finite")
        return value

    @property
    def k(self) -> int:
        """log2 of the chain length."""
        return self.n.bit_length() - 1

    def with_lambda(self, lam: float) -> "ModelParams":
        return ModelParams(n=self.n, lam=lam, gamma=self.gamma)


class ConventionChoice(BaseModel):
    """One point of the discrete convention space."""

    model_config = ConfigDict(frozen=True)

    bogoliubov_angle: BogoliubovAngle = BogoliubovAngle.HALF
    boundary_sign: BoundarySign = BoundarySign.AS_WRITTEN
    occupation_sign: OccupationSign = OccupationSign.PLUS

    @property
    def label(self) -> str:
        return "/".join(
            (
                self.bogoliubov_angle.value,
                self.boundary_sign.value,
                self.occupation_sign.value,
            )
        )


class ConventionResolution(BaseModel):
    """Outcome of the convention search."""

    choice: ConventionChoice
    n: int
    tol: float
    residuals: Dict[str, float]


class ModeEntry(BaseModel):
    """Free-fermion data for one momentum."""

    model_config = ConfigDict(frozen=True)

    k: int
    theta: float
    omega: float = Field(ge=0.0)


class ModeTable(BaseModel):
    """All modes of a chain plus the normal-ordering constant."""

    model_config = ConfigDict(frozen=True)

    n: int
    modes: List[ModeEntry]
    e0: float

    @model_validator(mode="after")
    def _check_modes(self) -> "ModeTable":
        if sorted(mode.k for mode in self.modes) != momentum_range(self.n):
            raise ValueError("mode momenta must be exactly -n/2+1..n/2")
        expected = -sum(mode.omega for mode in self.modes)
        if abs(self.e0 - expected) > 1e-12 * max(1.0, abs(expected)):
            raise ValueError("e0 must equal minus the sum of omega")
        return self

    def mode(self, k: int) -> ModeEntry:
        for mode in self.modes:
            if mode.k == k:
                return mode
        raise KeyError(k)

    def excitation(self, k: int) -> float:
        """Energy of one quasi-particle in mode k (twice omega_k)."""
        return 2.0 * self.mode(k).omega


class ModeLabeling(BaseModel):
    """Momentum carried by each circuit input line."""

    model_config = ConfigDict(frozen=True)

    lines: List[int]

    @model_validator(mode="after")
    def _check_bijective(self) -> "ModeLabeling":
        n = len(self.lines)
        if not is_power_of_two(n) or sorted(self.lines) != momentum_range(n):
            raise ValueError("labeling must be a bijection onto -n/2+1..n/2")
        return self

    @property
    def n(self) -> int:
        return len(self.lines)

    def line_of(self, k: int) -> int:
        return self.lines.index(k)


class VerificationReport(BaseModel):
    """How well a circuit conjugates H into a diagonal matrix."""

    model_config = ConfigDict(populate_by_name=True)

    max_offdiag: float = Field(ge=0.0)
    spectral_error: float = Field(ge=0.0)
    assignment_error: float = Field(ge=0.0)
    tol: float
    passed: bool = Field(alias="pass")
    convention: ConventionChoice
    params: Optional[ModelParams] = None

    @property
    def residual(self) -> float:
        return max(self.max_offdiag, self.spectral_error, self.assignment_error)


class CircuitStats(BaseModel):
    """Structural counts of a circuit."""

    total_gates: int
    gates_by_label: Dict[str, int]
    two_qubit_gates: int
    depth: int
    cut_crossings: Dict[int, int]


class ScanRow(BaseModel):
    """One observable value at one field strength."""

    model_config = ConfigDict(populate_by_name=True)

    lam: float = Field(alias="lambda")
    observable: str
    site_i: int
    site_j: Optional[int] = None
    value: float

    @field_validator("value")
    @classmethod
    def _finite_value(cls, value: float) -> float:
        if not math.isfinite(value):
            raise ValueError("scan values must be finite")
        return value


class ScanResult(BaseModel):
    """Rows of a lambda scan in emission order."""

    rows: List[ScanRow] = Field(default_factory=list)


class EigenLevel(BaseModel):
    """A many-body level labelled by its quasi-particle occupation."""

    occupation: List[int]
    energy: float
