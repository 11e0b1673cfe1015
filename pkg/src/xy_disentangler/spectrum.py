"""Free-fermion solution of the XY chain: angles, dispersion and levels."""

import math
from typing import List, Tuple

import numpy as np
from pydantic import BaseModel

from .errors import DimensionError
from .models import ModeEntry, ModelParams, ModeTable, momentum_range

SINGULAR_OMEGA = 1e-14
ZERO_MODE_TOL = 1e-12
MAX_ENUMERATED_QUBITS = 24


def momentum_phase(k: int, n: int) -> Tuple[float, float]:
    """(cos, sin) of 2*pi*k/n, exact on multiples of a quarter turn."""
    quarter, rest = divmod(4 * k, n)
    if rest == 0:
        return ((1.0, 0.0), (0.0, 1.0), (-1.0, 0.0), (0.0, -1.0))[quarter % 4]
    angle = 2.0 * math.pi * k / n
    return math.cos(angle), math.sin(angle)


def dispersion(k: int, params: ModelParams) -> float:
    """omega_k = sqrt((lambda - cos q)^2 + gamma^2 sin^2 q), q = 2 pi k / n."""
    cos_q, sin_q = momentum_phase(k, params.n)
    return math.hypot(params.lam - cos_q, params.gamma * sin_q)


def bogoliubov_angle(k: int, params: ModelParams) -> float:
    """theta_k = arccos((cos q - lambda) / omega_k), or 0 where omega_k vanishes."""
    omega = dispersion(k, params)
    if omega <= SINGULAR_OMEGA:
        return 0.0
    cos_q, _ = momentum_phase(k, params.n)
    return math.acos(min(1.0, max(-1.0, (cos_q - params.lam) / omega)))


def mode_table(params: ModelParams) -> ModeTable:
    modes = [
        ModeEntry(k=k, theta=bogoliubov_angle(k, params), omega=dispersion(k, params))
        for k in momentum_range(params.n)
    ]
    return ModeTable(n=params.n, modes=modes, e0=-sum(mode.omega for mode in modes))


def occupation_energy(table: ModeTable, occupation: List[int]) -> float:
    """e0 plus 2*omega_k for every occupied mode (occupation in momentum order)."""
    if len(occupation) != table.n:
        raise DimensionError(
            f"occupation has {len(occupation)} entries, expected {table.n}"
        )
    energy = table.e0
    for mode, bit in zip(table.modes, occupation):
        if bit:
            energy += 2.0 * mode.omega
    return energy


def many_body_spectrum(params: ModelParams) -> np.ndarray:
    """All 2^n levels e0 + sum_k n_k * 2 omega_k, ascending."""
    if params.n > MAX_ENUMERATED_QUBITS:
        raise DimensionError(
            f"level enumeration is limited to {MAX_ENUMERATED_QUBITS} modes"
        )
    return spectrum_levels(mode_table(params))


def spectrum_levels(table: ModeTable) -> np.ndarray:
    """Sorted many-body levels of a mode table."""
    levels = np.array([table.e0])
    for mode in table.modes:
        levels = np.concatenate((levels, levels + 2.0 * mode.omega))
    return np.sort(levels)


class GroundOccupation(BaseModel):
    """Lowest-energy quasi-particle occupation."""

    occupation: List[int]
    energy: float
    zero_modes: List[int]

    @property
    def degenerate(self) -> bool:
        return bool(self.zero_modes)


def ground_occupation(params: ModelParams) -> GroundOccupation:
    """The quasi-particle vacuum; modes with omega_k ~ 0 are reported free."""
    table = mode_table(params)
    return GroundOccupation(
        occupation=[0] * params.n,
        energy=table.e0,
        zero_modes=[mode.k for mode in table.modes if mode.omega <= ZERO_MODE_TOL],
    )
