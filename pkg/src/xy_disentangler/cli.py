"""Command-line entry point: build, verify, spectrum, evolve, gibbs, scan.

Exit codes: 0 success, 1 verification or convention failure, 2 bad arguments.
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Sequence

import numpy as np
import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from . import __version__
from .builder import (
    build_disentangler,
    build_ising4,
    depth_bound,
    initial_basis_state,
    occupation_to_index,
    predicted_energies,
)
from .circuit import site_dependent_gates, stats
from .dynamics import (
    OBSERVABLE_FAMILIES,
    evolution_circuit,
    evolve,
    gibbs_state,
    lambda_grid,
    low_energy_occupations,
    scan_correlators,
)
from .errors import ConventionError, DegenerateGroundStateError, DisentanglerError
from .formats import csv_table, json_text, levels_csv, scan_csv, spectrum_csv
from .models import ConventionChoice, ModelParams, is_power_of_two
from .oracle import expm_hermitian, gibbs_oracle, hamiltonian_matrix, verify_diagonalization
from .pauli import build_xy_hamiltonian, pauli_sum_to_matrix, single_site
from .spectrum import mode_table, occupation_energy
from .state import convention_store, sidecar_path
from .statevector import StateVector, expectation, expectation_mixed, trace_distance

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2

ORACLE_TOL = 1e-8


class RunConfig(BaseModel):
    """Validated options of one CLI run, from YAML and flags."""

    model_config = ConfigDict(populate_by_name=True)

    command: Literal["build", "verify", "spectrum", "evolve", "gibbs", "scan"]
    n: int = 4
    lam: float = Field(0.5, alias="lambda")
    gamma: float = 1.0
    t: float = 1.0
    beta: List[float] = Field(default_factory=lambda: [1.0])
    lambda_from: float = 0.0
    lambda_to: float = 2.0
    steps: int = 41
    tol: float = 1e-10
    seed: int = 7
    out: Optional[str] = None
    format: Optional[Literal["json", "csv"]] = None
    observables: List[str] = Field(default_factory=lambda: ["xx", "z"])
    levels: Optional[int] = None
    occupation: Optional[List[int]] = None
    ising4: bool = False
    check_oracle: bool = False
    reresolve: bool = False
    conventions_path: Optional[str] = None
    workers: int = 1
    verbose: bool = False

    @field_validator("n")
    @classmethod
    def _n_power_of_two(cls, n: int) -> int:
        if n < 2 or not is_power_of_two(n):
            raise ValueError("n must be a power of two")
        return n

    @field_validator("steps", "workers")
    @classmethod
    def _positive_count(cls, value: int) -> int:
        if value < 1:
            raise ValueError("must be at least 1")
        return value

    @field_validator("tol")
    @classmethod
    def _positive_tol(cls, tol: float) -> float:
        if not tol > 0:
            raise ValueError("tol must be positive")
        return tol

    @field_validator("beta")
    @classmethod
    def _non_negative_beta(cls, betas: List[float]) -> List[float]:
        if any(not b >= 0 for b in betas):
            raise ValueError("beta must be non-negative")
        return betas

    @field_validator("occupation")
    @classmethod
    def _bits(cls, bits: Optional[List[int]]) -> Optional[List[int]]:
        if bits is not None and any(b not in (0, 1) for b in bits):
            raise ValueError("occupation entries must be 0 or 1")
        return bits

    @field_validator("observables")
    @classmethod
    def _known_observables(cls, families: List[str]) -> List[str]:
        unknown = [f for f in families if f not in OBSERVABLE_FAMILIES]
        if unknown:
            raise ValueError(f"unknown observables {unknown}")
        return families

    @model_validator(mode="after")
    def _json_only_documents(self) -> "RunConfig":
        if self.format == "csv" and self.command in ("build", "verify"):
            raise ValueError(f"{self.command} writes JSON only")
        return self

    @property
    def params(self) -> ModelParams:
        return ModelParams(n=self.n, lam=self.lam, gamma=self.gamma)

    def output_format(self) -> str:
        if self.format:
            return self.format
        return "json" if self.command in ("build", "verify") else "csv"


def _float_list(text: str) -> List[float]:
    return [float(item) for item in text.split(",") if item.strip()]


def _bit_list(text: str) -> List[int]:
    return [int(item) for item in text.replace(",", "").strip()]


def _word_list(text: str) -> List[str]:
    return [item.strip().lower() for item in text.split(",") if item.strip()]


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    common.add_argument("--config", help="YAML file of run options")
    common.add_argument("--n", type=int, help="chain length, a power of two")
    common.add_argument("--lambda", dest="lambda", type=float, help="transverse field")
    common.add_argument("--gamma", type=float, help="anisotropy")
    common.add_argument("--tol", type=float)
    common.add_argument("--seed", type=int)
    common.add_argument("--out", help="write output here instead of stdout")
    common.add_argument("--format", choices=("json", "csv"))
    common.add_argument("--conventions", dest="conventions_path", help="convention file")
    common.add_argument("--reresolve", action="store_true", help="redo the convention search")
    common.add_argument("--workers", type=int)
    common.add_argument("--verbose", "-v", action="store_true")

    parser = argparse.ArgumentParser(
        prog="xy-disentangler",
        description="Exact disentangling circuits for the XY spin chain.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def command(name: str, summary: str) -> argparse.ArgumentParser:
        # unset flags must not mask YAML values or RunConfig defaults
        return sub.add_parser(
            name, parents=[common], help=summary, argument_default=argparse.SUPPRESS
        )

    build = command("build", "emit a disentangling circuit")
    build.add_argument("--ising4", action="store_true", help="reduced four-qubit Ising circuit")
    build.add_argument(
        "--occupation",
        type=_bit_list,
        help="prepare this eigenstate instead, n_k in momentum order (e.g. 0100)",
    )

    command("verify", "check that U^dagger H U is diagonal")

    spectrum = command("spectrum", "mode table or lowest levels")
    spectrum.add_argument("--levels", type=int, help="list the N lowest many-body levels")

    evolve_cmd = command("evolve", "time-evolve a random state")
    evolve_cmd.add_argument("--t", type=float)
    evolve_cmd.add_argument("--check-oracle", dest="check_oracle", action="store_true")

    gibbs = command("gibbs", "thermal observables")
    gibbs.add_argument("--beta", type=_float_list, help="comma-separated inverse temperatures")
    gibbs.add_argument("--check-oracle", dest="check_oracle", action="store_true")

    scan = command("scan", "ground-state observables over lambda")
    scan.add_argument("--lambda-from", dest="lambda_from", type=float)
    scan.add_argument("--lambda-to", dest="lambda_to", type=float)
    scan.add_argument("--steps", type=int)
    scan.add_argument(
        "--observable",
        dest="observables",
        type=_word_list,
        help=f"comma-separated subset of {','.join(OBSERVABLE_FAMILIES)}",
    )
    return parser


def load_config(args: argparse.Namespace) -> RunConfig:
    """YAML values first, then any flag given on the command line."""
    options: Dict[str, Any] = {}
    given = vars(args).copy()
    config_file = given.pop("config", None)
    if config_file:
        with open(config_file) as f:
            loaded = yaml.safe_load(f) or {}
        if not isinstance(loaded, dict):
            raise ValueError(f"{config_file} must hold a mapping of options")
        options.update(loaded)
    options.update(given)
    if isinstance(options.get("beta"), (int, float)):
        options["beta"] = [options["beta"]]
    return RunConfig.model_validate(options)


def _emit(config: RunConfig, text: str) -> None:
    if config.out:
        Path(config.out).write_text(text)
    else:
        sys.stdout.write(text)


def _resolve(config: RunConfig) -> ConventionChoice:
    path = sidecar_path(config.out, config.conventions_path)
    return convention_store.resolve(path=path, reresolve=config.reresolve).choice


def cmd_build(config: RunConfig, convention: ConventionChoice) -> int:
    params = config.params
    if config.ising4:
        params = ModelParams(n=4, lam=config.lam, gamma=1.0)
        circuit = build_ising4(config.lam, convention)
    else:
        circuit, _ = build_disentangler(params, convention)
    energy: Optional[float] = None
    if config.occupation is not None:
        initial: Optional[int] = occupation_to_index(params, config.occupation, convention)
        energy = occupation_energy(mode_table(params), config.occupation)
    else:
        try:
            initial = initial_basis_state(params, convention)
        except DegenerateGroundStateError as e:
            logger.warning("%s", e)
            initial = None
    summary = stats(circuit)
    document = {
        "convention": convention.model_dump(mode="json"),
        "params": params.model_dump(mode="json", by_alias=True),
        "occupation": config.occupation,
        "initial_state": initial,
        "energy": energy,
        "circuit": circuit.to_json_dict(),
        "stats": {
            **summary.model_dump(mode="json"),
            "site_dependent_gates": site_dependent_gates(circuit),
            "depth_bound": depth_bound(params.n),
        },
    }
    _emit(config, json_text(document))
    return EXIT_OK


def cmd_verify(config: RunConfig, convention: ConventionChoice) -> int:
    params = config.params
    circuit, table = build_disentangler(params, convention)
    report = verify_diagonalization(
        circuit,
        build_xy_hamiltonian(params, convention.boundary_sign),
        table,
        config.tol,
        convention=convention,
        predicted=predicted_energies(params, convention),
        params=params,
    )
    _emit(config, json_text(report.model_dump(mode="json", by_alias=True)))
    return EXIT_OK if report.passed else EXIT_FAILED


def cmd_spectrum(config: RunConfig, convention: ConventionChoice) -> int:
    params = config.params
    if config.levels is not None:
        levels = low_energy_occupations(params, config.levels)
        if config.output_format() == "json":
            text = json_text({"levels": [level.model_dump() for level in levels]})
        else:
            text = levels_csv(levels)
    else:
        table = mode_table(params)
        text = (
            json_text(table.model_dump(mode="json"))
            if config.output_format() == "json"
            else spectrum_csv(table)
        )
    _emit(config, text)
    return EXIT_OK


def cmd_evolve(config: RunConfig, convention: ConventionChoice) -> int:
    params = config.params
    rng = np.random.default_rng(config.seed)
    state = StateVector.random(params.n, rng)
    h = build_xy_hamiltonian(params, convention.boundary_sign)
    evolved = evolve(state, params, config.t, convention)
    gate_count = len(evolution_circuit(params, config.t, convention))
    deviation: Optional[float] = None
    if config.check_oracle:
        reference = expm_hermitian(pauli_sum_to_matrix(h), -1j * config.t) @ state.amplitudes
        deviation = float(np.linalg.norm(evolved.amplitudes - reference))
    row = (
        config.t,
        gate_count,
        expectation(state, h),
        expectation(evolved, h),
        deviation,
    )
    columns = ("t", "gate_count", "energy_before", "energy_after", "oracle_deviation")
    if config.output_format() == "json":
        _emit(config, json_text(dict(zip(columns, row))))
    else:
        _emit(config, csv_table(columns, [row]))
    if deviation is not None and deviation > ORACLE_TOL:
        logger.error("evolution deviates from the oracle by %.3e", deviation)
        return EXIT_FAILED
    return EXIT_OK


def cmd_gibbs(config: RunConfig, convention: ConventionChoice) -> int:
    params = config.params
    h = build_xy_hamiltonian(params, convention.boundary_sign)
    rows = []
    failed = False
    for beta in config.beta:
        rho = gibbs_state(params, beta, convention)
        rows.append((beta, "energy", None, expectation_mixed(rho, h)))
        for site in range(params.n):
            rows.append(
                (beta, "z", site, expectation_mixed(rho, single_site(params.n, site, "Z")))
            )
        if config.check_oracle:
            distance = trace_distance(rho, gibbs_oracle(hamiltonian_matrix(params, convention), beta))
            rows.append((beta, "oracle_trace_distance", None, distance))
            failed = failed or distance > ORACLE_TOL
    columns = ("beta", "observable", "site_i", "value")
    if config.output_format() == "json":
        _emit(config, json_text({"rows": [dict(zip(columns, r)) for r in rows]}))
    else:
        _emit(config, csv_table(columns, rows))
    return EXIT_FAILED if failed else EXIT_OK


def cmd_scan(config: RunConfig, convention: ConventionChoice) -> int:
    result = scan_correlators(
        config.params,
        lambda_grid(config.lambda_from, config.lambda_to, config.steps),
        config.observables,
        convention,
        workers=config.workers,
    )
    if config.output_format() == "json":
        _emit(config, json_text(result.model_dump(mode="json", by_alias=True)))
    else:
        _emit(config, scan_csv(result))
    return EXIT_OK


HANDLERS = {
    "build": cmd_build,
    "verify": cmd_verify,
    "spectrum": cmd_spectrum,
    "evolve": cmd_evolve,
    "gibbs": cmd_gibbs,
    "scan": cmd_scan,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)

    try:
        config = load_config(args)
    except (ValidationError, ValueError, OSError, yaml.YAMLError) as e:
        print(f"xy-disentangler: error: {e}", file=sys.stderr)
        return EXIT_USAGE

    logging.basicConfig(
        level=logging.DEBUG if config.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )

    try:
        convention = _resolve(config)
    except ConventionError as e:
        print(f"xy-disentangler: convention error: {e}", file=sys.stderr)
        if e.residuals:
            sys.stderr.write(json_text({"residuals": e.residuals}))
        return EXIT_FAILED

    try:
        return HANDLERS[config.command](config, convention)
    except DisentanglerError as e:
        print(f"xy-disentangler: error: {e}", file=sys.stderr)
        return EXIT_USAGE if isinstance(e, ValueError) else EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
