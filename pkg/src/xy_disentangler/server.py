"""MCP tool server exposing the disentangler operations through fastmcp."""

from typing import List, Optional

import anyio
import numpy as np
from fastmcp import Context, FastMCP
from pydantic import ValidationError

from xy_disentangler.builder import (
    build_disentangler,
    build_ising4,
    depth_bound,
    initial_basis_state,
    predicted_energies,
)
from xy_disentangler.circuit import site_dependent_gates, stats
from xy_disentangler.dynamics import (
    evolution_circuit,
    evolve,
    lambda_grid,
    low_energy_occupations,
    scan_correlators,
    thermal_expectation,
)
from xy_disentangler.errors import DegenerateGroundStateError, DisentanglerError
from xy_disentangler.models import ConventionChoice, ModelParams
from xy_disentangler.oracle import expm_hermitian, verify_diagonalization
from xy_disentangler.pauli import (
    build_xy_hamiltonian,
    pauli_sum_to_matrix,
    single_site,
)
from xy_disentangler.spectrum import mode_table
from xy_disentangler.state import convention_store
from xy_disentangler.statevector import StateVector, expectation

mcp = FastMCP("xy-disentangler")

TOOL_ERRORS = (DisentanglerError, ValidationError, ValueError)


async def _convention(ctx: Context) -> ConventionChoice:
    choice = convention_store.get()
    if choice is None:
        await ctx.info("No conventions resolved yet, running the search at n=4")
        resolution = await anyio.to_thread.run_sync(convention_store.resolve)
        choice = resolution.choice
        await ctx.info(f"Resolved conventions: {choice.label}")
    return choice


@mcp.tool()
async def resolve_conventions(
    ctx: Context, reresolve: bool = False, conventions_path: Optional[str] = None
) -> dict:
    """Resolve the angle, boundary and occupation conventions.

    Args:
        reresolve: Run the search even if a record is already held
        conventions_path: Optional JSON file to read from or write to

    Returns:
        Dictionary with the chosen convention and every candidate's residual
    """
    await ctx.info(
        f"Client {ctx.client_id or 'Unknown'} resolving conventions "
        f"(reresolve={reresolve})"
    )
    try:
        resolution = await anyio.to_thread.run_sync(
            lambda: convention_store.resolve(path=conventions_path, reresolve=reresolve)
        )
    except DisentanglerError as e:
        await ctx.error(f"Convention resolution failed: {e}")
        return {"error": str(e), "residuals": getattr(e, "residuals", {})}

    await ctx.debug(f"Residuals: {resolution.residuals}")
    return {
        "status": "resolved",
        "convention": resolution.choice.model_dump(mode="json"),
        "label": resolution.choice.label,
        "residuals": resolution.residuals,
    }


@mcp.tool()
async def get_convention_status(ctx: Context) -> dict:
    """Report whether a convention is held in memory and where it came from."""
    await ctx.info(f"Client {ctx.client_id or 'Unknown'} requesting convention status")
    return convention_store.get_stats()


@mcp.tool()
async def build_circuit(
    n: int, lam: float, ctx: Context, gamma: float = 1.0, ising4: bool = False
) -> dict:
    """Build the disentangling circuit for an XY chain.

    Args:
        n: Chain length, a power of two
        lam: Transverse field lambda
        gamma: Anisotropy
        ising4: Emit the reduced four-qubit Ising circuit instead

    Returns:
        Dictionary with the circuit JSON, gate statistics and the basis
        state to prepare for the ground state
    """
    await ctx.info(f"Building circuit n={n} lambda={lam} gamma={gamma} ising4={ising4}")
    try:
        convention = await _convention(ctx)
        if ising4:
            params = ModelParams(n=4, lam=lam, gamma=1.0)
            circuit = build_ising4(lam, convention)
        else:
            params = ModelParams(n=n, lam=lam, gamma=gamma)
            circuit, _ = build_disentangler(params, convention)
        try:
            initial: Optional[int] = initial_basis_state(params, convention)
        except DegenerateGroundStateError as e:
            await ctx.warning(str(e))
            initial = None
        summary = stats(circuit)
        await ctx.debug(f"Circuit has {summary.total_gates} gates, depth {summary.depth}")
        return {
            "convention": convention.model_dump(mode="json"),
            "circuit": circuit.to_json_dict(),
            "stats": {
                **summary.model_dump(mode="json"),
                "site_dependent_gates": site_dependent_gates(circuit),
                "depth_bound": depth_bound(params.n),
            },
            "initial_state": initial,
        }
    except TOOL_ERRORS as e:
        await ctx.error(f"Error building circuit: {e}")
        return {"error": str(e)}


@mcp.tool()
async def verify_circuit(
    n: int, lam: float, ctx: Context, gamma: float = 1.0, tol: float = 1e-10
) -> dict:
    """Check that the circuit conjugates H into a diagonal matrix."""
    await ctx.info(f"Verifying n={n} lambda={lam} gamma={gamma} tol={tol}")
    try:
        convention = await _convention(ctx)
        params = ModelParams(n=n, lam=lam, gamma=gamma)

        def work() -> dict:
            circuit, table = build_disentangler(params, convention)
            report = verify_diagonalization(
                circuit,
                build_xy_hamiltonian(params, convention.boundary_sign),
                table,
                tol,
                convention=convention,
                predicted=predicted_energies(params, convention),
                params=params,
            )
            return report.model_dump(mode="json", by_alias=True)

        report = await anyio.to_thread.run_sync(work)
        if not report["pass"]:
            await ctx.warning(f"Verification failed at n={n} lambda={lam}")
        return report
    except TOOL_ERRORS as e:
        await ctx.error(f"Error verifying circuit: {e}")
        return {"error": str(e)}


@mcp.tool()
async def get_spectrum(
    n: int, lam: float, ctx: Context, gamma: float = 1.0, levels: int = 0
) -> dict:
    """Single-mode energies and, optionally, the lowest many-body levels."""
    await ctx.info(f"Spectrum for n={n} lambda={lam} gamma={gamma}")
    try:
        params = ModelParams(n=n, lam=lam, gamma=gamma)
        table = mode_table(params)
        result = table.model_dump(mode="json")
        if levels:
            result["levels"] = [
                level.model_dump() for level in low_energy_occupations(params, levels)
            ]
        return result
    except TOOL_ERRORS as e:
        await ctx.error(f"Error computing spectrum: {e}")
        return {"error": str(e)}


@mcp.tool()
async def evolve_state(
    n: int,
    lam: float,
    t: float,
    ctx: Context,
    gamma: float = 1.0,
    seed: int = 7,
    check_oracle: bool = False,
) -> dict:
    """Evolve a seeded random state by exp(-itH) with the constant-depth circuit."""
    await ctx.info(f"Evolving n={n} lambda={lam} t={t} seed={seed}")
    try:
        convention = await _convention(ctx)
        params = ModelParams(n=n, lam=lam, gamma=gamma)

        def work() -> dict:
            state = StateVector.random(n, np.random.default_rng(seed))
            h = build_xy_hamiltonian(params, convention.boundary_sign)
            evolved = evolve(state, params, t, convention)
            result = {
                "t": t,
                "gate_count": len(evolution_circuit(params, t, convention)),
                "energy_before": expectation(state, h),
                "energy_after": expectation(evolved, h),
            }
            if check_oracle:
                reference = expm_hermitian(pauli_sum_to_matrix(h), -1j * t) @ state.amplitudes
                result["oracle_deviation"] = float(
                    np.linalg.norm(evolved.amplitudes - reference)
                )
            return result

        return await anyio.to_thread.run_sync(work)
    except TOOL_ERRORS as e:
        await ctx.error(f"Error evolving state: {e}")
        return {"error": str(e)}


@mcp.tool()
async def thermal_observable(
    n: int,
    lam: float,
    beta: float,
    ctx: Context,
    gamma: float = 1.0,
    observable: str = "energy",
    site: int = 0,
) -> dict:
    """Thermal expectation of the energy or of Z/X on one site."""
    await ctx.info(f"Thermal {observable} at beta={beta}, n={n}, lambda={lam}")
    try:
        convention = await _convention(ctx)
        params = ModelParams(n=n, lam=lam, gamma=gamma)
        if observable == "energy":
            operator = build_xy_hamiltonian(params, convention.boundary_sign)
        elif observable in ("z", "x"):
            operator = single_site(n, site, observable.upper())
        else:
            await ctx.warning(f"Unknown thermal observable: {observable}")
            return {"error": f"unknown observable {observable!r}; use energy, z or x"}
        value = await anyio.to_thread.run_sync(
            lambda: thermal_expectation(params, beta, operator, convention)
        )
        return {"beta": beta, "observable": observable, "site": site, "value": value}
    except TOOL_ERRORS as e:
        await ctx.error(f"Error computing thermal observable: {e}")
        return {"error": str(e)}


@mcp.tool()
async def scan_lambda(
    n: int,
    ctx: Context,
    gamma: float = 1.0,
    lambda_from: float = 0.0,
    lambda_to: float = 2.0,
    steps: int = 41,
    observables: Optional[List[str]] = None,
) -> dict:
    """Ground-state observables over a lambda grid, computed in a worker thread."""
    families = observables or ["xx", "z"]
    await ctx.info(
        f"Scanning n={n} gamma={gamma} lambda {lambda_from}..{lambda_to} "
        f"({steps} steps) for {families}"
    )
    try:
        convention = await _convention(ctx)
        base = ModelParams(n=n, lam=lambda_from, gamma=gamma)
        grid = lambda_grid(lambda_from, lambda_to, steps)
        result = await anyio.to_thread.run_sync(
            lambda: scan_correlators(base, grid, families, convention)
        )
        await ctx.debug(f"Scan produced {len(result.rows)} rows")
        return {
            "row_count": len(result.rows),
            "rows": result.model_dump(mode="json", by_alias=True)["rows"],
        }
    except TOOL_ERRORS as e:
        await ctx.error(f"Error scanning lambda: {e}")
        return {"error": str(e)}


def main():
    """Run the xy-disentangler MCP server."""
    mcp.run()


if __name__ == "__main__":
    main()
