"""Integration tests for the xy-disentangler MCP server tools."""

import pytest
from fastmcp import Client

from xy_disentangler.server import mcp


@pytest.mark.asyncio
async def test_resolve_conventions_then_status(tmp_path):
    """Test that resolving stores the convention and reports it in the status."""
    path = tmp_path / "conventions.json"
    async with Client(mcp) as client:
        result = await client.call_tool(
            "resolve_conventions", {"conventions_path": str(path)}
        )
        assert result.data["status"] == "resolved"
        assert result.data["label"] == "HALF/AS_WRITTEN/PLUS"
        assert len(result.data["residuals"]) == 8
        assert path.exists()

        status = await client.call_tool("get_convention_status", {})
        assert status.data["resolved"] is True
        assert status.data["choice"] == "HALF/AS_WRITTEN/PLUS"


@pytest.mark.asyncio
async def test_build_ising4_circuit():
    """Test that the reduced Ising circuit has six gates."""
    async with Client(mcp) as client:
        result = await client.call_tool("build_circuit", {"n": 4, "lam": 0.6, "ising4": True})
        assert result.data["stats"]["total_gates"] == 6
        assert result.data["stats"]["two_qubit_gates"] == 6
        assert result.data["initial_state"] == 0
        assert result.data["circuit"]["n"] == 4


@pytest.mark.asyncio
async def test_build_circuit_rejects_bad_size():
    async with Client(mcp) as client:
        result = await client.call_tool("build_circuit", {"n": 6, "lam": 0.5})
        assert "power of two" in result.data["error"]


@pytest.mark.asyncio
async def test_verify_circuit():
    """Test that verification passes for an anisotropic chain."""
    async with Client(mcp) as client:
        result = await client.call_tool(
            "verify_circuit", {"n": 8, "lam": 0.4, "gamma": 0.6}
        )
        assert result.data["pass"] is True
        assert result.data["max_offdiag"] < 1e-10


@pytest.mark.asyncio
async def test_get_spectrum_with_levels():
    async with Client(mcp) as client:
        result = await client.call_tool(
            "get_spectrum", {"n": 4, "lam": 0.0, "gamma": 1.0, "levels": 2}
        )
        assert [mode["k"] for mode in result.data["modes"]] == [-1, 0, 1, 2]
        assert result.data["e0"] == pytest.approx(-4.0)
        assert len(result.data["levels"]) == 2


@pytest.mark.asyncio
async def test_evolve_state_against_oracle():
    async with Client(mcp) as client:
        result = await client.call_tool(
            "evolve_state", {"n": 4, "lam": 0.8, "t": 1.3, "check_oracle": True}
        )
        assert result.data["oracle_deviation"] < 1e-8


@pytest.mark.asyncio
async def test_thermal_observable():
    """Test that a very cold chain sits at the ground energy."""
    async with Client(mcp) as client:
        result = await client.call_tool(
            "thermal_observable", {"n": 4, "lam": 0.5, "beta": 200.0}
        )
        spectrum = await client.call_tool("get_spectrum", {"n": 4, "lam": 0.5})
        assert result.data["value"] == pytest.approx(spectrum.data["e0"], abs=1e-9)

        bad = await client.call_tool(
            "thermal_observable", {"n": 4, "lam": 0.5, "beta": 1.0, "observable": "y"}
        )
        assert "error" in bad.data


@pytest.mark.asyncio
async def test_scan_lambda():
    async with Client(mcp) as client:
        result = await client.call_tool(
            "scan_lambda",
            {"n": 4, "lambda_from": 0.0, "lambda_to": 1.0, "steps": 3, "observables": ["z"]},
        )
        assert result.data["row_count"] == 12
        assert result.data["rows"][0]["lambda"] == 0.0
        assert result.data["rows"][-1]["lambda"] == 1.0
