#!/usr/bin/env python3
"""
Example MCP client for the xy-disentangler server.

Connects over stdio, resolves the conventions, builds and verifies a
circuit, then runs the evolution, thermal and scan tools.
"""

import asyncio
import json

from mcp import ClientSession, StdioServerParameters
from mcp.client.stdio import stdio_client


def payload(result):
    """Tool results arrive as JSON text content."""
    text = result.content[0].text
    return json.loads(text) if isinstance(text, str) else text


async def run_client():
    """Run the example MCP client."""
    print("Starting xy-disentangler client example\n")

    server_params = StdioServerParameters(
        command="python",
        args=["-m", "xy_disentangler.server"],
        env=None,
    )

    async with stdio_client(server_params) as (read, write):
        async with ClientSession(read, write) as session:
            await session.initialize()

            tools = await session.list_tools()
            print("Available tools:")
            for tool in tools.tools:
                print(f"  - {tool.name}")
            print()

            print("Resolving conventions...")
            data = payload(await session.call_tool("resolve_conventions", {}))
            if "error" in data:
                print(f"Convention search failed: {data['error']}")
                for label, residual in data.get("residuals", {}).items():
                    print(f"  {label}: {residual:.3e}")
                return
            print(f"  chosen: {data['label']}")
            for label, residual in data["residuals"].items():
                print(f"  {label}: {residual:.3e}")
            print()

            print("Building the four-qubit Ising circuit at lambda = 0.6...")
            data = payload(
                await session.call_tool("build_circuit", {"n": 4, "lam": 0.6, "ising4": True})
            )
            print(f"  gates: {data['stats']['total_gates']}, depth: {data['stats']['depth']}")
            print(f"  prepare basis state |{data['initial_state']:04b}>")
            print()

            print("Verifying the n = 8 disentangler at lambda = 0.4, gamma = 0.6...")
            data = payload(
                await session.call_tool("verify_circuit", {"n": 8, "lam": 0.4, "gamma": 0.6})
            )
            print(f"  pass: {data['pass']}  max off-diagonal: {data['max_offdiag']:.2e}")
            print()

            print("Evolving a random state for t = 2.5...")
            data = payload(
                await session.call_tool(
                    "evolve_state", {"n": 4, "lam": 0.8, "t": 2.5, "check_oracle": True}
                )
            )
            print(f"  gates: {data['gate_count']}  oracle deviation: {data['oracle_deviation']:.2e}")
            print()

            print("Thermal energy at beta = 1...")
            data = payload(
                await session.call_tool("thermal_observable", {"n": 4, "lam": 0.5, "beta": 1.0})
            )
            print(f"  <H> = {data['value']:.6f}")
            print()

            print("Scanning <Z_0> over lambda...")
            data = payload(
                await session.call_tool(
                    "scan_lambda",
                    {"n": 4, "lambda_from": 0.0, "lambda_to": 2.0, "steps": 5, "observables": ["z"]},
                )
            )
            for row in data["rows"]:
                if row["site_i"] == 0:
                    print(f"  lambda = {row['lambda']:.2f}  <Z_0> = {row['value']:+.6f}")
            print()

            print("Error handling: n = 6 is rejected")
            data = payload(await session.call_tool("build_circuit", {"n": 6, "lam": 0.5}))
            print(f"  error: {data.get('error')}")


def main():
    """Main entry point."""
    try:
        asyncio.run(run_client())
    except KeyboardInterrupt:
        print("\nClient interrupted by user")
    except Exception as e:
        print(f"Error running client: {e}")
        import traceback

        traceback.print_exc()


if __name__ == "__main__":
    main()
