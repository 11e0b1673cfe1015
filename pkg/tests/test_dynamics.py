"""Tests for eigenstates, evolution, thermal states and scans."""

import numpy as np
import pytest

from xy_disentangler.dynamics import (
    evolution_circuit,
    evolve,
    gibbs_state,
    lambda_grid,
    low_energy_occupations,
    observables_for,
    prepare_eigenstate,
    scan_correlators,
    thermal_expectation,
)
from xy_disentangler.errors import DimensionError, ParameterError
from xy_disentangler.models import ModelParams
from xy_disentangler.oracle import (
    expm_hermitian,
    gibbs_oracle,
    hamiltonian_matrix,
    oracle_ground_state,
)
from xy_disentangler.pauli import (
    apply_pauli_sum,
    build_xy_hamiltonian,
    pauli_sum_to_matrix,
    single_site,
)
from xy_disentangler.spectrum import mode_table
from xy_disentangler.statevector import StateVector, expectation, trace_distance


class TestEigenstates:
    """Test preparation of eigenstates from occupations."""

    @pytest.mark.parametrize(
        "occupation", [[0, 0, 0, 0], [1, 0, 0, 0], [0, 1, 1, 0], [1, 1, 1, 1]]
    )
    def test_is_eigenstate_with_predicted_energy(self, convention, occupation):
        params = ModelParams(n=4, lam=0.6, gamma=0.8)
        state, energy = prepare_eigenstate(params, occupation, convention)
        h = build_xy_hamiltonian(params)
        np.testing.assert_allclose(
            apply_pauli_sum(state, h), energy * state.amplitudes, atol=1e-10
        )

    def test_vacuum_energy(self, convention):
        params = ModelParams(n=8, lam=1.3, gamma=0.5)
        _, energy = prepare_eigenstate(params, [0] * 8, convention)
        assert energy == pytest.approx(mode_table(params).e0)


class TestEvolution:
    """Test constant-depth time evolution against the dense exponential."""

    @pytest.mark.parametrize("t", [0.0, 0.37, 5.0])
    def test_matches_oracle(self, convention, rng, t):
        params = ModelParams(n=4, lam=0.8, gamma=0.6)
        state = StateVector.random(4, rng)
        evolved = evolve(state, params, t, convention)
        reference = expm_hermitian(hamiltonian_matrix(params), -1j * t) @ state.amplitudes
        np.testing.assert_allclose(evolved.amplitudes, reference, atol=1e-9)

    def test_gate_count_independent_of_time(self, convention):
        params = ModelParams(n=8, lam=0.8, gamma=0.6)
        counts = {len(evolution_circuit(params, t, convention)) for t in (0.1, 10.0, 1e4)}
        assert len(counts) == 1

    def test_energy_is_conserved(self, convention, rng):
        params = ModelParams(n=8, lam=0.4, gamma=1.0)
        h = build_xy_hamiltonian(params)
        state = StateVector.random(8, rng)
        evolved = evolve(state, params, 3.0, convention)
        assert expectation(evolved, h) == pytest.approx(expectation(state, h), abs=1e-9)

    def test_evolution_composes(self, convention, rng):
        params = ModelParams(n=4, lam=1.3, gamma=0.5)
        state = StateVector.random(4, rng)
        stepped = evolve(evolve(state, params, 0.6, convention), params, 1.9, convention)
        direct = evolve(state, params, 2.5, convention)
        np.testing.assert_allclose(stepped.amplitudes, direct.amplitudes, atol=1e-10)

    def test_width_mismatch(self, convention):
        with pytest.raises(DimensionError):
            evolve(StateVector.basis(2, 0), ModelParams(n=4, lam=0.5), 1.0, convention)

    def test_non_finite_time(self, convention):
        with pytest.raises(ParameterError):
            evolution_circuit(ModelParams(n=4, lam=0.5), float("inf"), convention)


class TestThermalStates:
    """Test Gibbs states built through the disentangler."""

    @pytest.mark.parametrize("beta", [0.0, 0.5, 3.0])
    def test_matches_oracle(self, convention, beta):
        params = ModelParams(n=4, lam=0.9, gamma=0.7)
        rho = gibbs_state(params, beta, convention)
        reference = gibbs_oracle(hamiltonian_matrix(params), beta)
        assert trace_distance(rho, reference) < 1e-9

    @pytest.mark.parametrize("beta", [0.3, 2.0])
    def test_commutes_with_hamiltonian(self, convention, beta):
        params = ModelParams(n=4, lam=1.5, gamma=0.8)
        rho = gibbs_state(params, beta, convention).entries
        h = pauli_sum_to_matrix(build_xy_hamiltonian(params))
        assert np.max(np.abs(rho @ h - h @ rho)) < 1e-10

    def test_large_beta_approaches_ground_energy(self, convention):
        params = ModelParams(n=4, lam=0.5, gamma=1.0)
        energy = thermal_expectation(
            params, 200.0, build_xy_hamiltonian(params), convention
        )
        assert energy == pytest.approx(mode_table(params).e0, abs=1e-9)

    def test_negative_beta(self, convention):
        with pytest.raises(ParameterError):
            gibbs_state(ModelParams(n=4, lam=0.5), -0.1, convention)

    def test_size_limit(self, convention):
        with pytest.raises(DimensionError):
            gibbs_state(ModelParams(n=16, lam=0.5), 1.0, convention)


class TestObservables:
    """Test observable selection."""

    def test_pair_correlators(self):
        selected = observables_for(4, ["xx"])
        assert [(i, j) for _, i, j, _ in selected] == [
            (0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3),
        ]

    def test_windows(self):
        selected = observables_for(4, ["xxx"])
        assert [(i, j) for _, i, j, _ in selected] == [(0, 2), (1, 3)]
        assert selected[0][3].terms[0].ops.ops == "XXXI"

    def test_single_sites(self):
        selected = observables_for(3, ["z"])
        assert [(i, j) for _, i, j, _ in selected] == [(0, None), (1, None), (2, None)]

    def test_unknown_family(self):
        with pytest.raises(ParameterError):
            observables_for(4, ["yy"])


class TestScans:
    """Test lambda scans of ground-state observables."""

    def test_lambda_grid(self):
        assert lambda_grid(0.0, 2.0, 5) == [0.0, 0.5, 1.0, 1.5, 2.0]
        assert lambda_grid(0.7, 2.0, 1) == [0.7]
        with pytest.raises(ParameterError):
            lambda_grid(0.0, 1.0, 0)

    def test_rows_in_grid_order(self, convention):
        base = ModelParams(n=4, lam=0.0, gamma=1.0)
        result = scan_correlators(base, [0.2, 0.6, 1.4], ["z", "xx"], convention)
        assert len(result.rows) == 3 * (4 + 6)
        assert [row.lam for row in result.rows[::10]] == [0.2, 0.6, 1.4]
        assert result.rows[0].observable == "z"
        assert result.rows[4].observable == "xx"

    def test_workers_give_same_rows(self, convention):
        base = ModelParams(n=4, lam=0.0, gamma=0.5)
        grid = lambda_grid(0.1, 1.9, 4)
        serial = scan_correlators(base, grid, ["xx"], convention)
        threaded = scan_correlators(base, grid, ["xx"], convention, workers=3)
        assert serial == threaded

    def test_strong_field_polarizes(self, convention):
        """Test that lambda = 10 pins Z near -1 at the doubled bond scale."""
        base = ModelParams(n=4, lam=10.0, gamma=1.0)
        result = scan_correlators(base, [10.0], ["z"], convention)
        _, ground = oracle_ground_state(base)
        for row in result.rows:
            assert -1.0 <= row.value <= -0.997
            reference = expectation(ground, single_site(4, row.site_i, "Z"))
            assert row.value == pytest.approx(reference, abs=1e-8)

    def test_translation_invariance(self, convention):
        base = ModelParams(n=8, lam=0.0, gamma=0.6)
        result = scan_correlators(base, [0.5], ["z"], convention)
        values = [row.value for row in result.rows]
        assert max(values) - min(values) < 1e-9

    def test_adjacent_xx_translation_invariance(self, convention):
        base = ModelParams(n=8, lam=0.0, gamma=0.6)
        result = scan_correlators(base, [0.7], ["xx"], convention)
        adjacent = [row.value for row in result.rows if row.site_j == row.site_i + 1]
        assert len(adjacent) == 7
        assert max(adjacent) - min(adjacent) < 1e-9


class TestLowLevels:
    """Test listing of the lowest many-body levels."""

    def test_vacuum_is_lowest(self):
        params = ModelParams(n=4, lam=0.5, gamma=1.0)
        levels = low_energy_occupations(params, 3)
        assert levels[0].occupation == [0, 0, 0, 0]
        assert levels[0].energy == pytest.approx(mode_table(params).e0)
        # k = 0 has the smallest excitation at this field
        assert levels[1].occupation == [0, 1, 0, 0]
        assert [level.energy for level in levels] == sorted(level.energy for level in levels)

    @pytest.mark.parametrize("n,lam,gamma", [(4, 0.5, 1.0), (8, 1.3, 0.4)])
    def test_all_levels_sum_to_zero(self, n, lam, gamma):
        params = ModelParams(n=n, lam=lam, gamma=gamma)
        levels = low_energy_occupations(params, 2**n)
        assert len(levels) == 2**n
        assert sum(level.energy for level in levels) == pytest.approx(0.0, abs=1e-9)

    def test_count_validation(self):
        with pytest.raises(ParameterError):
            low_energy_occupations(ModelParams(n=4, lam=0.5), 0)

    def test_size_limit(self):
        with pytest.raises(DimensionError):
            low_energy_occupations(ModelParams(n=32, lam=0.5), 1)


class TestScanAgainstOracle:
    """Test scanned ground-state correlators against dense diagonalization."""

    @pytest.mark.parametrize("lam", [0.0, 0.5, 1.5, 2.0])
    def test_correlators_match(self, convention, lam):
        params = ModelParams(n=4, lam=lam, gamma=1.0)
        result = scan_correlators(params, [lam], ["xx", "z"], convention)
        _, ground = oracle_ground_state(params)
        for (family, i, j, operator), row in zip(
            observables_for(4, ["xx", "z"]), result.rows
        ):
            assert (row.observable, row.site_i, row.site_j) == (family, i, j)
            assert row.value == pytest.approx(expectation(ground, operator), abs=1e-8)

    @pytest.mark.parametrize("n", [4, 8])
    def test_full_grid_at_unit_anisotropy(self, convention, n):
        base = ModelParams(n=n, lam=0.0, gamma=1.0)
        # the gap closes at lambda = 1, where the ground state is not unique
        grid = [lam for lam in lambda_grid(0.0, 2.0, 41) if abs(lam - 1.0) > 1e-9]
        assert len(grid) == 40
        selected = observables_for(n, ["xx", "z"])
        result = scan_correlators(base, grid, ["xx", "z"], convention)
        assert len(result.rows) == len(grid) * len(selected)
        for index, lam in enumerate(grid):
            _, ground = oracle_ground_state(base.with_lambda(lam))
            rows = result.rows[index * len(selected) : (index + 1) * len(selected)]
            for (_, _, _, operator), row in zip(selected, rows):
                assert row.lam == lam
                assert row.value == pytest.approx(expectation(ground, operator), abs=1e-8)
