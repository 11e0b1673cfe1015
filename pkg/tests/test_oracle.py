"""Tests for the Jacobi eigensolver and the brute-force references."""

import numpy as np
import pytest

from xy_disentangler.circuit import Circuit
from xy_disentangler.errors import (
    DegenerateGroundStateError,
    DimensionError,
    ParameterError,
)
from xy_disentangler.models import ModelParams
from xy_disentangler.oracle import (
    eigh,
    expm_hermitian,
    gibbs_oracle,
    oracle_ground_state,
    oracle_spectrum,
    verify_diagonalization,
)
from xy_disentangler.pauli import build_xy_hamiltonian, single_site
from xy_disentangler.spectrum import many_body_spectrum, mode_table


def random_hermitian(rng, size):
    a = rng.normal(size=(size, size)) + 1j * rng.normal(size=(size, size))
    return (a + a.conj().T) / 2


class TestJacobi:
    """Test the eigensolver against numpy."""

    @pytest.mark.parametrize("size", [1, 2, 5, 16, 33])
    def test_matches_numpy(self, rng, size):
        m = random_hermitian(rng, size)
        values, vectors = eigh(m)
        np.testing.assert_allclose(values, np.linalg.eigvalsh(m), atol=1e-10)
        np.testing.assert_allclose(
            vectors.conj().T @ vectors, np.eye(size), atol=1e-10
        )
        np.testing.assert_allclose(
            (vectors * values) @ vectors.conj().T, m, atol=1e-10
        )

    def test_degenerate_eigenvalues(self):
        m = np.diag([1.0, 1.0, -2.0, 1.0]).astype(complex)
        values, _ = eigh(m)
        np.testing.assert_allclose(values, [-2.0, 1.0, 1.0, 1.0])

    def test_non_hermitian(self):
        with pytest.raises(ParameterError):
            eigh(np.array([[0, 1], [0, 0]]))

    def test_non_square(self):
        with pytest.raises(DimensionError):
            eigh(np.zeros((2, 3)))

    def test_expm_of_pauli_z(self):
        u = expm_hermitian(np.diag([1.0, -1.0]), -0.5j)
        np.testing.assert_allclose(u, np.diag([np.exp(-0.5j), np.exp(0.5j)]), atol=1e-14)


class TestReferences:
    """Test reference spectra, ground states and thermal states."""

    @pytest.mark.parametrize(
        "n,lam,gamma", [(2, 0.5, 1.0), (4, 0.5, 0.5), (4, 1.5, 1.0), (8, 0.3, 0.7)]
    )
    def test_dense_spectrum_matches_free_fermions(self, n, lam, gamma):
        params = ModelParams(n=n, lam=lam, gamma=gamma)
        np.testing.assert_allclose(
            oracle_spectrum(params), many_body_spectrum(params), atol=1e-9
        )

    def test_ground_energy(self):
        params = ModelParams(n=4, lam=0.5, gamma=1.0)
        energy, state = oracle_ground_state(params)
        assert energy == pytest.approx(mode_table(params).e0)
        assert state.norm() == pytest.approx(1.0)

    def test_degenerate_ground_state(self):
        with pytest.raises(DegenerateGroundStateError):
            oracle_ground_state(ModelParams(n=4, lam=1.0, gamma=1.0))

    def test_gibbs_at_infinite_temperature(self):
        m = np.diag([0.0, 1.0, 2.0, 3.0])
        rho = gibbs_oracle(m, 0.0)
        np.testing.assert_allclose(rho.entries, np.eye(4) / 4)

    def test_gibbs_at_large_beta_is_finite(self):
        m = np.diag([-50.0, 50.0])
        rho = gibbs_oracle(m, 100.0)
        np.testing.assert_allclose(rho.entries, np.diag([1.0, 0.0]), atol=1e-12)

    def test_gibbs_negative_beta(self):
        with pytest.raises(ParameterError):
            gibbs_oracle(np.eye(2), -1.0)


class TestVerification:
    """Test the diagonality check itself."""

    def test_identity_circuit_on_diagonal_operator(self):
        params = ModelParams(n=2, lam=0.5, gamma=1.0)
        table = mode_table(params)
        report = verify_diagonalization(Circuit(n=2), single_site(2, 0, "Z"), table)
        assert report.max_offdiag == 0.0
        # the diagonal operator has the wrong spectrum for this chain
        assert not report.passed

    def test_identity_circuit_does_not_diagonalize_chain(self):
        params = ModelParams(n=4, lam=0.5, gamma=0.5)
        report = verify_diagonalization(
            Circuit(n=4), build_xy_hamiltonian(params), mode_table(params)
        )
        assert report.max_offdiag > 0.1
        assert not report.passed

    def test_size_mismatch(self):
        params = ModelParams(n=4, lam=0.5)
        with pytest.raises(DimensionError):
            verify_diagonalization(
                Circuit(n=2), build_xy_hamiltonian(params), mode_table(params)
            )
