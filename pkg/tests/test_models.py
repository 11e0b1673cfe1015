"""Tests for the pydantic records."""

import pytest
from pydantic import ValidationError

from xy_disentangler.models import (
    BogoliubovAngle,
    ConventionChoice,
    ModeLabeling,
    ModelParams,
    OccupationSign,
    ScanRow,
    VerificationReport,
    is_power_of_two,
    momentum_range,
)


class TestModelParams:
    """Test validation of chain parameters."""

    def test_lambda_alias(self):
        params = ModelParams.model_validate({"n": 4, "lambda": 0.5})
        assert params.lam == 0.5
        assert params.gamma == 1.0
        assert params.model_dump(by_alias=True)["lambda"] == 0.5

    @pytest.mark.parametrize("n", [0, 1, 3, 6, 12])
    def test_n_must_be_power_of_two(self, n):
        with pytest.raises(ValidationError, match="n must be a power of two"):
            ModelParams(n=n, lam=0.5)

    def test_non_finite_field(self):
        with pytest.raises(ValidationError):
            ModelParams(n=4, lam=float("nan"))

    def test_log2_and_with_lambda(self):
        params = ModelParams(n=16, lam=0.1, gamma=0.3)
        assert params.k == 4
        moved = params.with_lambda(2.0)
        assert (moved.n, moved.lam, moved.gamma) == (16, 2.0, 0.3)


class TestHelpers:
    def test_power_of_two(self):
        assert [m for m in range(10) if is_power_of_two(m)] == [1, 2, 4, 8]

    def test_momentum_range(self):
        assert momentum_range(2) == [0, 1]
        assert momentum_range(4) == [-1, 0, 1, 2]


class TestRecords:
    """Test convention, labeling and report records."""

    def test_convention_label(self):
        choice = ConventionChoice(
            bogoliubov_angle=BogoliubovAngle.FULL, occupation_sign=OccupationSign.MINUS
        )
        assert choice.label == "FULL/AS_WRITTEN/MINUS"
        assert ConventionChoice().label == "HALF/AS_WRITTEN/PLUS"

    def test_labeling_must_be_bijective(self):
        assert ModeLabeling(lines=[-1, 1, 2, 0]).line_of(2) == 2
        with pytest.raises(ValidationError):
            ModeLabeling(lines=[-1, 1, 1, 0])

    def test_report_pass_alias(self):
        report = VerificationReport(
            max_offdiag=1e-12,
            spectral_error=0.0,
            assignment_error=3e-12,
            tol=1e-10,
            passed=True,
            convention=ConventionChoice(),
        )
        assert report.residual == 3e-12
        assert report.model_dump(by_alias=True)["pass"] is True

    def test_scan_row_rejects_nan(self):
        with pytest.raises(ValidationError):
            ScanRow(lam=0.5, observable="z", site_i=0, value=float("nan"))
