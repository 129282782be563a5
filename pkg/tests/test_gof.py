import math

import numpy as np
import pytest
from scipy import stats

from distributions import AcceleratedModel, LogGevParams, PStableSpec
from errors import (
    InvalidParameterError,
    NegativeLRTError,
    NonConvergenceError,
    UndefinedStatisticError,
)
from gof import (
    ad_limit_cdf,
    ad_statistic,
    bootstrap_p_value,
    cvm_statistic,
    goodness_of_fit,
    ks_statistic,
    lrt,
    pp_qq_points,
)
from inference import FitOptions, FitResult, fit

MODEL = LogGevParams(1.0, 0.5, 0.1)
ONE = AcceleratedModel((MODEL,))
TWO = AcceleratedModel((MODEL, LogGevParams(0.5, 0.5, -0.2)))


@pytest.fixture
def sample():
    return MODEL.sample(400, 17)


class TestStatistics:
    def test_ks_matches_scipy(self, sample):
        result = ks_statistic(sample, MODEL)
        assert result.statistic == pytest.approx(stats.kstest(sample, MODEL.cdf).statistic, rel=1e-12)
        assert 0.0 <= result.p_value <= 1.0
        assert result.method == "ks"

    def test_cvm_matches_scipy(self, sample):
        result = cvm_statistic(sample, MODEL)
        reference = stats.cramervonmises(sample, MODEL.cdf)
        assert result.statistic == pytest.approx(reference.statistic, rel=1e-10)
        assert result.p_value == pytest.approx(reference.pvalue, abs=1e-8)

    def test_ad_formula(self, sample):
        x = np.sort(sample)
        n = x.size
        u = MODEL.cdf(x)
        i = np.arange(1, n + 1)
        expected = -n - np.sum((2 * i - 1) * (np.log(u) + np.log(1.0 - u[::-1]))) / n
        assert ad_statistic(sample, MODEL).statistic == pytest.approx(expected, rel=1e-9)

    @pytest.mark.parametrize("z, level", [(2.492, 0.95), (3.857, 0.99), (1.933, 0.90)])
    def test_ad_limit_quantiles(self, z, level):
        assert ad_limit_cdf(z) == pytest.approx(level, abs=1.5e-3)

    def test_ad_limit_edges(self):
        assert ad_limit_cdf(0.0) == 0.0
        assert ad_limit_cdf(50.0) == pytest.approx(1.0)

    def test_ad_undefined_outside_support(self):
        bounded = LogGevParams(1.0, 0.5, -0.5)
        with pytest.raises(UndefinedStatisticError):
            ad_statistic([2.0, 3.0, math.exp(2.0) * 1.5], bounded)

    def test_goodness_of_fit_order(self, sample):
        results = goodness_of_fit(sample, MODEL, ("ad", "KS"))
        assert list(results) == ["AD", "KS"]

    def test_wrong_model_is_rejected(self, sample):
        results = goodness_of_fit(sample, LogGevParams(1.5, 0.5, 0.1))
        assert all(test.p_value < 0.01 for test in results.values())

    @pytest.mark.parametrize("data, tests", [([], ("KS",)), ([1.0, float("nan")], ("KS",)), ([2.0], ("chi2",))])
    def test_invalid(self, data, tests):
        with pytest.raises(InvalidParameterError):
            goodness_of_fit(data, MODEL, tests)


class TestBootstrap:
    def test_deterministic(self, sample):
        first = bootstrap_p_value(sample, MODEL, "KS", n_boot=49, seed=3)
        second = bootstrap_p_value(sample, MODEL, "KS", n_boot=49, seed=3, threads=1)
        assert first == second
        assert first.p_method == "bootstrap(49)"
        assert 1.0 / 50.0 <= first.p_value <= 1.0
        assert first.statistic == ks_statistic(sample, MODEL).statistic

    def test_with_refit(self, sample):
        def refit(resample):
            return fit("pmax", resample, FitOptions(restarts=1)).model

        result = bootstrap_p_value(sample, MODEL, "CVM", n_boot=9, seed=1, refit=refit)
        assert result.p_method == "bootstrap(9)"

    def test_rejects_zero_replications(self, sample):
        with pytest.raises(InvalidParameterError):
            bootstrap_p_value(sample, MODEL, n_boot=0)


def fit_result(kind, loglik, model, converged=True):
    return FitResult(kind, model, {}, {}, loglik, converged, 1, 0.0, 100)


class TestLRT:
    def test_statistic_and_p_value(self):
        result = lrt(fit_result("pmax", -100.0, ONE), fit_result("acc-pmax", -95.0, TWO))
        assert result.statistic == pytest.approx(10.0)
        assert result.p_value == pytest.approx(stats.chi2.sf(10.0, 3))

    def test_tiny_negative_is_clamped(self):
        result = lrt(fit_result("pmax", -100.0, ONE), fit_result("acc-pmax", -100.0 - 1e-10, TWO))
        assert result.statistic == 0.0
        assert result.p_value == 1.0

    def test_negative_statistic(self):
        with pytest.raises(NegativeLRTError):
            lrt(fit_result("pmax", -100.0, ONE), fit_result("acc-pmax", -101.0, TWO))

    def test_not_nested(self):
        with pytest.raises(InvalidParameterError):
            lrt(fit_result("pmax", -100.0, ONE), fit_result("acc-pmin", -95.0, TWO))
        three = AcceleratedModel((MODEL, MODEL, MODEL))
        with pytest.raises(InvalidParameterError):
            lrt(fit_result("pmax", -100.0, ONE), fit_result("acc-pmax", -95.0, three))

    def test_requires_converged_fits(self):
        with pytest.raises(NonConvergenceError):
            lrt(fit_result("pmax", -100.0, ONE, converged=False), fit_result("acc-pmax", -95.0, TWO))


class TestDiagnostics:
    def test_pp_qq_points(self, sample):
        table = pp_qq_points(sample, MODEL)
        assert list(table.columns) == ["empirical_p", "model_p", "empirical_q", "model_q"]
        assert table["empirical_p"].iloc[0] == pytest.approx(1.0 / 401.0)
        assert np.all(np.diff(table["empirical_q"]) >= 0)
        assert np.allclose(MODEL.cdf(table["model_q"].to_numpy()), table["empirical_p"], rtol=1e-8)

    def test_single_observation(self):
        table = pp_qq_points([2.0], MODEL)
        assert len(table) == 1
        assert table["empirical_p"].iloc[0] == 0.5

    def test_calibrated_data(self):
        p = np.arange(1, 21) / 21.0
        table = pp_qq_points(MODEL.quantile(p), MODEL)
        assert np.allclose(table["model_p"], table["empirical_p"], rtol=0.0, atol=1e-10)
        assert np.allclose(table["model_q"], table["empirical_q"], rtol=1e-12)
        assert np.all(np.diff(table["model_q"]) >= 0)


class TestCalibratedPlacement:
    n = 10
    u = (2 * np.arange(1, 11) - 1) / 20.0

    @pytest.fixture
    def placed(self):
        return MODEL.quantile(self.u)

    def test_ks(self, placed):
        assert ks_statistic(placed, MODEL).statistic == pytest.approx(0.05, abs=1e-9)

    def test_cvm(self, placed):
        assert cvm_statistic(placed, MODEL).statistic == pytest.approx(1.0 / 120.0, abs=1e-9)

    def test_ad_direct_sum(self, placed):
        i = np.arange(1, self.n + 1)
        direct = -self.n - np.sum((2 * i - 1) * (np.log(self.u) + np.log(1.0 - self.u[::-1]))) / self.n
        assert ad_statistic(placed, MODEL).statistic == pytest.approx(direct, rel=1e-8)

    @pytest.mark.parametrize("j", [0, 4, 9])
    @pytest.mark.parametrize("shift", [-0.04, -0.01, 0.02, 0.3])
    def test_moving_one_point_never_lowers_ks(self, j, shift):
        u = self.u.copy()
        u[j] = min(max(u[j] + shift, 1e-6), 1.0 - 1e-6)
        assert ks_statistic(MODEL.quantile(u), MODEL).statistic >= 0.05 - 1e-9


class TestInvariance:
    @pytest.mark.parametrize("c", [0.5, 2.0, 3.0])
    def test_ks_under_power_transform(self, c):
        model = PStableSpec("H1", 3.0)
        x = model.sample(200, 8)
        transformed = model.with_transform(1.0, c)
        before = ks_statistic(x, model).statistic
        after = ks_statistic(x ** (1.0 / c), transformed).statistic
        assert after == pytest.approx(before, rel=1e-9, abs=1e-12)

    def test_ks_under_transform_with_wrong_model(self):
        model = PStableSpec("H1", 3.0)
        x = PStableSpec("H1", 2.0).sample(200, 8)
        transformed = model.with_transform(1.0, 2.0)
        assert ks_statistic(x ** 0.5, transformed).statistic == pytest.approx(
            ks_statistic(x, model).statistic, rel=1e-9, abs=1e-12)


@pytest.mark.slow
def test_bootstrap_p_values_are_roughly_uniform():
    p_values = np.array([
        bootstrap_p_value(MODEL.sample(50, 1000 + j), MODEL, "KS", n_boot=199, seed=j, threads=1).p_value
        for j in range(400)
    ])
    assert 0.02 <= np.mean(p_values < 0.05) <= 0.10
