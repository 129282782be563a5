"""Goodness-of-fit statistics, the single-vs-accelerated likelihood-ratio test
and P-P/Q-Q diagnostic points.

Statistics are computed from u_i = F(x_(i)) on the order statistics with the
parameters treated as known. ``bootstrap_p_value`` gives the parametric
bootstrap alternative, refitting each resample when a refit callable is
supplied.
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
import pandas as pd
from scipy import special, stats

from errors import (
    InvalidParameterError,
    NegativeLRTError,
    NonConvergenceError,
    UndefinedStatisticError,
)

logger = logging.getLogger(__name__)

TESTS = ("KS", "CVM", "AD")
LRT_DF = 3
LRT_SLACK = 1e-8
DEFAULT_N_BOOT = 999


@dataclass(frozen=True)
class TestResult:
    """Statistic and p-value of one test; ``p_method`` is "asymptotic" or "bootstrap(n)"."""

    __test__ = False

    method: str
    statistic: float
    p_value: float
    p_method: str = "asymptotic"

    def to_dict(self):
        return {
            "method": self.method,
            "statistic": self.statistic,
            "p_value": self.p_value,
            "p_method": self.p_method,
        }


def _sorted_data(data):
    x = np.sort(np.asarray(data, dtype=float).ravel())
    if x.size == 0:
        raise InvalidParameterError("goodness-of-fit needs at least one observation")
    if np.any(np.isnan(x)):
        raise InvalidParameterError("data contain NaN")
    return x


def _clip_p(p):
    return float(min(1.0, max(0.0, p)))


def ks_distance(data, model):
    x = _sorted_data(data)
    n = x.size
    u = np.asarray(model.cdf(x), dtype=float)
    i = np.arange(1, n + 1)
    return float(max(np.max(i / n - u), np.max(u - (i - 1) / n)))


def ks_statistic(data, model):
    """One-sample Kolmogorov-Smirnov D_n with the Kolmogorov limiting p-value."""
    n = np.size(data)
    d = ks_distance(data, model)
    return TestResult("ks", d, _clip_p(special.kolmogorov(np.sqrt(n) * d)))


def cvm_distance(data, model):
    x = _sorted_data(data)
    n = x.size
    u = np.asarray(model.cdf(x), dtype=float)
    i = np.arange(1, n + 1)
    return float(np.sum((u - (2 * i - 1) / (2.0 * n)) ** 2) + 1.0 / (12.0 * n))


def cvm_statistic(data, model):
    """Cramer-von Mises W^2; the p-value uses scipy's limiting distribution."""
    x = _sorted_data(data)
    w2 = cvm_distance(x, model)
    p = stats.cramervonmises(x, lambda v: np.asarray(model.cdf(v), dtype=float)).pvalue
    return TestResult("cvm", w2, _clip_p(p))


def ad_distance(data, model):
    """Anderson-Darling A^2 from log F and log(1 - F) so the tails keep precision."""
    x = _sorted_data(data)
    n = x.size
    log_u = np.asarray(model.log_cdf(x), dtype=float)
    log_1mu = np.asarray(model.log_sf(x), dtype=float)
    if np.any(~np.isfinite(log_u)) or np.any(~np.isfinite(log_1mu)):
        bad = x[~np.isfinite(log_u) | ~np.isfinite(log_1mu)]
        raise UndefinedStatisticError(
            f"Anderson-Darling is undefined: {bad.size} point(s) have F(x) in {{0, 1}}, e.g. x={bad[0]:g}"
        )
    i = np.arange(1, n + 1)
    return float(-n - np.sum((2 * i - 1) * (log_u + log_1mu[::-1])) / n)


def ad_limit_cdf(z):
    """Limiting cdf of A^2 (Marsaglia and Marsaglia polynomial approximation)."""
    if z <= 0.0:
        return 0.0
    if z < 2.0:
        poly = 2.00012 + (0.247105 - (0.0649821 - (0.0347962 - (0.011672 - 0.00168691 * z) * z) * z) * z) * z
        return float(np.exp(-1.2337141 / z) / np.sqrt(z) * poly)
    inner = 1.0776 - (2.30695 - (0.43424 - (0.082433 - (0.008056 - 0.0003146 * z) * z) * z) * z) * z
    return float(np.exp(-np.exp(inner)))


def ad_statistic(data, model):
    a2 = ad_distance(data, model)
    return TestResult("ad", a2, _clip_p(1.0 - ad_limit_cdf(a2)))


_STATISTICS = {"KS": ks_statistic, "CVM": cvm_statistic, "AD": ad_statistic}
_DISTANCES = {"KS": ks_distance, "CVM": cvm_distance, "AD": ad_distance}


def _test_name(name):
    key = str(name).upper()
    if key not in _STATISTICS:
        raise InvalidParameterError(f"unknown test {name!r}; choose from {', '.join(TESTS)}")
    return key


def goodness_of_fit(data, model, tests=TESTS):
    """Run several tests; returns {"KS": TestResult, ...} in the requested order."""
    return {key: _STATISTICS[key](data, model) for key in (_test_name(t) for t in tests)}


def bootstrap_p_value(data, model, test="KS", n_boot=DEFAULT_N_BOOT, seed=42, refit=None, threads=None):
    """Parametric bootstrap p-value (1 + #{T* >= T}) / (n_boot + 1).

    Args:
        data (array): observed sample
        model: fitted model the resamples are drawn from
        test (str): "KS", "CVM" or "AD"
        n_boot (int): bootstrap replications
        seed (int): base seed; replication b uses SeedSequence([seed, b])
        refit (callable): sample -> model; when None the parameters are treated as known
        threads (int): worker threads

    Returns:
        TestResult: observed statistic with the bootstrap p-value
    """
    key = _test_name(test)
    if int(n_boot) < 1:
        raise InvalidParameterError(f"n_boot must be >= 1, got {n_boot}")
    distance = _DISTANCES[key]
    x = _sorted_data(data)
    observed = distance(x, model)

    def replicate(b):
        rng = np.random.default_rng(np.random.SeedSequence([seed, b]))
        resample = model.sample(x.size, rng)
        fitted = model if refit is None else refit(resample)
        try:
            return distance(resample, fitted)
        except UndefinedStatisticError:
            return np.inf

    with ThreadPoolExecutor(max_workers=threads) as pool:
        simulated = np.fromiter(pool.map(replicate, range(int(n_boot))), dtype=float, count=int(n_boot))
    exceed = int(np.sum(simulated >= observed))
    logger.debug("bootstrap %s: %d of %d resamples at or above %.6g", key, exceed, n_boot, observed)
    p = (1.0 + exceed) / (int(n_boot) + 1.0)
    return TestResult(key.lower(), observed, p, f"bootstrap({int(n_boot)})")


def lrt(fit_single, fit_acc):
    """Likelihood-ratio test of a single model against its two-component accelerated extension.

    Args:
        fit_single (FitResult): "pmax" or "pmin" fit
        fit_acc (FitResult): "acc-pmax" or "acc-pmin" fit with k = 2 and the same orientation

    Returns:
        TestResult: 2 (loglik_acc - loglik_single) against chi-square with 3 df
    """
    nested = {"pmax": "acc-pmax", "pmin": "acc-pmin"}
    if nested.get(fit_single.kind) != fit_acc.kind or getattr(fit_acc.model, "k", None) != 2:
        raise InvalidParameterError(
            f"models are not nested: {fit_single.kind} vs {fit_acc.kind} "
            f"(k={getattr(fit_acc.model, 'k', None)})"
        )
    for fit in (fit_single, fit_acc):
        if not fit.converged:
            raise NonConvergenceError(f"{fit.kind} fit did not converge; LRT needs converged fits", fit)
    statistic = 2.0 * (fit_acc.loglik - fit_single.loglik)
    if statistic < -LRT_SLACK:
        raise NegativeLRTError(
            f"negative LRT statistic {statistic:.6g}: the accelerated fit is worse than the single fit"
        )
    if statistic < 0.0:
        statistic = 0.0
    return TestResult("lrt", statistic, float(stats.chi2.sf(statistic, LRT_DF)))


def pp_qq_points(data, model):
    """P-P and Q-Q coordinates at plotting positions i / (n + 1)."""
    x = _sorted_data(data)
    n = x.size
    p = np.arange(1, n + 1) / (n + 1.0)
    return pd.DataFrame({
        "empirical_p": p,
        "model_p": np.asarray(model.cdf(x), dtype=float),
        "empirical_q": x,
        "model_q": np.asarray(model.quantile(p), dtype=float),
    })
