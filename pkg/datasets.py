"""Sample ingestion and named experiment presets.

``load_sample_csv`` reads a one-column file of observations. The presets
are the reference competing-risk configurations; ``simulated_fit_sample``
draws the two accelerated log-GEV samples used to compare single and
accelerated fits.
"""
import logging
import math
import os
from dataclasses import dataclass

import numpy as np
import pandas as pd

from distributions import AcceleratedModel, LogGevParams
from errors import DataFormatError, InvalidParameterError
from normalization import ParentFamily, SizeCoupling
from simulation import DEFAULT_REPLICATIONS, DEFAULT_SEED, CompetingExperiment

logger = logging.getLogger(__name__)


def load_sample_csv(path):
    """
    Read a one-column CSV of observations

    The first row is treated as a header when it is not numeric. Any other
    non-numeric row rejects the file.

    Args:
        path (str): CSV file path

    Returns:
        np.ndarray: the observations in file order

    Raises:
        DataFormatError: empty file, extra columns or non-numeric rows (with 1-based line numbers)
    """
    if not os.path.isfile(path):
        raise DataFormatError(f"data file not found: {path}")
    try:
        raw = pd.read_csv(path, header=None, dtype=str, skip_blank_lines=True,
                          keep_default_na=False)
    except pd.errors.EmptyDataError as exc:
        raise DataFormatError(f"{path} is empty") from exc
    except pd.errors.ParserError as exc:
        raise DataFormatError(f"{path}: {exc}") from exc
    if raw.shape[1] != 1:
        raise DataFormatError(f"{path} has {raw.shape[1]} columns; expected one value per line")
    text = raw.iloc[:, 0].str.strip()
    values = pd.to_numeric(text, errors="coerce")
    line_numbers = np.arange(1, len(text) + 1)
    if len(values) and math.isnan(values.iloc[0]) and text.iloc[0].lower() not in ("nan", ""):
        logger.debug("%s: treating %r as a header", path, text.iloc[0])
        values, text, line_numbers = values.iloc[1:], text.iloc[1:], line_numbers[1:]
    bad = values.isna().to_numpy()
    if bad.any():
        lines = line_numbers[bad].tolist()
        raise DataFormatError(
            f"{path}: non-numeric value(s) on line(s) {', '.join(map(str, lines[:20]))}"
            + (" ..." if len(lines) > 20 else ""),
            lines,
        )
    if values.empty:
        raise DataFormatError(f"{path} contains no observations")
    return values.to_numpy(dtype=float)


@dataclass(frozen=True)
class Scenario:
    """A named competing-risk configuration."""

    name: str
    description: str
    parent1: ParentFamily
    parent2: ParentFamily
    n1: int
    n2: int
    coupling: SizeCoupling
    norm: str = "power"
    normalize_by: int = 2

    def experiment(self, reps=DEFAULT_REPLICATIONS, seed=DEFAULT_SEED, norm=None, orientation="max"):
        return CompetingExperiment(
            parent1=self.parent1,
            parent2=self.parent2,
            n1=self.n1,
            n2=self.n2,
            reps=reps,
            norm=norm or self.norm,
            normalize_by=self.normalize_by,
            orientation=orientation,
            seed=seed,
            coupling=self.coupling,
            label=self.name,
        )


def _lf(alpha):
    return ParentFamily("log-frechet", alpha=alpha)


def _lp(alpha):
    return ParentFamily("log-polynomial", alpha=alpha)


SCENARIOS = {
    s.name: s
    for s in (
        Scenario("logfrechet-b1.5", "log-Frechet(40) & log-Frechet(3), accelerated with B = 1.5",
                 _lf(40), _lf(3), 100_000, 8, SizeCoupling("power", 3 / 40, 1.5 ** 3)),
        Scenario("logfrechet-b1", "log-Frechet(4) & log-Frechet(2), accelerated with B = 1",
                 _lf(4), _lf(2), 10_000, 100, SizeCoupling("power", 0.5)),
        Scenario("logpoly-b0.6", "log-polynomial(20) & log-polynomial(1.7), accelerated with B = 0.6",
                 _lp(20), _lp(1.7), 100_000, 6, SizeCoupling("power", 1.7 / 20, 0.6 ** -1.7)),
        Scenario("logpoly-b1", "log-polynomial(4) & log-polynomial(2), accelerated with B = 1",
                 _lp(4), _lp(2), 10_000, 100, SizeCoupling("power", 0.5)),
        Scenario("uniform-dominant", "U[2,4] & U[1,5], block 2 dominates with a standard uniform limit",
                 ParentFamily("uniform", lower=2, upper=4), ParentFamily("uniform", lower=1, upper=5),
                 100, 100, SizeCoupling("proportional", 1)),
        Scenario("poly-frechet-dominant", "polynomial(4) & Frechet(2), block 2 dominates with a unit Frechet limit",
                 ParentFamily("polynomial", alpha=4), ParentFamily("frechet", alpha=2),
                 100, 100, SizeCoupling("proportional", 1)),
        Scenario("pareto-truncated", "Pareto(2) & log-Frechet(4), left-truncated at x0 = e",
                 ParentFamily("pareto", alpha=2), _lf(4), 10_000, 449,
                 SizeCoupling("log-power", 4, 2.0 ** -4)),
        Scenario("ged-truncated", "general-error(1) & log-Frechet(6), left-truncated at x0 = e",
                 ParentFamily("general-error", nu=1), _lf(6), 10_000, 120,
                 SizeCoupling("loglog-power", 6)),
        Scenario("logpoly-equal", "log-polynomial(4) & log-polynomial(2), n1 = n2 = 10^4",
                 _lp(4), _lp(2), 10_000, 10_000, SizeCoupling("proportional", 1)),
        Scenario("pareto-equal", "Pareto(4) & Pareto(2), n1 = n2 = 10^4",
                 ParentFamily("pareto", alpha=4), ParentFamily("pareto", alpha=2),
                 10_000, 10_000, SizeCoupling("proportional", 1)),
        Scenario("poly-frechet-equal", "polynomial(4) & Frechet(2), n1 = n2 = 10^4",
                 ParentFamily("polynomial", alpha=4), ParentFamily("frechet", alpha=2),
                 10_000, 10_000, SizeCoupling("proportional", 1)),
        *(
            Scenario(f"uniform-n{n1}", f"U[2,4] & U[1,5], n1 = {n1}, n2 = n1 + 50",
                     ParentFamily("uniform", lower=2, upper=4), ParentFamily("uniform", lower=1, upper=5),
                     n1, n1 + 50, SizeCoupling("proportional", 1))
            for n1 in (100, 200, 300)
        ),
    )
}


def list_scenarios():
    """Table of the presets (name, description, block sizes, coupling)."""
    return pd.DataFrame([
        {"name": s.name, "description": s.description, "n1": s.n1, "n2": s.n2,
         "coupling": str(s.coupling), "norm": s.norm}
        for s in SCENARIOS.values()
    ])


def search_scenarios(query):
    """Presets whose name or description contains every word of ``query`` (case-insensitive)."""
    words = str(query).lower().split()
    return [s for s in SCENARIOS.values()
            if all(w in f"{s.name} {s.description} {s.parent1.family} {s.parent2.family}".lower()
                   for w in words)]


def get_scenario(name):
    try:
        return SCENARIOS[name]
    except KeyError:
        raise InvalidParameterError(
            f"unknown scenario '{name}'. Available: {', '.join(SCENARIOS)}"
        ) from None


FIT_CASES = {
    "dominated": (LogGevParams(2.0, 1.0, -0.2), LogGevParams(0.0, 1.0, -1.0)),
    "competing": (LogGevParams(3.0, 1.0, 0.1), LogGevParams(2.0, 1.0, 0.5)),
}


def simulated_fit_sample(case, m=10_000, seed=DEFAULT_SEED):
    """Draw m values from the "dominated" or "competing" two-component log-GEV product."""
    if case not in FIT_CASES:
        raise InvalidParameterError(f"case must be one of {', '.join(FIT_CASES)}, got {case!r}")
    return AcceleratedModel(FIT_CASES[case], "max").sample(m, seed)
