"""Monte Carlo replication of competing-risk block maxima (and minima).

A replication draws ``n1`` values from parent 1 and ``n2`` from parent 2,
takes the overall maximum and normalizes it with one block's power or linear
constants. Replication ``r`` draws from ``default_rng(SeedSequence([seed, r]))``
so the output does not depend on how replications are spread over threads.
"""
import logging
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, replace

import numpy as np
import pandas as pd

from distributions import (
    AcceleratedModel,
    GevParams,
    PStableSpec,
    dual_min,
    model_to_dict,
    open_uniform,
)
from errors import CapabilityGapError, InvalidParameterError, UnsupportedFamilyError
from gof import goodness_of_fit
from normalization import (
    FAMILIES,
    ParentFamily,
    SizeCoupling,
    classify_regime,
    linear_constants,
    power_constants,
)

logger = logging.getLogger(__name__)

DEFAULT_SEED = 42
DEFAULT_REPLICATIONS = 10_000
# empirical_jump_mass counts block 2 only; the atom of the limit sits in that block
JUMP_MASS_BASIS = "fraction of replications with the block-2 normalized extreme <= x0"


@dataclass(frozen=True)
class CompetingExperiment:
    """Two competing blocks and how their overall extreme is normalized.

    Args:
        parent1 (ParentFamily): parent of block 1
        parent2 (ParentFamily): parent of block 2
        n1 (int): block 1 size
        n2 (int): block 2 size
        reps (int): number of replications m
        norm (str): "power" or "linear"
        normalize_by (int): block whose constants normalize M_n; None follows the regime
        orientation (str): "max" or "min"
        seed (int): base seed
        coupling (SizeCoupling): growth rule of n2 used for the regime; defaults
            to proportional with c = n2 / n1
        label (str): free-form name used in tables
    """

    parent1: ParentFamily
    parent2: ParentFamily
    n1: int
    n2: int
    reps: int = DEFAULT_REPLICATIONS
    norm: str = "power"
    normalize_by: int = None
    orientation: str = "max"
    seed: int = DEFAULT_SEED
    coupling: SizeCoupling = None
    label: str = ""

    def __post_init__(self):
        if int(self.n1) < 1 or int(self.n2) < 1:
            raise InvalidParameterError(f"block sizes must be >= 1, got n1={self.n1}, n2={self.n2}")
        if int(self.reps) < 1:
            raise InvalidParameterError(f"replications must be >= 1, got {self.reps}")
        if self.norm not in ("power", "linear"):
            raise InvalidParameterError(f"norm must be 'power' or 'linear', got {self.norm!r}")
        if self.normalize_by not in (None, 1, 2):
            raise InvalidParameterError(f"normalize_by must be 1 or 2, got {self.normalize_by!r}")
        if self.orientation not in ("max", "min"):
            raise InvalidParameterError(f"orientation must be 'max' or 'min', got {self.orientation!r}")
        object.__setattr__(self, "n1", int(self.n1))
        object.__setattr__(self, "n2", int(self.n2))
        object.__setattr__(self, "reps", int(self.reps))
        if self.coupling is None:
            object.__setattr__(self, "coupling", SizeCoupling("proportional", self.n2 / self.n1))

    @property
    def name(self):
        if self.label:
            return self.label
        return f"{self.parent1.label} & {self.parent2.label}, n1={self.n1}, n2={self.n2}"

    def to_dict(self):
        data = asdict(self)
        data["coupling"] = str(self.coupling)
        return data


@dataclass
class ReplicationResult:
    """Normalized extremes of every replication, in replication order.

    ``block_values`` holds each block's own normalized extreme (column j for
    block j + 1); ``normalized_values`` is their row-wise max (min for min
    experiments).
    """

    normalized_values: np.ndarray
    block_values: np.ndarray
    regime: object
    experiment: CompetingExperiment
    normalize_by: int
    limit_model: object = None
    empirical_jump_mass: float = None
    notes: list = field(default_factory=list)

    def to_dict(self):
        return {
            "experiment": self.experiment.to_dict(),
            "normalize_by": self.normalize_by,
            "regime": self.regime.to_dict(),
            "limit_model": None if self.limit_model is None else model_to_dict(self.limit_model),
            "empirical_jump_mass": self.empirical_jump_mass,
            "jump_mass_basis": None if self.empirical_jump_mass is None else JUMP_MASS_BASIS,
            "notes": list(self.notes),
        }


def draw_parent(parent, n, seed=None):
    """Draw ``n`` i.i.d. values from a parent family.

    Closed-form families use inverse transform sampling; the normal uses
    numpy's ziggurat sampler; general-error and skew-normal go through scipy.

    Args:
        parent (ParentFamily): parent distribution
        n (int): number of draws, n >= 1
        seed: int, SeedSequence or Generator

    Returns:
        np.ndarray: the draws
    """
    if int(n) < 1:
        raise InvalidParameterError(f"sample size must be >= 1, got {n}")
    if not isinstance(parent, ParentFamily) or parent.family not in FAMILIES:
        raise UnsupportedFamilyError(getattr(parent, "family", parent), FAMILIES)
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    n = int(n)
    if parent.family == "std-normal":
        return rng.standard_normal(n)
    dist = parent.scipy_dist
    if dist is not None:
        return dist.rvs(size=n, random_state=rng)
    return parent.quantile(open_uniform(rng, n))


def _dual_map(experiment, limit):
    """Orientation map for min experiments: reciprocal for positive p-types, else negation."""
    if experiment.norm == "power" and limit.positive_support:
        for parent in (experiment.parent1, experiment.parent2):
            if not parent.positive_support:
                raise CapabilityGapError(
                    f"min orientation with a positive-support limit needs positive parents; "
                    f"{parent.label} is not"
                )
        return "reciprocal"
    return "negation"


def _apply_dual(values, dual):
    if dual == "reciprocal":
        return 1.0 / values
    return -values


def _block_extreme(values, dual):
    if dual is None:
        return values.max()
    return _apply_dual(_apply_dual(values, dual).min(), dual)


def _replicate(experiment, normalize, dual, indices):
    """Normalized per-block extremes, shape (len(indices), 2); min blocks are in max coordinates."""
    out = np.empty((len(indices), 2))
    for position, r in enumerate(indices):
        rng = np.random.default_rng(np.random.SeedSequence([experiment.seed, r]))
        block1 = draw_parent(experiment.parent1, experiment.n1, rng)
        block2 = draw_parent(experiment.parent2, experiment.n2, rng)
        out[position] = (_block_extreme(block1, dual), _block_extreme(block2, dual))
    return normalize(out)


def _power_limit(regime, constants, normalize_by):
    """Limit law of the power-normalized maximum, or None when degenerate."""
    if regime.case == "accelerated":
        if normalize_by == 2:
            return regime.limit_model
        first, second = regime.limit_model.components
        a, b = regime.limit_a, regime.limit_b
        return AcceleratedModel(
            (constants[0].limit, second.with_transform(a ** (-1.0 / b), 1.0 / b)), "max"
        )
    if regime.case == "single-dominant" and regime.dominant == normalize_by:
        return regime.limit_model
    if regime.case == "left-truncated" and normalize_by == 2:
        return regime.limit_model
    return None


def _linear_limit(regime, constants, normalize_by):
    """Limit under linear normalization; finite-n product unless one block dominates."""
    own = constants[normalize_by - 1]
    if regime.case == "single-dominant" and regime.dominant == normalize_by:
        return own.limit
    other = constants[2 - normalize_by]
    shifted = other.limit.affine(other.a / own.a, other.a * (own.b - other.b))
    return AcceleratedModel((shifted, own.limit), "max")


def run_experiment(experiment, threads=None):
    """Run every replication of a competing-risk experiment.

    Args:
        experiment (CompetingExperiment): the experiment
        threads (int): worker threads; defaults to the CPU count

    Returns:
        ReplicationResult: normalized values in replication order plus the regime
    """
    regime = classify_regime(experiment.parent1, experiment.parent2, experiment.coupling)
    normalize_by = experiment.normalize_by or regime.normalize_by
    notes = []
    if experiment.norm == "power":
        constants = (power_constants(experiment.parent1, experiment.n1),
                     power_constants(experiment.parent2, experiment.n2))
        limit = _power_limit(regime, constants, normalize_by)
        limit_type = constants[normalize_by - 1].limit
    else:
        constants = (linear_constants(experiment.parent1, experiment.n1),
                     linear_constants(experiment.parent2, experiment.n2))
        limit = _linear_limit(regime, constants, normalize_by)
        limit_type = constants[normalize_by - 1].limit
    if limit is None:
        notes.append(f"the maximum normalized by block {normalize_by} has a degenerate limit")

    dual = None
    if experiment.orientation == "min":
        dual = _dual_map(experiment, limit_type)
    normalize = constants[normalize_by - 1].normalize

    indices = np.arange(experiment.reps)
    workers = max(1, min(threads or os.cpu_count() or 1, experiment.reps))
    chunks = np.array_split(indices, workers)
    logger.info("running %d replications of %s on %d thread(s)", experiment.reps, experiment.name, workers)
    if workers == 1:
        blocks = _replicate(experiment, normalize, dual, indices)
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda chunk: _replicate(experiment, normalize, dual, chunk), chunks))
        blocks = np.concatenate(parts)
    # both normalizations are increasing, so the normalized maximum is the larger block value
    values = blocks.max(axis=1)

    jump_mass = None
    if regime.case == "left-truncated" and experiment.norm == "power" and normalize_by == 2:
        # the atom carries the mass of the non-degenerate block at or below x0
        jump_mass = float(np.mean(blocks[:, 1] <= regime.jump_x0))
        logger.info("empirical jump mass at x0=%g: %.4f (limit %.4f)", regime.jump_x0, jump_mass,
                    regime.limit_model.point_mass)

    if experiment.orientation == "min":
        values = _apply_dual(values, dual)
        blocks = _apply_dual(blocks, dual)
        if limit is not None:
            limit = dual_min(limit) if isinstance(limit, (AcceleratedModel, PStableSpec, GevParams)) else None
            if limit is None:
                notes.append("no p-min dual for the limit model")

    return ReplicationResult(
        normalized_values=values,
        block_values=blocks,
        regime=regime,
        experiment=experiment,
        normalize_by=normalize_by,
        limit_model=limit,
        empirical_jump_mass=jump_mass,
        notes=notes,
    )


def convergence_table(experiments, tests=("KS", "CVM", "AD"), norms=None, threads=None):
    """Goodness of fit of each experiment's normalized values against its limit.

    Args:
        experiments (list): CompetingExperiment instances
        tests (tuple): subset of "KS", "CVM", "AD"
        norms (tuple): run each experiment under these norms; None keeps each
            experiment's own norm
        threads (int): worker threads per experiment

    Returns:
        pd.DataFrame: one row per (experiment, norm) with statistic and p-value columns
    """
    rows = []
    for experiment in experiments:
        for norm in norms or (experiment.norm,):
            current = experiment if norm == experiment.norm else replace(experiment, norm=norm)
            result = run_experiment(current, threads=threads)
            if result.limit_model is None:
                raise CapabilityGapError(f"{current.name}: no non-degenerate limit to test against")
            if result.regime.case == "left-truncated":
                raise CapabilityGapError(
                    f"{current.name}: the left-truncated limit has an atom; continuous GOF tests do not apply"
                )
            row = {
                "experiment": current.name,
                "norm": norm,
                "n1": current.n1,
                "n2": current.n2,
                "m": current.reps,
                "regime": result.regime.case,
            }
            for name, test in goodness_of_fit(result.normalized_values, result.limit_model, tests).items():
                row[name.lower()] = test.statistic
                row[f"{name.lower()}_p"] = test.p_value
            rows.append(row)
    return pd.DataFrame(rows)


def block_size_grid(coupling, n1_values):
    """(n1, n2) pairs for a coupling, e.g. the rows of a convergence study."""
    return [(int(n1), coupling.size(int(n1))) for n1 in n1_values]
