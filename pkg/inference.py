"""Maximum-likelihood fitting of single, accelerated, left-truncated and
accelerated l-min models.

The search runs Nelder-Mead (scipy) over an unconstrained parametrization:
(mu, log sigma, xi) per log-GEV component with xi boxed to (-1 + 1e-6, 5],
and (theta, log sigma_j, log(alpha_j - 1)) for the l-min law. Starts come
from L-moments on log-data, a split-sample heuristic and seeded jitter; the
best optimum is polished with a second run. Standard errors come from the
inverse of the numerically differentiated observed information.
"""
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
import pandas as pd
from scipy import optimize, special, stats

from distributions import (
    AccLMinParams,
    AcceleratedModel,
    LeftTruncatedModel,
    LogGevParams,
    model_from_dict,
    model_to_dict,
)
from errors import (
    DomainError,
    InvalidParameterError,
    NonConvergenceError,
    NumericFailureError,
    UnsupportedFamilyError,
)

logger = logging.getLogger(__name__)

MODEL_KINDS = ("pmax", "acc-pmax", "pmin", "acc-pmin", "left-truncated", "acc-lmin")
XI_BOUNDS = (-1.0 + 1e-6, 5.0)
GRADIENT_TOL = 1e-4
EULER_GAMMA = 0.5772156649015329
DEFAULT_RESTARTS = 20
DEFAULT_SEED = 42


@dataclass(frozen=True)
class FitOptions:
    """Search settings.

    Args:
        restarts (int): number of optimizer starts
        seed (int): base seed; start r jitters with SeedSequence([seed, r])
        tolerance (float): Nelder-Mead xatol and fatol
        max_iter (int): iteration cap per run
        x0 (float): truncation point for left-truncated fits when the sample has no atom
        threads (int): worker threads for the starts
    """

    restarts: int = DEFAULT_RESTARTS
    seed: int = DEFAULT_SEED
    tolerance: float = 1e-8
    max_iter: int = 20_000
    x0: float = None
    threads: int = None

    def __post_init__(self):
        if int(self.restarts) < 1:
            raise InvalidParameterError(f"restarts must be >= 1, got {self.restarts}")
        if not self.tolerance > 0:
            raise InvalidParameterError(f"tolerance must be positive, got {self.tolerance}")


@dataclass
class FitResult:
    """Outcome of ``fit``; ``estimates`` and ``std_errors`` are keyed by parameter name."""

    kind: str
    model: object
    estimates: dict
    std_errors: dict
    loglik: float
    converged: bool
    n_restarts_used: int
    gradient_norm: float
    n: int
    covariance: np.ndarray = None
    notes: list = field(default_factory=list)

    @property
    def k(self):
        return getattr(self.model, "k", 1)

    def to_dict(self):
        return {
            "kind": self.kind,
            "model": None if self.model is None else model_to_dict(self.model),
            "estimates": dict(self.estimates),
            "std_errors": dict(self.std_errors),
            "loglik": self.loglik,
            "converged": self.converged,
            "n_restarts_used": self.n_restarts_used,
            "gradient_norm": self.gradient_norm,
            "n": self.n,
            "notes": list(self.notes),
        }

    @classmethod
    def from_dict(cls, data):
        try:
            return cls(
                kind=data["kind"],
                model=None if data["model"] is None else model_from_dict(data["model"]),
                estimates=dict(data.get("estimates", {})),
                std_errors={k: float(v) for k, v in data.get("std_errors", {}).items()},
                loglik=float(data["loglik"]),
                converged=bool(data["converged"]),
                n_restarts_used=int(data.get("n_restarts_used", 0)),
                gradient_norm=float(data.get("gradient_norm", math.nan)),
                n=int(data.get("n", 0)),
                notes=list(data.get("notes", [])),
            )
        except KeyError as exc:
            raise InvalidParameterError(f"fit JSON is missing {exc}") from exc


# ---------------------------------------------------------------------------
# Log-likelihoods
# ---------------------------------------------------------------------------

def _data_array(data, positive=True):
    x = np.asarray(data, dtype=float).ravel()
    if x.size == 0:
        raise InvalidParameterError("data must not be empty")
    if np.any(np.isnan(x)):
        raise InvalidParameterError("data contain NaN")
    if positive and np.any(x <= 0.0):
        raise DomainError(f"{int(np.sum(x <= 0.0))} observation(s) are <= 0; the model needs positive data")
    return x


def _sum_or_flag(log_density):
    total = float(np.sum(log_density))
    if not math.isfinite(total):
        logger.debug("log-likelihood is -inf: %d point(s) outside the support",
                     int(np.sum(~np.isfinite(log_density))))
        return -math.inf
    return total


def loglik_single(params, data):
    """Sum of log-GEV log densities; -inf when a point is outside the support."""
    return _sum_or_flag(params.log_pdf(_data_array(data)))


def loglik_accelerated(model, data):
    """Log-likelihood of a product (or its p-min dual) of log-GEV components."""
    return _sum_or_flag(model.log_pdf(_data_array(data, positive=model.dual_map == "reciprocal")))


def loglik_left_truncated(model, data):
    """n0 log F(x0) + sum of log f over the points above x0; n0 counts points at x0."""
    x = _data_array(data, positive=False)
    return _left_truncated_loglik(model.base, model.jump_x0, x)


def _left_truncated_loglik(base, x0, x):
    if np.any(x < x0):
        return -math.inf
    at_x0 = x <= x0
    n0 = int(np.sum(at_x0))
    total = n0 * float(base.log_cdf(x0)) if n0 else 0.0
    return _sum_or_flag(np.append(base.log_pdf(x[~at_x0]), total))


def acc_lmin_pdf(params, x):
    """Density of the accelerated l-min law; zero at and below theta."""
    return params.pdf(x)


# ---------------------------------------------------------------------------
# Numerical derivatives
# ---------------------------------------------------------------------------

def _base_step(x, power):
    return np.finfo(float).eps ** power * np.maximum(np.abs(x), 1.0)


def numerical_gradient(func, x, step=None, max_halvings=40):
    """Central-difference gradient; a step is halved while the stencil leaves the domain."""
    x = np.asarray(x, dtype=float)
    steps = _base_step(x, 1.0 / 3.0) if step is None else np.broadcast_to(np.asarray(step, float), x.shape)
    grad = np.empty_like(x)
    for i in range(x.size):
        h = float(steps[i])
        for _ in range(max_halvings):
            e = np.zeros_like(x)
            e[i] = h
            forward, backward = func(x + e), func(x - e)
            if np.isfinite(forward) and np.isfinite(backward):
                break
            h *= 0.5
        else:
            raise NumericFailureError(f"gradient coordinate {i}: no finite stencil at x={x.tolist()}")
        grad[i] = (forward - backward) / (2.0 * h)
    return grad


def numerical_hessian(func, x, step=None, max_halvings=40):
    """Central-difference Hessian with the four-point stencil for off-diagonal entries."""
    x = np.asarray(x, dtype=float)
    steps = _base_step(x, 0.25) if step is None else np.broadcast_to(np.asarray(step, float), x.shape)
    size = x.size
    hessian = np.empty((size, size))
    f0 = func(x)
    if not np.isfinite(f0):
        raise NumericFailureError(f"Hessian requested at a point with f={f0}")
    for i in range(size):
        for j in range(i, size):
            hi, hj = float(steps[i]), float(steps[j])
            for _ in range(max_halvings):
                ei = np.zeros(size)
                ej = np.zeros(size)
                ei[i], ej[j] = hi, hj
                if i == j:
                    values = (func(x + ei), func(x - ei))
                else:
                    values = (func(x + ei + ej), func(x - ei - ej), func(x - ei + ej), func(x + ei - ej))
                if np.all(np.isfinite(values)):
                    break
                hi, hj = 0.5 * hi, 0.5 * hj
            else:
                raise NumericFailureError(f"Hessian entry ({i}, {j}): no finite stencil")
            if i == j:
                hessian[i, i] = (values[0] + values[1] - 2.0 * f0) / (hi * hi)
            else:
                value = (values[0] + values[1] - values[2] - values[3]) / (4.0 * hi * hj)
                hessian[i, j] = hessian[j, i] = value
    return hessian


def observed_information(func, x):
    """Negative Hessian of a log-likelihood ``func`` at ``x``."""
    return -numerical_hessian(func, x)


def _is_positive_definite(matrix):
    try:
        np.linalg.cholesky(0.5 * (matrix + matrix.T))
    except np.linalg.LinAlgError:
        return False
    return True


# ---------------------------------------------------------------------------
# Parametrizations
# ---------------------------------------------------------------------------

class _LogGevLayout:
    """(mu_j, log sigma_j, xi_j) blocks for k log-GEV components."""

    def __init__(self, kind, k, x0=None):
        self.kind = kind
        self.k = k
        self.x0 = x0
        self.orientation = "min" if kind in ("pmin", "acc-pmin") else "max"

    @property
    def names(self):
        if self.k == 1:
            return ("mu", "sigma", "xi")
        return tuple(f"{p}{j}" for j in range(1, self.k + 1) for p in ("mu", "sigma", "xi"))

    @property
    def bounds(self):
        return [(None, None), (None, None), XI_BOUNDS] * self.k

    def components(self, vec):
        return tuple(LogGevParams(vec[3 * j], math.exp(vec[3 * j + 1]), vec[3 * j + 2]) for j in range(self.k))

    def loglik(self, vec, x):
        try:
            components = self.components(vec)
        except (InvalidParameterError, OverflowError):
            return -math.inf
        if self.kind == "left-truncated":
            return _left_truncated_loglik(components[0], self.x0, x)
        return _sum_or_flag(AcceleratedModel(components, self.orientation).log_pdf(x))

    def build(self, vec):
        components = self.components(vec)
        if self.kind == "left-truncated":
            return LeftTruncatedModel(components[0], self.x0)
        return AcceleratedModel(components, self.orientation)

    def natural(self, vec):
        out = np.array(vec, dtype=float)
        out[1::3] = np.exp(out[1::3])
        return out

    def jacobian(self, vec):
        d = np.ones(len(vec))
        d[1::3] = np.exp(np.asarray(vec)[1::3])
        return np.diag(d)

    def canonical(self, vec, cov):
        """Sort components by mu descending and permute the covariance to match."""
        if self.k == 1:
            return vec, cov
        order = np.argsort(-np.asarray(vec)[0::3], kind="stable")
        index = np.concatenate([np.arange(3 * j, 3 * j + 3) for j in order])
        vec = np.asarray(vec)[index]
        return vec, None if cov is None else cov[np.ix_(index, index)]

    def at_lower_xi(self, vec):
        return bool(np.any(np.asarray(vec)[2::3] <= XI_BOUNDS[0] + 1e-6))

    def feasible_fallback(self, vec):
        vec = np.array(vec, dtype=float)
        vec[2::3] = 0.0
        return vec


class _LMinLayout:
    """(theta, log sigma1, log(alpha1 - 1), log sigma2, log(alpha2 - 1))."""

    kind = "acc-lmin"
    k = 2
    names = ("theta", "sigma1", "alpha1", "sigma2", "alpha2")
    bounds = None

    def params(self, vec):
        return AccLMinParams(vec[0], math.exp(vec[1]), 1.0 + math.exp(vec[2]),
                             math.exp(vec[3]), 1.0 + math.exp(vec[4]))

    def loglik(self, vec, x):
        if vec[0] >= x.min():
            return -math.inf
        try:
            params = self.params(vec)
        except (InvalidParameterError, OverflowError):
            return -math.inf
        return _sum_or_flag(params.log_pdf(x))

    def build(self, vec):
        return self.params(vec)

    def natural(self, vec):
        model = self.params(vec)
        return np.array([model.theta, model.sigma1, model.alpha1, model.sigma2, model.alpha2])

    def jacobian(self, vec):
        vec = np.asarray(vec)
        return np.diag([1.0, math.exp(vec[1]), math.exp(vec[2]), math.exp(vec[3]), math.exp(vec[4])])

    def canonical(self, vec, cov):
        vec = np.asarray(vec, dtype=float)
        if vec[2] <= vec[4]:
            return vec, cov
        index = np.array([0, 3, 4, 1, 2])
        return vec[index], None if cov is None else cov[np.ix_(index, index)]

    def at_lower_xi(self, vec):
        return False

    def feasible_fallback(self, vec):
        return vec


# ---------------------------------------------------------------------------
# Initializers
# ---------------------------------------------------------------------------

def gev_lmoments(w):
    """GEV (mu, sigma, xi) from sample L-moments (Hosking's approximation for the shape)."""
    w = np.sort(np.asarray(w, dtype=float))
    n = w.size
    if n < 3 or np.ptp(w) == 0:
        spread = float(np.std(w)) if n > 1 else 0.0
        sigma = spread * math.sqrt(6.0) / math.pi if spread > 0 else 1.0
        return float(np.mean(w)) - EULER_GAMMA * sigma, sigma, 0.0
    j = np.arange(n)
    b0 = w.mean()
    b1 = np.sum(j / (n - 1) * w) / n
    b2 = np.sum(j * (j - 1) / ((n - 1) * (n - 2)) * w) / n
    l1, l2, l3 = b0, 2 * b1 - b0, 6 * b2 - 6 * b1 + b0
    t3 = l3 / l2
    c = 2.0 / (3.0 + t3) - math.log(2.0) / math.log(3.0)
    shape_k = 7.8590 * c + 2.9554 * c * c
    if abs(shape_k) < 1e-6:
        sigma = l2 / math.log(2.0)
        return l1 - EULER_GAMMA * sigma, sigma, 0.0
    shape_k = min(max(shape_k, -3.0), 0.9)
    sigma = l2 * shape_k / ((1.0 - 2.0 ** (-shape_k)) * special.gamma(1.0 + shape_k))
    mu = l1 - sigma * (1.0 - special.gamma(1.0 + shape_k)) / shape_k
    if not (np.isfinite(sigma) and sigma > 0 and np.isfinite(mu)):
        sigma = float(np.std(w)) * math.sqrt(6.0) / math.pi
        return l1 - EULER_GAMMA * sigma, sigma, 0.0
    return float(mu), float(sigma), float(-shape_k)


def _log_gev_starts(layout, x, options):
    # primal log-data: max orientation log x, min orientation (reciprocal dual) -log x
    if layout.kind == "left-truncated":
        w = np.log(x[x > layout.x0])
    else:
        w = np.log(x) if layout.orientation == "max" else -np.log(x)
    sign = 1.0 if layout.orientation == "max" else -1.0

    def block(mu, sigma, xi):
        return [sign * mu, math.log(sigma), xi]

    single = gev_lmoments(w)
    starts = [np.array(block(*single) * layout.k, dtype=float)]
    if layout.k > 1:
        mu, sigma, xi = single
        starts[0] = np.array(sum((block(mu + sigma * (j - (layout.k - 1) / 2.0), sigma, xi)
                                  for j in range(layout.k)), []), dtype=float)
        chunks = np.array_split(np.sort(w), layout.k)
        starts.append(np.array(sum((block(*gev_lmoments(c)) for c in chunks), []), dtype=float))
    return starts


def _lmin_starts(x):
    shape, loc, scale = stats.weibull_min.fit(x)
    spread = float(np.ptp(x)) or 1.0
    theta = min(float(loc), float(x.min()) - 1e-3 * spread)
    alpha1 = max(float(shape), 1.1)
    alpha2 = alpha1 + 2.0
    vec = np.array([theta, math.log(scale / alpha1), math.log(alpha1 - 1.0),
                    math.log(scale / alpha2), math.log(alpha2 - 1.0)])
    return [vec]


def _jitter(start, layout, rng):
    vec = np.array(start, dtype=float)
    if isinstance(layout, _LMinLayout):
        vec[0] -= abs(rng.normal(0.0, 0.05)) * max(abs(vec[0]), 1.0)
        vec[1:] += rng.normal(0.0, 0.3, size=4)
        return vec
    vec[0::3] += rng.normal(0.0, 0.5, size=layout.k) * np.exp(vec[1::3])
    vec[1::3] += rng.normal(0.0, 0.3, size=layout.k)
    vec[2::3] = np.clip(vec[2::3] + rng.normal(0.0, 0.2, size=layout.k), -0.9, 2.0)
    return vec


def _starting_points(layout, x, options):
    if isinstance(layout, _LMinLayout):
        base = _lmin_starts(x)
    else:
        base = _log_gev_starts(layout, x, options)
    starts = []
    for r in range(int(options.restarts)):
        if r < len(base):
            vec = base[r]
        else:
            rng = np.random.default_rng(np.random.SeedSequence([options.seed, r]))
            vec = _jitter(base[r % len(base)], layout, rng)
        if not math.isfinite(layout.loglik(vec, x)):
            vec = layout.feasible_fallback(vec)
        starts.append(vec)
    return starts


# ---------------------------------------------------------------------------
# Fitting
# ---------------------------------------------------------------------------

def _layout_for(kind, k, x, options):
    if kind in ("pmax", "pmin"):
        return _LogGevLayout(kind, 1)
    if kind in ("acc-pmax", "acc-pmin"):
        if int(k) < 2:
            raise InvalidParameterError(f"{kind} needs k >= 2 components, got {k}")
        return _LogGevLayout(kind, int(k))
    if kind == "left-truncated":
        x0 = _truncation_point(x, options)
        if np.sum(x > x0) < 3:
            raise NonConvergenceError(f"left-truncated fit needs at least 3 observations above x0={x0:g}")
        return _LogGevLayout(kind, 1, x0)
    return _LMinLayout()


def _truncation_point(x, options):
    smallest = x.min()
    if np.sum(x == smallest) >= 2:
        return float(smallest)
    if options.x0 is None:
        raise InvalidParameterError("left-truncated fit needs x0: the sample has no atom at its minimum")
    if options.x0 > smallest:
        raise InvalidParameterError(f"x0={options.x0} exceeds the sample minimum {smallest}")
    return float(options.x0)


def _minimize(objective, start, layout, options):
    return optimize.minimize(
        objective,
        start,
        method="Nelder-Mead",
        bounds=layout.bounds,
        options={"xatol": options.tolerance, "fatol": options.tolerance,
                 "maxiter": options.max_iter, "maxfev": 2 * options.max_iter,
                 "adaptive": len(start) > 5},
    )


def fit(model_kind, data, options=None, k=2):
    """Maximum-likelihood fit of one of MODEL_KINDS.

    Args:
        model_kind (str): "pmax", "acc-pmax", "pmin", "acc-pmin", "left-truncated" or "acc-lmin"
        data (array): observations; positive for the log-GEV kinds
        options (FitOptions): search settings
        k (int): components for the accelerated kinds

    Returns:
        FitResult: best optimum over all starts

    Raises:
        NonConvergenceError: no start reached a finite log-likelihood, or the sample is constant
    """
    options = options or FitOptions()
    if model_kind not in MODEL_KINDS:
        raise UnsupportedFamilyError(model_kind, MODEL_KINDS)
    x = _data_array(data, positive=model_kind != "acc-lmin")
    if np.ptp(x) == 0.0 and model_kind != "left-truncated":
        raise NonConvergenceError(f"all {x.size} observations equal {x[0]:g}; the likelihood is unbounded")
    layout = _layout_for(model_kind, k, x, options)

    def objective(vec):
        value = layout.loglik(vec, x)
        return -value if math.isfinite(value) else math.inf

    starts = _starting_points(layout, x, options)
    with ThreadPoolExecutor(max_workers=options.threads) as pool:
        runs = list(pool.map(lambda s: _minimize(objective, s, layout, options), starts))
    finite = [(run.fun, index, run) for index, run in enumerate(runs) if math.isfinite(run.fun)]
    logger.info("%s fit: %d of %d starts reached a finite optimum", model_kind, len(finite), len(runs))
    if not finite:
        raise NonConvergenceError(f"{model_kind}: every start diverged", None)
    best_fun, best_index, best = min(finite, key=lambda item: (item[0], item[1]))
    polished = _minimize(objective, best.x, layout, options)
    vec = polished.x if polished.fun <= best_fun else best.x
    return _assemble(model_kind, layout, vec, x, len(finite))


def _assemble(kind, layout, vec, x, n_used):
    loglik_fn = lambda v: layout.loglik(v, x)  # noqa: E731
    loglik = loglik_fn(vec)
    notes = []
    gradient = numerical_gradient(loglik_fn, vec)
    gradient_norm = float(np.linalg.norm(gradient))
    cov = None
    try:
        info = observed_information(loglik_fn, vec)
        positive_definite = _is_positive_definite(info)
    except NumericFailureError as exc:
        notes.append(f"observed information unavailable: {exc}")
        positive_definite = False
    if positive_definite:
        cov_opt = np.linalg.inv(info)
        jac = layout.jacobian(vec)
        cov = jac @ cov_opt @ jac.T
    else:
        notes.append("observed information is not positive-definite; standard errors withheld")
    if layout.at_lower_xi(vec):
        notes.append("a shape estimate sits at the lower bound xi -> -1, where the MLE may not exist")
    if getattr(layout, "x0", None) is not None:
        notes.append(f"truncation point x0 = {layout.x0:.17g} held fixed")

    vec, cov = layout.canonical(vec, cov)
    natural = layout.natural(vec)
    if cov is not None:
        variances = np.diag(cov)
        std_errors = np.where(variances > 0, np.sqrt(np.abs(variances)), np.nan)
    else:
        std_errors = np.full(natural.size, np.nan)
    converged = (math.isfinite(loglik) and positive_definite
                 and gradient_norm <= GRADIENT_TOL * (1.0 + abs(loglik))
                 and bool(np.all(std_errors > 0)))
    if not converged and positive_definite:
        notes.append(f"gradient norm {gradient_norm:.3g} exceeds the convergence criterion")
    names = layout.names
    return FitResult(
        kind=kind,
        model=layout.build(vec),
        estimates={name: float(v) for name, v in zip(names, natural)},
        std_errors={name: float(v) for name, v in zip(names, std_errors)},
        loglik=float(loglik),
        converged=bool(converged),
        n_restarts_used=n_used,
        gradient_norm=gradient_norm,
        n=int(x.size),
        covariance=cov,
        notes=notes,
    )


# ---------------------------------------------------------------------------
# Expected information and the l-min validation harness
# ---------------------------------------------------------------------------

LMIN_NAMES = ("theta", "sigma1", "alpha1", "sigma2", "alpha2")


@dataclass(frozen=True)
class InfoMatrix:
    """Expected information m_ij over the named parameters (theta dropped when alpha1 <= 2)."""

    matrix: np.ndarray
    indices: tuple
    names: tuple

    @property
    def is_symmetric(self):
        return bool(np.allclose(self.matrix, self.matrix.T, rtol=1e-8, atol=1e-10))

    @property
    def is_positive_definite(self):
        return _is_positive_definite(self.matrix)

    def to_dict(self):
        return {"names": list(self.names), "indices": list(self.indices), "matrix": self.matrix.tolist()}


def expected_information(params, n_mc=200_000, seed=DEFAULT_SEED):
    """Monte Carlo estimate of -E[d^2 log f] for the accelerated l-min law."""
    draws = params.sample(int(n_mc), seed)
    natural = np.array([params.theta, params.sigma1, params.alpha1, params.sigma2, params.alpha2])
    indices = (0, 1, 2, 3, 4) if params.alpha1 > 2.0 else (1, 2, 3, 4)

    def mean_log_density(sub):
        vec = natural.copy()
        vec[list(indices)] = sub
        try:
            model = AccLMinParams(*vec)
        except InvalidParameterError:
            return -math.inf
        values = model.log_pdf(draws)
        return float(np.mean(values)) if np.all(np.isfinite(values)) else -math.inf

    matrix = -numerical_hessian(mean_log_density, natural[list(indices)])
    matrix = 0.5 * (matrix + matrix.T)
    return InfoMatrix(matrix, indices, tuple(LMIN_NAMES[i] for i in indices))


def check_lmin_conditions(alpha1, alpha2):
    """Branches of the l-min consistency conditions that hold.

    Returns:
        tuple: subset of ("i", "ii"); (i) alpha > 1 with alpha1 == alpha2 or
        alpha1 < alpha2 - 1, (ii) alpha > 2 with alpha1 < alpha2 - 2

    Raises:
        InvalidParameterError: neither branch holds; the message names each violated inequality
    """
    a1, a2 = sorted((float(alpha1), float(alpha2)))
    branches = []
    if a1 > 1.0 and (a1 == a2 or a1 < a2 - 1.0):
        branches.append("i")
    if a1 > 2.0 and a1 < a2 - 2.0:
        branches.append("ii")
    if branches:
        return tuple(branches)
    violated = []
    if a1 <= 1.0:
        violated.append(f"alpha1 > 1 ({a1:g} <= 1)")
    if a1 != a2:
        violated.append(f"alpha1 == alpha2 ({a1:g} != {a2:g})")
    if a1 >= a2 - 1.0:
        violated.append(f"alpha1 < alpha2 - 1 ({a1:g} >= {a2 - 1.0:g})")
    if a1 <= 2.0:
        violated.append(f"alpha1 > 2 ({a1:g} <= 2)")
    if a1 >= a2 - 2.0:
        violated.append(f"alpha1 < alpha2 - 2 ({a1:g} >= {a2 - 2.0:g})")
    raise InvalidParameterError("l-min conditions violated: " + "; ".join(violated))


@dataclass(frozen=True)
class ValidationConfig:
    alpha1: float
    alpha2: float
    sigma1: float = 1.0
    sigma2: float = 1.0
    theta: float = 0.0
    sample_sizes: tuple = (500, 2000, 8000)
    reps: int = 200
    seed: int = DEFAULT_SEED
    restarts: int = 3
    threads: int = None


@dataclass
class ValidationReport:
    """Per sample size RMSE (and Wald coverage for branch ii) of the l-min MLE."""

    config: ValidationConfig
    branches: tuple
    table: pd.DataFrame
    failures: int = 0

    @property
    def rmse_decreasing(self):
        """True when every parameter's RMSE falls strictly with n."""
        return all(bool(np.all(np.diff(self.table[f"rmse_{name}"].to_numpy()) < 0)) for name in LMIN_NAMES)

    def to_dict(self):
        return {
            "branches": list(self.branches),
            "rmse_decreasing": self.rmse_decreasing,
            "failures": self.failures,
            "rows": self.table.to_dict(orient="records"),
        }


def validate_lmin_estimator(config):
    """Simulate, refit and summarize the l-min MLE across sample sizes."""
    branches = check_lmin_conditions(config.alpha1, config.alpha2)
    truth_model = AccLMinParams(config.theta, config.sigma1, config.alpha1, config.sigma2, config.alpha2)
    truth = np.array([truth_model.theta, truth_model.sigma1, truth_model.alpha1,
                      truth_model.sigma2, truth_model.alpha2])
    options = FitOptions(restarts=config.restarts, seed=config.seed, threads=1)
    z = stats.norm.ppf(0.975)
    rows = []
    failures = 0
    for size_index, n in enumerate(config.sample_sizes):

        def replicate(r):
            seed = np.random.SeedSequence([config.seed, size_index, r])
            data = truth_model.sample(int(n), np.random.default_rng(seed))
            try:
                return fit("acc-lmin", data, options)
            except (NonConvergenceError, NumericFailureError) as exc:
                logger.warning("validation n=%d rep=%d failed: %s", n, r, exc)
                return None

        with ThreadPoolExecutor(max_workers=config.threads) as pool:
            results = list(pool.map(replicate, range(int(config.reps))))
        fitted = [res for res in results if res is not None]
        failures += len(results) - len(fitted)
        if not fitted:
            logger.warning("validation n=%d: every replication failed", n)
            rows.append({"n": int(n), "fits": 0,
                         **{f"rmse_{name}": math.nan for name in LMIN_NAMES}})
            continue
        estimates = np.array([[res.estimates[name] for name in LMIN_NAMES] for res in fitted])
        errors = np.array([[res.std_errors[name] for name in LMIN_NAMES] for res in fitted])
        row = {"n": int(n), "fits": len(fitted)}
        rmse = np.sqrt(np.mean((estimates - truth) ** 2, axis=0))
        for name, value in zip(LMIN_NAMES, rmse):
            row[f"rmse_{name}"] = float(value)
        if "ii" in branches:
            covered = np.abs(estimates - truth) <= z * errors
            for j, name in enumerate(LMIN_NAMES):
                row[f"coverage_{name}"] = float(np.mean(covered[:, j]))
        rows.append(row)
        logger.info("validation n=%d: rmse(theta)=%.4g over %d fits", n, row["rmse_theta"], len(fitted))
    return ValidationReport(config, branches, pd.DataFrame(rows), failures)
