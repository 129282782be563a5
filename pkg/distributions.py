"""Evaluation and sampling of p-max stable, p-min stable, accelerated and
left-truncated distributions.

Every model exposes the same surface: ``cdf``, ``log_cdf``, ``sf``, ``log_sf``,
``pdf``, ``log_pdf``, ``quantile``, ``sample`` and ``support``. Scalars in give
floats out; arrays in give arrays of the same shape out. Module-level
functions of the same names dispatch to these methods.

Component families:

* ``PStableSpec``   -- one of the six p-types H1..H6 under the p-type
  transform x -> A|x|^B sign(x).
* ``LogGevParams``  -- G_xi(log x; mu, sigma) on the positive half-line.
* ``GevParams``     -- the linear GEV G_xi(x; mu, sigma) on the real line,
  the limit laws under linear normalization.

Composite models: ``AcceleratedModel`` (product of component CDFs, or its
p-min dual), ``LeftTruncatedModel`` (atom at x0) and ``AccLMinParams`` (the
accelerated l-min law of two Weibull-type minima).

Min orientation: a component inside a min-oriented model stores the
parameters of the p-min law itself. The law is realized through a dual map,
the reciprocal for positive-support families and negation otherwise, applied
to the component's reflected primal (``reflect``), which negates the GEV
location and leaves the six p-types unchanged.
"""
import logging
from dataclasses import dataclass, replace

import numpy as np
from scipy.special import logsumexp

from errors import BracketError, DomainError, InvalidParameterError

logger = logging.getLogger(__name__)

KINDS = ("H1", "H2", "H3", "H4", "H5", "H6")
POSITIVE_KINDS = ("H1", "H2", "H5")
NEGATIVE_KINDS = ("H3", "H4", "H6")

# Pre-transform supports of the six p-types.
KIND_SUPPORT = {
    "H1": (1.0, np.inf),
    "H2": (0.0, 1.0),
    "H3": (-1.0, 0.0),
    "H4": (-np.inf, -1.0),
    "H5": (0.0, np.inf),
    "H6": (-np.inf, 0.0),
}

GUMBEL_XI = 1e-12
SERIES_XI = 1e-6
QUANTILE_RTOL = 1e-12
MAX_BISECTIONS = 2000
MAX_EXPANSIONS = 200


def _as_array(x):
    return np.atleast_1d(np.asarray(x, dtype=float))


def _restore(values, like):
    if np.ndim(like) == 0:
        return float(np.asarray(values).reshape(-1)[0])
    return np.asarray(values).reshape(np.shape(like))


def log1mexp(a):
    """log(1 - exp(a)) for a <= 0, accurate across the whole range."""
    a = np.asarray(a, dtype=float)
    out = np.empty_like(a)
    near = a > -np.log(2.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        out[near] = np.log(-np.expm1(a[near]))
        out[~near] = np.log1p(-np.exp(a[~near]))
    return out


def as_generator(seed):
    """Return a numpy Generator from an int seed, a SeedSequence or a Generator."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def child_generators(seed, count):
    """Split ``seed`` into ``count`` independent generators."""
    if isinstance(seed, np.random.Generator):
        return seed.spawn(count)
    if not isinstance(seed, np.random.SeedSequence):
        seed = np.random.SeedSequence(seed)
    return [np.random.default_rng(child) for child in seed.spawn(count)]


def open_uniform(rng, n):
    """Uniform draws on the open interval (0, 1)."""
    u = rng.random(n)
    u[u == 0.0] = np.nextafter(0.0, 1.0)
    return u


def _check_probabilities(p):
    if np.any(~np.isfinite(p)) or np.any((p <= 0.0) | (p >= 1.0)):
        raise InvalidParameterError("quantile probabilities must lie strictly inside (0, 1)")


def _bisect_quantile(log_cdf, p, lower, upper):
    """Vectorized bisection for x with log_cdf(x) = log(p).

    The bracket is expanded geometrically when it does not enclose the
    target, then halved until its width is below QUANTILE_RTOL * (1 + |x|).
    """
    target = np.log(p)
    lower = np.array(lower, dtype=float)
    upper = np.array(upper, dtype=float)
    big = np.finfo(float).max
    lower = np.clip(lower, -big, big)
    upper = np.clip(upper, -big, big)

    expansions = 0
    step = np.maximum(np.abs(lower), 1.0)
    for _ in range(MAX_EXPANSIONS):
        bad = log_cdf(lower) > target
        if not bad.any():
            break
        expansions += 1
        lower[bad] = np.maximum(lower[bad] - step[bad], -big)
        step[bad] *= 2.0
    step = np.maximum(np.abs(upper), 1.0)
    for _ in range(MAX_EXPANSIONS):
        bad = log_cdf(upper) < target
        if not bad.any():
            break
        expansions += 1
        upper[bad] = np.minimum(upper[bad] + step[bad], big)
        step[bad] *= 2.0

    low_values = log_cdf(lower)
    high_values = log_cdf(upper)
    if expansions:
        logger.debug("quantile bracket expanded %d time(s) to [%g, %g]", expansions, lower.min(), upper.max())
    if np.any(low_values > target) or np.any(high_values < target):
        raise BracketError(
            "could not bracket the quantile",
            lower=lower, upper=upper, values=(np.exp(low_values), np.exp(high_values)),
        )

    for _ in range(MAX_BISECTIONS):
        mid = 0.5 * lower + 0.5 * upper
        active = (upper - lower > QUANTILE_RTOL * (1.0 + np.abs(mid))) & (mid > lower) & (mid < upper)
        if not active.any():
            break
        below = log_cdf(mid) < target
        move_up = active & below
        move_down = active & ~below
        lower[move_up] = mid[move_up]
        upper[move_down] = mid[move_down]
    return 0.5 * lower + 0.5 * upper


class _Distribution:
    """Shared public surface; subclasses implement the underscored kernels."""

    def log_cdf(self, x):
        xa = _as_array(x)
        return _restore(self._log_cdf(xa), x)

    def cdf(self, x):
        xa = _as_array(x)
        return _restore(np.exp(self._log_cdf(xa)), x)

    def log_sf(self, x):
        xa = _as_array(x)
        return _restore(log1mexp(self._log_cdf(xa)), x)

    def sf(self, x):
        xa = _as_array(x)
        return _restore(-np.expm1(self._log_cdf(xa)), x)

    def log_pdf(self, x):
        xa = _as_array(x)
        return _restore(self._log_pdf(xa), x)

    def pdf(self, x):
        xa = _as_array(x)
        return _restore(np.exp(self._log_pdf(xa)), x)

    def quantile(self, p):
        pa = _as_array(p)
        _check_probabilities(pa)
        return _restore(self._quantile(pa), p)

    def sample(self, n, seed=None):
        """Draw ``n`` i.i.d. values; ``seed`` is an int, SeedSequence or Generator."""
        if int(n) < 1:
            raise InvalidParameterError(f"sample size must be >= 1, got {n}")
        return self._sample(int(n), as_generator(seed))

    def _sample(self, n, rng):
        return self._quantile(open_uniform(rng, n))


# ---------------------------------------------------------------------------
# Six p-types
# ---------------------------------------------------------------------------

def _ptype_log_cdf(kind, alpha, y):
    out = np.zeros_like(y)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        if kind == "H1":
            inside = y > 1.0
            out[~inside] = -np.inf
            out[inside] = -(np.log(y[inside]) ** -alpha)
        elif kind == "H2":
            inside = (y > 0.0) & (y < 1.0)
            out[y <= 0.0] = -np.inf
            out[inside] = -((-np.log(y[inside])) ** alpha)
        elif kind == "H3":
            inside = (y > -1.0) & (y < 0.0)
            out[y <= -1.0] = -np.inf
            out[inside] = -((-np.log(-y[inside])) ** -alpha)
        elif kind == "H4":
            inside = y < -1.0
            out[inside] = -(np.log(-y[inside]) ** alpha)
        elif kind == "H5":
            inside = y > 0.0
            out[~inside] = -np.inf
            out[inside] = -1.0 / y[inside]
        else:
            inside = y < 0.0
            out[inside] = y[inside]
    out[np.isnan(y)] = np.nan
    return out


def _ptype_log_density(kind, alpha, y):
    out = np.full_like(y, -np.inf)
    log_alpha = np.log(alpha)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        if kind == "H1":
            m = y > 1.0
            ly = np.log(y[m])
            ll = np.log(ly)
            out[m] = -np.exp(-alpha * ll) + log_alpha - (alpha + 1.0) * ll - ly
        elif kind == "H2":
            m = (y > 0.0) & (y < 1.0)
            ly = np.log(y[m])
            out[m] = -((-ly) ** alpha) + log_alpha + (alpha - 1.0) * np.log(-ly) - ly
        elif kind == "H3":
            m = (y > -1.0) & (y < 0.0)
            ln = np.log(-y[m])
            out[m] = -((-ln) ** -alpha) + log_alpha - (alpha + 1.0) * np.log(-ln) - ln
        elif kind == "H4":
            m = y < -1.0
            ln = np.log(-y[m])
            out[m] = -(ln ** alpha) + log_alpha + (alpha - 1.0) * np.log(ln) - ln
        elif kind == "H5":
            m = y > 0.0
            out[m] = -1.0 / y[m] - 2.0 * np.log(y[m])
        else:
            m = y < 0.0
            out[m] = y[m]
    out[np.isnan(y)] = np.nan
    return out


def _ptype_quantile(kind, alpha, p):
    e = -np.log(p)
    if kind == "H1":
        return np.exp(e ** (-1.0 / alpha))
    if kind == "H2":
        return np.exp(-(e ** (1.0 / alpha)))
    if kind == "H3":
        return -np.exp(-(e ** (-1.0 / alpha)))
    if kind == "H4":
        return -np.exp(e ** (1.0 / alpha))
    if kind == "H5":
        return 1.0 / e
    return -e


@dataclass(frozen=True)
class PStableSpec(_Distribution):
    """One of the six p-max stable types H_kind,alpha(A|x|^B sign x).

    Args:
        kind (str): "H1" .. "H6" (case-insensitive)
        alpha (float): tail parameter; forced to 1 for H5 and H6
        scale_a (float): A of the p-type transform
        power_b (float): B of the p-type transform
    """

    kind: str
    alpha: float = 1.0
    scale_a: float = 1.0
    power_b: float = 1.0

    def __post_init__(self):
        kind = str(self.kind).upper()
        if kind not in KINDS:
            raise InvalidParameterError(f"kind must be one of {', '.join(KINDS)}, got {self.kind!r}")
        object.__setattr__(self, "kind", kind)
        if kind in ("H5", "H6"):
            object.__setattr__(self, "alpha", 1.0)
        for name in ("alpha", "scale_a", "power_b"):
            value = float(getattr(self, name))
            if not np.isfinite(value) or value <= 0.0:
                raise InvalidParameterError(f"{name} must be positive and finite, got {value}")
            object.__setattr__(self, name, value)

    @property
    def family(self):
        return self.kind.lower()

    @property
    def positive_support(self):
        return self.kind in POSITIVE_KINDS

    @property
    def dual_map(self):
        return "reciprocal" if self.positive_support else "negation"

    def reflect(self):
        return self

    def with_transform(self, scale_a, power_b):
        """Compose with x -> scale_a|x|^power_b sign(x)."""
        return replace(self, scale_a=self.scale_a * scale_a ** self.power_b,
                       power_b=self.power_b * power_b)

    def transform(self, x):
        xa = np.asarray(x, dtype=float)
        return self.scale_a * np.abs(xa) ** self.power_b * np.sign(xa)

    def _inverse_transform(self, y):
        return np.sign(y) * (np.abs(y) / self.scale_a) ** (1.0 / self.power_b)

    @property
    def support(self):
        lo, hi = KIND_SUPPORT[self.kind]
        return tuple(float(v) for v in self._inverse_transform(np.array([lo, hi])))

    def _log_cdf(self, x):
        return _ptype_log_cdf(self.kind, self.alpha, self.transform(x))

    def _log_pdf(self, x):
        with np.errstate(divide="ignore"):
            log_jacobian = (np.log(self.scale_a) + np.log(self.power_b)
                            + (self.power_b - 1.0) * np.log(np.abs(x)))
        out = _ptype_log_density(self.kind, self.alpha, self.transform(x)) + log_jacobian
        out[x == 0.0] = -np.inf
        return out

    def _quantile(self, p):
        return self._inverse_transform(_ptype_quantile(self.kind, self.alpha, p))


# ---------------------------------------------------------------------------
# GEV families
# ---------------------------------------------------------------------------

def _reduced_variate(z, xi):
    """s = log(1 + xi z) / xi with the Gumbel limit s = z; NaN outside support."""
    if abs(xi) < GUMBEL_XI:
        return np.array(z, dtype=float)
    t = xi * z
    with np.errstate(divide="ignore", invalid="ignore"):
        s = np.log1p(t) / xi
    if abs(xi) < SERIES_XI:
        small = np.abs(t) < 1e-4
        ts = t[small]
        s[small] = z[small] * (1.0 - ts / 2.0 + ts ** 2 / 3.0 - ts ** 3 / 4.0)
    s[t <= -1.0] = np.nan
    return s


@dataclass(frozen=True)
class GevParams(_Distribution):
    """Linear GEV G_xi(x; mu, sigma) on the real line."""

    mu: float
    sigma: float
    xi: float

    family = "gev"
    positive_support = False
    dual_map = "negation"

    def __post_init__(self):
        _validate_location_scale_shape(self)

    @classmethod
    def gumbel(cls):
        return cls(0.0, 1.0, 0.0)

    @classmethod
    def frechet(cls, alpha):
        return cls(1.0, 1.0 / alpha, 1.0 / alpha)

    @classmethod
    def weibull(cls, alpha):
        return cls(-1.0, 1.0 / alpha, -1.0 / alpha)

    def reflect(self):
        return replace(self, mu=-self.mu)

    def affine(self, scale, shift):
        """Law of (X - shift) / scale, i.e. x -> G(scale * x + shift)."""
        return replace(self, mu=(self.mu - shift) / scale, sigma=self.sigma / scale)

    @property
    def support(self):
        if abs(self.xi) < GUMBEL_XI:
            return (-np.inf, np.inf)
        bound = self.mu - self.sigma / self.xi
        return (bound, np.inf) if self.xi > 0 else (-np.inf, bound)

    def _log_cdf(self, x):
        z = (x - self.mu) / self.sigma
        s = _reduced_variate(z, self.xi)
        with np.errstate(over="ignore"):
            out = -np.exp(-s)
        outside = np.isnan(s) & ~np.isnan(x)
        out[outside] = -np.inf if self.xi > 0 else 0.0
        return out

    def _log_pdf(self, x):
        z = (x - self.mu) / self.sigma
        s = _reduced_variate(z, self.xi)
        with np.errstate(over="ignore", invalid="ignore"):
            out = -np.log(self.sigma) - (1.0 + self.xi) * s - np.exp(-s)
        out[np.isnan(s) & ~np.isnan(x)] = -np.inf
        out[np.isnan(out) & ~np.isnan(x)] = -np.inf
        return out

    def _quantile(self, p):
        log_e = np.log(-np.log(p))
        if abs(self.xi) < GUMBEL_XI:
            return self.mu - self.sigma * log_e
        return self.mu + self.sigma * np.expm1(-self.xi * log_e) / self.xi


@dataclass(frozen=True)
class LogGevParams(_Distribution):
    """H_1^xi(x; mu, sigma) = G_xi(log x; mu, sigma) for x > 0."""

    mu: float
    sigma: float
    xi: float

    family = "loggev"
    positive_support = True
    dual_map = "reciprocal"

    def __post_init__(self):
        _validate_location_scale_shape(self)

    @property
    def gev(self):
        return GevParams(self.mu, self.sigma, self.xi)

    def reflect(self):
        return replace(self, mu=-self.mu)

    @property
    def support(self):
        lo, hi = self.gev.support
        return (float(np.exp(lo)), float(np.exp(hi)))

    def _log_cdf(self, x):
        out = np.full_like(x, -np.inf)
        positive = x > 0.0
        out[positive] = self.gev._log_cdf(np.log(x[positive]))
        out[np.isnan(x)] = np.nan
        return out

    def _log_pdf(self, x):
        out = np.full_like(x, -np.inf)
        positive = x > 0.0
        lx = np.log(x[positive])
        out[positive] = self.gev._log_pdf(lx) - lx
        out[np.isnan(x)] = np.nan
        return out

    def _quantile(self, p):
        return np.exp(self.gev._quantile(p))


def _validate_location_scale_shape(params):
    for name in ("mu", "sigma", "xi"):
        value = float(getattr(params, name))
        if not np.isfinite(value):
            raise InvalidParameterError(f"{name} must be finite, got {value}")
        object.__setattr__(params, name, value)
    if params.sigma <= 0.0:
        raise InvalidParameterError(f"sigma must be positive, got {params.sigma}")


COMPONENT_TYPES = (PStableSpec, LogGevParams, GevParams)


# ---------------------------------------------------------------------------
# Accelerated (product) models
# ---------------------------------------------------------------------------

def _product_log_density(components, y):
    """log of sum_j h_j(y) prod_{i != j} H_i(y), one log-sum-exp per point."""
    if len(components) == 1:
        return components[0]._log_pdf(y)
    log_cdfs = np.array([c._log_cdf(y) for c in components])
    log_pdfs = np.array([c._log_pdf(y) for c in components])
    terms = np.empty_like(log_pdfs)
    for j in range(len(components)):
        terms[j] = log_pdfs[j] + np.delete(log_cdfs, j, axis=0).sum(axis=0)
    with np.errstate(divide="ignore", invalid="ignore"):
        return logsumexp(terms, axis=0)


@dataclass(frozen=True)
class AcceleratedModel(_Distribution):
    """Product of k >= 1 component CDFs (max) or its p-min dual (min).

    Args:
        components (tuple): PStableSpec, LogGevParams or GevParams instances
        orientation (str): "max" or "min"
    """

    components: tuple
    orientation: str = "max"

    def __post_init__(self):
        components = tuple(self.components)
        if not components:
            raise InvalidParameterError("an accelerated model needs at least one component")
        for component in components:
            if not isinstance(component, COMPONENT_TYPES):
                raise InvalidParameterError(f"unsupported component {component!r}")
        object.__setattr__(self, "components", components)
        if self.orientation not in ("max", "min"):
            raise InvalidParameterError(f"orientation must be 'max' or 'min', got {self.orientation!r}")
        if self.orientation == "min" and len({c.dual_map for c in components}) > 1:
            raise InvalidParameterError(
                "min-oriented components must share one dual map (all positive or all real/negative support)"
            )

    @classmethod
    def of(cls, *components, orientation="max"):
        return cls(tuple(components), orientation)

    @property
    def k(self):
        return len(self.components)

    @property
    def dual_map(self):
        return self.components[0].dual_map

    @property
    def primals(self):
        if self.orientation == "max":
            return self.components
        return tuple(c.reflect() for c in self.components)

    @property
    def support(self):
        bounds = np.array([c.support for c in self.primals])
        lo, hi = float(bounds[:, 0].max()), float(bounds[:, 1].max())
        if self.orientation == "max":
            return (lo, hi)
        if self.dual_map == "negation":
            return (-hi, -lo)
        with np.errstate(divide="ignore"):
            return (float(np.divide(1.0, hi)), float(np.divide(1.0, lo)))

    def _to_primal(self, x):
        if self.dual_map == "negation":
            return -x
        with np.errstate(divide="ignore"):
            return 1.0 / x

    def _max_log_cdf(self, y):
        return np.sum([c._log_cdf(y) for c in self.primals], axis=0)

    def _log_cdf(self, x):
        if self.orientation == "max":
            return self._max_log_cdf(x)
        out = log1mexp(self._max_log_cdf(self._to_primal(x)))
        if self.dual_map == "reciprocal":
            out[x <= 0.0] = -np.inf
        return out

    def _log_pdf(self, x):
        if self.orientation == "max":
            return _product_log_density(self.primals, x)
        y = self._to_primal(x)
        out = _product_log_density(self.primals, y)
        if self.dual_map == "reciprocal":
            with np.errstate(divide="ignore", invalid="ignore"):
                out = out - 2.0 * np.log(x)
            out[x <= 0.0] = -np.inf
        return out

    def _max_quantile(self, p):
        primals = self.primals
        if len(primals) == 1:
            return primals[0]._quantile(p)
        lower = np.max([c._quantile(p) for c in primals], axis=0)
        upper = np.max([c._quantile(p ** (1.0 / len(primals))) for c in primals], axis=0)
        return _bisect_quantile(self._max_log_cdf, p, lower, upper)

    def _quantile(self, p):
        if self.orientation == "max":
            return self._max_quantile(p)
        q = self._max_quantile(1.0 - p)
        return self._to_primal(q)

    def _sample(self, n, rng):
        generators = child_generators(rng, self.k)
        draws = np.array([c._sample(n, g) for c, g in zip(self.primals, generators)])
        maxima = draws.max(axis=0)
        if self.orientation == "max":
            return maxima
        return self._to_primal(maxima)


def dual_min(model):
    """p-min dual of a max-oriented model (and back, for accelerated models)."""
    if isinstance(model, COMPONENT_TYPES):
        return AcceleratedModel((model.reflect(),), "min")
    if isinstance(model, AcceleratedModel):
        flipped = "min" if model.orientation == "max" else "max"
        return AcceleratedModel(tuple(c.reflect() for c in model.components), flipped)
    raise InvalidParameterError(f"no p-min dual for {type(model).__name__}")


# ---------------------------------------------------------------------------
# Left-truncated limit
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LeftTruncatedModel(_Distribution):
    """base(x) 1{x >= x0}: an atom of mass base.cdf(x0) at x0 and base density above it."""

    base: object
    jump_x0: float

    def __post_init__(self):
        if not isinstance(self.base, COMPONENT_TYPES + (AcceleratedModel,)):
            raise InvalidParameterError(f"unsupported base {self.base!r}")
        x0 = float(self.jump_x0)
        object.__setattr__(self, "jump_x0", x0)
        mass = self.base.cdf(x0)
        if not 0.0 < mass < 1.0:
            raise InvalidParameterError(f"x0={x0} is not in the interior of the base support (cdf={mass})")

    @property
    def point_mass(self):
        return float(self.base.cdf(self.jump_x0))

    @property
    def support(self):
        return (self.jump_x0, self.base.support[1])

    def _log_cdf(self, x):
        out = self.base._log_cdf(x)
        out[x < self.jump_x0] = -np.inf
        return out

    def _log_pdf(self, x):
        if np.any(x <= self.jump_x0):
            raise DomainError(
                f"density is defined only for x > x0={self.jump_x0}; the atom has mass {self.point_mass}"
            )
        return self.base._log_pdf(x)

    def _quantile(self, p):
        mass = self.point_mass
        out = np.full_like(p, self.jump_x0)
        above = p > mass
        out[above] = self.base._quantile(p[above])
        return out


# ---------------------------------------------------------------------------
# Accelerated l-min law
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AccLMinParams(_Distribution):
    """Minimum of two Weibull-type risks sharing the left endpoint theta.

    Survival exp(-((x-theta)/(sigma1 alpha1))^alpha1 - ((x-theta)/(sigma2 alpha2))^alpha2)
    for x > theta. The two risks are exchangeable, so parameters are stored
    with alpha1 <= alpha2.
    """

    theta: float
    sigma1: float
    alpha1: float
    sigma2: float
    alpha2: float

    family = "acc-lmin"
    k = 2

    def __post_init__(self):
        for name in ("theta", "sigma1", "alpha1", "sigma2", "alpha2"):
            value = float(getattr(self, name))
            if not np.isfinite(value):
                raise InvalidParameterError(f"{name} must be finite, got {value}")
            object.__setattr__(self, name, value)
        if self.sigma1 <= 0.0 or self.sigma2 <= 0.0:
            raise InvalidParameterError("sigma1 and sigma2 must be positive")
        if self.alpha1 <= 1.0 or self.alpha2 <= 1.0:
            raise InvalidParameterError("alpha1 and alpha2 must exceed 1")
        if self.alpha1 > self.alpha2:
            s1, a1 = self.sigma1, self.alpha1
            object.__setattr__(self, "sigma1", self.sigma2)
            object.__setattr__(self, "alpha1", self.alpha2)
            object.__setattr__(self, "sigma2", s1)
            object.__setattr__(self, "alpha2", a1)

    @property
    def phi(self):
        return (self.sigma1, self.alpha1, self.sigma2, self.alpha2)

    @property
    def c_constant(self):
        return (1.0 / (self.sigma1 * self.alpha1)) ** self.alpha1

    @property
    def support(self):
        return (self.theta, np.inf)

    def cumulative_hazard(self, x):
        w = np.maximum(_as_array(x) - self.theta, 0.0)
        hazard = ((w / (self.sigma1 * self.alpha1)) ** self.alpha1
                  + (w / (self.sigma2 * self.alpha2)) ** self.alpha2)
        return _restore(hazard, x)

    def g(self, w):
        """Regular factor of the density: pdf = w^(alpha1-1) g(w) exp(-hazard), w = x - theta."""
        wa = np.maximum(_as_array(w), 0.0)
        first = (1.0 / self.sigma1) * (1.0 / (self.sigma1 * self.alpha1)) ** (self.alpha1 - 1.0)
        second = (1.0 / self.sigma2) * (1.0 / (self.sigma2 * self.alpha2)) ** (self.alpha2 - 1.0)
        return _restore(first + second * wa ** (self.alpha2 - self.alpha1), w)

    def _log_cdf(self, x):
        out = np.full_like(x, -np.inf)
        above = x > self.theta
        out[above] = log1mexp(-self.cumulative_hazard(x[above]))
        return out

    def _log_pdf(self, x):
        out = np.full_like(x, -np.inf)
        above = x > self.theta
        w = x[above] - self.theta
        out[above] = ((self.alpha1 - 1.0) * np.log(w) + np.log(self.g(w))
                      - self.cumulative_hazard(x[above]))
        return out

    def _quantile(self, p):
        e = -np.log1p(-p)
        scales = np.array([[self.sigma1 * self.alpha1, self.alpha1],
                           [self.sigma2 * self.alpha2, self.alpha2]])
        upper = np.min([s * e ** (1.0 / a) for s, a in scales], axis=0)
        lower = np.min([s * (e / 2.0) ** (1.0 / a) for s, a in scales], axis=0)
        return _bisect_quantile(self._log_cdf, p, self.theta + lower, self.theta + upper)

    def _sample(self, n, rng):
        first = self.sigma1 * self.alpha1 * rng.standard_exponential(n) ** (1.0 / self.alpha1)
        second = self.sigma2 * self.alpha2 * rng.standard_exponential(n) ** (1.0 / self.alpha2)
        return self.theta + np.minimum(first, second)


# ---------------------------------------------------------------------------
# Functional surface
# ---------------------------------------------------------------------------

def cdf(model, x):
    return model.cdf(x)


def pdf(model, x):
    return model.pdf(x)


def log_pdf(model, x):
    return model.log_pdf(x)


def quantile(model, p):
    return model.quantile(p)


def sample(model, n, seed=None):
    return model.sample(n, seed)


# ---------------------------------------------------------------------------
# JSON
# ---------------------------------------------------------------------------

def component_to_dict(component):
    if isinstance(component, PStableSpec):
        return {"family": component.family, "alpha": component.alpha,
                "A": component.scale_a, "B": component.power_b}
    return {"family": component.family, "mu": component.mu,
            "sigma": component.sigma, "xi": component.xi}


def component_from_dict(data):
    family = str(data.get("family", "")).lower()
    if family == "loggev":
        return LogGevParams(data["mu"], data["sigma"], data["xi"])
    if family == "gev":
        return GevParams(data["mu"], data["sigma"], data["xi"])
    if family.upper() in KINDS:
        return PStableSpec(family, data.get("alpha", 1.0), data.get("A", 1.0), data.get("B", 1.0))
    raise InvalidParameterError(f"unknown component family {family!r}")


def model_to_dict(model):
    """Serialize any model to the JSON object layout used by the CLI."""
    if isinstance(model, AccLMinParams):
        return {"family": model.family, "theta": model.theta,
                "sigma1": model.sigma1, "alpha1": model.alpha1,
                "sigma2": model.sigma2, "alpha2": model.alpha2}
    if isinstance(model, LeftTruncatedModel):
        data = model_to_dict(model.base)
        data["truncation_x0"] = model.jump_x0
        return data
    if isinstance(model, COMPONENT_TYPES):
        model = AcceleratedModel((model,))
    return {"orientation": model.orientation,
            "components": [component_to_dict(c) for c in model.components]}


def model_from_dict(data):
    if str(data.get("family", "")).lower() == "acc-lmin":
        return AccLMinParams(data["theta"], data["sigma1"], data["alpha1"],
                             data["sigma2"], data["alpha2"])
    if "components" not in data:
        raise InvalidParameterError("model JSON needs a 'components' list")
    components = tuple(component_from_dict(c) for c in data["components"])
    model = AcceleratedModel(components, data.get("orientation", "max"))
    x0 = data.get("truncation_x0")
    if x0 is not None:
        base = components[0] if len(components) == 1 and model.orientation == "max" else model
        return LeftTruncatedModel(base, float(x0))
    return model
