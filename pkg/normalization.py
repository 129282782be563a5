"""Normalization constants for the supported parent families and limit-regime
classification of a competing-risk pair.

``power_constants`` and ``linear_constants`` return the per-family constants
and limit laws. ``combine`` merges two blocks' power constants into the
constants that carry block 2's normalization onto block 1. ``classify_regime``
takes the n1 -> infinity limits of those combined constants symbolically
(sympy) under a ``SizeCoupling`` and reports whether the pair converges to an
accelerated product, a single dominant law or a left-truncated law.
"""
import logging
import math
from dataclasses import dataclass, field

import numpy as np
import sympy
from scipy import optimize, special, stats

from distributions import (
    AcceleratedModel,
    GevParams,
    KIND_SUPPORT,
    LeftTruncatedModel,
    PStableSpec,
    model_to_dict,
)
from errors import (
    CapabilityGapError,
    InvalidParameterError,
    NotInLinearDomainError,
    NumericFailureError,
    UnsupportedFamilyError,
)

logger = logging.getLogger(__name__)

FAMILIES = (
    "log-frechet",
    "log-polynomial",
    "uniform",
    "std-normal",
    "general-error",
    "frechet",
    "pareto",
    "skew-normal",
    "polynomial",
)

_ALIASES = {
    "logfrechet": "log-frechet",
    "log_frechet": "log-frechet",
    "logpolynomial": "log-polynomial",
    "log_polynomial": "log-polynomial",
    "normal": "std-normal",
    "std_normal": "std-normal",
    "ged": "general-error",
    "general_error": "general-error",
    "skewnormal": "skew-normal",
    "skew_normal": "skew-normal",
}

SKEW_NORMAL_XTOL = 1e-10


def _canonical_family(name):
    key = str(name).strip().lower()
    key = _ALIASES.get(key, key)
    if key not in FAMILIES:
        raise UnsupportedFamilyError(name, FAMILIES)
    return key


@dataclass(frozen=True)
class ParentFamily:
    """A parent distribution with a known max-domain of attraction.

    Args:
        family (str): one of FAMILIES (a few aliases are accepted)
        alpha (float): tail index for log-frechet, log-polynomial, frechet,
            pareto and polynomial
        nu (float): general-error shape
        lam (float): skew-normal skewness
        lower (float): uniform lower endpoint
        upper (float): uniform upper endpoint
        endpoint (float): right endpoint gamma(F) of polynomial (default 1)
            and of log x for log-polynomial (default 0)
    """

    family: str
    alpha: float = None
    nu: float = None
    lam: float = None
    lower: float = None
    upper: float = None
    endpoint: float = None

    def __post_init__(self):
        family = _canonical_family(self.family)
        object.__setattr__(self, "family", family)
        if family in ("log-frechet", "log-polynomial", "frechet", "pareto", "polynomial"):
            self._require_positive("alpha")
        if family == "general-error":
            self._require_positive("nu")
        if family == "skew-normal":
            if self.lam is None or not np.isfinite(self.lam):
                raise InvalidParameterError("skew-normal needs a finite lam")
            object.__setattr__(self, "lam", float(self.lam))
        if family == "uniform":
            if self.lower is None or self.upper is None:
                raise InvalidParameterError("uniform needs lower and upper")
            if not self.upper > self.lower:
                raise InvalidParameterError(f"uniform needs upper > lower, got [{self.lower}, {self.upper}]")
            object.__setattr__(self, "lower", float(self.lower))
            object.__setattr__(self, "upper", float(self.upper))
        if family in ("polynomial", "log-polynomial"):
            default = 1.0 if family == "polynomial" else 0.0
            endpoint = default if self.endpoint is None else float(self.endpoint)
            if not np.isfinite(endpoint):
                raise InvalidParameterError("endpoint must be finite")
            object.__setattr__(self, "endpoint", endpoint)

    def _require_positive(self, name):
        value = getattr(self, name)
        if value is None or not np.isfinite(value) or value <= 0:
            raise InvalidParameterError(f"{self.family} needs a positive {name}, got {value}")
        object.__setattr__(self, name, float(value))

    @property
    def label(self):
        params = {k: getattr(self, k) for k in ("alpha", "nu", "lam", "lower", "upper", "endpoint")
                  if getattr(self, k) is not None}
        inner = ", ".join(f"{k}={v:g}" for k, v in params.items())
        return f"{self.family}({inner})"

    @property
    def ged_lambda(self):
        nu = self.nu
        return math.sqrt(2.0 ** (-2.0 / nu) * special.gamma(1.0 / nu) / special.gamma(3.0 / nu))

    @property
    def scipy_dist(self):
        """Frozen scipy distribution for the families evaluated through scipy."""
        if self.family == "std-normal":
            return stats.norm()
        if self.family == "general-error":
            return stats.gennorm(self.nu, scale=self.ged_lambda * 2.0 ** (1.0 / self.nu))
        if self.family == "skew-normal":
            return stats.skewnorm(self.lam)
        return None

    @property
    def support(self):
        f = self.family
        if f == "log-frechet":
            return (1.0, np.inf)
        if f == "log-polynomial":
            return (math.exp(self.endpoint - 1.0), math.exp(self.endpoint))
        if f == "uniform":
            return (self.lower, self.upper)
        if f in ("frechet",):
            return (0.0, np.inf)
        if f == "pareto":
            return (1.0, np.inf)
        if f == "polynomial":
            return (self.endpoint - 1.0, self.endpoint)
        return (-np.inf, np.inf)

    @property
    def positive_support(self):
        return self.support[0] >= 0.0

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        f = self.family
        dist = self.scipy_dist
        if dist is not None:
            return dist.cdf(x)
        lo, hi = self.support
        out = np.where(x >= hi, 1.0, 0.0)
        inside = (x > lo) & (x < hi)
        xi = x[inside]
        with np.errstate(divide="ignore", invalid="ignore"):
            if f == "log-frechet":
                values = np.exp(-np.log(xi) ** -self.alpha)
            elif f == "log-polynomial":
                values = 1.0 - (self.endpoint - np.log(xi)) ** self.alpha
            elif f == "uniform":
                values = (xi - lo) / (hi - lo)
            elif f == "frechet":
                values = np.exp(-xi ** -self.alpha)
            elif f == "pareto":
                values = 1.0 - xi ** -self.alpha
            else:
                values = 1.0 - (self.endpoint - xi) ** self.alpha
        out[inside] = values
        return out

    def quantile(self, u):
        u = np.asarray(u, dtype=float)
        f = self.family
        dist = self.scipy_dist
        if dist is not None:
            return dist.ppf(u)
        if f == "log-frechet":
            return np.exp((-np.log(u)) ** (-1.0 / self.alpha))
        if f == "log-polynomial":
            return np.exp(self.endpoint - (-np.expm1(np.log(u))) ** (1.0 / self.alpha))
        if f == "uniform":
            return self.lower + (self.upper - self.lower) * u
        if f == "frechet":
            return (-np.log(u)) ** (-1.0 / self.alpha)
        if f == "pareto":
            return (-np.expm1(np.log(u))) ** (-1.0 / self.alpha)
        return self.endpoint - (-np.expm1(np.log(u))) ** (1.0 / self.alpha)

    def upper_quantile(self, n):
        """F^{-1}(1 - 1/n); skew-normal by bisection on the survival function."""
        if self.family != "skew-normal":
            return float(self.quantile(1.0 - 1.0 / n))
        dist = self.scipy_dist
        target = 1.0 / n
        lower, upper = -10.0, math.sqrt(2.0 * math.log(n)) + 5.0
        while dist.sf(upper) > target:
            upper *= 2.0
        return optimize.bisect(lambda x: dist.sf(x) - target, lower, upper, xtol=SKEW_NORMAL_XTOL)


@dataclass(frozen=True)
class PowerConstants:
    """alpha_n, beta_n and the p-max limit of alpha_n |M_n|^beta_n sign(M_n).

    alpha_n is held on the log scale; for large n it under- or overflows.
    """

    log_alpha: float
    beta: float
    limit: PStableSpec

    @property
    def alpha(self):
        return math.exp(self.log_alpha) if self.log_alpha < 709.0 else math.inf

    def normalize(self, m):
        m = np.asarray(m, dtype=float)
        with np.errstate(divide="ignore", over="ignore"):
            return np.sign(m) * np.exp(self.log_alpha + self.beta * np.log(np.abs(m)))

    def __iter__(self):
        return iter((self.alpha, self.beta, self.limit))


@dataclass(frozen=True)
class LinearConstants:
    """a_n, b_n and the l-max limit of a_n (M_n - b_n)."""

    a: float
    b: float
    limit_type: str
    limit_alpha: float = None

    @property
    def limit(self):
        if self.limit_type == "gumbel":
            return GevParams.gumbel()
        if self.limit_type == "frechet":
            return GevParams.frechet(self.limit_alpha)
        return GevParams.weibull(self.limit_alpha)

    def normalize(self, m):
        return self.a * (np.asarray(m, dtype=float) - self.b)

    def __iter__(self):
        return iter((self.a, self.b, (self.limit_type, self.limit_alpha)))


def _check_n(n):
    if n < 2:
        raise InvalidParameterError(f"block size must be >= 2, got {n}")


def limit_spec(parent):
    """p-max limit type of the parent (A = B = 1)."""
    f = parent.family
    if f == "log-frechet":
        return PStableSpec("H1", parent.alpha)
    if f == "log-polynomial":
        return PStableSpec("H2", parent.alpha)
    if f == "uniform":
        if parent.upper <= 0:
            raise CapabilityGapError("power constants for uniform parents need upper > 0")
        return PStableSpec("H2", 1.0)
    if f == "polynomial":
        if parent.endpoint > 0:
            return PStableSpec("H2", parent.alpha)
        if parent.endpoint == 0:
            return PStableSpec("H6")
        return PStableSpec("H4", parent.alpha)
    return PStableSpec("H5")


def _normal_linear(n):
    a = math.sqrt(2.0 * math.log(n))
    b = a - math.log(4.0 * math.pi * math.log(n)) / (2.0 * a)
    return a, b


def _ged_linear(parent, n):
    nu = parent.nu
    ln = math.log(n)
    a = 2.0 ** (-1.0 / nu) * (nu / parent.ged_lambda) * ln ** (1.0 - 1.0 / nu)
    b = (nu * ln - (nu - 1.0) / nu * math.log(2.0 * special.gamma(1.0 / nu) * ln)) / a
    return a, b


def _skew_normal_linear(parent, n):
    b = parent.upper_quantile(n)
    a = b if parent.lam >= 0 else (1.0 + parent.lam ** 2) * b
    return a, b


def power_constants(parent, n):
    """Power normalization constants (alpha_n, beta_n) and p-max limit for block size n.

    Args:
        parent (ParentFamily): parent distribution
        n (int): block size, n >= 2

    Returns:
        PowerConstants: unpacks as (alpha_n, beta_n, limit)
    """
    _check_n(n)
    f = parent.family
    limit = limit_spec(parent)
    if f == "log-frechet":
        return PowerConstants(0.0, n ** (-1.0 / parent.alpha), limit)
    if f == "log-polynomial":
        root = n ** (1.0 / parent.alpha)
        return PowerConstants(-root * parent.endpoint, root, limit)
    if f == "uniform":
        beta = parent.upper * n / (parent.upper - parent.lower)
        return PowerConstants(-beta * math.log(parent.upper), beta, limit)
    if f in ("frechet", "pareto"):
        return PowerConstants(-math.log(n), parent.alpha, limit)
    if f == "polynomial":
        root = n ** (1.0 / parent.alpha)
        gamma = parent.endpoint
        if gamma > 0:
            beta = gamma * root
            return PowerConstants(-beta * math.log(gamma), beta, limit)
        if gamma == 0:
            return PowerConstants(math.log(n), parent.alpha, limit)
        return PowerConstants(gamma * root * math.log(-gamma), -gamma * root, limit)

    if f == "std-normal":
        a, b = _normal_linear(n)
    elif f == "general-error":
        a, b = _ged_linear(parent, n)
    else:
        a, b = _skew_normal_linear(parent, n)
    if b <= 0:
        raise NumericFailureError(f"{parent.label}: b_n = {b} <= 0 at n = {n}; block size too small")
    if f == "skew-normal" and parent.lam >= 0:
        return PowerConstants(-a * a * math.log(a), a * a, limit)
    return PowerConstants(-a * b * math.log(b), a * b, limit)


def linear_constants(parent, n):
    """Linear normalization constants (a_n, b_n) and l-max limit for block size n."""
    _check_n(n)
    f = parent.family
    if f == "log-frechet":
        raise NotInLinearDomainError(
            "log-frechet has no linear max-domain of attraction; use power normalization"
        )
    if f == "log-polynomial":
        return LinearConstants(n ** (1.0 / parent.alpha) / math.exp(parent.endpoint),
                               math.exp(parent.endpoint), "weibull", parent.alpha)
    if f == "uniform":
        return LinearConstants(n / (parent.upper - parent.lower), parent.upper, "weibull", 1.0)
    if f in ("frechet", "pareto"):
        return LinearConstants(n ** (-1.0 / parent.alpha), 0.0, "frechet", parent.alpha)
    if f == "polynomial":
        return LinearConstants(n ** (1.0 / parent.alpha), parent.endpoint, "weibull", parent.alpha)
    if f == "std-normal":
        a, b = _normal_linear(n)
    elif f == "general-error":
        a, b = _ged_linear(parent, n)
    else:
        a, b = _skew_normal_linear(parent, n)
    return LinearConstants(a, b, "gumbel")


def combine(alpha1n, beta1n, alpha2n, beta2n):
    """alpha_n = alpha1n (1/alpha2n)^(beta1n/beta2n), beta_n = beta1n/beta2n."""
    values = np.array([alpha1n, beta1n, alpha2n, beta2n], dtype=float)
    if np.any(np.isnan(values)) or np.any(values <= 0):
        raise InvalidParameterError(f"combine needs positive inputs, got {values.tolist()}")
    log_alpha, beta = combine_log(math.log(alpha1n), beta1n, math.log(alpha2n), beta2n)
    return math.exp(log_alpha), beta


def combine_log(log_alpha1n, beta1n, log_alpha2n, beta2n):
    """``combine`` on log alpha's; returns (log alpha_n, beta_n)."""
    beta = beta1n / beta2n
    return log_alpha1n - beta * log_alpha2n, beta


# ---------------------------------------------------------------------------
# Couplings and symbolic limits
# ---------------------------------------------------------------------------

COUPLING_RULES = ("proportional", "power", "log-power", "loglog-power")
_RULE_PREFIX = {"prop": "proportional", "pow": "power", "logpow": "log-power",
                "loglogpow": "loglog-power"}


@dataclass(frozen=True)
class SizeCoupling:
    """n2 as a function of n1: c n1 | a n1^c | a (log n1)^c | a (log log n1)^c."""

    rule: str
    c: float
    a: float = 1.0

    def __post_init__(self):
        rule = _RULE_PREFIX.get(self.rule, self.rule)
        if rule not in COUPLING_RULES:
            raise InvalidParameterError(f"coupling rule must be one of {', '.join(COUPLING_RULES)}")
        object.__setattr__(self, "rule", rule)
        if not self.c > 0 or not self.a > 0:
            raise InvalidParameterError(f"coupling needs c > 0 and a > 0, got c={self.c}, a={self.a}")
        if rule == "proportional":
            object.__setattr__(self, "a", 1.0)

    @classmethod
    def parse(cls, text):
        """Parse ``prop:c``, ``pow:a:c``, ``logpow:[a:]c`` or ``loglogpow:[a:]c``."""
        parts = str(text).split(":")
        prefix = parts[0].strip().lower()
        try:
            numbers = [float(p) for p in parts[1:]]
        except ValueError as exc:
            raise InvalidParameterError(f"bad coupling {text!r}: {exc}") from exc
        if prefix not in _RULE_PREFIX:
            raise InvalidParameterError(
                f"bad coupling {text!r}; expected prop:c, pow:a:c, logpow:c or loglogpow:c"
            )
        if prefix == "prop" and len(numbers) == 1:
            return cls("proportional", numbers[0])
        if prefix == "pow" and len(numbers) == 2:
            return cls("power", numbers[1], numbers[0])
        if prefix in ("logpow", "loglogpow") and len(numbers) in (1, 2):
            a, c = (1.0, numbers[0]) if len(numbers) == 1 else numbers
            return cls(_RULE_PREFIX[prefix], c, a)
        raise InvalidParameterError(f"bad coupling {text!r}: wrong number of parameters")

    def __str__(self):
        if self.rule == "proportional":
            return f"n2 = {self.c:g} n1"
        inner = {"power": "n1", "log-power": "log n1", "loglog-power": "log log n1"}[self.rule]
        return f"n2 = {self.a:g} ({inner})^{self.c:g}"

    def expression(self, n):
        c, a = _rational(self.c), _rational(self.a)
        if self.rule == "proportional":
            return c * n
        if self.rule == "power":
            return a * n ** c
        if self.rule == "log-power":
            return a * sympy.log(n) ** c
        return a * sympy.log(sympy.log(n)) ** c

    def size(self, n1):
        """Integer n2 for a concrete n1 (at least 1)."""
        if self.rule == "proportional":
            value = self.c * n1
        elif self.rule == "power":
            value = self.a * n1 ** self.c
        elif self.rule == "log-power":
            value = self.a * math.log(n1) ** self.c
        else:
            value = self.a * math.log(math.log(n1)) ** self.c
        return max(1, int(round(value)))


def _rational(value):
    return sympy.nsimplify(float(value), rational=True)


def _symbolic_normal(n):
    a = sympy.sqrt(2 * sympy.log(n))
    b = a - sympy.log(4 * sympy.pi * sympy.log(n)) / (2 * a)
    return a, b


def _symbolic_constants(parent, n):
    """(log alpha_n, beta_n) as sympy expressions in the block size ``n``.

    Skew-normal uses the two-term tail expansion of F^{-1}(1 - 1/n).
    """
    f = parent.family
    if f == "log-frechet":
        return sympy.Integer(0), n ** (-1 / _rational(parent.alpha))
    if f == "log-polynomial":
        root = n ** (1 / _rational(parent.alpha))
        return -root * _rational(parent.endpoint), root
    if f == "uniform":
        l, u = _rational(parent.lower), _rational(parent.upper)
        beta = u * n / (u - l)
        return -beta * sympy.log(u), beta
    if f in ("frechet", "pareto"):
        return -sympy.log(n), _rational(parent.alpha)
    if f == "polynomial":
        root = n ** (1 / _rational(parent.alpha))
        gamma = _rational(parent.endpoint)
        if gamma > 0:
            return -gamma * root * sympy.log(gamma), gamma * root
        if gamma == 0:
            return sympy.log(n), _rational(parent.alpha)
        return gamma * root * sympy.log(-gamma), -gamma * root

    if f == "std-normal":
        a, b = _symbolic_normal(n)
    elif f == "general-error":
        nu = _rational(parent.nu)
        lam = sympy.sqrt(2 ** (-2 / nu) * sympy.gamma(1 / nu) / sympy.gamma(3 / nu))
        ln = sympy.log(n)
        a = 2 ** (-1 / nu) * (nu / lam) * ln ** (1 - 1 / nu)
        b = (nu * ln - (nu - 1) / nu * sympy.log(2 * sympy.gamma(1 / nu) * ln)) / a
    else:
        lam = _rational(parent.lam)
        if lam == 0:
            a, b = _symbolic_normal(n)
        elif lam > 0:
            a, b = _symbolic_normal(2 * n)
            a = b
        else:
            s = 1 + lam ** 2
            r = sympy.sqrt(2 * sympy.log(n) / s)
            b = r - (sympy.log(sympy.pi * abs(lam) * s) + sympy.log(r ** 2)) / (s * r)
            a = s * b
    if f == "skew-normal" and parent.lam >= 0:
        return -a * a * sympy.log(a), a * a
    return -a * b * sympy.log(b), a * b


def _limit(expr, n):
    """Numeric value of lim_{n->oo} expr, +-inf, or None when sympy cannot decide."""
    try:
        value = sympy.limit(expr, n, sympy.oo)
    except (NotImplementedError, ValueError, TypeError, RecursionError) as exc:
        logger.debug("limit of %s failed: %s", expr, exc)
        return None
    if value == sympy.oo:
        return math.inf
    if value == -sympy.oo:
        return -math.inf
    if value.is_real and value.is_finite:
        return float(value)
    logger.debug("limit of %s is not a real number: %s", expr, value)
    return None


# ---------------------------------------------------------------------------
# Regime classification
# ---------------------------------------------------------------------------

REGIME_CASES = ("accelerated", "single-dominant", "left-truncated", "inconclusive")


@dataclass
class RegimeReport:
    """Limit regime of max(M1, M2) normalized by a block's power constants.

    ``limit_a``/``limit_b`` are the limits A, B of the combined constants;
    ``rule`` names the sub-case that applied ("i", "ii(a)" .. "ii(d)",
    "iii", or "pointwise" when only the pointwise limit of the block-1
    argument decides).
    """

    case: str
    limit_a: float = None
    limit_b: float = None
    dominant: int = None
    jump_x0: float = None
    limit_model: object = None
    rule: str = ""
    notes: list = field(default_factory=list)

    @property
    def normalize_by(self):
        return 1 if self.dominant == 1 else 2

    def to_dict(self):
        return {
            "case": self.case,
            "dominant": self.dominant,
            "A": self.limit_a,
            "B": self.limit_b,
            "x0": self.jump_x0,
            "rule": self.rule,
            "limit_model": None if self.limit_model is None else model_to_dict(self.limit_model),
            "notes": list(self.notes),
        }


def _literal_rule(first, log_a, b):
    """Sub-case label when the listed (A, B) conditions hold literally for block 1."""
    a = _exp(log_a)
    if first.kind in ("H1", "H5"):
        return "ii(b)" if a == math.inf and b < math.inf else "pointwise"
    if first.kind == "H2":
        if (b == 0 and 1.0 <= a < math.inf) or (a == math.inf and b < math.inf):
            return "ii(c)"
        return "pointwise"
    upper_end = KIND_SUPPORT[first.kind][1]
    if (b == 0 and a <= -upper_end) or (a == 0 and b < math.inf):
        return "ii(d)"
    return "pointwise"


def _dominance(winner, h1, h2, log_a, b, notes):
    # roles exchanged when block 1 wins; only the pointwise argument applies
    rule = _literal_rule(h1, log_a, b) if winner == 2 else "pointwise"
    return RegimeReport(
        case="single-dominant",
        limit_a=_exp(log_a),
        limit_b=b,
        dominant=winner,
        limit_model=h2 if winner == 2 else h1,
        rule=rule,
        notes=notes,
    )


def _exp(log_value):
    if log_value is None:
        return None
    if log_value >= 709.0:
        return math.inf
    return math.exp(log_value)


def classify_regime(parent1, parent2, coupling):
    """Limit regime of the maximum of two competing block maxima.

    Args:
        parent1 (ParentFamily): parent of block 1 (size n1)
        parent2 (ParentFamily): parent of block 2 (size n2 = coupling(n1))
        coupling (SizeCoupling): growth of n2 with n1

    Returns:
        RegimeReport: normalized by block 2 unless block 1 dominates
    """
    h1, h2 = limit_spec(parent1), limit_spec(parent2)
    notes = [f"block 1: {parent1.label} -> {h1.kind}; block 2: {parent2.label} -> {h2.kind}; {coupling}"]

    if h1.positive_support != h2.positive_support:
        winner = 2 if h2.positive_support else 1
        report = RegimeReport("single-dominant", dominant=winner, limit_model=h2 if winner == 2 else h1,
                              rule="ii(a)", notes=notes)
        logger.info("regime: single-dominant (%d) by opposite-side limits", winner)
        return report

    n = sympy.Symbol("n", positive=True)
    log_a1, beta1 = _symbolic_constants(parent1, n)
    log_a2, beta2 = _symbolic_constants(parent2, coupling.expression(n))
    ratio = beta1 / beta2
    b = _limit(ratio, n)
    log_a = _limit(log_a1 - ratio * log_a2, n)
    r = _limit(log_a1 * beta2 / beta1 - log_a2, n)
    logger.debug("limits: B=%s, log A=%s, log(alpha_n)/beta_n=%s", b, log_a, r)

    if b is None or log_a is None:
        notes.append("limits of the combined constants could not be determined")
        return RegimeReport("inconclusive", limit_a=_exp(log_a), limit_b=b, rule="", notes=notes)

    # +1: block 2 wins when log|x_n| -> +inf (positive types); -1 for negative types
    direction = 1.0 if h2.positive_support else -1.0

    if 0.0 < b < math.inf:
        if math.isfinite(log_a):
            a = math.exp(log_a)
            model = AcceleratedModel((h1.with_transform(a, b), h2), "max")
            report = RegimeReport("accelerated", limit_a=a, limit_b=b, dominant=None,
                                  limit_model=model, rule="i", notes=notes)
            _flag_power_coupling_constant(parent1, parent2, coupling, a, report)
            return report
        winner = 2 if direction * log_a > 0 else 1
        return _dominance(winner, h1, h2, log_a, b, notes)

    if b == 0.0:
        if not math.isfinite(log_a):
            winner = 2 if direction * log_a > 0 else 1
            return _dominance(winner, h1, h2, log_a, b, notes)
        x_limit = direction * math.exp(log_a)
        value = h1.cdf(x_limit)
        if value == 1.0:
            return _dominance(2, h1, h2, log_a, b, notes)
        if value == 0.0:
            return _dominance(1, h1, h2, log_a, b, notes)
        notes.append(f"block-1 argument converges to {x_limit:g} where its limit cdf is {value:g}")
        return RegimeReport("inconclusive", limit_a=math.exp(log_a), limit_b=b, rule="", notes=notes)

    # B = infinity
    if r is None:
        notes.append("lim (log alpha_n)/beta_n could not be determined")
        return RegimeReport("inconclusive", limit_a=_exp(log_a), limit_b=b, rule="", notes=notes)
    if not math.isfinite(r):
        winner = 2 if direction * r > 0 else 1
        return _dominance(winner, h1, h2, log_a, b, notes)

    x0 = direction * math.exp(-r)
    lo, hi = h2.support
    if x0 <= lo:
        return _dominance(2, h1, h2, log_a, b, notes)
    if x0 >= hi:
        return _dominance(1, h1, h2, log_a, b, notes)
    model = LeftTruncatedModel(h2, x0)
    logger.info("regime: left-truncated at x0=%g", x0)
    return RegimeReport("left-truncated", limit_a=_exp(log_a), limit_b=b, dominant=None,
                        jump_x0=x0, limit_model=model, rule="iii", notes=notes)


def _flag_power_coupling_constant(parent1, parent2, coupling, a, report):
    heavy = ("pareto", "frechet")
    if (parent1.family in heavy and parent2.family in heavy and coupling.rule == "power"
            and parent1.alpha != parent2.alpha):
        report.notes.append(
            f"A = a^(alpha1/alpha2) = {a:.17g} from the combined constants; it equals the coupling "
            f"coefficient a = {coupling.a:g} only when alpha1 == alpha2"
        )
