"""Command-line front-end: ``pstable <subcommand> [flags]``.

Exit codes follow the exception classes in ``errors``: 0 success, 2 usage,
3 capability gap, 4 non-convergence, 5 numeric failure.
"""
import argparse
import json
import logging
import os
import sys
from dataclasses import dataclass, replace

import database
from datasets import get_scenario, list_scenarios, load_sample_csv, search_scenarios
from db_operations import get_fit_result_json, get_recent_runs, save_experiment_run, save_fit_run
from distributions import AccLMinParams, AcceleratedModel, LogGevParams, model_from_dict, model_to_dict
from errors import (
    DataFormatError,
    InvalidParameterError,
    NonConvergenceError,
    NumericFailureError,
    PStableError,
    UsageError,
)
from export import (
    default_export_path,
    export_to_csv,
    export_to_excel,
    read_json,
    to_jsonable,
    write_json,
    write_values_csv,
)
from gof import DEFAULT_N_BOOT, TESTS, bootstrap_p_value, goodness_of_fit, lrt, pp_qq_points
from inference import (
    DEFAULT_RESTARTS,
    DEFAULT_SEED,
    MODEL_KINDS,
    FitOptions,
    FitResult,
    ValidationConfig,
    expected_information,
    fit,
    validate_lmin_estimator,
)
from normalization import ParentFamily, SizeCoupling, classify_regime
from simulation import DEFAULT_REPLICATIONS, CompetingExperiment, convergence_table, run_experiment

logger = logging.getLogger(__name__)

PARENT_FIELDS = ("alpha", "nu", "lam", "lower", "upper", "endpoint")
INPUT_FLAGS = ("data", "model_json", "fit_single", "fit_acc")
LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


@dataclass(frozen=True)
class CliConfig:
    """Settings shared by every subcommand, checked before any computation."""

    command: str
    seed: int = DEFAULT_SEED
    threads: int = None
    out: str = None
    db_url: str = None
    inputs: tuple = ()
    log_level: int = logging.INFO

    @classmethod
    def from_args(cls, args):
        if args.verbose:
            level = logging.DEBUG
        elif args.quiet:
            level = logging.WARNING
        else:
            level = logging.INFO
        return cls(
            command=args.command,
            seed=args.seed,
            threads=args.threads,
            out=args.out,
            db_url=database.resolve_database_url(args.db),
            inputs=tuple(getattr(args, name) for name in INPUT_FLAGS if getattr(args, name, None)),
            log_level=level,
        )

    def validate(self):
        if self.threads is not None and self.threads < 1:
            raise InvalidParameterError(f"--threads must be >= 1, got {self.threads}")
        if self.seed < 0:
            raise InvalidParameterError(f"--seed must be non-negative, got {self.seed}")
        for path in self.inputs:
            if not os.path.isfile(path):
                raise DataFormatError(f"input file not found: {path}")
        if self.out:
            _check_writable(self.out)
        return self


def _check_writable(path):
    if os.path.isdir(path):
        raise UsageError(f"--out {path} is a directory")
    parent = os.path.dirname(os.path.abspath(path))
    while not os.path.exists(parent):
        parent = os.path.dirname(parent)
    if not os.path.isdir(parent) or not os.access(parent, os.W_OK):
        raise UsageError(f"cannot write {path}: {parent} is not a writable directory")


# ---------------------------------------------------------------------------
# Shared flag groups
# ---------------------------------------------------------------------------

def _common_flags():
    common = argparse.ArgumentParser(add_help=False)
    verbosity = common.add_mutually_exclusive_group()
    verbosity.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    verbosity.add_argument("--quiet", action="store_true", help="warnings and errors only")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED, help="base random seed (default 42)")
    common.add_argument("--threads", type=int, default=None, help="cap on worker threads")
    common.add_argument("--out", default=None, help="output path (default: timestamped file under exports/)")
    common.add_argument("--db", default=None,
                        help=f"SQLAlchemy URL of the run store (overrides ${database.DATABASE_URL_ENV})")
    return common


def _parent_flags():
    parents = argparse.ArgumentParser(add_help=False)
    for i in (1, 2):
        group = parents.add_argument_group(f"block {i} parent")
        group.add_argument(f"--family{i}", default=None, help="parent family, e.g. log-frechet, pareto, uniform")
        for name in PARENT_FIELDS:
            group.add_argument(f"--{name}{i}", type=float, default=None)
    return parents


def _model_source_flags(parser):
    source = parser.add_mutually_exclusive_group(required=True)
    source.add_argument("--model-json", default=None, help="model JSON or a fit result JSON")
    source.add_argument("--loggev", nargs=3, type=float, action="append", metavar=("MU", "SIGMA", "XI"),
                        help="inline log-GEV component; repeat for an accelerated model")
    parser.add_argument("--orientation", choices=("max", "min"), default="max",
                        help="orientation of an inline model")


def _parent(args, i):
    family = getattr(args, f"family{i}")
    if family is None:
        raise InvalidParameterError(f"--family{i} is required")
    return ParentFamily(family, **{name: getattr(args, f"{name}{i}") for name in PARENT_FIELDS})


def _coupling(args):
    return SizeCoupling.parse(args.coupling) if args.coupling else None


def _load_model(args):
    """Model from --model-json (a model or a fit result) or from inline --loggev triples."""
    if args.loggev:
        return AcceleratedModel(tuple(LogGevParams(*triple) for triple in args.loggev), args.orientation), None
    data = read_json(args.model_json)
    kind = None
    if isinstance(data, dict) and "model" in data:
        kind = data.get("kind")
        data = data["model"]
    if not isinstance(data, dict):
        raise DataFormatError(f"{args.model_json}: expected a JSON object")
    try:
        return model_from_dict(data), kind
    except (KeyError, TypeError) as exc:
        raise DataFormatError(f"{args.model_json}: malformed model ({exc})") from exc


def _load_fit(path):
    data = read_json(path)
    if not isinstance(data, dict):
        raise DataFormatError(f"{path}: expected a fit result object")
    return FitResult.from_dict(data)


def _emit_json(obj, out):
    """Write JSON to --out, or print it when no path is given."""
    if out:
        write_json(obj, out)
        logger.info("wrote %s", out)
    else:
        print(json.dumps(to_jsonable(obj), indent=2))


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def cmd_simulate(args, config):
    if args.scenario:
        experiment = get_scenario(args.scenario).experiment(
            reps=args.reps, seed=config.seed, norm=args.norm, orientation=args.orientation
        )
        overrides = {k: v for k, v in (("n1", args.n1), ("n2", args.n2), ("coupling", _coupling(args)),
                                       ("normalize_by", args.normalize_by)) if v is not None}
        experiment = replace(experiment, **overrides)
    else:
        if args.n1 is None or args.n2 is None:
            raise InvalidParameterError("--n1 and --n2 are required without --scenario")
        experiment = CompetingExperiment(
            parent1=_parent(args, 1),
            parent2=_parent(args, 2),
            n1=args.n1,
            n2=args.n2,
            reps=args.reps,
            norm=args.norm or "power",
            normalize_by=args.normalize_by,
            orientation=args.orientation,
            seed=config.seed,
            coupling=_coupling(args),
        )
    result = run_experiment(experiment, threads=config.threads)
    out = config.out or default_export_path("simulate", "csv")
    sidecar = os.path.splitext(out)[0] + ".json"
    write_values_csv(result.normalized_values, out)
    write_json(result.to_dict(), sidecar)
    save_experiment_run(result, out)
    print(f"{experiment.reps} values -> {out}; regime: {result.regime.case} (sidecar {sidecar})")
    return 0


def cmd_classify(args, config):
    report = classify_regime(_parent(args, 1), _parent(args, 2), SizeCoupling.parse(args.coupling))
    _emit_json(report.to_dict(), config.out)
    return 0


def cmd_fit(args, config):
    data = load_sample_csv(args.data)
    options = FitOptions(restarts=args.restarts, seed=config.seed, x0=args.x0, threads=config.threads)
    out = config.out or default_export_path("fit", "json")
    try:
        result = fit(args.model, data, options, k=args.k)
    except NonConvergenceError as exc:
        payload = exc.result.to_dict() if exc.result is not None else {
            "kind": args.model, "model": None, "estimates": {}, "std_errors": {},
            "loglik": float("nan"), "converged": False, "n": int(data.size), "notes": [str(exc)],
        }
        write_json(payload, out)
        raise
    write_json(result.to_dict(), out)
    save_fit_run(result, args.data, options)
    print(f"{result.kind}: loglik = {result.loglik:.6f}, converged = {result.converged} -> {out}")
    for name, value in result.estimates.items():
        print(f"  {name:>8} = {value: .6g}  (se {result.std_errors[name]:.3g})")
    for note in result.notes:
        logger.warning("%s", note)
    if not result.converged:
        logger.error("fit did not converge; estimates written with converged = false")
        return NonConvergenceError.exit_code
    return 0


def _refit(kind, args, fallback):
    options = FitOptions(restarts=args.restarts, seed=args.seed, threads=1)

    def refit(sample):
        try:
            return fit(kind, sample, options).model
        except (NonConvergenceError, NumericFailureError) as exc:
            logger.debug("bootstrap refit failed, keeping the fitted model: %s", exc)
            return fallback

    return refit


def cmd_gof(args, config):
    data = load_sample_csv(args.data)
    model, kind = _load_model(args)
    tests = TESTS if args.test == "all" else (args.test.upper(),)
    if args.p_method == "bootstrap":
        refit = None
        if args.refit:
            if kind is None:
                raise UsageError("--refit needs a fit result JSON in --model-json")
            refit = _refit(kind, args, model)
        results = [bootstrap_p_value(data, model, test, args.n_boot, config.seed, refit, config.threads)
                   for test in tests]
    else:
        results = list(goodness_of_fit(data, model, tests).values())
    for r in results:
        print(f"{r.method.upper():>4}: statistic = {r.statistic:.6g}, p = {r.p_value:.4g} ({r.p_method})")
    _emit_json({"n": int(data.size), "model": model_to_dict(model),
                "results": [r.to_dict() for r in results]}, config.out)
    return 0


def cmd_lrt(args, config):
    single = _load_fit(args.fit_single)
    accelerated = _load_fit(args.fit_acc)
    result = lrt(single, accelerated)
    print(f"LRT = {result.statistic:.6g}, p = {result.p_value:.4g} (chi-square, 3 df)")
    payload = result.to_dict()
    payload.update(loglik_single=single.loglik, loglik_accelerated=accelerated.loglik,
                   df=3, models=[single.kind, accelerated.kind])
    _emit_json(payload, config.out)
    return 0


def cmd_diagnose(args, config):
    data = load_sample_csv(args.data)
    model, _ = _load_model(args)
    points = pp_qq_points(data, model)
    out = export_to_csv(points, config.out, prefix="diagnose")
    print(f"{len(points)} P-P/Q-Q points -> {out}")
    return 0


def cmd_convergence(args, config):
    if args.scenario:
        experiments = [get_scenario(name).experiment(reps=args.reps, seed=config.seed) for name in args.scenario]
    else:
        if args.n1 is None or args.n2 is None:
            raise InvalidParameterError("--n1 and --n2 are required without --scenario")
        experiments = [CompetingExperiment(_parent(args, 1), _parent(args, 2), args.n1, args.n2,
                                           reps=args.reps, seed=config.seed, coupling=_coupling(args))]
    tests = TESTS if args.test == "all" else (args.test.upper(),)
    table = convergence_table(experiments, tests, args.norms, threads=config.threads)
    out = config.out or default_export_path("convergence", "csv")
    if out.lower().endswith(".xlsx"):
        export_to_excel({"convergence": table}, out)
    else:
        export_to_csv(table, out)
    print(table.to_string(index=False))
    return 0


def cmd_validate(args, config):
    validation = ValidationConfig(
        alpha1=args.alpha1, alpha2=args.alpha2, sigma1=args.sigma1, sigma2=args.sigma2,
        theta=args.theta, sample_sizes=tuple(args.sizes), reps=args.reps, seed=config.seed,
        restarts=args.restarts, threads=config.threads,
    )
    report = validate_lmin_estimator(validation)
    payload = report.to_dict()
    if args.information:
        truth = AccLMinParams(args.theta, args.sigma1, args.alpha1, args.sigma2, args.alpha2)
        payload["expected_information"] = expected_information(truth, seed=config.seed).to_dict()
    print(report.table.to_string(index=False))
    _emit_json(payload, config.out)
    return 0


def cmd_history(args, config):
    if not database.is_configured():
        logger.warning("no run store configured; pass --db or set %s", database.DATABASE_URL_ENV)
        return 0
    if args.show is not None:
        stored = get_fit_result_json(args.show)
        if stored is None:
            raise InvalidParameterError(f"no fit run with id {args.show}")
        _emit_json(stored, config.out)
        return 0
    runs = get_recent_runs(args.kind, args.limit)
    print(runs.to_string(index=False) if not runs.empty else f"no {args.kind} runs stored")
    return 0


def cmd_scenarios(args, config):
    table = list_scenarios()
    if args.search:
        names = {s.name for s in search_scenarios(args.search)}
        table = table[table["name"].isin(names)]
    print(table.to_string(index=False))
    return 0


# ---------------------------------------------------------------------------
# Parser and entry point
# ---------------------------------------------------------------------------

def build_parser():
    common = _common_flags()
    parents = _parent_flags()
    parser = argparse.ArgumentParser(
        prog="pstable",
        description="Accelerated p-max/p-min stable laws for competing risks",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", parents=[common, parents], help="Monte Carlo normalized extremes")
    p.add_argument("--scenario", default=None, help="named preset (see `pstable scenarios`)")
    p.add_argument("--n1", type=int, default=None)
    p.add_argument("--n2", type=int, default=None)
    p.add_argument("--reps", type=int, default=DEFAULT_REPLICATIONS)
    p.add_argument("--norm", choices=("power", "linear"), default=None)
    p.add_argument("--normalize-by", type=int, choices=(1, 2), default=None)
    p.add_argument("--orientation", choices=("max", "min"), default="max")
    p.add_argument("--coupling", default=None, help="prop:c | pow:a:c | logpow:[a:]c | loglogpow:[a:]c")
    p.set_defaults(handler=cmd_simulate)

    p = sub.add_parser("classify", parents=[common, parents], help="limit regime of two competing blocks")
    p.add_argument("--coupling", default="prop:1", help="prop:c | pow:a:c | logpow:[a:]c | loglogpow:[a:]c")
    p.set_defaults(handler=cmd_classify)

    p = sub.add_parser("fit", parents=[common], help="maximum-likelihood fit of a CSV sample")
    p.add_argument("--model", choices=MODEL_KINDS, required=True)
    p.add_argument("--k", type=int, default=2, help="components of an accelerated model")
    p.add_argument("--data", required=True)
    p.add_argument("--restarts", type=int, default=DEFAULT_RESTARTS)
    p.add_argument("--x0", type=float, default=None, help="truncation point for left-truncated fits")
    p.set_defaults(handler=cmd_fit)

    p = sub.add_parser("gof", parents=[common], help="KS / CvM / AD tests of a fitted model")
    p.add_argument("--data", required=True)
    _model_source_flags(p)
    p.add_argument("--test", choices=("ks", "cvm", "ad", "all"), default="all")
    p.add_argument("--p-method", choices=("asymptotic", "bootstrap"), default="asymptotic")
    p.add_argument("--n-boot", type=int, default=DEFAULT_N_BOOT)
    p.add_argument("--refit", action="store_true", help="refit the model on every bootstrap resample")
    p.add_argument("--restarts", type=int, default=3, help="optimizer starts per bootstrap refit")
    p.set_defaults(handler=cmd_gof)

    p = sub.add_parser("lrt", parents=[common], help="single vs accelerated likelihood-ratio test")
    p.add_argument("--fit-single", required=True)
    p.add_argument("--fit-acc", required=True)
    p.set_defaults(handler=cmd_lrt)

    p = sub.add_parser("diagnose", parents=[common], help="P-P and Q-Q points as CSV")
    p.add_argument("--data", required=True)
    _model_source_flags(p)
    p.set_defaults(handler=cmd_diagnose)

    p = sub.add_parser("convergence", parents=[common, parents], help="GOF of normalized extremes vs their limit")
    p.add_argument("--scenario", action="append", default=None, help="preset name; repeat for several")
    p.add_argument("--n1", type=int, default=None)
    p.add_argument("--n2", type=int, default=None)
    p.add_argument("--reps", type=int, default=DEFAULT_REPLICATIONS)
    p.add_argument("--norms", nargs="+", choices=("power", "linear"), default=["power", "linear"])
    p.add_argument("--test", choices=("ks", "cvm", "ad", "all"), default="all")
    p.add_argument("--coupling", default=None)
    p.set_defaults(handler=cmd_convergence)

    p = sub.add_parser("validate", parents=[common], help="consistency and coverage of the l-min MLE")
    p.add_argument("--alpha1", type=float, required=True)
    p.add_argument("--alpha2", type=float, required=True)
    p.add_argument("--sigma1", type=float, default=1.0)
    p.add_argument("--sigma2", type=float, default=1.0)
    p.add_argument("--theta", type=float, default=0.0)
    p.add_argument("--sizes", type=int, nargs="+", default=[500, 2000, 8000])
    p.add_argument("--reps", type=int, default=200)
    p.add_argument("--restarts", type=int, default=3)
    p.add_argument("--information", action="store_true", help="add the Monte Carlo expected information")
    p.set_defaults(handler=cmd_validate)

    p = sub.add_parser("history", parents=[common], help="recent runs in the run store")
    p.add_argument("--kind", choices=("fit", "experiment"), default="fit")
    p.add_argument("--limit", type=int, default=10)
    p.add_argument("--show", type=int, default=None, metavar="ID", help="print one stored fit result")
    p.set_defaults(handler=cmd_history)

    p = sub.add_parser("scenarios", parents=[common], help="list experiment presets")
    p.add_argument("--search", default=None)
    p.set_defaults(handler=cmd_scenarios)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    config = CliConfig.from_args(args)
    logging.basicConfig(level=config.log_level, format=LOG_FORMAT, stream=sys.stderr)
    try:
        config.validate()
        if config.db_url:
            database.configure(config.db_url)
        return args.handler(args, config)
    except PStableError as exc:
        logger.error("%s", exc)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
