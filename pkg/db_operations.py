import json
import logging

import pandas as pd
from sqlalchemy import desc

from database import ExperimentRun, FitRun, get_db_session, is_configured
from export import to_jsonable

logger = logging.getLogger(__name__)


def save_fit_run(fit_result, data_source=None, options=None):
    """
    Record a fit in the run store

    Args:
        fit_result (FitResult): result of inference.fit
        data_source (str, optional): where the data came from (file path)
        options (FitOptions, optional): options the fit ran with

    Returns:
        int: id of the stored row, or None when no store is configured or the write failed
    """
    if not is_configured():
        return None
    session = get_db_session()

    try:
        run = FitRun(
            model_kind=fit_result.kind,
            k=fit_result.k,
            n_obs=int(fit_result.n),
            data_source=data_source,
            loglik=_finite_or_none(fit_result.loglik),
            converged=bool(fit_result.converged),
            gradient_norm=_finite_or_none(fit_result.gradient_norm),
            seed=getattr(options, "seed", None),
            restarts=getattr(options, "restarts", None),
            result_json=json.dumps(to_jsonable(fit_result.to_dict())),
        )
        session.add(run)
        session.commit()
        return run.id

    except Exception as e:
        logger.warning("could not store fit run: %s", e)
        session.rollback()
        return None

    finally:
        session.close()


def save_experiment_run(result, output_path=None):
    """
    Record a Monte Carlo experiment in the run store

    Args:
        result (ReplicationResult): output of simulation.run_experiment
        output_path (str, optional): where the values CSV was written

    Returns:
        int: id of the stored row, or None when no store is configured or the write failed
    """
    if not is_configured():
        return None
    experiment = result.experiment
    session = get_db_session()

    try:
        run = ExperimentRun(
            label=experiment.name[:200],
            family1=experiment.parent1.label,
            family2=experiment.parent2.label,
            n1=experiment.n1,
            n2=experiment.n2,
            reps=experiment.reps,
            norm=experiment.norm,
            orientation=experiment.orientation,
            seed=experiment.seed,
            regime_case=result.regime.case,
            jump_mass=result.empirical_jump_mass,
            output_path=output_path,
            summary_json=json.dumps(to_jsonable(result.to_dict())),
        )
        session.add(run)
        session.commit()
        return run.id

    except Exception as e:
        logger.warning("could not store experiment run: %s", e)
        session.rollback()
        return None

    finally:
        session.close()


_HISTORY_COLUMNS = {
    "fit": (FitRun, ["id", "created_at", "model_kind", "k", "n_obs", "loglik", "converged",
                     "gradient_norm", "data_source"]),
    "experiment": (ExperimentRun, ["id", "created_at", "label", "n1", "n2", "reps", "norm",
                                   "orientation", "regime_case", "jump_mass", "output_path"]),
}


def get_recent_runs(kind="fit", limit=10):
    """
    Most recent stored runs, newest first

    Args:
        kind (str): "fit" or "experiment"
        limit (int): maximum number of rows

    Returns:
        pd.DataFrame: one row per run (empty when nothing is stored)
    """
    table, columns = _HISTORY_COLUMNS[kind]
    if not is_configured():
        return pd.DataFrame(columns=columns)
    session = get_db_session()

    try:
        rows = (
            session.query(table)
            .order_by(desc(table.created_at), desc(table.id))
            .limit(int(limit))
            .all()
        )
        return pd.DataFrame([{c: getattr(row, c) for c in columns} for row in rows], columns=columns)

    except Exception as e:
        logger.warning("could not read %s history: %s", kind, e)
        return pd.DataFrame(columns=columns)

    finally:
        session.close()


def get_fit_result_json(run_id):
    """Stored FitResult JSON of one fit run, or None."""
    if not is_configured():
        return None
    session = get_db_session()

    try:
        run = session.query(FitRun).filter(FitRun.id == int(run_id)).first()
        return None if run is None else json.loads(run.result_json)

    except Exception as e:
        logger.warning("could not load fit run %s: %s", run_id, e)
        return None

    finally:
        session.close()


def _finite_or_none(value):
    if value is None:
        return None
    value = float(value)
    return value if value == value and abs(value) != float("inf") else None
