import datetime
import logging
import os

from sqlalchemy import Boolean, Column, DateTime, Float, Integer, String, Text, create_engine
from sqlalchemy.orm import declarative_base, sessionmaker
from sqlalchemy.pool import StaticPool

logger = logging.getLogger(__name__)

# The run store is off unless a URL comes from here or from --db
DATABASE_URL_ENV = "PSTABLE_DATABASE_URL"

Base = declarative_base()
Session = sessionmaker()
engine = None


def _utcnow():
    return datetime.datetime.now(datetime.timezone.utc).replace(tzinfo=None)


class FitRun(Base):
    __tablename__ = "fit_runs"
    id = Column(Integer, primary_key=True)
    created_at = Column(DateTime, default=_utcnow, nullable=False, index=True)
    model_kind = Column(String(20), nullable=False)
    k = Column(Integer)
    n_obs = Column(Integer, nullable=False)
    data_source = Column(String(500))
    loglik = Column(Float)
    converged = Column(Boolean, nullable=False)
    gradient_norm = Column(Float)
    seed = Column(Integer)
    restarts = Column(Integer)
    result_json = Column(Text, nullable=False)
    __table_args__ = {"sqlite_autoincrement": True}

    def __repr__(self):
        return f"<FitRun(kind='{self.model_kind}', n={self.n_obs}, loglik={self.loglik})>"


class ExperimentRun(Base):
    __tablename__ = "experiment_runs"
    id = Column(Integer, primary_key=True)
    created_at = Column(DateTime, default=_utcnow, nullable=False, index=True)
    label = Column(String(200), nullable=False)
    family1 = Column(String(100), nullable=False)
    family2 = Column(String(100), nullable=False)
    n1 = Column(Integer, nullable=False)
    n2 = Column(Integer, nullable=False)
    reps = Column(Integer, nullable=False)
    norm = Column(String(10), nullable=False)
    orientation = Column(String(3), nullable=False)
    seed = Column(Integer)
    regime_case = Column(String(30))
    jump_mass = Column(Float)
    output_path = Column(String(500))
    summary_json = Column(Text)
    __table_args__ = {"sqlite_autoincrement": True}

    def __repr__(self):
        return f"<ExperimentRun(label='{self.label}', regime='{self.regime_case}')>"


def resolve_database_url(url=None):
    """An explicit URL wins over PSTABLE_DATABASE_URL; None means no store."""
    return url or os.environ.get(DATABASE_URL_ENV) or None


def configure(url):
    """
    Bind the session factory to a database and create missing tables

    Args:
        url (str): SQLAlchemy URL, e.g. sqlite:///runs.db or postgresql://...

    Returns:
        Engine: the new engine
    """
    global engine
    if engine is not None:
        engine.dispose()
    kwargs = {"echo": False}
    if url in ("sqlite://", "sqlite:///:memory:"):
        # one shared connection so every session sees the same in-memory database
        kwargs.update(connect_args={"check_same_thread": False}, poolclass=StaticPool)
    engine = create_engine(url, **kwargs)
    Session.configure(bind=engine)
    init_db()
    logger.debug("run store bound to %s", engine.url.render_as_string(hide_password=True))
    return engine


def is_configured():
    return engine is not None


def reset():
    """Unbind the store (used by tests)."""
    global engine
    if engine is not None:
        engine.dispose()
    engine = None
    Session.configure(bind=None)


def init_db():
    Base.metadata.create_all(engine)


def get_db_session():
    return Session()
