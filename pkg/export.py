import datetime
import json
import logging
import math
import os
import tempfile

import numpy as np
import pandas as pd

from errors import DataFormatError

logger = logging.getLogger(__name__)

EXPORT_DIR = "exports"
FLOAT_FORMAT = "%.17g"


def default_export_path(prefix, extension):
    """
    Timestamped path under the exports directory

    Args:
        prefix (str): file name prefix, e.g. the subcommand
        extension (str): extension without the dot

    Returns:
        str: path such as exports/fit_20260101_120000.json
    """
    os.makedirs(EXPORT_DIR, exist_ok=True)
    stamp = datetime.datetime.now().strftime("%Y%m%d_%H%M%S")
    return os.path.join(EXPORT_DIR, f"{prefix}_{stamp}.{extension}")


def _atomic_write(path, write, binary=False):
    """Write through a temp file in the target directory, then rename over ``path``."""
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=".tmp-", dir=directory)
    try:
        with os.fdopen(fd, "wb" if binary else "w", newline=None if binary else "") as handle:
            write(handle)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.remove(tmp)
        raise
    logger.debug("wrote %s", path)
    return path


def to_jsonable(obj):
    """Recursively convert numpy scalars/arrays and non-finite floats to JSON-safe values."""
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [to_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        value = float(obj)
        if math.isnan(value):
            return "nan"
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return value
    return obj


def write_json(obj, path):
    """
    Write an object as pretty-printed JSON, atomically

    Floats use Python's shortest round-trip repr; non-finite values become
    the strings "inf", "-inf" and "nan".

    Args:
        obj: dict/list tree (may hold numpy values)
        path (str): target path

    Returns:
        str: the path written
    """
    text = json.dumps(to_jsonable(obj), indent=2, allow_nan=False)
    return _atomic_write(path, lambda handle: handle.write(text + "\n"))


def read_json(path):
    """Load a JSON file, mapping missing files and parse errors to DataFormatError."""
    if not os.path.isfile(path):
        raise DataFormatError(f"JSON file not found: {path}")
    try:
        with open(path, encoding="utf-8") as handle:
            return json.load(handle)
    except json.JSONDecodeError as exc:
        raise DataFormatError(f"{path} is not valid JSON: {exc}") from exc


def export_to_csv(df, path=None, prefix="table"):
    """
    Export DataFrame to CSV file with 17 significant digits

    Args:
        df (pd.DataFrame): DataFrame to export
        path (str, optional): target path; defaults to a timestamped file under exports/
        prefix (str): name prefix for the default path

    Returns:
        str: Path to the saved file
    """
    if path is None:
        path = default_export_path(prefix, "csv")
    return _atomic_write(path, lambda handle: df.to_csv(handle, index=False, float_format=FLOAT_FORMAT))


def write_values_csv(values, path):
    """One value per line under the header ``value``."""
    frame = pd.DataFrame({"value": np.asarray(values, dtype=float)})
    return export_to_csv(frame, path)


def export_to_excel(sheets, path=None, prefix="report"):
    """
    Export one or more DataFrames to an Excel workbook

    Args:
        sheets (pd.DataFrame or dict): a DataFrame, or {sheet name: DataFrame}
        path (str, optional): target path; defaults to a timestamped file under exports/
        prefix (str): name prefix for the default path

    Returns:
        str: Path to the saved file
    """
    if isinstance(sheets, pd.DataFrame):
        sheets = {"results": sheets}
    if path is None:
        path = default_export_path(prefix, "xlsx")

    def write(handle):
        with pd.ExcelWriter(handle, engine="openpyxl") as writer:
            for name, frame in sheets.items():
                frame.to_excel(writer, sheet_name=str(name)[:31], index=False)

    return _atomic_write(path, write, binary=True)
