import json
import os

import numpy as np
import pandas as pd
import pytest

from errors import DataFormatError
from export import (
    export_to_csv,
    export_to_excel,
    read_json,
    to_jsonable,
    write_json,
    write_values_csv,
)


class TestJson:
    def test_non_finite_values_become_strings(self, tmp_path):
        path = write_json({"a": np.inf, "b": [-np.inf, np.nan], "c": np.float64(0.5)}, str(tmp_path / "x.json"))
        with open(path) as handle:
            data = json.load(handle)
        assert data == {"a": "inf", "b": ["-inf", "nan"], "c": 0.5}

    def test_numpy_values(self):
        converted = to_jsonable({1: np.arange(3), "flag": np.bool_(True), "n": np.int64(4)})
        assert converted == {"1": [0, 1, 2], "flag": True, "n": 4}

    def test_floats_round_trip(self, tmp_path):
        value = 0.1 + 0.2
        path = write_json({"value": value}, str(tmp_path / "v.json"))
        assert read_json(path)["value"] == value

    def test_read_errors(self, tmp_path):
        with pytest.raises(DataFormatError):
            read_json(str(tmp_path / "missing.json"))
        broken = tmp_path / "broken.json"
        broken.write_text("{not json")
        with pytest.raises(DataFormatError):
            read_json(str(broken))


class TestCsv:
    def test_values_csv(self, tmp_path):
        path = write_values_csv([0.1, 2.0], str(tmp_path / "values.csv"))
        with open(path) as handle:
            lines = handle.read().splitlines()
        assert lines == ["value", "0.10000000000000001", "2"]

    def test_table_round_trip(self, tmp_path):
        frame = pd.DataFrame({"name": ["a", "b"], "ks": [1 / 3, 2 / 3]})
        path = export_to_csv(frame, str(tmp_path / "table.csv"))
        back = pd.read_csv(path, float_precision="round_trip")
        assert back["ks"].tolist() == frame["ks"].tolist()

    def test_no_temporary_files_left(self, tmp_path):
        write_values_csv([1.0], str(tmp_path / "a.csv"))
        write_json({}, str(tmp_path / "a.json"))
        assert not [name for name in os.listdir(tmp_path) if name.startswith(".tmp-")]

    def test_failed_write_cleans_up(self, tmp_path):
        class Broken(pd.DataFrame):
            def to_csv(self, *args, **kwargs):
                raise OSError("disk full")

        with pytest.raises(OSError):
            export_to_csv(Broken({"x": [1.0]}), str(tmp_path / "b.csv"))
        assert os.listdir(tmp_path) == []

    def test_default_path(self, tmp_path, monkeypatch):
        monkeypatch.chdir(tmp_path)
        path = export_to_csv(pd.DataFrame({"x": [1]}), prefix="convergence")
        assert path.startswith(os.path.join("exports", "convergence_"))
        assert os.path.isfile(path)


class TestExcel:
    def test_sheets_round_trip(self, tmp_path):
        tables = {"power": pd.DataFrame({"ks": [0.01, 0.02]}), "linear": pd.DataFrame({"ks": [0.03]})}
        path = export_to_excel(tables, str(tmp_path / "report.xlsx"))
        back = pd.read_excel(path, sheet_name=None, engine="openpyxl")
        assert list(back) == ["power", "linear"]
        assert back["power"]["ks"].tolist() == [0.01, 0.02]

    def test_single_frame(self, tmp_path):
        path = export_to_excel(pd.DataFrame({"n": [1, 2]}), str(tmp_path / "one.xlsx"))
        assert list(pd.read_excel(path, sheet_name=None)) == ["results"]
