import json
import math

import pandas as pd
import pytest

import database
from cli import main
from distributions import AcceleratedModel, LogGevParams
from export import write_json
from inference import FitResult

PARETO_PAIR = ["--family1", "pareto", "--alpha1", "2", "--family2", "pareto", "--alpha2", "2"]


@pytest.fixture(autouse=True)
def no_store(monkeypatch):
    monkeypatch.delenv(database.DATABASE_URL_ENV, raising=False)
    yield
    database.reset()


@pytest.fixture
def loggev_csv(sample_csv):
    return sample_csv(LogGevParams(1.0, 0.5, 0.1).sample(300, 21), name="loggev.csv")


def read(path):
    with open(path) as handle:
        return json.load(handle)


class TestClassify:
    def test_left_truncated(self, tmp_path):
        out = str(tmp_path / "regime.json")
        code = main(["classify", "--family1", "pareto", "--alpha1", "2", "--family2", "log-frechet",
                     "--alpha2", "4", "--coupling", "logpow:0.0625:4", "--out", out])
        assert code == 0
        report = read(out)
        assert report["case"] == "left-truncated"
        assert report["x0"] == pytest.approx(math.e)

    def test_prints_without_out(self, capsys):
        assert main(["classify", *PARETO_PAIR]) == 0
        assert json.loads(capsys.readouterr().out)["case"] == "accelerated"

    def test_missing_family_is_a_usage_error(self):
        assert main(["classify", "--family1", "pareto", "--alpha1", "2"]) == 2

    def test_unsupported_family_is_a_capability_gap(self):
        assert main(["classify", "--family1", "cauchy", "--family2", "pareto", "--alpha2", "2"]) == 3


class TestSimulate:
    def run(self, out, *extra):
        return main(["simulate", *PARETO_PAIR, "--n1", "30", "--n2", "30", "--reps", "20",
                     "--threads", "2", "--out", out, *extra])

    def test_values_and_sidecar(self, tmp_path):
        out = str(tmp_path / "values.csv")
        assert self.run(out) == 0
        values = pd.read_csv(out)
        assert list(values.columns) == ["value"]
        assert len(values) == 20
        sidecar = read(str(tmp_path / "values.json"))
        assert sidecar["regime"]["case"] == "accelerated"
        assert sidecar["experiment"]["reps"] == 20
        assert sidecar["jump_mass_basis"] is None

    def test_same_seed_same_file(self, tmp_path):
        first, second = str(tmp_path / "a.csv"), str(tmp_path / "b.csv")
        assert self.run(first, "--seed", "5") == 0
        assert self.run(second, "--seed", "5") == 0
        with open(first) as a, open(second) as b:
            assert a.read() == b.read()

    def test_scenario(self, tmp_path):
        out = str(tmp_path / "uniform.csv")
        code = main(["simulate", "--scenario", "uniform-n100", "--reps", "10", "--out", out])
        assert code == 0
        assert read(str(tmp_path / "uniform.json"))["regime"]["case"] == "single-dominant"

    def test_linear_norm_without_linear_domain(self, tmp_path):
        code = main(["simulate", "--family1", "log-frechet", "--alpha1", "2", "--family2", "pareto",
                     "--alpha2", "2", "--n1", "20", "--n2", "20", "--reps", "5", "--norm", "linear",
                     "--out", str(tmp_path / "x.csv")])
        assert code == 3

    def test_sizes_required_without_scenario(self, tmp_path):
        assert main(["simulate", *PARETO_PAIR, "--out", str(tmp_path / "x.csv")]) == 2


class TestFitAndTests:
    def test_fit_gof_diagnose(self, tmp_path, loggev_csv):
        fit_out = str(tmp_path / "fit.json")
        assert main(["fit", "--model", "pmax", "--data", loggev_csv, "--restarts", "3", "--out", fit_out]) == 0
        fitted = read(fit_out)
        assert fitted["kind"] == "pmax"
        assert set(fitted["estimates"]) == {"mu", "sigma", "xi"}

        gof_out = str(tmp_path / "gof.json")
        assert main(["gof", "--data", loggev_csv, "--model-json", fit_out, "--out", gof_out]) == 0
        report = read(gof_out)
        assert report["n"] == 300
        assert [r["method"] for r in report["results"]] == ["ks", "cvm", "ad"]

        diag_out = str(tmp_path / "pp.csv")
        assert main(["diagnose", "--data", loggev_csv, "--model-json", fit_out, "--out", diag_out]) == 0
        assert len(pd.read_csv(diag_out)) == 300

    def test_constant_data_does_not_converge(self, tmp_path, sample_csv):
        out = str(tmp_path / "fit.json")
        code = main(["fit", "--model", "pmax", "--data", sample_csv([2.0] * 10), "--out", out])
        assert code == 4
        assert read(out)["converged"] is False

    def test_missing_data_file(self, tmp_path):
        assert main(["fit", "--model", "pmax", "--data", str(tmp_path / "none.csv")]) == 2

    def test_bad_csv_line(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("1.0\nabc\n")
        assert main(["fit", "--model", "pmax", "--data", str(path), "--out", str(tmp_path / "f.json")]) == 2

    def test_inline_model_bootstrap(self, tmp_path, loggev_csv):
        out = str(tmp_path / "gof.json")
        code = main(["gof", "--data", loggev_csv, "--loggev", "1", "0.5", "0.1", "--test", "ks",
                     "--p-method", "bootstrap", "--n-boot", "19", "--threads", "1", "--out", out])
        assert code == 0
        assert read(out)["results"][0]["p_method"] == "bootstrap(19)"

    def test_refit_needs_fit_json(self, loggev_csv):
        code = main(["gof", "--data", loggev_csv, "--loggev", "1", "0.5", "0.1",
                     "--p-method", "bootstrap", "--refit", "--n-boot", "3"])
        assert code == 2

    def test_model_sources_are_exclusive(self, tmp_path, loggev_csv):
        fit_json = str(tmp_path / "m.json")
        write_json({"components": [{"family": "loggev", "mu": 1.0, "sigma": 0.5, "xi": 0.1}]}, fit_json)
        with pytest.raises(SystemExit) as info:
            main(["gof", "--data", loggev_csv, "--model-json", fit_json, "--loggev", "1", "0.5", "0.1"])
        assert info.value.code == 2

    def test_verbosity_flags_are_exclusive(self):
        with pytest.raises(SystemExit) as info:
            main(["scenarios", "-v", "--quiet"])
        assert info.value.code == 2


def write_fit(path, kind, loglik, k):
    components = tuple(LogGevParams(1.0 - j, 0.5, 0.1) for j in range(k))
    result = FitResult(kind, AcceleratedModel(components), {}, {}, loglik, True, 1, 0.0, 100)
    write_json(result.to_dict(), str(path))
    return str(path)


class TestLrt:
    def test_statistic(self, tmp_path):
        single = write_fit(tmp_path / "single.json", "pmax", -100.0, 1)
        acc = write_fit(tmp_path / "acc.json", "acc-pmax", -95.0, 2)
        out = str(tmp_path / "lrt.json")
        assert main(["lrt", "--fit-single", single, "--fit-acc", acc, "--out", out]) == 0
        payload = read(out)
        assert payload["statistic"] == pytest.approx(10.0)
        assert payload["df"] == 3
        assert payload["models"] == ["pmax", "acc-pmax"]

    def test_negative_statistic(self, tmp_path):
        single = write_fit(tmp_path / "single.json", "pmax", -100.0, 1)
        acc = write_fit(tmp_path / "acc.json", "acc-pmax", -110.0, 2)
        assert main(["lrt", "--fit-single", single, "--fit-acc", acc]) == 5

    def test_not_nested(self, tmp_path):
        single = write_fit(tmp_path / "single.json", "pmax", -100.0, 1)
        assert main(["lrt", "--fit-single", single, "--fit-acc", single]) == 2


class TestConvergence:
    @pytest.mark.parametrize("name", ["table.csv", "table.xlsx"])
    def test_outputs(self, tmp_path, name):
        out = str(tmp_path / name)
        code = main(["convergence", "--scenario", "uniform-n100", "--reps", "50", "--test", "ks",
                     "--threads", "1", "--out", out])
        assert code == 0
        table = pd.read_excel(out) if name.endswith(".xlsx") else pd.read_csv(out)
        assert table["norm"].tolist() == ["power", "linear"]


class TestValidate:
    def test_small_run(self, tmp_path):
        out = str(tmp_path / "validate.json")
        code = main(["validate", "--alpha1", "3", "--alpha2", "6", "--sizes", "150", "300", "--reps", "3",
                     "--restarts", "1", "--threads", "1", "--out", out])
        assert code == 0
        payload = read(out)
        assert payload["branches"] == ["i", "ii"]
        assert [row["n"] for row in payload["rows"]] == [150, 300]

    def test_conditions_violated(self):
        assert main(["validate", "--alpha1", "0.5", "--alpha2", "0.7", "--reps", "1"]) == 2


class TestConfig:
    def test_threads_must_be_positive(self):
        assert main(["scenarios", "--threads", "0"]) == 2

    def test_out_must_not_be_a_directory(self, tmp_path):
        assert main(["classify", *PARETO_PAIR, "--out", str(tmp_path)]) == 2

    def test_scenarios_search(self, capsys):
        assert main(["scenarios", "--search", "uniform"]) == 0
        out = capsys.readouterr().out
        assert "uniform-n100" in out
        assert "pareto-truncated" not in out


class TestHistory:
    def test_without_store(self, capsys):
        assert main(["history"]) == 0

    def test_fit_runs_are_recorded(self, tmp_path, loggev_csv, capsys):
        url = f"sqlite:///{tmp_path / 'runs.db'}"
        fit_out = str(tmp_path / "fit.json")
        assert main(["fit", "--model", "pmax", "--data", loggev_csv, "--restarts", "2",
                     "--out", fit_out, "--db", url]) == 0
        capsys.readouterr()
        assert main(["history", "--db", url]) == 0
        assert "pmax" in capsys.readouterr().out
        show_out = str(tmp_path / "shown.json")
        assert main(["history", "--db", url, "--show", "1", "--out", show_out]) == 0
        assert read(show_out)["kind"] == "pmax"

    def test_unknown_id(self, tmp_path):
        url = f"sqlite:///{tmp_path / 'runs.db'}"
        assert main(["history", "--db", url, "--show", "7"]) == 2
