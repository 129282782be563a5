import logging
import math

import numpy as np
import pytest
from scipy import integrate, stats

from distributions import (
    _bisect_quantile,
    AccLMinParams,
    AcceleratedModel,
    GevParams,
    LeftTruncatedModel,
    LogGevParams,
    PStableSpec,
    cdf,
    dual_min,
    model_from_dict,
    model_to_dict,
    quantile,
)
from errors import DomainError, InvalidParameterError

P_GRID = np.array([1e-3, 0.01, 0.1, 0.3, 0.5, 0.7, 0.9, 0.99, 0.999])

MODELS = {
    "H1(3)": PStableSpec("H1", 3.0),
    "H2(2) A=2 B=0.5": PStableSpec("H2", 2.0, 2.0, 0.5),
    "H3(1.5)": PStableSpec("H3", 1.5),
    "H4(2.5) A=0.5": PStableSpec("H4", 2.5, 0.5),
    "H5 B=2": PStableSpec("H5", 1.0, 1.0, 2.0),
    "H6": PStableSpec("H6"),
    "loggev xi<0": LogGevParams(1.0, 0.5, -0.3),
    "loggev gumbel": LogGevParams(0.5, 1.2, 0.0),
    "loggev xi>0": LogGevParams(0.0, 0.7, 0.4),
    "gev": GevParams(1.0, 2.0, 0.2),
    "acc max": AcceleratedModel((LogGevParams(2.0, 1.0, -0.2), LogGevParams(0.0, 1.0, -0.5))),
    "acc min": AcceleratedModel((LogGevParams(0.0, 1.0, 0.2), LogGevParams(0.5, 0.8, -0.1)), "min"),
    "acc H1 x H1": AcceleratedModel((PStableSpec("H1", 4.0), PStableSpec("H1", 3.0))),
    "acc-lmin": AccLMinParams(0.0, 1.0, 3.0, 1.0, 6.0),
    "acc-lmin heavy": AccLMinParams(1.0, 2.0, 1.5, 0.5, 2.5),
}


def _integrate_pdf(model, lo, hi):
    """Integral of the density over [lo, hi], on a log scale when the interval avoids 0."""
    opts = dict(epsabs=1e-12, epsrel=1e-11, limit=500)
    if lo > 0.0:
        value, _ = integrate.quad(lambda t: model.pdf(math.exp(t)) * math.exp(t), math.log(lo), math.log(hi), **opts)
    elif hi < 0.0:
        value, _ = integrate.quad(lambda t: model.pdf(-math.exp(t)) * math.exp(t), math.log(-hi), math.log(-lo), **opts)
    else:
        value, _ = integrate.quad(model.pdf, lo, hi, **opts)
    return value


class TestDensityQuadrature:
    @pytest.mark.parametrize("name", sorted(MODELS))
    def test_density_integrates_to_one(self, name):
        model = MODELS[name]
        lo, hi = model.quantile(1e-6), model.quantile(1.0 - 1e-6)
        total = _integrate_pdf(model, lo, hi) + model.cdf(lo) + model.sf(hi)
        assert total == pytest.approx(1.0, abs=1e-6)

    def test_left_truncated_mass_plus_density(self):
        model = LeftTruncatedModel(PStableSpec("H1", 4.0), math.e)
        hi = model.quantile(1.0 - 1e-7)
        mass = model.point_mass
        total = mass + _integrate_pdf(model, math.e * (1 + 1e-12), hi) + model.sf(hi)
        assert mass == pytest.approx(math.exp(-1.0), rel=1e-12)
        assert total == pytest.approx(1.0, abs=1e-6)


class TestQuantileRoundTrip:
    @pytest.mark.parametrize("name", sorted(MODELS))
    def test_cdf_of_quantile(self, name):
        model = MODELS[name]
        assert np.max(np.abs(model.cdf(model.quantile(P_GRID)) - P_GRID)) <= 1e-8

    def test_quantile_is_monotone(self):
        q = MODELS["acc max"].quantile(P_GRID)
        assert np.all(np.diff(q) > 0)

    @pytest.mark.parametrize("p", [0.0, 1.0, -0.5, float("nan")])
    def test_quantile_rejects_boundary_probabilities(self, p):
        with pytest.raises(InvalidParameterError):
            MODELS["loggev xi<0"].quantile(p)

    def test_bracket_expansion_is_logged(self, caplog):
        caplog.set_level(logging.DEBUG, logger="distributions")
        h5 = PStableSpec("H5")
        p = np.array([0.99])
        x = _bisect_quantile(h5.log_cdf, p, np.array([1.0]), np.array([2.0]))
        assert x[0] == pytest.approx(-1.0 / math.log(0.99), rel=1e-10)
        assert "bracket expanded" in caplog.text


class TestPTypes:
    @pytest.mark.parametrize("n", [2, 10, 1000])
    def test_pmax_stability_of_h1(self, n):
        alpha = 2.0
        h = PStableSpec("H1", alpha)
        x = np.array([1.2, 1.5, 3.0, 10.0, 1e3])
        assert np.max(np.abs(h.cdf(x) ** n - h.cdf(x ** (n ** (-1.0 / alpha))))) <= 1e-12

    def test_h5_and_h6_closed_forms(self):
        x = np.array([0.5, 1.0, 4.0])
        assert np.allclose(PStableSpec("H5").cdf(x), np.exp(-1.0 / x), rtol=1e-14)
        assert np.allclose(PStableSpec("H6").cdf(-x), np.exp(-x), rtol=1e-14)

    def test_support_after_transform(self):
        assert MODELS["H2(2) A=2 B=0.5"].support == pytest.approx((0.0, 0.25))
        assert PStableSpec("H4", 2.0).support == (-math.inf, -1.0)

    def test_with_transform_composes(self):
        h = PStableSpec("H1", 2.0).with_transform(2.0, 3.0)
        x = np.array([1.0, 1.5, 2.0])
        assert np.allclose(h.cdf(x), PStableSpec("H1", 2.0).cdf(2.0 * x ** 3), rtol=1e-14)

    def test_alpha_ignored_for_h5_h6(self):
        assert PStableSpec("h5", 7.0).alpha == 1.0

    @pytest.mark.parametrize("kwargs", [
        {"kind": "H7"},
        {"kind": "H1", "alpha": 0.0},
        {"kind": "H2", "scale_a": -1.0},
        {"kind": "H3", "power_b": float("inf")},
    ])
    def test_invalid(self, kwargs):
        with pytest.raises(InvalidParameterError):
            PStableSpec(**kwargs)

    def test_outside_support(self):
        h = PStableSpec("H2", 2.0)
        assert h.cdf(-0.5) == 0.0
        assert h.cdf(2.0) == 1.0
        assert h.pdf(2.0) == 0.0


class TestGev:
    def test_named_laws(self):
        x = np.array([0.5, 1.0, 3.0])
        assert np.allclose(GevParams.frechet(2.0).cdf(x), np.exp(-x ** -2.0), rtol=1e-13)
        assert np.allclose(GevParams.weibull(1.0).cdf(-x), np.exp(-x), rtol=1e-13)
        assert np.allclose(GevParams.gumbel().cdf(x), np.exp(-np.exp(-x)), rtol=1e-13)

    def test_affine(self):
        g = GevParams(0.3, 1.5, 0.2)
        x = np.linspace(-1.0, 4.0, 11)
        assert np.allclose(g.affine(2.0, 0.5).cdf(x), g.cdf(2.0 * x + 0.5), rtol=1e-12)

    def test_loggev_is_gev_of_log(self):
        h = LogGevParams(1.0, 0.5, 0.2)
        x = np.array([0.9, 2.0, 5.0, 30.0])
        assert np.allclose(h.cdf(x), stats.genextreme(-0.2, loc=1.0, scale=0.5).cdf(np.log(x)), rtol=1e-12)

    def test_shape_near_zero_is_continuous(self):
        x = np.array([0.5, 1.0, 3.0])
        assert np.allclose(LogGevParams(0.0, 1.0, 1e-9).cdf(x), LogGevParams(0.0, 1.0, 0.0).cdf(x), atol=1e-8)

    def test_upper_endpoint(self):
        h = LogGevParams(1.0, 0.5, -0.5)
        assert h.support[1] == pytest.approx(math.exp(2.0))
        assert h.cdf(math.exp(2.0) * 1.01) == 1.0
        assert h.log_pdf(math.exp(2.0) * 1.01) == -math.inf

    def test_invalid_sigma(self):
        with pytest.raises(InvalidParameterError):
            LogGevParams(0.0, 0.0, 0.1)

    def test_scalar_and_array_shapes(self):
        h = LogGevParams(0.0, 1.0, 0.1)
        assert isinstance(h.cdf(2.0), float)
        assert h.cdf(np.ones((2, 3))).shape == (2, 3)
        assert cdf(h, 2.0) == h.cdf(2.0)
        assert quantile(h, 0.5) == h.quantile(0.5)


class TestAcceleratedModel:
    def test_product_of_components(self):
        a, b = LogGevParams(2.0, 1.0, -0.2), LogGevParams(0.0, 1.0, -1.0)
        model = AcceleratedModel.of(a, b)
        x = np.array([0.5, 2.0, 10.0])
        assert np.allclose(model.cdf(x), a.cdf(x) * b.cdf(x), rtol=1e-13)

    def test_single_component_reduction(self):
        c = LogGevParams(1.0, 0.5, 0.1)
        x = np.array([0.8, 2.0, 7.0])
        assert np.max(np.abs(AcceleratedModel((c,)).log_pdf(x) - c.log_pdf(x))) <= 1e-12

    def test_min_is_dual_of_reflected_max(self):
        c = LogGevParams(0.4, 0.8, 0.2)
        x = np.array([0.3, 1.0, 2.5])
        expected = 1.0 - LogGevParams(-0.4, 0.8, 0.2).cdf(1.0 / x)
        assert np.allclose(AcceleratedModel((c,), "min").cdf(x), expected, rtol=1e-12)

    def test_dual_min_is_an_involution(self):
        model = MODELS["acc max"]
        assert dual_min(dual_min(model)) == model
        assert dual_min(model).orientation == "min"

    def test_dual_min_of_component(self):
        dual = dual_min(PStableSpec("H3", 2.0))
        assert dual.k == 1 and dual.orientation == "min"
        x = np.array([0.2, 0.5, 0.9])
        assert np.allclose(dual.cdf(x), 1.0 - PStableSpec("H3", 2.0).cdf(-x), rtol=1e-12)

    def test_mixed_dual_maps_rejected_for_min(self):
        with pytest.raises(InvalidParameterError):
            AcceleratedModel((LogGevParams(0.0, 1.0, 0.0), GevParams(0.0, 1.0, 0.0)), "min")

    def test_empty_model_rejected(self):
        with pytest.raises(InvalidParameterError):
            AcceleratedModel(())

    @pytest.mark.parametrize("name", ["acc max", "acc min", "acc H1 x H1", "acc-lmin"])
    def test_sampling_matches_cdf(self, name):
        model = MODELS[name]
        draws = model.sample(5000, seed=7)
        assert stats.kstest(draws, model.cdf).pvalue > 1e-3

    def test_sampling_is_seeded(self):
        model = MODELS["acc max"]
        assert np.array_equal(model.sample(100, seed=3), model.sample(100, seed=3))


class TestLeftTruncatedModel:
    def test_atom_and_density(self):
        model = LeftTruncatedModel(PStableSpec("H1", 4.0), math.e)
        assert model.cdf(2.0) == 0.0
        assert model.cdf(math.e) == pytest.approx(math.exp(-1.0))
        assert model.quantile(0.2) == math.e
        with pytest.raises(DomainError):
            model.log_pdf(math.e)

    def test_x0_outside_support(self):
        with pytest.raises(InvalidParameterError):
            LeftTruncatedModel(PStableSpec("H1", 4.0), 0.5)


class TestAccLMin:
    def test_parameters_are_ordered(self):
        params = AccLMinParams(0.0, 2.0, 6.0, 1.0, 3.0)
        assert (params.sigma1, params.alpha1, params.sigma2, params.alpha2) == (1.0, 3.0, 2.0, 6.0)

    def test_alpha_must_exceed_one(self):
        with pytest.raises(InvalidParameterError):
            AccLMinParams(0.0, 1.0, 1.0, 1.0, 3.0)

    def test_density_factorization(self):
        params = AccLMinParams(0.5, 1.0, 3.0, 2.0, 6.0)
        x = np.array([0.6, 1.0, 2.0, 3.5])
        w = x - params.theta
        factored = w ** (params.alpha1 - 1.0) * params.g(w) * np.exp(-params.cumulative_hazard(x))
        assert np.allclose(params.pdf(x), factored, rtol=1e-12)
        assert params.pdf(0.5) == 0.0

    def test_survival(self):
        params = AccLMinParams(0.0, 1.0, 3.0, 1.0, 6.0)
        x = 1.2
        hazard = (x / 3.0) ** 3 + (x / 6.0) ** 6
        assert params.sf(x) == pytest.approx(math.exp(-hazard), rel=1e-12)


class TestSerialization:
    @pytest.mark.parametrize("model", [
        MODELS["acc min"],
        MODELS["acc H1 x H1"],
        MODELS["acc-lmin"],
        LeftTruncatedModel(PStableSpec("H1", 4.0), math.e),
        AcceleratedModel((GevParams.frechet(2.0),)),
    ])
    def test_model_round_trip(self, model):
        assert model_from_dict(model_to_dict(model)) == model

    def test_field_names(self):
        data = model_to_dict(MODELS["acc min"])
        assert data["orientation"] == "min"
        assert set(data["components"][0]) == {"family", "mu", "sigma", "xi"}
        assert data["components"][0]["family"] == "loggev"
        truncated = model_to_dict(LeftTruncatedModel(PStableSpec("H1", 4.0), math.e))
        assert truncated["truncation_x0"] == math.e
        assert truncated["components"][0]["family"] == "h1"

    def test_bare_component_serializes_as_one_component_model(self):
        data = model_to_dict(LogGevParams(1.0, 2.0, 0.1))
        assert data == {"orientation": "max",
                        "components": [{"family": "loggev", "mu": 1.0, "sigma": 2.0, "xi": 0.1}]}

    def test_unknown_family(self):
        with pytest.raises(InvalidParameterError):
            model_from_dict({"components": [{"family": "weibull"}]})
