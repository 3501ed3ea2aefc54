"""Smoothness audit: frozen ratios, finite differences, model invariants."""

import numpy as np
import pytest

from grad_adversary import DomainError, ZeroGradientError, audit
from grad_adversary.numerics import LD


def central_diff(fn, theta, i, h):
    up = theta.copy()
    dn = theta.copy()
    up[i] = up[i] + h
    dn[i] = dn[i] - h
    return (fn(up) - fn(dn)) / (2 * h)


class TestFrozenRatios:
    def test_factor_analysis_ratio(self):
        model = audit.get_model("factor_analysis", x=1.0)
        ratio, _, _ = audit.curvature_ratio(model, [2.0])
        np.testing.assert_allclose(float(ratio), 5.0 / 9.0, rtol=1e-15)

    def test_factor_analysis_limit(self):
        model = audit.get_model("factor_analysis", x=1.0)
        ratio, _, _ = audit.curvature_ratio(model, [1e-6])
        assert abs(float(ratio) - 1.0) < 1e-3

    def test_gee_stationary_point(self):
        model = audit.get_model("gee", y=1.0)
        assert float(model.grad([1.0])[0]) == 0.0
        with pytest.raises(ZeroGradientError):
            audit.curvature_ratio(model, [1.0])

    def test_gee_limit_is_one_over_y(self):
        for y in (1.0, 2.0, 5.0):
            model = audit.get_model("gee", y=y)
            ratio, _, _ = audit.curvature_ratio(model, [1e-12])
            assert abs(float(ratio) - 1.0 / y) < 1e-3

    def test_inverse_gaussian_frozen_point(self):
        model = audit.get_model("inverse_gaussian", y=1.0)
        assert float(model.grad([-0.5])[0]) == 0.0
        assert float(model.hess([-0.5])[0][0]) == 1.0

    def test_inverse_gaussian_unbounded_ratio(self):
        model = audit.get_model("inverse_gaussian", y=1.0)
        report = audit.probe_path(model, audit.geometric_path(-1.0, 0.25, 21), "g")
        # ratio grows like 2^(k - 1/2) once past the stationary point
        tail = report.ratios[2:]
        assert all(b > a for a, b in zip(tail, tail[1:]))
        assert report.ratios[-1] > 1e3
        assert report.trend_slope == pytest.approx(1.0, abs=0.01)

    def test_ffnn_ratio_band(self):
        model = audit.get_model("ffnn")
        report = audit.probe_path(model, audit.linear_path(10.0, 1.0, 91), "lin")
        assert all(1.0 <= float(r) <= 3.0 for r in report.ratios)


class TestFiniteDifferences:
    def _check_model(self, model, points, h_scale=LD("1e-6")):
        for theta in points:
            theta = np.asarray(theta, dtype=LD)
            g = model.grad(theta)
            H = model.hess(theta)
            for i in range(model.dim):
                h = h_scale * max(LD(1), abs(theta[i]))
                fd_g = central_diff(lambda t: model.value(t), theta, i, h)
                np.testing.assert_allclose(float(fd_g), float(g[i]), rtol=1e-4, atol=1e-10)
                fd_h = central_diff(lambda t: model.grad(t)[i], theta, i, h)
                np.testing.assert_allclose(float(fd_h), float(H[i][i]), rtol=1e-4, atol=1e-8)

    def test_factor_analysis_fd(self):
        rng = np.random.default_rng(31)
        model = audit.get_model("factor_analysis", x=1.5)
        self._check_model(model, [[v] for v in rng.uniform(0.2, 5.0, size=125)])

    def test_gee_fd(self):
        rng = np.random.default_rng(32)
        model = audit.get_model("gee", y=2.0)
        self._check_model(model, [[v] for v in rng.uniform(0.2, 5.0, size=125)])

    def test_inverse_gaussian_fd(self):
        rng = np.random.default_rng(33)
        model = audit.get_model("inverse_gaussian", y=2.0)
        self._check_model(model, [[-v] for v in rng.uniform(0.2, 5.0, size=125)])

    def test_ffnn_fd(self):
        rng = np.random.default_rng(34)
        model = audit.get_model("ffnn")
        self._check_model(model, rng.uniform(-1.5, 1.5, size=(125, 4)))

    def test_ffnn_mixed_partials(self):
        rng = np.random.default_rng(35)
        model = audit.get_model("ffnn")
        for w in rng.uniform(-1.5, 1.5, size=(50, 4)):
            w = np.asarray(w, dtype=LD)
            H = model.hess(w)
            for i in range(4):
                for j in range(4):
                    if i == j:
                        continue
                    h = LD("1e-6")
                    fd = central_diff(lambda t: model.grad(t)[i], w, j, h)
                    np.testing.assert_allclose(float(fd), float(H[i][j]), rtol=1e-4, atol=1e-8)


class TestInvariants:
    def test_ffnn_hessian_symmetric(self):
        rng = np.random.default_rng(36)
        model = audit.get_model("ffnn")
        for w in rng.uniform(-3, 3, size=(100, 4)):
            H = model.hess(np.asarray(w, dtype=LD))
            assert float(np.max(np.abs(H - H.T))) <= 1e-12

    def test_ffnn_frobenius_lower_bound(self):
        # along w1=0, w2=w3=w4=w the Hessian norm is at least w^6/4
        model = audit.get_model("ffnn")
        for w in (2.0, 5.0, 10.0, 25.0):
            H = model.hess(model.path_point(w))
            frob = np.sqrt(np.sum(H * H))
            assert frob >= LD(w) ** 6 / 4

    def test_domain_guards(self):
        with pytest.raises(DomainError):
            audit.get_model("factor_analysis").value([0.0])
        with pytest.raises(DomainError):
            audit.get_model("gee").grad([-1.0])
        with pytest.raises(DomainError):
            audit.get_model("inverse_gaussian").hess([0.5])

    def test_probe_path_skips_bad_points(self):
        model = audit.get_model("gee", y=1.0)
        report = audit.probe_path(model, [4.0, 1.0, 0.25], "manual")
        assert len(report.samples) == 2  # theta=1 is stationary and skipped
        assert len(report.skipped) == 1

    def test_path_parsing(self):
        path = audit.parse_path("geometric:1,0.5,3")
        assert [float(t) for t in path] == [1.0, 0.5, 0.25]
        path = audit.parse_path("linear:0,2,3")
        assert [float(t) for t in path] == [0.0, 2.0, 4.0]
        from grad_adversary import ParameterError

        with pytest.raises(ParameterError):
            audit.parse_path("spiral:1,2,3")
        with pytest.raises(ParameterError):
            audit.parse_path("geometric:1,2")
