"""Degree-9 window interpolation: exactness and randomized residuals."""

import numpy as np
import pytest

from grad_adversary import SingularSystemError, interpolation_residuals, poly_eval, solve_interpolation
from grad_adversary.numerics import LD


class TestSolver:
    def test_center_value_reproduced_exactly(self):
        c = solve_interpolation(1, (0, 1, 0, 0, 0, 0, 0, 0, 0))
        assert poly_eval(c, LD(0)) == 1  # c_0 carries the center value bit-exactly

    def test_free_coefficient_is_zero(self):
        c = solve_interpolation(1, (0, 2, 0, 0, 3, 0, 0, 5, 0))
        assert c[3] == 0

    def test_center_derivatives(self):
        c = solve_interpolation(1, (0, 2, 0, 0, 3, 0, 0, 5, 0))
        assert poly_eval(c, LD(0), 1) == 3
        assert poly_eval(c, LD(0), 2) == 5

    def test_edges_vanish_to_second_order(self):
        c = solve_interpolation(LD(0.5), (0, 1, 0, 0, -2, 0, 0, 7, 0))
        for x in (LD(-0.5), LD(0.5)):
            for order in range(3):
                assert abs(poly_eval(c, x, order)) < LD("1e-16")

    def test_singular_halfwidth(self):
        with pytest.raises(SingularSystemError):
            solve_interpolation(0, (0, 1, 0, 0, 0, 0, 0, 0, 0))

    def test_randomized_residuals(self):
        # 1000 random target sets: all nine constraints within 1e-8 * max(1, |target|)
        rng = np.random.default_rng(7)
        for _ in range(1000):
            m = LD(rng.uniform(0.05, 10.0))
            targets = tuple(LD(v) for v in rng.uniform(-100.0, 100.0, size=9))
            c = solve_interpolation(m, targets)
            residuals = interpolation_residuals(c, m, targets)
            for r, t in zip(residuals, targets):
                assert abs(r) <= LD("1e-8") * max(LD(1), abs(t))

    def test_scaled_halfwidths(self):
        # tiny and huge windows stay well-conditioned via the scaled system
        for m in (LD("1e-6"), LD("1e6")):
            targets = (0, 1, 0, 0, LD(1) / m, 0, 0, LD(1) / m**2, 0)
            c = solve_interpolation(m, targets)
            residuals = interpolation_residuals(c, m, targets)
            # residuals are small relative to the largest magnitude in the system
            scale = max(LD(1), max(abs(LD(t)) for t in targets))
            for r in residuals:
                assert abs(r) <= LD("1e-8") * scale


class TestPolyEval:
    def test_horner_matches_power_basis(self):
        rng = np.random.default_rng(11)
        for _ in range(100):
            c = [LD(v) for v in rng.uniform(-2, 2, size=10)]
            x = LD(rng.uniform(-1, 1))
            direct = sum(ci * x**i for i, ci in enumerate(c))
            np.testing.assert_allclose(float(poly_eval(c, x)), float(direct), rtol=1e-14, atol=1e-14)

    def test_derivative_orders(self):
        c = [LD(0), LD(0), LD(1)] + [LD(0)] * 7  # x^2
        assert poly_eval(c, LD(3), 1) == 6
        assert poly_eval(c, LD(3), 2) == 2
