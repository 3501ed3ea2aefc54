"""Compactly supported bump objective: window membership and exact centers."""

import numpy as np
import pytest

from grad_adversary import BumpSpec, DisjointnessError, MonotonicityError, make_bump
from grad_adversary.numerics import LD, ExactReal


def simple_spec():
    return BumpSpec(
        anchors=[LD(0), LD(1), LD(3)],
        delta=LD(0.25),
        triples=[(LD(-1), LD(-0.5), LD(0)), (LD(-2), LD(-0.25), LD(0)), (LD(-4), LD(-1), LD(2))],
    )


class TestBump:
    def test_center_values_bit_exact(self):
        obj = make_bump(simple_spec())
        assert obj.value(LD(0)) == -1
        assert obj.value(LD(1)) == -2
        assert obj.value(LD(3)) == -4

    def test_center_derivatives(self):
        obj = make_bump(simple_spec())
        np.testing.assert_allclose(float(obj.grad(LD(1))), -0.25, rtol=0, atol=1e-18)
        np.testing.assert_allclose(float(obj.hess(LD(3))), 2.0, rtol=0, atol=1e-17)

    def test_zero_outside_windows(self):
        obj = make_bump(simple_spec())
        for theta in (LD(-5), LD(0.5), LD(2), LD(10)):
            assert obj.value(theta) == 0
            assert obj.grad(theta) == 0
            assert obj.hess(theta) == 0

    def test_window_edges_vanish(self):
        obj = make_bump(simple_spec())
        for edge in (LD(0.75), LD(1.25)):
            assert abs(obj.value(edge)) < LD("1e-16")
            assert abs(obj.grad(edge)) < LD("1e-16")

    def test_exact_rational_anchors(self):
        # anchors farther apart than longdouble resolution stay distinguishable
        big = ExactReal(2**200)
        spec = BumpSpec(
            anchors=[ExactReal(0), big, big + 1],
            delta=LD(0.25),
            triples=[(0, -1, 0)] * 3,
        )
        obj = make_bump(spec)
        assert obj.value(big) == 0
        assert obj.value(big + 1) == 0
        assert obj.grad(big + 1) == -1
        # a point between the two nearby windows is outside both
        assert obj.grad(big + ExactReal(1) / 2) == 0

    def test_overlap_rejected(self):
        with pytest.raises(DisjointnessError):
            BumpSpec(anchors=[LD(0), LD(0.4)], delta=LD(0.25), triples=[(0, 0, 0)] * 2)

    def test_monotonicity_rejected(self):
        with pytest.raises(MonotonicityError):
            BumpSpec(anchors=[LD(0), LD(-1)], delta=LD(0.25), triples=[(0, 0, 0)] * 2)

    def test_triple_count_mismatch(self):
        with pytest.raises(ValueError):
            BumpSpec(anchors=[LD(0)], delta=LD(0.1), triples=[])
