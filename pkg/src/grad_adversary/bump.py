"""Compactly supported bump objective.

Zero everywhere except on disjoint windows ``[S_j - delta, S_j + delta]``,
where a degree-9 bump realizes a prescribed value/slope/curvature triple at
the center and vanishes to second order at both window edges. Centers are
evaluated through a shifted Horner scheme, so ``F(S_j)`` returns the target
``f_j`` bit-exactly.
"""

from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass

import numpy as np

from .errors import AnchorOverflowError, DisjointnessError, MonotonicityError
from .interp import poly_eval, solve_interpolation
from .numerics import LD, as_position, is_finite, ld
from .objective import Objective


@dataclass
class BumpSpec:
    anchors: list  # S_0..S_J
    delta: np.longdouble  # window half-width
    triples: list  # (f_j, f_j', f_j'') per anchor

    def __post_init__(self):
        # anchors may be ExactReal: gaps between bump centers outgrow float
        # resolution, so membership tests must not round positions
        self.anchors = [as_position(s) for s in self.anchors]
        self.delta = ld(self.delta)
        self.triples = [tuple(ld(v) for v in t) for t in self.triples]
        if len(self.triples) != len(self.anchors):
            raise ValueError("one (f, f', f'') triple required per anchor")
        if not self.delta > 0:
            raise DisjointnessError(f"window half-width must be positive, got {self.delta}")
        for j, s in enumerate(self.anchors):
            if not is_finite(s):
                raise AnchorOverflowError(f"anchor S_{j} is not finite", max_feasible=j - 1)
            if j and not s > self.anchors[j - 1]:
                raise MonotonicityError(f"anchors not strictly increasing at j={j}")
            if j and not s - self.anchors[j - 1] > 2 * self.delta:
                raise DisjointnessError(
                    f"windows around S_{j-1} and S_{j} overlap (spacing "
                    f"{s - self.anchors[j-1]}, width {2 * self.delta})"
                )
        for j, (f, fp, fpp) in enumerate(self.triples):
            if not (np.isfinite(f) and np.isfinite(fp) and np.isfinite(fpp)):
                raise AnchorOverflowError(f"target triple at j={j} overflowed", max_feasible=j - 1)


class BumpFunction:
    def __init__(self, spec: BumpSpec):
        self.spec = spec
        self.polys = [
            solve_interpolation(spec.delta, (0, f, 0, 0, fp, 0, 0, fpp, 0))
            for f, fp, fpp in spec.triples
        ]

    def _window(self, theta):
        """Index of the window containing theta, or None."""
        s = self.spec.anchors
        i = bisect_left(s, theta)
        for j in (i - 1, i):
            if 0 <= j < len(s) and abs(theta - s[j]) <= self.spec.delta:
                return j
        return None

    def _derivative(self, theta, order):
        theta = as_position(theta)
        j = self._window(theta)
        if j is None:
            return LD(0)
        return poly_eval(self.polys[j], theta - self.spec.anchors[j], order)

    def value(self, theta):
        return self._derivative(theta, 0)

    def grad(self, theta):
        return self._derivative(theta, 1)

    def hess(self, theta):
        return self._derivative(theta, 2)


def make_bump(spec: BumpSpec, name="bump") -> Objective:
    fn = BumpFunction(spec)
    obj = Objective(fn.value, fn.grad, fn.hess, name=name)
    obj.bump = fn
    return obj
