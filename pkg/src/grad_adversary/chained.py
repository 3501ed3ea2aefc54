"""Chained staircase objective.

Blocks are glued end to end at a strictly increasing anchor sequence
``S_j`` carrying prescribed slopes ``-d_j``. Below ``S_0`` the function is
the linear ray ``-d_0 (theta - S_0)``; on ``(S_j, S_{j+1}]`` it is a
building block shifted by the memoized value ``F(S_j)``. Anchors are
produced lazily from a generator, so infinite sequences need no
precomputation.
"""

from __future__ import annotations

from bisect import bisect_left

import numpy as np

from .blocks import BlockParams, eval_block, grad_block, hess_block
from .errors import AnchorOverflowError, MonotonicityError, ParameterError
from .numerics import LD, ld
from .objective import Objective


class AnchorSpec:
    """Rule-generated anchors.

    ``generator`` is a zero-argument callable returning an iterator of
    ``(S_j, d_j)`` pairs, j = 0, 1, ... ``j_max`` optionally caps how far
    the sequence may be extended.
    """

    def __init__(self, generator, j_max=None, label=""):
        self.generator = generator
        self.j_max = j_max
        self.label = label


class ChainedStaircase:
    def __init__(self, spec: AnchorSpec):
        self.spec = spec
        self._it = spec.generator()
        self._s = []  # anchors S_j
        self._d = []  # slopes d_j
        self._f = []  # memoized F(S_j)
        self._exhausted = False
        self._extend(2)

    # anchor bookkeeping ---------------------------------------------------

    def _extend(self, upto):
        """Generate anchors through index ``upto`` (inclusive)."""
        while len(self._s) <= upto and not self._exhausted:
            if self.spec.j_max is not None and len(self._s) > self.spec.j_max:
                self._exhausted = True
                break
            try:
                s, d = next(self._it)
            except StopIteration:
                self._exhausted = True
                break
            s = ld(s)
            d = ld(d)
            if not np.isfinite(s):
                raise AnchorOverflowError(
                    f"anchor S_{len(self._s)} overflowed", max_feasible=len(self._s) - 1
                )
            if not (0 < d <= 1):
                raise ParameterError(f"slope d_{len(self._s)} = {d} outside (0,1]")
            if self._s and not s > self._s[-1]:
                raise MonotonicityError(
                    f"anchor S_{len(self._s)} = {s} does not exceed S_{len(self._s)-1} = {self._s[-1]}"
                )
            if self._s:
                m = s - self._s[-1]
                p = BlockParams(m, self._d[-1], d)
                val = self._f[-1] + eval_block(m, p)
                if not np.isfinite(val):
                    raise AnchorOverflowError(
                        f"F(S_{len(self._s)}) overflowed", max_feasible=len(self._s) - 1
                    )
            else:
                val = LD(0)
            self._s.append(s)
            self._d.append(d)
            self._f.append(val)

    def _extend_past(self, theta):
        while self._s[-1] < theta and not self._exhausted:
            self._extend(len(self._s))
            if self.spec.j_max is not None and len(self._s) > self.spec.j_max:
                break
        if self._s[-1] < theta:
            raise AnchorOverflowError(f"no anchor beyond theta={theta}")

    def anchor(self, j):
        self._extend(j)
        return self._s[j]

    def slope(self, j):
        self._extend(j)
        return self._d[j]

    def anchor_value(self, j):
        """Memoized F(S_j)."""
        self._extend(j)
        return self._f[j]

    def anchors(self, j):
        """S_0..S_j as a list."""
        self._extend(j)
        return list(self._s[: j + 1])

    def flat_radius(self, j):
        """Radius around S_j on which the slope is exactly -d_j."""
        self._extend(j + 1)
        right = (2 - self._d[j]) / 16 * (self._s[j + 1] - self._s[j])
        if j == 0:
            return right  # the ray below S_0 is flat everywhere
        left = (2 - self._d[j]) / 16 * (self._s[j] - self._s[j - 1])
        return min(left, right)

    # evaluation -----------------------------------------------------------

    def _locate(self, theta):
        """Index j with theta in (S_j, S_{j+1}]."""
        self._extend_past(theta)
        # bisect_left on S gives first index with S >= theta
        i = bisect_left(self._s, theta)
        return i - 1

    def value(self, theta):
        theta = ld(theta)
        if theta <= self._s[0]:
            return -self._d[0] * (theta - self._s[0])
        j = self._locate(theta)
        p = BlockParams(self._s[j + 1] - self._s[j], self._d[j], self._d[j + 1])
        return eval_block(theta - self._s[j], p) + self._f[j]

    def grad(self, theta):
        theta = ld(theta)
        if theta <= self._s[0]:
            return -self._d[0]
        j = self._locate(theta)
        p = BlockParams(self._s[j + 1] - self._s[j], self._d[j], self._d[j + 1])
        return grad_block(theta - self._s[j], p)

    def hess(self, theta):
        theta = ld(theta)
        if theta <= self._s[0]:
            return LD(0)
        j = self._locate(theta)
        if theta == self._s[j + 1]:
            # right-limit convention: anchors sit in the next block's flat ramp
            return LD(0)
        p = BlockParams(self._s[j + 1] - self._s[j], self._d[j], self._d[j + 1])
        return hess_block(theta - self._s[j], p)


def make_chained(spec: AnchorSpec, name="chained") -> Objective:
    """Build a counted Objective over the staircase; the staircase itself is
    reachable as ``objective.chain``."""
    chain = ChainedStaircase(spec)
    obj = Objective(chain.value, chain.grad, chain.hess, name=name)
    obj.chain = chain
    return obj
