"""The seven-branch piecewise building block.

``f(theta; m, d, delta)`` rises by at least ``7m/16`` over ``[0, m]`` while
entering with slope ``-d`` and exiting with slope ``-delta``, and never dips
below ``-m/8``. Every branch is jointly degree-1 homogeneous in
``(theta, m)``, so the block is evaluated in normalized coordinates
``u = theta/m`` and scaled back by ``m``.

Branches over u = theta/m (entry slope -d, exit slope -delta):
    (0, (2-d)/16)            linear ramp down
    [(2-d)/16, 3/16)         upward parabola
    (3/16, 1/2)              smooth exponential rise (flat at 1/2 from left)
    {1/2}                    plateau value
    (1/2, 13/16)             smooth exponential rise (flat at 1/2 from right)
    [13/16, (delta+14)/16)   downward parabola
    [(delta+14)/16, 1]       linear exit ramp
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, ParameterError
from .numerics import LD, ld


@dataclass(frozen=True)
class BlockParams:
    m: np.longdouble
    d: np.longdouble
    delta: np.longdouble

    def __post_init__(self):
        object.__setattr__(self, "m", ld(self.m))
        object.__setattr__(self, "d", ld(self.d))
        object.__setattr__(self, "delta", ld(self.delta))
        if not self.m > 0:
            raise ParameterError(f"block length m must be positive, got {self.m}")
        if not (0 < self.d <= 1):
            raise ParameterError(f"entry slope d must be in (0,1], got {self.d}")
        if not (0 < self.delta <= 1):
            raise ParameterError(f"exit slope delta must be in (0,1], got {self.delta}")


_5_16 = LD(5) / 16
_25_256 = LD(25) / 256


def _plateau(d):
    # value of the central plateau for unit length
    return (11 + d * d - 4 * d) / 32


def _crest(d):
    # peak constant of the descending parabola for unit length
    return (22 + d * d - 4 * d) / 32


def _phi(u, d, delta):
    """Block value at u in [0,1] for unit length."""
    if u <= (2 - d) / 16:
        return -d * u
    if u < LD(3) / 16:
        return 8 * (u - LD(1) / 8) ** 2 - (4 * d - d * d) / 32
    if u == LD(0.5):
        return _plateau(d)
    if u < LD(0.5):
        g = _5_16 / (u - LD(0.5)) + 1
        return -_5_16 * np.exp(g) + _plateau(d)
    if u < LD(13) / 16:
        h = -_5_16 / (u - LD(0.5)) + 1
        return _5_16 * np.exp(h) + _plateau(d)
    if u < (delta + 14) / 16:
        return -8 * (u - LD(7) / 8) ** 2 + _crest(d)
    return -delta * u + (22 + d * d + delta * delta - 4 * d + 28 * delta) / 32


def _phi_grad(u, d, delta):
    if u <= (2 - d) / 16:
        return -d
    if u < LD(3) / 16:
        return 16 * (u - LD(1) / 8)
    if u == LD(0.5):
        return LD(0)
    if u < LD(0.5):
        v = u - LD(0.5)
        g = _5_16 / v + 1
        ex = np.exp(g)
        if ex == 0:
            return LD(0)
        return _25_256 * ex / (v * v)
    if u < LD(13) / 16:
        v = u - LD(0.5)
        h = -_5_16 / v + 1
        ex = np.exp(h)
        if ex == 0:
            return LD(0)
        return _25_256 * ex / (v * v)
    if u < (delta + 14) / 16:
        return -16 * (u - LD(7) / 8)
    return -delta


def _phi_hess(u, d, delta):
    # right-limit convention at branch knots (each knot evaluates as the
    # branch that starts there)
    if u < (2 - d) / 16:
        return LD(0)
    if u < LD(3) / 16:
        return LD(16)
    if u == LD(0.5):
        return LD(0)
    if u < LD(0.5):
        v = u - LD(0.5)
        g = _5_16 / v + 1
        ex = np.exp(g)
        if ex == 0:
            return LD(0)
        return _25_256 * ex * (-_5_16 / v**4 - 2 / v**3)
    if u < LD(13) / 16:
        v = u - LD(0.5)
        h = -_5_16 / v + 1
        ex = np.exp(h)
        if ex == 0:
            return LD(0)
        return _25_256 * ex * (_5_16 / v**4 - 2 / v**3)
    if u < (delta + 14) / 16:
        return LD(-16)
    return LD(0)


def _check_domain(theta, m):
    if not (0 <= theta <= m):
        raise DomainError(f"theta={theta} outside block domain [0, {m}]")


def eval_block(theta, p: BlockParams):
    """Block value; continuous extension at the knots."""
    theta = ld(theta)
    _check_domain(theta, p.m)
    return p.m * _phi(theta / p.m, p.d, p.delta)


def grad_block(theta, p: BlockParams):
    """Block derivative; one-sided convention -d at 0, -delta at m."""
    theta = ld(theta)
    _check_domain(theta, p.m)
    return _phi_grad(theta / p.m, p.d, p.delta)


def hess_block(theta, p: BlockParams):
    """Second derivative with the right-limit convention at knots."""
    theta = ld(theta)
    _check_domain(theta, p.m)
    return _phi_hess(theta / p.m, p.d, p.delta) / p.m
