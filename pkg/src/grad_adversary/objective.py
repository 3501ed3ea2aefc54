"""Instrumented objective oracles.

An :class:`Objective` wraps value/gradient/Hessian callables with call
counters. The counters are the ground truth for every evaluation-count
claim, so they increment exactly once per oracle call and never reset.
Shadow accessors evaluate without counting; verification uses them to
record values for methods that never touch the objective themselves.
"""

from __future__ import annotations

import threading

import numpy as np

def _quiet():
    # divergence is the point of these constructions: oracles are allowed to
    # overflow to inf without spamming warnings
    return np.errstate(over="ignore", invalid="ignore", divide="ignore")


class Objective:
    def __init__(self, value_fn, grad_fn, hess_fn=None, name=""):
        self._value_fn = value_fn
        self._grad_fn = grad_fn
        self._hess_fn = hess_fn
        self.name = name
        self._lock = threading.Lock()
        self._obj_evals = 0
        self._grad_evals = 0
        self._hess_evals = 0

    # counted oracles ------------------------------------------------------

    def value(self, theta):
        with self._lock:
            self._obj_evals += 1
        with _quiet():
            return self._value_fn(theta)

    def grad(self, theta):
        with self._lock:
            self._grad_evals += 1
        with _quiet():
            return self._grad_fn(theta)

    def hess(self, theta):
        if self._hess_fn is None:
            raise NotImplementedError(f"objective {self.name!r} has no Hessian oracle")
        with self._lock:
            self._hess_evals += 1
        with _quiet():
            return self._hess_fn(theta)

    # shadow (uncounted) access -------------------------------------------

    def value_shadow(self, theta):
        with _quiet():
            return self._value_fn(theta)

    def grad_shadow(self, theta):
        with _quiet():
            return self._grad_fn(theta)

    def hess_shadow(self, theta):
        if self._hess_fn is None:
            return None
        with _quiet():
            return self._hess_fn(theta)

    @property
    def has_hessian(self):
        return self._hess_fn is not None

    @property
    def obj_evals(self):
        return self._obj_evals

    @property
    def grad_evals(self):
        return self._grad_evals

    @property
    def hess_evals(self):
        return self._hess_evals

    def counters(self):
        with self._lock:
            return (self._obj_evals, self._grad_evals, self._hess_evals)
