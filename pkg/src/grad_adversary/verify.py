"""Machine-checkable verdicts over optimizer traces.

Three claim families: anchor tracking (iterates land on their predicted
anchors), catastrophic divergence (objective values climb at the staircase
rate, or strictly blow up for the quartic), and evaluation explosion
(cumulative objective evaluations equal base^j exactly).

Verdicts are pure functions of traces plus scenario expectations:
re-checking a serialized-then-deserialized trace yields the same verdict.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

import numpy as np

from .numerics import LD, ExactReal, as_position, ld
from .optimizers import Trace
from .scenarios import Expectation, Scenario

DEFAULT_TOL = LD("1e-9")
_FLOOR_SLACK = LD("1e-12")


def default_tolerance(tol=None):
    """Explicit tolerance, else GRAD_ADVERSARY_TOL, else 1e-9."""
    if tol is not None:
        return ld(tol)
    env = os.environ.get("GRAD_ADVERSARY_TOL")
    return ld(env) if env else DEFAULT_TOL


def landing_tolerance(target, tol=None):
    """Absolute landing tolerance max(tol, tol*|target|)."""
    tol = default_tolerance(tol)
    mag = abs(ld(target))
    if not np.isfinite(mag):
        return tol
    return max(tol, tol * mag)


@dataclass
class Verdict:
    claim: str
    passed: bool
    diagnostics: list = field(default_factory=list)

    def as_dict(self):
        return {"claim": self.claim, "pass": bool(self.passed), "diagnostics": list(self.diagnostics)}


def _fail(claim, diagnostics):
    return Verdict(claim, False, diagnostics)


def _close(value, target, tol_abs, radius):
    """Landing test: within tolerance of the target, and, when a flat-slope
    radius is known, inside it. Positions may be exact rationals."""
    diff = abs(as_position(value) - target)
    if diff > tol_abs:
        return False, diff
    if radius is not None and diff > radius:
        return False, diff
    return True, diff


def check_anchor_tracking(trace: Trace, expectation: Expectation, tol=None) -> Verdict:
    claim = "anchor_tracking"
    if not trace.iterations:
        return _fail(claim, ["empty trace"])
    targets = expectation.main
    if targets is None:
        return Verdict(claim, True, ["no anchor targets for this scenario"])
    diags = []
    if len(trace.iterations) != len(targets):
        diags.append(
            f"length mismatch: trace has {len(trace.iterations)} iterates, "
            f"expected {len(targets)} (flags={trace.flags})"
        )
        return _fail(claim, diags)
    radii = expectation.radii or [None] * len(targets)
    for rec, target, radius in zip(trace.iterations, targets, radii):
        tol_abs = landing_tolerance(target, tol)
        ok, diff = _close(rec.theta[0], target, tol_abs, radius)
        if not ok:
            diags.append(
                f"k={rec.k}: theta={rec.theta[0]} misses target {target} "
                f"by {ld(diff)} (tolerance {tol_abs}, radius {radius})"
            )
    by_key = {}
    for rec in trace.iterations:
        for probe in rec.probes:
            by_key.setdefault((rec.k, probe.kind), probe)
    for (k, kind), (target, radius) in (expectation.probes or {}).items():
        probe = by_key.get((k, kind))
        if probe is None:
            diags.append(f"k={k}: missing probe {kind}")
            continue
        tol_abs = landing_tolerance(target, tol)
        ok, diff = _close(probe.theta, target, tol_abs, radius)
        if not ok:
            diags.append(
                f"k={k} probe {kind}: theta={probe.theta} misses target {target} by {ld(diff)}"
            )
    return Verdict(claim, not diags, diags)


def check_divergence(trace: Trace, span=None, strict=False, tol=None) -> Verdict:
    claim = "divergence"
    if not trace.iterations:
        return _fail(claim, ["empty trace"])
    diags = []
    fs = [rec.f for rec in trace.iterations]
    if strict:
        thetas = [abs(ld(rec.theta[0])) for rec in trace.iterations]
        grads = [abs(ld(rec.grad[0])) for rec in trace.iterations]
        for label, seq in (("|theta|", thetas), ("f", fs), ("|grad|", grads)):
            for k in range(1, len(seq)):
                if not seq[k] > seq[k - 1]:
                    diags.append(f"{label} not strictly increasing at k={k}")
                    break
    else:
        for k in range(1, len(fs)):
            if not fs[k] >= fs[k - 1]:
                diags.append(f"f decreases at k={k}: {fs[k-1]} -> {fs[k]}")
                break
        if span is not None:
            s_first, s_last = (ld(span[0]), ld(span[1]))
            bound = 7 * (s_last - s_first) / 16
            slack = default_tolerance(tol) * max(LD(1), abs(bound))
            if not fs[-1] >= bound - slack:
                diags.append(f"final f={fs[-1]} below staircase bound {bound}")
    return Verdict(claim, not diags, diags)


def check_gradient_floor(trace: Trace, bound, tol=None) -> Verdict:
    claim = "gradient_floor"
    if not trace.iterations:
        return _fail(claim, ["empty trace"])
    bound = ld(bound)
    worst = None
    where = None
    for rec in trace.iterations:
        candidates = [(abs(ld(g)), f"k={rec.k}") for g in rec.grad]
        candidates += [
            (abs(ld(p.grad)), f"k={rec.k} probe {p.kind}")
            for p in rec.probes
            if p.grad is not None
        ]
        for mag, label in candidates:
            if worst is None or mag < worst:
                worst, where = mag, label
    if worst is None:
        return _fail(claim, ["trace records no gradients"])
    if worst >= bound - _FLOOR_SLACK:
        return Verdict(claim, True, [f"min |grad| = {worst}"])
    return _fail(claim, [f"min |grad| = {worst} at {where} below floor {bound}"])


def check_eval_growth(trace: Trace, base) -> Verdict:
    claim = "eval_growth"
    if not trace.iterations:
        return _fail(claim, ["empty trace"])
    base = int(base)
    diags = []
    for rec in trace.iterations:
        if rec.k == 0:
            continue
        expected = base**rec.k
        if rec.cum_obj_evals != expected:
            diags.append(
                f"k={rec.k}: cum_obj_evals={rec.cum_obj_evals}, expected {base}^{rec.k}={expected}"
            )
    if trace.flags:
        diags.append(f"trace flagged: {trace.flags}")
    return Verdict(claim, not diags, diags)


def scenario_verdicts(scenario: Scenario, trace: Trace, expectation: Expectation, tol=None):
    """Apply the scenario's bound verdict set to a trace."""
    verdicts = []
    for check in scenario.checks:
        if check == "anchor_tracking":
            verdicts.append(check_anchor_tracking(trace, expectation, tol))
        elif check == "divergence":
            verdicts.append(
                check_divergence(
                    trace, span=expectation.span, strict=scenario.strict_divergence, tol=tol
                )
            )
        elif check == "gradient_floor":
            verdicts.append(check_gradient_floor(trace, scenario.grad_floor, tol))
        elif check == "eval_growth":
            verdicts.append(check_eval_growth(trace, scenario.eval_base))
        else:  # pragma: no cover - catalog and checker lists are co-maintained
            raise ValueError(f"unknown check {check!r}")
    return verdicts


def verify_scenario(scenario: Scenario, params, steps, budget=None, tol=None):
    """Build, run and check one scenario; returns (trace, verdicts)."""
    obj = scenario.build(params, steps)
    trace = scenario.run(obj, params, steps, budget)
    expectation = scenario.expect(params, steps)
    return trace, scenario_verdicts(scenario, trace, expectation, tol)
