"""Verdict layer: checks pass on faithful traces and catch tampering."""

import copy

import numpy as np
import pytest

from grad_adversary import (
    check_anchor_tracking,
    check_divergence,
    check_eval_growth,
    check_gradient_floor,
    scenarios as scen,
    trace_from_dict,
    trace_to_dict,
    verify_scenario,
)
from grad_adversary.numerics import LD
from grad_adversary.optimizers import Trace
from grad_adversary import verify as verify_mod


def run_and_expect(name, steps):
    sc = scen.get_scenario(name)
    p = scen.resolve_params(sc, {})
    obj = sc.build(p, steps)
    trace = sc.run(obj, p, steps, None)
    return sc, trace, sc.expect(p, steps)


class TestAnchorTracking:
    def test_passes_on_faithful_trace(self):
        _, trace, exp = run_and_expect("bb", 10)
        assert check_anchor_tracking(trace, exp).passed

    def test_fails_on_perturbed_iterate(self):
        _, trace, exp = run_and_expect("bb", 10)
        trace.iterations[4].theta[0] = trace.iterations[4].theta[0] + LD("1e-6")
        verdict = check_anchor_tracking(trace, exp)
        assert not verdict.passed
        assert any("k=4" in d for d in verdict.diagnostics)

    def test_fails_on_length_mismatch(self):
        _, trace, exp = run_and_expect("bb", 10)
        trace.iterations.pop()
        verdict = check_anchor_tracking(trace, exp)
        assert not verdict.passed
        assert any("length mismatch" in d for d in verdict.diagnostics)

    def test_fails_on_missing_probe(self):
        _, trace, exp = run_and_expect("nag", 6)
        trace.iterations[3].probes.clear()
        assert not check_anchor_tracking(trace, exp).passed

    def test_empty_trace(self):
        verdict = check_anchor_tracking(Trace("x", {}, [], []), scen.Expectation())
        assert not verdict.passed
        assert verdict.diagnostics == ["empty trace"]

    def test_env_tolerance_override(self, monkeypatch):
        _, trace, exp = run_and_expect("bb", 5)
        trace.iterations[2].theta[0] = trace.iterations[2].theta[0] + LD("1e-7")
        assert not check_anchor_tracking(trace, exp).passed
        monkeypatch.setenv("GRAD_ADVERSARY_TOL", "1e-3")
        assert check_anchor_tracking(trace, exp).passed


class TestDivergence:
    def test_staircase_bound(self):
        _, trace, exp = run_and_expect("bb", 10)
        assert check_divergence(trace, span=exp.span).passed

    def test_fails_below_bound(self):
        _, trace, exp = run_and_expect("bb", 10)
        trace.iterations[-1].f = LD(0)
        assert not check_divergence(trace, span=exp.span).passed

    def test_fails_on_decrease(self):
        _, trace, exp = run_and_expect("bb", 10)
        trace.iterations[5].f = trace.iterations[4].f - LD(1)
        verdict = check_divergence(trace, span=exp.span)
        assert not verdict.passed

    def test_strict_mode(self):
        sc = scen.get_scenario("constant")
        p = scen.resolve_params(sc, {})
        obj = sc.build(p, 30)
        trace = sc.run(obj, p, 30, None)
        assert check_divergence(trace, strict=True).passed
        trace.iterations[7].f = trace.iterations[6].f
        assert not check_divergence(trace, strict=True).passed


class TestGradientFloor:
    def test_unit_floor(self):
        _, trace, _ = run_and_expect("wngrad", 10)
        assert check_gradient_floor(trace, 1).passed
        assert not check_gradient_floor(trace, 1.5).passed

    def test_probe_gradients_included(self):
        _, trace, _ = run_and_expect("nag", 8)
        assert check_gradient_floor(trace, 1).passed
        for rec in trace.iterations:
            for probe in rec.probes:
                if probe.grad is not None:
                    probe.grad = LD("0.5")
        assert not check_gradient_floor(trace, 1).passed


class TestEvalGrowth:
    def test_exact_powers(self):
        _, trace, _ = run_and_expect("armijo", 8)
        assert check_eval_growth(trace, 2).passed

    def test_fails_on_off_by_one(self):
        _, trace, _ = run_and_expect("armijo", 8)
        trace.iterations[3].cum_obj_evals += 1
        verdict = check_eval_growth(trace, 2)
        assert not verdict.passed
        assert any("2^3" in d for d in verdict.diagnostics)


class TestRoundTrip:
    @pytest.mark.parametrize("name", ["bb", "nag", "polyak", "armijo", "acr", "constant"])
    def test_serialized_trace_same_verdicts(self, name):
        sc = scen.get_scenario(name)
        p = scen.resolve_params(sc, {})
        steps = 8
        trace, verdicts = verify_scenario(sc, p, steps)
        reread = trace_from_dict(copy.deepcopy(trace_to_dict(trace)))
        exp = sc.expect(p, steps)
        verdicts2 = verify_mod.scenario_verdicts(sc, reread, exp)
        assert [(v.claim, v.passed) for v in verdicts] == [(v.claim, v.passed) for v in verdicts2]
        assert all(v.passed for v in verdicts), name
