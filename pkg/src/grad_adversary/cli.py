"""Command-line interface.

Subcommands: ``list`` (scenario catalog), ``run`` (execute a scenario and
export its trace), ``verify`` (run and check the scenario's claims),
``audit`` (curvature-to-gradient ratio along a path for the statistical
models), ``interp`` (solve one degree-9 interpolation system).

Exit codes: 0 all claims pass, 1 a verdict failed, 2 usage error,
3 numeric infeasibility (requested step count not representable).
"""

from __future__ import annotations

import argparse
import sys

from . import audit as audit_mod
from . import scenarios as scen_mod
from . import traceio, verify
from .errors import (
    AnchorOverflowError,
    GradAdversaryError,
    ParameterError,
    UnknownScenarioError,
)
from .interp import interpolation_residuals, poly_eval, solve_interpolation
from .numerics import fmt_scalar, ld

EXIT_OK = 0
EXIT_VERDICT = 1
EXIT_USAGE = 2
EXIT_INFEASIBLE = 3


def _parse_params(pairs):
    out = {}
    for pair in pairs or []:
        if "=" not in pair:
            raise ParameterError(f"--param expects key=value, got {pair!r}")
        key, value = pair.split("=", 1)
        out[key.strip()] = value.strip()
    return out


def default_steps(scenario) -> int:
    if scenario.group == "quartic":
        return 30
    if scenario.group == "explosion":
        return 10 if scenario.name == "armijo" else 8
    return 15


def _check_feasible(scenario, params, steps):
    limit = scenario.max_steps(params)
    if steps > limit:
        raise AnchorOverflowError(
            f"scenario {scenario.name!r}: {steps} steps exceed the representable "
            f"range; max feasible step count is {limit}",
            max_feasible=limit,
        )


def _prepare(args):
    scenario = scen_mod.get_scenario(args.scenario)
    params = scen_mod.resolve_params(scenario, _parse_params(args.param))
    steps = args.steps if args.steps is not None else default_steps(scenario)
    if steps < 1:
        raise ParameterError("--steps must be at least 1")
    _check_feasible(scenario, params, steps)
    return scenario, params, steps


def _export_trace(trace, args):
    if args.out:
        if args.format == "csv":
            traceio.write_trace_csv(trace, args.out)
        else:
            traceio.write_trace_json(trace, args.out)
        print(f"trace written to {args.out}")
    if getattr(args, "plot", None):
        from .figures import plot_trace

        plot_trace(trace, args.plot)
        print(f"figure written to {args.plot}")


def cmd_list(args):
    for name in scen_mod.list_scenarios():
        s = scen_mod.SCENARIOS[name]
        defaults = ", ".join(
            f"{k}={fmt_scalar(v) if v is not None else 'auto'}" for k, v in s.defaults.items()
        )
        print(f"{name:14s} [{s.group:9s}] {s.summary}")
        print(f"{'':14s} defaults: {defaults}; checks: {', '.join(s.checks)}")
    return EXIT_OK


def cmd_run(args):
    scenario, params, steps = _prepare(args)
    obj = scenario.build(params, steps)
    trace = scenario.run(obj, params, steps, None)
    last = trace.iterations[-1]
    print(
        f"{scenario.name}: {len(trace.iterations) - 1} steps, "
        f"theta={fmt_scalar(last.theta[0])}, f={fmt_scalar(last.f)}, "
        f"evals obj/grad/hess = {last.cum_obj_evals}/{last.cum_grad_evals}/{last.cum_hess_evals}"
    )
    if trace.flags:
        print(f"flags: {', '.join(trace.flags)}")
    _export_trace(trace, args)
    return EXIT_OK


def _verify_one(scenario, params, steps, tol):
    trace, verdicts = verify.verify_scenario(scenario, params, steps, tol=tol)
    return trace, verdicts


def _print_verdicts(name, verdicts):
    ok = True
    for v in verdicts:
        status = "PASS" if v.passed else "FAIL"
        print(f"{status}  {name}:{v.claim}")
        if not v.passed:
            ok = False
            for diag in v.diagnostics:
                print(f"      {diag}")
    return ok


def cmd_verify(args):
    tol = ld(args.tol) if args.tol is not None else None
    if args.all:
        all_ok = True
        for name in scen_mod.list_scenarios():
            scenario = scen_mod.SCENARIOS[name]
            # --param overrides are per-scenario and do not apply under --all
            params = scen_mod.resolve_params(scenario, {})
            steps = args.steps if args.steps is not None else default_steps(scenario)
            _check_feasible(scenario, params, steps)
            _, verdicts = _verify_one(scenario, params, steps, tol)
            all_ok &= _print_verdicts(name, verdicts)
        return EXIT_OK if all_ok else EXIT_VERDICT
    if not args.scenario:
        raise ParameterError("verify requires --scenario NAME or --all")
    scenario, params, steps = _prepare(args)
    trace, verdicts = _verify_one(scenario, params, steps, tol)
    ok = _print_verdicts(scenario.name, verdicts)
    _export_trace(trace, args)
    return EXIT_OK if ok else EXIT_VERDICT


def cmd_audit(args):
    params = {k: ld(v) for k, v in _parse_params(args.param).items()}
    model = audit_mod.get_model(args.model, **params)
    path = audit_mod.parse_path(args.path)
    report = audit_mod.probe_path(model, path, path_label=args.path)
    for s in report.samples:
        print(
            f"t={fmt_scalar(s.t)}  |grad|={fmt_scalar(s.grad_norm)}  "
            f"|hess|_F={fmt_scalar(s.hess_norm)}  ratio={fmt_scalar(s.ratio)}"
        )
    for t, reason in report.skipped:
        print(f"t={fmt_scalar(t)}  skipped: {reason}")
    if report.trend_slope is not None:
        print(f"tail slope of log(ratio) vs log(|grad|): {report.trend_slope:.6f}")
    if args.out:
        if args.format == "csv":
            traceio.write_report_csv(report, args.out)
        else:
            traceio.write_report_json(report, args.out)
        print(f"report written to {args.out}")
    if args.plot:
        from .figures import plot_report

        plot_report(report, args.plot)
        print(f"figure written to {args.plot}")
    return EXIT_OK


def cmd_interp(args):
    try:
        f, fp, fpp = (ld(v) for v in args.center.split(","))
    except ValueError:
        raise ParameterError(f"--center expects 'f,fp,fpp', got {args.center!r}") from None
    m = ld(args.halfwidth)
    targets = (0, f, 0, 0, fp, 0, 0, fpp, 0)
    coeffs = solve_interpolation(m, targets)
    for i, c in enumerate(coeffs):
        print(f"c_{i} = {fmt_scalar(c)}")
    residuals = interpolation_residuals(coeffs, m, targets)
    worst = max(abs(r) for r in residuals)
    print(f"max residual = {fmt_scalar(worst)}")
    print(f"P(0) = {fmt_scalar(poly_eval(coeffs, 0))}")
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(
        prog="grad-adversary",
        description="Adversarial objectives that defeat first- and second-order methods, "
        "with mechanically checked divergence and evaluation-explosion claims.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("list", help="list available scenarios").set_defaults(fn=cmd_list)

    def add_common(p, with_steps=True):
        p.add_argument("--param", action="append", metavar="KEY=VALUE", help="override a scenario parameter")
        if with_steps:
            p.add_argument("--steps", type=int, default=None, help="number of outer steps")
        p.add_argument("--out", help="write the trace/report to this file")
        p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--plot", metavar="FILE.png", help="also write a PNG figure")

    p_run = sub.add_parser("run", help="run a scenario and export its trace")
    p_run.add_argument("--scenario", required=True)
    add_common(p_run)
    p_run.set_defaults(fn=cmd_run)

    p_verify = sub.add_parser("verify", help="run a scenario and check its claims")
    p_verify.add_argument("--scenario")
    p_verify.add_argument("--all", action="store_true", help="verify every scenario at default settings")
    p_verify.add_argument("--tol", help="landing tolerance override")
    add_common(p_verify)
    p_verify.set_defaults(fn=cmd_verify)

    p_audit = sub.add_parser("audit", help="sample the curvature-to-gradient ratio of a model")
    p_audit.add_argument("--model", required=True, choices=sorted(audit_mod.MODELS))
    p_audit.add_argument(
        "--path",
        required=True,
        help="'geometric:start,ratio,K' or 'linear:start,step,K'",
    )
    add_common(p_audit, with_steps=False)
    p_audit.set_defaults(fn=cmd_audit)

    p_interp = sub.add_parser("interp", help="solve one degree-9 window interpolation system")
    p_interp.add_argument("--halfwidth", required=True, help="window half-width m > 0")
    p_interp.add_argument("--center", required=True, help="center targets 'f,fp,fpp'")
    p_interp.set_defaults(fn=cmd_interp)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except AnchorOverflowError as exc:
        print(f"error: {exc}", file=sys.stderr)
        if exc.max_feasible is not None:
            print(f"max feasible step count: {exc.max_feasible}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (ParameterError, UnknownScenarioError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except GradAdversaryError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VERDICT


if __name__ == "__main__":
    sys.exit(main())
