"""Trace and audit-report serialization.

JSON is the canonical format (schema_version 1). Numeric scalars are
written as shortest round-trip decimal strings so extended-precision
values survive the round trip bit-exactly; verdicts computed from a
re-read trace are identical to verdicts on the original. CSV carries the
main per-iteration columns for plotting.
"""

from __future__ import annotations

import csv
import io
import json

from .audit import AuditReport, AuditSample
from .numerics import fmt_scalar, parse_scalar
from .optimizers import IterationRecord, Probe, Trace

SCHEMA_VERSION = 1


def _fmt_opt(x):
    return None if x is None else fmt_scalar(x)


def _parse_opt(s):
    return None if s is None else parse_scalar(s)


def trace_to_dict(trace: Trace) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "scenario": trace.scenario,
        "params": {k: _fmt_opt(v) for k, v in trace.params.items()},
        "iterations": [
            {
                "k": rec.k,
                "theta": [fmt_scalar(t) for t in rec.theta],
                "f": fmt_scalar(rec.f),
                "grad": [fmt_scalar(g) for g in rec.grad],
                "probes": [
                    {
                        "kind": p.kind,
                        "theta": fmt_scalar(p.theta),
                        **({"f": fmt_scalar(p.f)} if p.f is not None else {}),
                        **({"grad": fmt_scalar(p.grad)} if p.grad is not None else {}),
                    }
                    for p in rec.probes
                ],
                "cum_obj_evals": rec.cum_obj_evals,
                "cum_grad_evals": rec.cum_grad_evals,
                "cum_hess_evals": rec.cum_hess_evals,
                "control": {k: fmt_scalar(v) for k, v in rec.control.items()},
            }
            for rec in trace.iterations
        ],
        "flags": list(trace.flags),
    }


def trace_from_dict(data: dict) -> Trace:
    version = data.get("schema_version")
    if version != SCHEMA_VERSION:
        raise ValueError(f"unsupported trace schema version {version!r}")
    iterations = [
        IterationRecord(
            k=int(rec["k"]),
            theta=[parse_scalar(t) for t in rec["theta"]],
            f=parse_scalar(rec["f"]),
            grad=[parse_scalar(g) for g in rec["grad"]],
            probes=[
                Probe(
                    kind=p["kind"],
                    theta=parse_scalar(p["theta"]),
                    f=_parse_opt(p.get("f")),
                    grad=_parse_opt(p.get("grad")),
                )
                for p in rec.get("probes", [])
            ],
            cum_obj_evals=int(rec["cum_obj_evals"]),
            cum_grad_evals=int(rec["cum_grad_evals"]),
            cum_hess_evals=int(rec["cum_hess_evals"]),
            control={k: parse_scalar(v) for k, v in rec.get("control", {}).items()},
        )
        for rec in data.get("iterations", [])
    ]
    return Trace(
        scenario=data.get("scenario", ""),
        params={k: _parse_opt(v) for k, v in data.get("params", {}).items()},
        iterations=iterations,
        flags=list(data.get("flags", [])),
    )


def write_trace_json(trace: Trace, path):
    with open(path, "w") as fh:
        json.dump(trace_to_dict(trace), fh, indent=2)
        fh.write("\n")


def read_trace_json(path) -> Trace:
    with open(path) as fh:
        return trace_from_dict(json.load(fh))


def trace_csv_rows(trace: Trace):
    header = [
        "k",
        "theta",
        "f",
        "grad",
        "cum_obj_evals",
        "cum_grad_evals",
        "cum_hess_evals",
    ]
    yield header
    for rec in trace.iterations:
        yield [
            rec.k,
            fmt_scalar(rec.theta[0]),
            fmt_scalar(rec.f),
            fmt_scalar(rec.grad[0]),
            rec.cum_obj_evals,
            rec.cum_grad_evals,
            rec.cum_hess_evals,
        ]


def write_trace_csv(trace: Trace, path):
    with open(path, "w", newline="") as fh:
        csv.writer(fh).writerows(trace_csv_rows(trace))


def report_to_dict(report: AuditReport) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "model": report.model,
        "path": report.path,
        "samples": [
            {
                "t": fmt_scalar(s.t),
                "theta": [fmt_scalar(v) for v in s.theta],
                "grad_norm": fmt_scalar(s.grad_norm),
                "hess_norm": fmt_scalar(s.hess_norm),
                "ratio": fmt_scalar(s.ratio),
            }
            for s in report.samples
        ],
        "skipped": [{"t": fmt_scalar(t), "reason": reason} for t, reason in report.skipped],
        "trend_slope": report.trend_slope,
    }


def report_from_dict(data: dict) -> AuditReport:
    report = AuditReport(model=data.get("model", ""), path=data.get("path", ""))
    for s in data.get("samples", []):
        report.samples.append(
            AuditSample(
                t=parse_scalar(s["t"]),
                theta=[parse_scalar(v) for v in s["theta"]],
                grad_norm=parse_scalar(s["grad_norm"]),
                hess_norm=parse_scalar(s["hess_norm"]),
                ratio=parse_scalar(s["ratio"]),
            )
        )
    report.skipped = [(parse_scalar(s["t"]), s["reason"]) for s in data.get("skipped", [])]
    report.trend_slope = data.get("trend_slope")
    return report


def write_report_json(report: AuditReport, path):
    with open(path, "w") as fh:
        json.dump(report_to_dict(report), fh, indent=2)
        fh.write("\n")


def report_csv_rows(report: AuditReport):
    yield ["t", "theta", "grad_norm", "hess_norm", "ratio"]
    for s in report.samples:
        yield [
            fmt_scalar(s.t),
            " ".join(fmt_scalar(v) for v in s.theta),
            fmt_scalar(s.grad_norm),
            fmt_scalar(s.hess_norm),
            fmt_scalar(s.ratio),
        ]


def write_report_csv(report: AuditReport, path):
    with open(path, "w", newline="") as fh:
        csv.writer(fh).writerows(report_csv_rows(report))


def trace_json_str(trace: Trace) -> str:
    return json.dumps(trace_to_dict(trace), indent=2)


def trace_csv_str(trace: Trace) -> str:
    buf = io.StringIO()
    csv.writer(buf).writerows(trace_csv_rows(trace))
    return buf.getvalue()
