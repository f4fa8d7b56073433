"""Command-line front end.

Subcommands: ``optimize`` (search for a quorum and write chart/report/trace),
``evaluate`` (metrics for a stored chart), ``extend`` (complement extension of
a half-dimensional quorum), ``reference`` (analytic constructions with their
verification reports).

Exit codes: 0 success, 2 bad flags or malformed/unsupported input,
3 unwritable output, 1 failed verification.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from .fileio import (
    ChartFileError,
    orthoplex_document,
    projector_set_document,
    read_chart,
    report_document,
    write_chart,
    write_report,
    write_trace_csv,
)
from .hilbert import quorum_from_chart
from .metrics import (
    evaluate_quorum,
    extend_to_maximal,
    gram_matrix,
    orthoplex_report,
    quality_measure,
)
from .powell import PowellConfig
from .reference import (
    halfdim_optimal_quorum_n4,
    mub_family,
    rank1_optimal_quorum_n2,
    verify_mub_family,
)
from .schedule import ScheduleConfig, alternating_optimize, multi_restart

__all__ = ["main", "entry"]


def _fail(message: str, code: int) -> int:
    print(f"error: {message}", file=sys.stderr)
    return code


def _print_summary(report) -> None:
    print(f"quality = {report.quality!r}")
    print(f"relative_deviation = {report.relative_deviation!r}")
    print(f"ln_L = {report.ln_l!r}")


def cmd_optimize(args) -> int:
    out_dir = args.out
    if not os.path.isdir(out_dir):
        return _fail(f"output directory does not exist: {out_dir}", 3)
    if not os.access(out_dir, os.W_OK):
        return _fail(f"output directory is not writable: {out_dir}", 3)

    sched = ScheduleConfig(
        phase_length=args.sweeps_per_phase,
        total_phases=args.phases,
        restart_count=args.restarts,
        rng_seed=args.seed,
        l_phase_length=args.l_sweeps_per_phase,
    )
    cfg = PowellConfig(f_tol=args.f_tol, x_tol=args.x_tol)

    if args.resume is not None:
        try:
            angles, n, l, _meta = read_chart(args.resume)
        except (OSError, ChartFileError) as exc:
            return _fail(str(exc), 2)
        if (n, l) != (args.n, args.l):
            return _fail(
                f"resume chart is for n={n}, l={l}, but flags request n={args.n}, l={args.l}", 2
            )
        result = alternating_optimize(angles, n, l, sched, cfg)
        result.seed = args.seed
    else:
        mr = multi_restart(sched, cfg, n=args.n, l=args.l, workers=args.workers)
        result = mr.best

    chart_path = os.path.join(out_dir, "chart.json")
    report_path = os.path.join(out_dir, "report.json")
    trace_path = os.path.join(out_dir, "trace.csv")
    gram = gram_matrix(quorum_from_chart(result.chart, args.n, args.l))
    write_chart(chart_path, result.chart, args.n, args.l, seed=result.seed)
    write_report(report_path, result.report, gram, args.n, args.l)
    write_trace_csv(trace_path, result.trace)
    _print_summary(result.report)
    print(f"wrote {chart_path}, {report_path}, {trace_path}")
    return 0


def cmd_evaluate(args) -> int:
    try:
        angles, n, l, _meta = read_chart(args.chart)
    except (OSError, ChartFileError) as exc:
        return _fail(str(exc), 2)
    quorum = quorum_from_chart(angles, n, l)
    report = evaluate_quorum(quorum)
    doc = report_document(report, gram_matrix(quorum), n, l)
    json.dump(doc, sys.stdout, indent=2)
    print()
    return 0


def cmd_extend(args) -> int:
    if args.reference is not None:
        if args.reference != "n4":
            return _fail(f"unknown reference set {args.reference!r} (expected 'n4')", 2)
        quorum = halfdim_optimal_quorum_n4()
    else:
        if args.chart is None:
            return _fail("need a chart path or --reference n4", 2)
        try:
            angles, n, l, _meta = read_chart(args.chart)
        except (OSError, ChartFileError) as exc:
            return _fail(str(exc), 2)
        if 2 * l != n:
            return _fail(f"complement extension needs l = n/2, chart has n={n}, l={l}", 2)
        quorum = quorum_from_chart(angles, n, l)
    maximal = extend_to_maximal(quorum)
    report = orthoplex_report(maximal.projectors, tol=args.tol)
    doc = projector_set_document(
        maximal.projectors, maximal.n, maximal.l, extra={"orthoplex": orthoplex_document(report)}
    )
    return _emit(doc, args.out)


def _emit(doc: dict, out_path) -> int:
    payload = json.dumps(doc)
    if out_path is None:
        print(payload)
        return 0
    try:
        with open(out_path, "w") as fh:
            fh.write(payload)
            fh.write("\n")
    except OSError as exc:
        return _fail(f"cannot write {out_path}: {exc}", 3)
    return 0


def cmd_reference(args) -> int:
    name = args.name
    if name in ("mub2", "mub3", "mub4"):
        n = int(name[-1])
        fam = mub_family(n)
        try:
            verify_mub_family(fam)
        except ValueError as exc:
            return _fail(f"verification failed: {exc}", 1)
        overlap_dev = 0.0
        for a in range(len(fam.bases)):
            for b in range(a + 1, len(fam.bases)):
                ov = np.abs(fam.bases[a].conj().T @ fam.bases[b]) ** 2
                overlap_dev = max(overlap_dev, float(np.max(np.abs(ov - 1.0 / n))))
        doc = {
            "format_version": 1,
            "kind": "mub_family",
            "n": n,
            "bases_count": len(fam.bases),
            "max_cross_overlap_sq_deviation": overlap_dev,
            "bases": [
                [[float(z.real), float(z.imag)] for z in basis.T.reshape(-1)]
                for basis in fam.bases
            ],
        }
        return _emit(doc, args.out)
    if name in ("n2-rank1", "n4-rank2"):
        quorum = rank1_optimal_quorum_n2() if name == "n2-rank1" else halfdim_optimal_quorum_n4()
        report = evaluate_quorum(quorum)
        qual = quality_measure(quorum)
        ub = report.upper_bound
        if abs(qual.quality - ub) > 1e-9 * ub or report.non_orthogonality_l > 1e-9:
            return _fail(f"verification failed: quality {qual.quality!r} vs bound {ub!r}", 1)
        doc = projector_set_document(
            quorum.projectors,
            quorum.n,
            quorum.l,
            extra={"kind": name, "report": report_document(report, gram_matrix(quorum), quorum.n, quorum.l)},
        )
        return _emit(doc, args.out)
    return _fail(f"unknown reference name {name!r}", 2)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tomopack", description="Design near-optimal projector quorums for state tomography."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_opt = sub.add_parser("optimize", help="search for a high-quality quorum")
    p_opt.add_argument("--n", type=int, default=6, help="Hilbert space dimension")
    p_opt.add_argument("--l", type=int, default=3, help="projector rank")
    p_opt.add_argument("--seed", type=int, default=0, help="base RNG seed")
    p_opt.add_argument("--restarts", type=int, default=4, help="independent random restarts")
    p_opt.add_argument("--phases", type=int, default=20, help="alternating objective phases")
    p_opt.add_argument("--sweeps-per-phase", type=int, default=200, help="Powell sweeps per phase")
    p_opt.add_argument(
        "--l-sweeps-per-phase", type=int, default=None,
        help="separate sweep cap for the ln(L) phases (default: same as --sweeps-per-phase)",
    )
    p_opt.add_argument("--f-tol", type=float, default=1e-10, help="Powell relative objective tolerance")
    p_opt.add_argument("--x-tol", type=float, default=1e-10, help="line-search parameter tolerance")
    p_opt.add_argument("--workers", type=int, default=1, help="parallel restart processes")
    p_opt.add_argument("--out", required=True, help="existing directory for chart/report/trace")
    p_opt.add_argument("--resume", default=None, help="chart file to refine instead of random starts")
    p_opt.set_defaults(func=cmd_optimize)

    p_eval = sub.add_parser("evaluate", help="metrics report for a stored chart")
    p_eval.add_argument("chart", help="chart JSON file")
    p_eval.set_defaults(func=cmd_evaluate)

    p_ext = sub.add_parser("extend", help="complement-extend a half-dimensional quorum")
    p_ext.add_argument("chart", nargs="?", default=None, help="chart JSON file (l = n/2)")
    p_ext.add_argument("--reference", default=None, help="use a built-in set instead (n4)")
    p_ext.add_argument("--tol", type=float, default=1e-6, help="orthoplex tolerance on d^2")
    p_ext.add_argument("--out", default=None, help="output file (default stdout)")
    p_ext.set_defaults(func=cmd_extend)

    p_ref = sub.add_parser("reference", help="emit an analytic construction with verification")
    p_ref.add_argument("name", help="one of mub2, mub3, mub4, n2-rank1, n4-rank2")
    p_ref.add_argument("--out", default=None, help="output file (default stdout)")
    p_ref.set_defaults(func=cmd_reference)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    return args.func(args)


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
