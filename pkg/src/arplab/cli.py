"""Command-line front end.

Exit codes: 0 success (or certificate accepted), 1 certificate rejected,
2 usage error, 3 input error, 4 timeout.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import enumeration, experiments, oracle
from .errors import ARPError, ParseError, SearchTimeout
from .fileformat import (decimal_approx, dump_instance, parse_instance_file, parse_rational,
                         render_perm, render_rational)
from .model import Kind, reduce_nvep_to_arp, verify_certificate

EXIT_OK, EXIT_REJECT, EXIT_USAGE, EXIT_INPUT, EXIT_TIMEOUT = 0, 1, 2, 3, 4


class _UsageError(Exception):
    pass


def _global_options(parser, suppress: bool):
    def default(value):
        return argparse.SUPPRESS if suppress else value

    parser.add_argument("--workers", type=int, default=default(1),
                        help="worker processes (default 1)")
    parser.add_argument("--timeout-secs", type=float, default=default(None),
                        help="wall-clock budget (per row for bench)")
    parser.add_argument("--cap", type=int, default=default(oracle.DEFAULT_CAP),
                        help="largest n the brute-force oracle accepts")
    parser.add_argument("--json", action="store_true", default=default(False),
                        help="machine-readable output")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="arplab",
        description="Exact solver and Q_n laboratory for airplane refueling / vehicle exploration.",
    )
    _global_options(parser, suppress=False)
    common = argparse.ArgumentParser(add_help=False)
    _global_options(common, suppress=True)
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True

    p = sub.add_parser("solve", parents=[common], help="optimum via swap-stable enumeration")
    p.add_argument("file")
    p.add_argument("--prune", action="store_true",
                   help="skip subtrees by an admissible bound (Qn not reported)")

    p = sub.add_parser("brute", parents=[common], help="exhaustive n! oracle")
    p.add_argument("file")
    p.add_argument("--mode", choices=["incremental", "full"], default="incremental")

    p = sub.add_parser("count", parents=[common], help="Qn only")
    p.add_argument("file")

    p = sub.add_parser("check", parents=[common], help="verify a permutation certificate")
    p.add_argument("file")
    p.add_argument("--perm", required=True, help="comma-separated 1-based ids, e.g. 2,1,3")
    p.add_argument("--threshold", required=True, help="decimal or p/q")

    p = sub.add_parser("reduce", parents=[common], help="map an NVEP instance to ARP")
    p.add_argument("file")
    p.add_argument("-o", "--output", required=True)

    p = sub.add_parser("gen", parents=[common], help="generate an instance file")
    p.add_argument("--family", choices=["canonical", "random"], required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--M", default="10", help="cap on v_n/c_n for canonical (decimal or p/q)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--num-max", type=int, default=100)
    p.add_argument("--den-max", type=int, default=10)
    p.add_argument("-o", "--output", default="-")

    p = sub.add_parser("bench", parents=[common], help="Qn sweep to CSV plus growth summary")
    p.add_argument("--family", choices=["canonical", "random"], required=True)
    p.add_argument("--n-from", type=int, required=True)
    p.add_argument("--n-to", type=int, required=True)
    p.add_argument("--reps", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--M", default="10")
    p.add_argument("-o", "--output", required=True)
    return parser


def _load(path: str):
    try:
        data = Path(path).read_bytes()
    except OSError as exc:
        raise ParseError(f"{path}: {exc.strerror}") from None
    return parse_instance_file(data)


def _emit(args, payload: dict, lines: list[str]):
    if args.json:
        print(json.dumps(payload, indent=2))
    else:
        print("\n".join(lines))


def _rational_json(x):
    return {"value": str(x), "decimal": decimal_approx(x)}


def cmd_solve(args):
    inst = _load(args.file)
    report = enumeration.solve(inst, workers=args.workers, prune=args.prune,
                               timeout=args.timeout_secs)
    lines = [f"optimum {render_rational(report.optimum)}"]
    lines += [f"perm {render_perm(p)}" for p in report.optimal_perms]
    lines.append(f"Qn {'n/a (pruned)' if report.q_n is None else report.q_n}")
    lines.append(f"nodes {report.nodes_expanded}")
    if report.ties_detected:
        lines.append("ties true")
    payload = {
        "optimum": _rational_json(report.optimum),
        "optimal_perms": [list(p) for p in report.optimal_perms],
        "qn": report.q_n,
        "nodes": report.nodes_expanded,
        "ties": report.ties_detected,
        "elapsed_secs": report.elapsed,
    }
    _emit(args, payload, lines)
    return EXIT_OK


def cmd_brute(args):
    inst = _load(args.file)
    report = oracle.brute_force_solve(inst, cap=args.cap, mode=args.mode, workers=args.workers,
                                      timeout=args.timeout_secs)
    lines = [f"optimum {render_rational(report.optimum)}"]
    lines += [f"perm {render_perm(p)}" for p in report.argmax_perms]
    lines += [f"evaluated {report.permutations_evaluated}", f"stable {report.stable_count}"]
    payload = {
        "optimum": _rational_json(report.optimum),
        "argmax_perms": [list(p) for p in report.argmax_perms],
        "permutations_evaluated": report.permutations_evaluated,
        "stable_count": report.stable_count,
    }
    _emit(args, payload, lines)
    return EXIT_OK


def cmd_count(args):
    inst = _load(args.file)
    stats = enumeration.count_stats(inst, workers=args.workers, timeout=args.timeout_secs)
    _emit(args, {"qn": stats.q_n, "nodes": stats.nodes, "ties": stats.ties_detected},
          [f"Qn {stats.q_n}"])
    return EXIT_OK


def _parse_perm(text: str):
    # an unparsable certificate is rejected, not a usage error
    try:
        return [int(tok) for tok in text.split(",")]
    except ValueError:
        return None


def cmd_check(args):
    inst = _load(args.file)
    try:
        threshold = parse_rational(args.threshold, "--threshold")
    except ParseError as exc:
        raise _UsageError(str(exc)) from None
    perm = _parse_perm(args.perm)
    accepted = perm is not None and verify_certificate(inst, perm, threshold)
    verdict = "accept" if accepted else "reject"
    _emit(args, {"accepted": accepted, "threshold": str(threshold)}, [verdict])
    return EXIT_OK if accepted else EXIT_REJECT


def _write_text(path: str, text: str):
    if path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def cmd_reduce(args):
    arp = reduce_nvep_to_arp(_load(args.file))
    _write_text(args.output, dump_instance(arp))
    return EXIT_OK


def _family(name: str) -> experiments.Family:
    return experiments.Family(name)


def cmd_gen(args):
    M = parse_rational(args.M, "--M")
    spec = experiments.GeneratorSpec(_family(args.family), args.n, args.seed, M,
                                     (args.num_max, args.den_max))
    _write_text(args.output, dump_instance(experiments.generate(spec)))
    return EXIT_OK


def cmd_bench(args):
    M = parse_rational(args.M, "--M")
    template = experiments.GeneratorSpec(_family(args.family), args.n_from, args.seed, M)
    timeout = experiments.DEFAULT_ROW_TIMEOUT if args.timeout_secs is None else args.timeout_secs
    rows = experiments.qn_sweep(template, args.n_from, args.n_to, args.reps,
                                workers=args.workers, timeout=timeout)
    with open(args.output, "w", encoding="utf-8", newline="") as fh:
        experiments.write_sweep_csv(rows, fh)
    try:
        summary = experiments.regime_report(rows)
    except ARPError as exc:
        print(f"no regime summary: {exc}", file=sys.stderr)
    else:
        if args.json:
            payload = {
                "per_n": [{"n": s.n, "rows": s.rows, "max_qn": s.max_qn,
                           "bound_2exp": s.bound_2exp, "bound_margin": s.bound_margin,
                           "ratio_to_next": None if s.ratio_to_next is None else str(s.ratio_to_next),
                           "log2_slope": s.log2_slope} for s in summary.per_n],
                "inflection_candidate": summary.inflection_candidate,
                "bound_violation": summary.bound_violation,
                "violations": [{"n": r.n, "seed": r.seed, "qn": r.q_n, "ties": r.ties_detected}
                               for r in summary.violations],
                "tie_rows": summary.tie_rows,
                "timed_out_rows": summary.timed_out_rows,
                "note": summary.note,
            }
            print(json.dumps(payload, indent=2))
        else:
            print(experiments.format_regime(summary))
    if any(r.timed_out for r in rows):
        print("some rows timed out; partial results written", file=sys.stderr)
        return EXIT_TIMEOUT
    return EXIT_OK


COMMANDS = {
    "solve": cmd_solve,
    "brute": cmd_brute,
    "count": cmd_count,
    "check": cmd_check,
    "reduce": cmd_reduce,
    "gen": cmd_gen,
    "bench": cmd_bench,
}


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    try:
        return COMMANDS[args.command](args)
    except _UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"arplab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SearchTimeout as exc:
        print(f"arplab: timeout: {exc}", file=sys.stderr)
        return EXIT_TIMEOUT
    except (ARPError, ValueError) as exc:
        print(f"arplab: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT


def main():
    sys.exit(run())
