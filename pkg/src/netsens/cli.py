"""Command-line front end.

    netsens generate er --n 100 --p 0.2 --seed 1 --out er.txt
    netsens perturb dolphins.txt --mech rm_edges_unif:0.1 --out observed.txt
    netsens sensitivity hidden.txt observed.txt --measures dc,pr
    netsens estimate observed.txt --mech rm_edges_unif:0.1 --measures pr
    netsens experiment --preset er-paper --runs 100 --out-dir results/
    netsens report results/records.csv --threshold 0.5

Exit status: 0 on success, 2 for invalid arguments or unreadable input,
3 when a mechanism cannot be applied to the given graph.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import os
import sys
import time
from pathlib import Path

from . import __version__
from .centrality import ALL_MEASURES, CentralityError, Measure, compute
from .estimators import DEFAULT_INNER_SAMPLES, imputation_estimates, iterative_estimates
from .evaluation import (PRESETS, ExperimentRecord, ExperimentSpec, NetworkSource, aggregate,
                         aggregates_to_csv, load_preset, records_from_csv, records_to_csv,
                         run_experiment, success, weighted_error)
from .graph import GraphFormatError, barabasi_albert, erdos_renyi, read_edge_list, write_edge_list
from .perturb import ErrorMechanism, InfeasibleError, apply_error
from .rng import ENV_SEED, RngSeed, as_seed
from .sensitivity import UndefinedSensitivityError, classify_pairs, rho

EXIT_USAGE = 2
EXIT_INFEASIBLE = 3


class _Fail(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def _mechanism(token: str) -> ErrorMechanism:
    try:
        return ErrorMechanism.parse(token)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _measures(text: str) -> tuple[Measure, ...]:
    try:
        return tuple(Measure.parse(t) for t in text.split(",") if t.strip())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _load(path: str):
    try:
        return read_edge_list(path)
    except (OSError, GraphFormatError, UnicodeDecodeError) as exc:
        raise _Fail(f"cannot read graph {path}: {exc}", EXIT_USAGE) from None


def _default_seed() -> int:
    return as_seed(None).master_seed


def _write_csv(rows):
    w = csv.writer(sys.stdout, lineterminator="\n")
    for row in rows:
        w.writerow(row)


# -- subcommands ----------------------------------------------------------------


def cmd_generate(args, parser):
    if args.n is None or args.n < 0:
        parser.error("--n must be a non-negative integer")
    if args.model == "er":
        if args.p is None or not 0.0 <= args.p <= 1.0:
            parser.error("--p must lie in [0, 1]")
        g = erdos_renyi(args.n, args.p, RngSeed(args.seed))
    else:
        if args.m is None or not 1 <= args.m < args.n:
            parser.error("--m must satisfy 1 <= m < n")
        g = barabasi_albert(args.n, args.m, RngSeed(args.seed))
    write_edge_list(g, args.out)
    print(f"n={g.n} edges={g.m}")
    return 0


def cmd_perturb(args, parser):
    g = _load(args.input)
    try:
        o = apply_error(g, args.mech, RngSeed(args.seed))
    except InfeasibleError as exc:
        raise _Fail(str(exc), EXIT_INFEASIBLE) from None
    write_edge_list(o, args.out)
    print(f"before: n={g.n} edges={g.m}")
    print(f"after: n={o.n} edges={o.m}")
    return 0


def cmd_sensitivity(args, parser):
    a, b = _load(args.graph_a), _load(args.graph_b)
    if len(set(a.labels) & set(b.labels)) < 2:
        raise _Fail("the graphs share fewer than 2 nodes", EXIT_USAGE)
    rows = [("measure", "n_c", "n_d", "ties", "rho")]
    for m in args.measures:
        try:
            pc = classify_pairs(compute(a, m), compute(b, m))
        except CentralityError:
            rows.append((m.value, "", "", "", "undefined"))
            continue
        try:
            value = repr(rho(pc))
        except UndefinedSensitivityError:
            value = "undefined"
        rows.append((m.value, pc.concordant, pc.discordant, pc.ties, value))
    _write_csv(rows)
    return 0


def cmd_estimate(args, parser):
    g = _load(args.observed)
    seed = RngSeed(args.seed)
    rows = [("measure", "estimator", "estimate", "stderr", "defined_draws", "undefined_draws",
             "flags")]
    try:
        it = iterative_estimates(g, args.mech, args.measures, args.inner_samples, seed.child(1))
    except InfeasibleError as exc:
        raise _Fail(str(exc), EXIT_INFEASIBLE) from None
    try:
        imp, imp_flag = imputation_estimates(g, args.mech, args.measures, args.inner_samples,
                                             seed.child(2)), ""
    except InfeasibleError:
        imp, imp_flag = {}, "infeasible"
    for m in args.measures:
        for name, res, flag in (("iterative", it.get(m), ""), ("imputation", imp.get(m), imp_flag)):
            if res is None:
                rows.append((m.value, name, "", "", 0, 0, flag))
                continue
            if res.value is None:
                flag = "undefined"
            rows.append((m.value, name, "" if res.value is None else repr(res.value),
                         "" if res.stderr is None else repr(res.stderr),
                         res.defined, res.undefined, flag))
    _write_csv(rows)
    return 0


def cmd_experiment(args, parser):
    try:
        if args.spec:
            spec = ExperimentSpec.from_text(Path(args.spec).read_text(encoding="utf-8"))
        else:
            spec = load_preset(args.preset)
    except (OSError, ValueError) as exc:
        raise _Fail(f"cannot load experiment: {exc}", EXIT_USAGE) from None
    overrides = {}
    for key in ("runs", "inner_samples", "threshold", "seed"):
        if getattr(args, key) is not None:
            overrides[key] = getattr(args, key)
    if args.network:
        try:
            overrides["network"] = NetworkSource.parse(args.network)
        except ValueError as exc:
            parser.error(f"--network: {exc}")
    if args.mech:
        overrides["mechanisms"] = tuple(args.mech)
    if args.measures:
        overrides["measures"] = args.measures
    try:
        spec = dataclasses.replace(spec, **overrides)
    except ValueError as exc:
        parser.error(str(exc))
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    t0 = time.perf_counter()
    records = run_experiment(spec, workers=args.workers)
    rows = aggregate(records)
    (out / "records.csv").write_text(records_to_csv(records), encoding="utf-8")
    (out / "aggregates.csv").write_text(aggregates_to_csv(rows), encoding="utf-8")
    (out / "experiment.spec").write_text(spec.to_text(), encoding="utf-8")
    excluded = sum(r.excluded for r in records)
    print(f"{len(records)} records, {excluded} excluded, "
          f"{time.perf_counter() - t0:.1f}s wall clock -> {out}")
    return 0


def _rescore(rec: ExperimentRecord, threshold: float) -> ExperimentRecord:
    def one(s_hat):
        if rec.s is None or s_hat is None:
            return None if rec.s is None else False
        return success(rec.s, s_hat, threshold)
    return dataclasses.replace(rec, success_iter=one(rec.s_hat_iter),
                               success_imp=one(rec.s_hat_imp))


def cmd_report(args, parser):
    try:
        records = records_from_csv(Path(args.records).read_text(encoding="utf-8"))
    except (OSError, KeyError, ValueError) as exc:
        raise _Fail(f"cannot read records {args.records}: {exc}", EXIT_USAGE) from None
    if args.threshold is not None:
        if args.threshold <= 0:
            parser.error("--threshold must be positive")
        records = [_rescore(r, args.threshold) for r in records]
    sys.stdout.write(aggregates_to_csv(aggregate(records)))
    return 0


# -- parser ---------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="netsens",
        description="Sensitivity of centrality rankings to network measurement errors.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    seed_help = f"master seed (default: ${ENV_SEED} or a fixed default)"
    all_measures = ",".join(m.value for m in ALL_MEASURES)

    g = sub.add_parser("generate", help="write a random graph as an edge list")
    g.add_argument("model", choices=("er", "ba"))
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--p", type=float, help="ER edge probability")
    g.add_argument("--m", type=int, help="BA edges per new node")
    g.add_argument("--seed", type=int, default=None, help=seed_help)
    g.add_argument("--out", required=True)
    g.set_defaults(func=cmd_generate)

    q = sub.add_parser("perturb", help="apply one draw of an error mechanism")
    q.add_argument("input")
    q.add_argument("--mech", type=_mechanism, required=True, help="e.g. rm_edges_unif:0.1")
    q.add_argument("--seed", type=int, default=None, help=seed_help)
    q.add_argument("--out", required=True)
    q.set_defaults(func=cmd_perturb)

    s = sub.add_parser("sensitivity", help="sensitivity between two graphs' rankings")
    s.add_argument("graph_a")
    s.add_argument("graph_b")
    s.add_argument("--measures", type=_measures, default=ALL_MEASURES,
                   help=f"comma-separated subset of {all_measures}")
    s.set_defaults(func=cmd_sensitivity)

    e = sub.add_parser("estimate", help="estimate the sensitivity of an observed graph")
    e.add_argument("observed")
    e.add_argument("--mech", type=_mechanism, required=True)
    e.add_argument("--measures", type=_measures, default=ALL_MEASURES)
    e.add_argument("--inner-samples", type=int, default=DEFAULT_INNER_SAMPLES)
    e.add_argument("--seed", type=int, default=None, help=seed_help)
    e.set_defaults(func=cmd_estimate)

    x = sub.add_parser("experiment", help="run an experiment and write records/aggregates")
    src = x.add_mutually_exclusive_group(required=True)
    src.add_argument("--spec", help="experiment file (key = value lines)")
    src.add_argument("--preset", choices=PRESETS)
    x.add_argument("--out-dir", required=True)
    x.add_argument("--network", help="er:<n>:<p>, ba:<n>:<m>, file:<path> or dolphins")
    x.add_argument("--mech", type=_mechanism, action="append",
                   help="replace the mechanisms (repeatable)")
    x.add_argument("--measures", type=_measures)
    x.add_argument("--runs", type=int)
    x.add_argument("--inner-samples", type=int)
    x.add_argument("--threshold", type=float)
    x.add_argument("--seed", type=int, default=None, help=seed_help)
    x.add_argument("--workers", type=int, default=1)
    x.set_defaults(func=cmd_experiment)

    r = sub.add_parser("report", help="aggregate a records.csv, optionally at a new threshold")
    r.add_argument("records")
    r.add_argument("--threshold", type=float)
    r.set_defaults(func=cmd_report)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    sub_parser = parser._subparsers._group_actions[0].choices[args.command]
    if args.command != "experiment" and hasattr(args, "seed") and args.seed is None:
        args.seed = _default_seed()
    if args.command == "experiment" and args.seed is None and os.environ.get(ENV_SEED):
        args.seed = _default_seed()
    for flag in ("inner_samples", "runs", "workers"):
        val = getattr(args, flag, None)
        if val is not None and val < 1:
            sub_parser.error(f"--{flag.replace('_', '-')} must be at least 1")
    try:
        return args.func(args, sub_parser)
    except _Fail as exc:
        print(f"netsens {args.command}: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
