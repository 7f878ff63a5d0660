"""Command-line interface: reproducible batch runs with machine-readable
output.

Exit codes: 0 success (findings included), 1 failed verification or
decomposition, 2 usage errors, 3 missing alpha-table entry under
--strict-table, 4 I/O and parse errors.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys

from . import __version__
from .certify import load_alpha_table, sweep
from .decomp import (
    DecompositionFailed,
    decompose,
    read_decomposition,
    verify_decomposition,
    write_decomposition,
)
from .entropy import (
    alpha_fc_estimate,
    alpha_fm,
    threshold_report,
)
from .graphs import (
    RNG_NAME,
    GraphFormatError,
    config_model_sample,
    read_graph,
    sample_simple,
    write_graph,
)

THREADS_ENV = "STARDECOMP_THREADS"


def _emit(payload, config, args, extra=None):
    doc = {
        "tool": "stardecomp",
        "version": __version__,
        "config": config,
        "payload": payload,
    }
    if extra:
        doc.update(extra)
    text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if args.out and args.out != "-":
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _resolved_config(args, keys):
    return {k: getattr(args, k) for k in keys}


def cmd_thresholds(args):
    d = args.d
    if d < 3:
        print("thresholds: --d must be >= 3", file=sys.stderr)
        return 2
    table = {}
    if args.alpha_table:
        table = load_alpha_table(args.alpha_table)
    if d in table:
        alpha_star, source = table[d], "table"
    elif d >= 20:
        alpha_star, source = alpha_fc_estimate(d), "estimate"
    else:
        # No controlled estimate below d=20; report the first-moment upper
        # bound as the stand-in, still labeled an estimate.
        alpha_star, source = alpha_fm(d), "estimate"
    rep = threshold_report(d, alpha_star, source)
    payload = {
        "d": rep.d,
        "alpha_fm": rep.alpha_fm,
        "alpha_fc_estimate": alpha_fc_estimate(d) if d >= 20 else None,
        "alpha_lower_ref": rep.alpha_lower_ref,
        "alpha_star": rep.alpha_star,
        "alpha_source": rep.alpha_source,
        "kappa_star": rep.kappa_star,
        "k_ind": rep.k_ind,
        "frac_part": rep.frac_part,
        "frac_cond_met": rep.frac_cond_met,
    }
    config = _resolved_config(args, ["d", "alpha_table", "out", "format"])
    _emit(payload, config, args, extra={"alpha_source": source})
    return 0


def cmd_certify(args):
    table = load_alpha_table(args.alpha_table) if args.alpha_table else None
    source = "table" if table else "estimate"
    if source == "estimate" and args.d_min < 20 and args.d_max >= args.d_min:
        print("certify: estimate-based sweeps need --d-min >= 20", file=sys.stderr)
        return 2
    threads = args.threads or int(os.environ.get(THREADS_ENV, "1"))
    try:
        report = sweep(
            args.d_min,
            args.d_max,
            alpha_source=source,
            alpha_table=table,
            threads=threads,
            beta_step=args.beta_step,
            tau_step=args.tau_step,
            strict_table=args.strict_table,
        )
    except KeyError as exc:
        print(f"certify: {exc}", file=sys.stderr)
        return 3
    config = _resolved_config(
        args,
        ["d_min", "d_max", "alpha_table", "strict_table", "beta_step",
         "tau_step", "out", "format"],
    )
    exceptional = report.exceptional_degrees
    if args.format == "csv":
        rows = [r.as_dict() for r in report.records]
        fields = list(rows[0].keys()) if rows else []
        target = open(args.out, "w", newline="") if args.out and args.out != "-" else sys.stdout
        writer = csv.DictWriter(target, fieldnames=fields)
        if fields:
            writer.writeheader()
            writer.writerows(rows)
        if target is not sys.stdout:
            target.close()
    else:
        _emit(report.as_dict(), config, args, extra={"alpha_source": source})
    if args.out and args.out != "-":
        with open(args.out + ".exceptional.csv", "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["d"])
            for d in exceptional:
                writer.writerow([d])
    print("exceptional degrees:", " ".join(map(str, exceptional)) or "(none)")
    return 0


def cmd_sample(args):
    if args.n < 1 or args.d < 1 or (args.n * args.d) % 2 != 0:
        print("sample: need n, d >= 1 with n*d even", file=sys.stderr)
        return 2
    if args.simple:
        g, tries = sample_simple(args.n, args.d, args.seed,
                                 max_tries=args.max_retries or 100000)
        print(f"simple after {tries} tries (rng={RNG_NAME})", file=sys.stderr)
    else:
        g = config_model_sample(args.n, args.d, args.seed)
    if args.out and args.out != "-":
        write_graph(g, args.out)
    else:
        d = max((g.degree(v) for v in range(g.n)), default=0)
        sys.stdout.write(f"{g.n} {d}\n")
        for u, v in g.edges:
            sys.stdout.write(f"{u} {v}\n")
    return 0


def cmd_decompose(args):
    g = read_graph(args.graph)
    try:
        sd = decompose(g, args.k, seed=args.seed,
                       max_retries=args.max_retries or 10)
    except DecompositionFailed as exc:
        print(f"decompose: failed at stage {exc.stage}: {exc.detail}")
        for seed, stage, detail in exc.attempts:
            print(f"  seed {seed}: {stage}: {detail}")
        return 1
    if args.out and args.out != "-":
        write_decomposition(sd, args.out)
    else:
        sys.stdout.write(f"{sd.k} {len(sd.leftover)}\n")
        for center, leaves in sd.stars:
            sys.stdout.write(" ".join(map(str, [center, *leaves])) + "\n")
        for u, v in sd.leftover:
            sys.stdout.write(f"{u} {v}\n")
    print(f"decomposed into {len(sd.stars)} stars, leftover {len(sd.leftover)}",
          file=sys.stderr)
    return 0


def cmd_verify(args):
    g = read_graph(args.graph)
    sd = read_decomposition(args.decomposition)
    ok, diagnostics = verify_decomposition(g, sd)
    if ok:
        print(f"valid: {len(sd.stars)} stars of size {sd.k}, "
              f"leftover {len(sd.leftover)}")
        return 0
    for line in diagnostics:
        print(line)
    return 1


def build_parser():
    parser = argparse.ArgumentParser(prog="stardecomp")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("thresholds", help="analytic thresholds for one degree")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--alpha-table", dest="alpha_table")
    p.add_argument("--out")
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.set_defaults(func=cmd_thresholds)

    p = sub.add_parser("certify", help="sweep a degree range for certifiable k")
    p.add_argument("--d-min", dest="d_min", type=int, required=True)
    p.add_argument("--d-max", dest="d_max", type=int, required=True)
    p.add_argument("--alpha-table", dest="alpha_table")
    p.add_argument("--strict-table", action="store_true",
                   help="fail (exit 3) if the table lacks a degree in range")
    p.add_argument("--threads", type=int, default=0)
    p.add_argument("--beta-step", dest="beta_step", type=float, default=1e-6)
    p.add_argument("--tau-step", dest="tau_step", type=float, default=1e-3)
    p.add_argument("--out")
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("sample", help="sample a configuration-model graph")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--simple", action="store_true")
    p.add_argument("--max-retries", dest="max_retries", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("decompose", help="build a k-star decomposition")
    p.add_argument("graph")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-retries", dest="max_retries", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("verify", help="verify a decomposition file")
    p.add_argument("graph")
    p.add_argument("decomposition")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        code = args.func(args)
    except (GraphFormatError, OSError, ValueError) as exc:
        print(f"stardecomp: {exc}", file=sys.stderr)
        code = 4
    return code


if __name__ == "__main__":
    sys.exit(main())
