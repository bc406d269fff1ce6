"""Batch command-line front end.

One subcommand per capability: count, pmf, sample, dickman (rho, xi,
ratio, gamma-check), stein-verify, tv, bound, sweep, and check (re-parse a
file the tool wrote).  All randomized subcommands are deterministic given
--seed, and identical argv produce byte-identical output files: JSON is
written with sorted keys and no timestamps.

Exit codes: 0 success, 1 validation error, 2 resource-cap error.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

import numpy as np

from . import __version__
from .counting import (
    brute_force_pmf,
    count_ratio_check,
    count_table,
    joint_pmf,
)
from .dickman import DickmanEvaluator, XiEvaluator, gamma_bound_check, rho_ratio_check
from .distances import PoissonSpec, macroscopic_bound, refined_bound, tv_empirical, tv_exact
from .errors import ResourceLimitError
from .permutations import cycle_counts, cycle_structure
from .sampling import SamplerConfig, draw
from .stein import term_estimates_exact, term_estimates_mc, verify_closed_forms

SCHEMA_VERSION = 1

SAMPLE_CHUNK = 4096  # fixed chunk granularity keeps output identical for any thread count


class _Parser(argparse.ArgumentParser):
    # argparse exits with code 2 on usage errors; the contract reserves 2
    # for resource caps, so remap to 1
    def error(self, message):
        self.print_usage(sys.stderr)
        raise SystemExit(self._validation_exit(message))

    def _validation_exit(self, message):
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        return 1


def _write_json(path, payload: dict) -> None:
    payload = {"schema_version": SCHEMA_VERSION, **payload}
    text = json.dumps(payload, sort_keys=True, indent=2)
    with open(path, "w") as fh:
        fh.write(text + "\n")


def _write_csv(path, header, rows) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)


def _fraction_str(x) -> str:
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    return repr(x)


# -- subcommand handlers -----------------------------------------------------


def _cmd_count(args) -> int:
    mode = "exact" if args.exact or args.n <= 200 else "double"
    table = count_table(args.n, args.r, mode)
    nu = table.fraction(args.n)
    if mode == "exact":
        print(f"|restricted set| = {table.count(args.n)}")
        print(f"nu = {_fraction_str(nu)} = {float(nu)!r}")
    else:
        print(f"nu = {nu!r}")
    if args.out:
        table.to_csv(args.out)
        print(f"table written to {args.out}")
    return 0


def _cmd_pmf(args) -> int:
    pmf = joint_pmf(args.n, args.r, args.d, mode=args.mode)
    if args.out:
        pmf.to_csv(args.out)
        print(f"pmf written to {args.out} ({len(pmf.entries)} support points)")
    else:
        for cv in pmf.support():
            print(" ".join(map(str, cv.counts)), _fraction_str(pmf.entries[cv]))
    return 0


def _sample_chunks(count: int) -> list[int]:
    sizes = []
    remaining = count
    while remaining > 0:
        take = min(SAMPLE_CHUNK, remaining)
        sizes.append(take)
        remaining -= take
    return sizes


def _cmd_sample(args) -> int:
    cfg = SamplerConfig(
        n=args.n,
        r=args.r,
        method=args.method,
        seed=args.seed,
        mcmc_burn_in=args.burn_in,
        mcmc_thinning=args.thinning,
    )
    table = count_table(args.n, args.r, "exact" if args.n <= 200 else "double") if args.method == "sequential" else None
    sizes = _sample_chunks(args.count)
    seeds = np.random.SeedSequence(args.seed).spawn(len(sizes))

    def run_chunk(chunk_index: int) -> list:
        rng = np.random.default_rng(seeds[chunk_index])
        return draw(cfg, sizes[chunk_index], table=table, rng=rng)

    if args.threads > 1 and args.method != "mcmc":  # a chain is inherently serial
        with ThreadPoolExecutor(max_workers=args.threads) as pool:
            chunks = list(pool.map(run_chunk, range(len(sizes))))
    else:
        chunks = [run_chunk(i) for i in range(len(sizes))]
    rows = []
    index = 0
    for chunk in chunks:
        for p in chunk:
            if args.full:
                rows.append((index, " ".join(map(str, p.mapping))))
            else:
                lengths = cycle_structure(p).lengths
                rows.append((index, " ".join(map(str, lengths))))
            index += 1
    header = ["index", "mapping" if args.full else "cycle_type"]
    if args.out:
        _write_csv(args.out, header, rows)
        print(f"{index} samples written to {args.out}")
    else:
        for row in rows:
            print(*row)
    return 0


def _cmd_dickman(args) -> int:
    ev = DickmanEvaluator(panel_tolerance=args.tolerance, t_max=args.t_max)
    if args.dickman_command == "rho":
        if args.grid is None and args.t is None:
            print("error: rho needs --t or --grid", file=sys.stderr)
            return 1
        if args.grid:
            start, stop, num = args.grid
            ts = np.linspace(start, stop, int(num))
            rows = [(float(t), ev.rho(float(t)), ev.log_rho(float(t))) for t in ts]
            if args.out:
                _write_csv(args.out, ["t", "rho", "log_rho"], rows)
                print(f"grid written to {args.out}")
            else:
                for row in rows:
                    print(*row)
        else:
            value = ev.log_rho(args.t) if args.log else ev.rho(args.t)
            print(repr(value))
    elif args.dickman_command == "xi":
        print(repr(XiEvaluator().xi(args.t)))
    elif args.dickman_command == "ratio":
        report = rho_ratio_check(args.t, args.v, ev)
        print(f"ratio = {report.ratio!r}")
        print(f"predicted = {report.predicted!r}")
        print(f"relative_gap = {report.relative_gap!r}")
    else:  # gamma-check
        report = gamma_bound_check(args.t, ev)
        print(f"log_rho = {report.log_rho!r}")
        print(f"log_bound = {report.log_bound!r}")
        print(f"holds = {report.holds}")
    return 0


def _cmd_stein_verify(args) -> int:
    payload: dict = {"n": args.n, "r": args.r, "d": args.d, "seed": args.seed}
    if args.exhaustive:
        report = verify_closed_forms(args.n, args.r, args.d)
        terms = term_estimates_exact(args.n, args.r, args.d) if args.d < args.r else None
        payload["mode"] = "exhaustive"
        payload["combinations_checked"] = report.checked
        payload["mismatches"] = [
            {
                "which": m.which,
                "n": m.n,
                "r": m.r,
                "d": m.d,
                "k": m.k,
                "witness_permutation": list(m.mapping),
                "enumerated": _fraction_str(m.enumerated),
                "closed_form": _fraction_str(m.formula),
            }
            for m in report.mismatches
        ]
        payload["mismatch_counts"] = {
            which: report.mismatch_count(which)
            for which in ("creation", "destruction", "destruction_rearranged")
        }
        if terms is not None:
            payload["terms"] = [
                {
                    "k": row.k,
                    "creation_term": _fraction_str(row.creation_term),
                    "destruction_term": _fraction_str(row.destruction_term),
                }
                for row in terms.rows
            ]
            payload["total_bound"] = float(terms.total)
    else:
        rng = np.random.default_rng(args.seed)
        terms = term_estimates_mc(args.n, args.r, args.d, args.samples, rng)
        payload["mode"] = "mc"
        payload["samples"] = args.samples
        payload["terms"] = [
            {
                "k": row.k,
                "creation_term": row.creation_term,
                "creation_se": row.creation_se,
                "destruction_term": row.destruction_term,
                "destruction_se": row.destruction_se,
            }
            for row in terms.rows
        ]
        payload["total_bound"] = terms.total
    if args.out:
        _write_json(args.out, payload)
        print(f"report written to {args.out}")
    else:
        print(json.dumps({"schema_version": SCHEMA_VERSION, **payload}, sort_keys=True, indent=2))
    return 0


def _cmd_tv(args) -> int:
    spec = PoissonSpec.cycle_reference(args.d)
    payload: dict = {"n": args.n, "r": args.r, "d": args.d, "mode": args.mode}
    if args.mode == "exact":
        pmf = joint_pmf(args.n, args.r, args.d)
        payload["tv"] = tv_exact(pmf, spec)
    else:
        cfg = SamplerConfig(n=args.n, r=args.r, method="sequential", seed=args.seed)
        perms = draw(cfg, args.samples)
        vectors = [cycle_counts(p, args.d) for p in perms]
        rng = np.random.default_rng(args.seed + 1)
        estimate = tv_empirical(vectors, spec, rng=rng)
        payload["tv"] = estimate.value
        payload["stderr"] = estimate.stderr
        payload["samples"] = estimate.sample_count
    if args.out:
        _write_json(args.out, payload)
        print(f"report written to {args.out}")
    else:
        print(json.dumps({"schema_version": SCHEMA_VERSION, **payload}, sort_keys=True, indent=2))
    return 0


def _cmd_bound(args) -> int:
    if args.which in ("refined", "both"):
        bb = refined_bound(args.n, args.r, args.d, args.C)
        print(f"refined = {bb.total!r}")
        print(
            f"  harmonic_term={bb.harmonic_term!r} fixed_term={bb.fixed_term!r} "
            f"asymptotic_term={bb.asymptotic_term!r} (C={bb.constant}, u={bb.u!r}, H_d={bb.h_d!r})"
        )
    if args.which in ("macroscopic", "both"):
        print(f"macroscopic = {macroscopic_bound(args.n, args.r, args.d, args.C)!r} (C={args.C})")
    return 0


def _cmd_sweep(args) -> int:
    rows = []
    for n in args.n:
        for r in args.r:
            if r > n:
                continue
            for d in args.d:
                if d > r:
                    continue
                u = n / r
                if args.tv_mode == "exact":
                    tv = tv_exact(joint_pmf(n, r, d), PoissonSpec.cycle_reference(d))
                elif args.tv_mode == "mc":
                    cfg = SamplerConfig(n=n, r=r, method="sequential", seed=args.seed)
                    vectors = [cycle_counts(p, d) for p in draw(cfg, args.samples)]
                    tv = tv_empirical(vectors, PoissonSpec.cycle_reference(d), rng=np.random.default_rng(args.seed + 1)).value
                else:
                    tv = ""
                rows.append((n, r, d, u, tv, refined_bound(n, r, d, 1.0).total, macroscopic_bound(n, r, d, 1.0)))
    _write_csv(args.out, ["n", "r", "d", "u", "tv", "refined_C1", "macroscopic_C1"], rows)
    print(f"{len(rows)} rows written to {args.out}")
    return 0


def _cmd_check(args) -> int:
    path = str(args.file)
    try:
        if path.endswith(".json"):
            with open(path) as fh:
                payload = json.load(fh)
            if not isinstance(payload, dict) or "schema_version" not in payload:
                print("missing schema_version", file=sys.stderr)
                return 1
        else:
            with open(path, newline="") as fh:
                reader = csv.reader(fh)
                header = next(reader, None)
                if not header:
                    print("empty csv", file=sys.stderr)
                    return 1
                for row in reader:
                    if len(row) != len(header):
                        print("ragged csv row", file=sys.stderr)
                        return 1
    except (OSError, json.JSONDecodeError) as exc:
        print(f"unreadable: {exc}", file=sys.stderr)
        return 1
    print("ok")
    return 0


# -- parser ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="shortcycles", description=__doc__)
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("count", help="size and fraction of the bounded-cycle set")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--exact", action="store_true", help="force exact rationals")
    p.add_argument("--out", help="write the whole table as CSV")
    p.set_defaults(handler=_cmd_count)

    p = sub.add_parser("pmf", help="joint law of small-cycle counts")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--mode", choices=["exact", "double"], default="exact")
    p.add_argument("--out", help="CSV destination")
    p.set_defaults(handler=_cmd_pmf)

    p = sub.add_parser("sample", help="draw permutations with bounded cycles")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--method", choices=["rejection", "sequential", "mcmc"], default="sequential")
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--burn-in", type=int, default=0)
    p.add_argument("--thinning", type=int, default=1)
    p.add_argument("--full", action="store_true", help="emit one-line arrays instead of cycle types")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--out", help="CSV destination")
    p.set_defaults(handler=_cmd_sample)

    p = sub.add_parser("dickman", help="rho / xi numerics")
    dsub = p.add_subparsers(dest="dickman_command", required=True, parser_class=_Parser)
    for name in ("rho", "xi", "ratio", "gamma-check"):
        q = dsub.add_parser(name)
        if name == "rho":
            q.add_argument("--t", type=float)
            q.add_argument("--log", action="store_true", help="print log rho instead")
            q.add_argument("--grid", type=float, nargs=3, metavar=("START", "STOP", "NUM"))
            q.add_argument("--out", help="CSV destination for --grid")
        else:
            q.add_argument("--t", type=float, required=True)
        if name == "ratio":
            q.add_argument("--v", type=float, required=True)
        q.add_argument("--tolerance", type=float, default=1e-12)
        q.add_argument("--t-max", type=float, default=200.0)
        q.set_defaults(handler=_cmd_dickman)

    p = sub.add_parser("stein-verify", help="event identities: exhaustive check or MC terms")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--exhaustive", action="store_true")
    group.add_argument("--samples", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="JSON destination")
    p.set_defaults(handler=_cmd_stein_verify)

    p = sub.add_parser("tv", help="distance to the product-Poisson reference")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--mode", choices=["exact", "mc"], default="exact")
    p.add_argument("--samples", type=int, default=10000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="JSON destination")
    p.set_defaults(handler=_cmd_tv)

    p = sub.add_parser("bound", help="closed-form error bounds")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--C", type=float, default=1.0)
    p.add_argument("--which", choices=["refined", "macroscopic", "both"], default="both")
    p.set_defaults(handler=_cmd_bound)

    p = sub.add_parser("sweep", help="grid of tv values and both bounds, CSV out")
    p.add_argument("--n", type=int, nargs="+", required=True)
    p.add_argument("--r", type=int, nargs="+", required=True)
    p.add_argument("--d", type=int, nargs="+", required=True)
    p.add_argument("--tv-mode", choices=["exact", "mc", "skip"], default="exact")
    p.add_argument("--samples", type=int, default=10000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(handler=_cmd_sweep)

    p = sub.add_parser("check", help="re-parse a file this tool wrote")
    p.add_argument("file")
    p.set_defaults(handler=_cmd_check)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.handler(args)
    except ResourceLimitError as exc:
        print(f"resource cap: {exc}", file=sys.stderr)
        return 2
    except (ValueError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
