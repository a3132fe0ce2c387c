"""Command-line front end.

Exit codes: 0 success, 1 verify mismatch, 2 no majority (meta-algorithm),
3 input error, 4 resource cap exceeded.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import time
from pathlib import Path

import numpy as np

from .engine import meta_interpolate, run_interpolation
from .errors import InputError, ResourceLimitError
from .ff import BaseField, FieldTower, make_tower
from .oracle import ExpansionCap, brute_force_expand, random_sparse
from .polynomial import SparsePolynomial
from .primes import compute_params, sieve_interval
from .slp import format_slp, parse_slp, slp_from_sparse

EXIT_OK, EXIT_MISMATCH, EXIT_NO_MAJORITY, EXIT_INPUT, EXIT_RESOURCE = 0, 1, 2, 3, 4

BENCH_COLUMNS = ["n", "D", "T", "q", "seed", "m", "lambda", "s", "u", "probes", "micros", "success"]


def parse_field(text: str, seed: int | None = None) -> BaseField:
    """``p``, ``p^v`` or a full tower spec ``p^v:u:phi:psi`` (its base is used)."""
    if ":" in text:
        return FieldTower.from_text(text).base
    try:
        if "^" in text:
            p, v = (int(x) for x in text.split("^"))
        else:
            p, v = int(text), 1
    except ValueError as exc:
        raise InputError(f"bad field {text!r}; expected p or p^v") from exc
    if v == 1:
        return BaseField(p)
    return make_tower(p, v, 1, np.random.default_rng(seed)).base


def _rng(seed: int | None) -> np.random.Generator:
    return np.random.default_rng(seed)


def _int_list(text: str) -> list[int]:
    return [int(x) for x in text.split(",") if x.strip()]


def cmd_interpolate(args) -> int:
    slp = parse_slp(Path(args.slp).read_text(), arity=args.nvars)
    K = parse_field(args.field, args.seed)
    rng = _rng(args.seed)
    if args.epsilon is not None:
        res = meta_interpolate(slp, args.degree_bound, args.term_bound, K, args.epsilon, rng, threads=args.threads)
        if args.json:
            print(json.dumps({
                "seed": args.seed,
                "runs": res.runs,
                "votes": res.votes,
                "success": res.ok,
                "polynomial": res.polynomial.to_json() if res.ok else None,
            }))
        elif res.ok:
            sys.stdout.write(res.polynomial.to_text())
        if not res.ok:
            print(f"no majority: best output had {res.votes}/{res.runs} votes", file=sys.stderr)
            return EXIT_NO_MAJORITY
        return EXIT_OK
    run = run_interpolation(slp, args.degree_bound, args.term_bound, K, rng, threads=args.threads)
    if args.json:
        print(json.dumps({"seed": args.seed, **run.to_json()}))
    else:
        sys.stdout.write(run.polynomial.to_text())
    return EXIT_OK


def cmd_generate(args) -> int:
    K = parse_field(args.field, args.seed)
    rng = _rng(args.seed)
    f = random_sparse(args.nvars, args.degree_bound, args.term_bound, K, rng)
    slp_text = format_slp(slp_from_sparse(f))
    if args.out:
        Path(f"{args.out}.slp").write_text(slp_text)
        Path(f"{args.out}.poly").write_text(f.to_text())
    else:
        sys.stdout.write(slp_text)
        sys.stdout.write("".join(f"# {line}\n" for line in f.to_text().splitlines()))
    return EXIT_OK


def cmd_verify(args) -> int:
    slp = parse_slp(Path(args.slp).read_text(), arity=args.nvars)
    K = parse_field(args.field, args.seed)
    claimed = SparsePolynomial.from_text(Path(args.poly).read_text(), n=slp.arity)
    cap = ExpansionCap(max_terms=args.max_terms)
    actual = brute_force_expand(slp, K, cap)
    if actual == claimed:
        print("match")
        return EXIT_OK
    print("mismatch")
    return EXIT_MISMATCH


def cmd_params(args) -> int:
    K = parse_field(args.field, args.seed)
    params = compute_params(args.nvars, args.degree_bound, args.term_bound, K.order)
    print(json.dumps(params.to_dict()))
    return EXIT_OK


def bench_rows(nvars, degree_bounds, term_bounds, K: BaseField, seeds: int, threads: int = 1):
    for n in nvars:
        for D in degree_bounds:
            for T in term_bounds:
                params = compute_params(n, D, T, K.order)
                if seeds > 0:
                    sieve_interval(params.lam)  # fail fast on the resource cap
                for seed in range(seeds):
                    rng = _rng(seed)
                    f = random_sparse(n, D, T, K, rng)
                    slp = slp_from_sparse(f)
                    start = time.perf_counter()
                    got = run_interpolation(slp, D, T, K, rng, threads=threads).polynomial
                    micros = int((time.perf_counter() - start) * 1e6)
                    yield {
                        "n": n, "D": D, "T": T, "q": K.order, "seed": seed,
                        "m": params.m, "lambda": f"{params.lam:.4f}", "s": params.s,
                        "u": params.u, "probes": params.probes, "micros": micros,
                        "success": int(got == f),
                    }


def cmd_bench(args) -> int:
    K = parse_field(args.field)
    out = open(args.out, "w", newline="") if args.out else sys.stdout
    try:
        writer = csv.DictWriter(out, fieldnames=BENCH_COLUMNS)
        writer.writeheader()
        for row in bench_rows(
            _int_list(args.nvars), _int_list(args.degree_bound), _int_list(args.term_bound),
            K, args.seeds, args.threads,
        ):
            writer.writerow(row)
    finally:
        if args.out:
            out.close()
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="slpinterp", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, bounds=True):
        p.add_argument("--field", default="101", help="p, p^v or p^v:u:phi:psi")
        p.add_argument("--seed", type=int, default=None)
        if bounds:
            p.add_argument("--nvars", type=int, default=None)
            p.add_argument("--degree-bound", type=int, required=True)
            p.add_argument("--term-bound", type=int, required=True)

    p = sub.add_parser("interpolate", help="recover the sparse polynomial of an SLP file")
    p.add_argument("slp")
    common(p)
    p.add_argument("--epsilon", type=float, default=None)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_interpolate)

    p = sub.add_parser("generate", help="random sparse polynomial and an SLP for it")
    common(p)
    p.add_argument("-o", "--out", help="write OUT.slp and OUT.poly")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("verify", help="check a claimed polynomial by brute-force expansion")
    p.add_argument("slp")
    p.add_argument("poly")
    common(p, bounds=False)
    p.add_argument("--nvars", type=int, default=None)
    p.add_argument("--max-terms", type=int, default=10**4)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("params", help="print the derived parameters as JSON")
    common(p)
    p.set_defaults(func=cmd_params)

    p = sub.add_parser("bench", help="CSV timings over a parameter grid")
    p.add_argument("--field", default="101")
    p.add_argument("--nvars", default="2", help="comma-separated list")
    p.add_argument("--degree-bound", default="256", help="comma-separated list")
    p.add_argument("--term-bound", default="4", help="comma-separated list")
    p.add_argument("--seeds", type=int, default=1, help="seeds 0..k-1 per grid point")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_bench)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "nvars", None) is None and args.command in ("generate", "params"):
        print("error: --nvars is required", file=sys.stderr)
        return EXIT_INPUT
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ResourceLimitError as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
