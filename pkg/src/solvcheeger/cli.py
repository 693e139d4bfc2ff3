"""Command line front end.

Exit codes: 0 success, 2 parse/validation error, 3 failed numerical
check, 4 sweep did not converge.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from .algebra import (derived_series, is_nilpotent, is_solvable, is_unimodular,
                      lower_central_series, trace_form)
from .catalog import catalog_document, catalog_names, load_catalog
from .cheeger import cheeger_constant
from .errors import ParseError, SolvCheegerError, SweepDidNotConverge
from .files import load_algebra_file
from .group_model import build_model, jacobian_oracle
from .isoperimetry import equality_sweep

EXIT_OK, EXIT_INVALID, EXIT_CHECK, EXIT_SWEEP = 0, 2, 3, 4
HAAR_THRESHOLD = 1e-5
SEED_ENV = "SOLVCHEEGER_SEED"
CSV_COLUMNS = ("k0_scale", "b", "volume", "cap_area", "wall_area", "ratio",
               "dk_bound", "form2_bound")


def _fmt(value) -> str:
    if isinstance(value, Fraction):
        return str(value)
    return repr(float(value))


def _vec(values) -> str:
    return "(" + ", ".join(_fmt(v) for v in values) + ")"


def _load(source):
    """A file path, or failing that a catalog name."""
    path = Path(source)
    if path.is_file():
        return load_algebra_file(path)
    try:
        return load_catalog(source)
    except ParseError:
        if path.suffix or os.sep in source:
            raise ParseError(f"no such file: {source}") from None
        raise


def _model(spec, transversal_label=None):
    label = transversal_label or spec.transversal
    h0 = None
    if is_unimodular(spec.algebra):
        if label is None:
            raise ParseError("unimodular algebra: give a transversal (file key or --transversal)")
        h0 = spec.algebra.basis_vector(label).astype(float)
    return build_model(spec.algebra, spec.inner_product, h0)


def cmd_classify(args, out):
    alg = _load(args.file).algebra
    yes = {True: "yes", False: "no"}
    print(f"dimension: {alg.dim}", file=out)
    print(f"solvable: {yes[is_solvable(alg)]}", file=out)
    print(f"nilpotent: {yes[is_nilpotent(alg)]}", file=out)
    print(f"unimodular: {yes[is_unimodular(alg)]}", file=out)
    print("derived series dims: " + " > ".join(str(b.shape[0]) for b in derived_series(alg)),
          file=out)
    print("lower central series dims: "
          + " > ".join(str(b.shape[0]) for b in lower_central_series(alg)), file=out)
    print(f"alpha: {_vec(trace_form(alg))}", file=out)
    return EXIT_OK


def cmd_cheeger(args, out):
    spec = _load(args.file)
    res = cheeger_constant(spec.algebra, spec.inner_product)
    print(f"h = {_fmt(res.h)}", file=out)
    if res.maximizer is not None:
        terms = ", ".join(f"{lab}: {v!r}" for lab, v in
                          zip(spec.algebra.basis_labels, res.maximizer.tolist()))
        print(f"maximizer = {{{terms}}}", file=out)
    print(f"unimodular = {'yes' if res.unimodular else 'no'}", file=out)
    return EXIT_OK


def cmd_haar_check(args, out):
    spec = _load(args.file)
    model = _model(spec, args.transversal)
    seed = int(os.environ.get(SEED_ENV, args.seed))
    if args.element:
        a = np.array([float(Fraction(v)) for v in args.element.split(",")])
    else:
        a = np.append(np.full(model.m, 0.5), 1.0)
    dev = jacobian_oracle(model, a, samples=args.samples, seed=seed)
    ok = dev <= HAAR_THRESHOLD
    print(f"tau = {model.tau!r}", file=out)
    print(f"element = {_vec(a)}", file=out)
    print(f"samples = {args.samples}, seed = {seed}", file=out)
    print(f"max relative deviation = {dev:.3e} ({'ok' if ok else 'FAIL'}, "
          f"threshold {HAAR_THRESHOLD:g})", file=out)
    return EXIT_OK if ok else EXIT_CHECK


def default_k0_family(k0_max):
    """1, 2, 5, 10, 20, 50, ... up to and including ``k0_max``."""
    scales, decade = [], 1.0
    while decade <= k0_max:
        scales += [s * decade for s in (1, 2, 5) if s * decade <= k0_max]
        decade *= 10
    if not scales or scales[-1] != k0_max:
        scales.append(float(k0_max))
    return scales


def write_csv(rows, handle):
    writer = csv.writer(handle, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in rows:
        writer.writerow([repr(float(getattr(row, c))) for c in CSV_COLUMNS])


def cmd_sweep(args, out):
    spec = _load(args.file)
    model = _model(spec, args.transversal)
    b_grid = np.arange(args.b_step, args.b_max + 0.5 * args.b_step, args.b_step)
    aspect = [float(Fraction(v)) for v in args.aspect.split(",")] if args.aspect else None
    try:
        result = equality_sweep(model, args.epsilon, default_k0_family(args.k0_max),
                                b_grid, aspect=aspect, quadrature_n=args.quadrature_n)
        code = EXIT_OK
    except SweepDidNotConverge as exc:
        result, code = exc.result, EXIT_SWEEP
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            write_csv(result.rows, fh)
    best = result.best
    print(f"tau = {result.tau!r}; min ratio = {result.min_ratio!r} at k0_scale={best.k0_scale:g}, "
          f"b={best.b:g}; target tau + epsilon = {result.tau + result.epsilon!r}; "
          f"{'converged' if code == EXIT_OK else 'NOT converged'}", file=out)
    return code


def cmd_catalog(args, out):
    if args.action == "list":
        for name in catalog_names():
            print(name, file=out)
        return EXIT_OK
    if not args.name:
        raise ParseError("catalog show needs a NAME")
    print(json.dumps(catalog_document(args.name), indent=2), file=out)
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(
        prog="solvcheeger",
        description="Cheeger constants of simply connected solvable Lie groups.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="solvable / nilpotent / unimodular and the trace form")
    p.add_argument("file", help="algebra JSON file or catalog name")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("cheeger", help="h(G) = max tr ad(H) over unit H")
    p.add_argument("file")
    p.set_defaults(func=cmd_cheeger)

    p = sub.add_parser("haar-check", help="verify left invariance of the Haar density")
    p.add_argument("file")
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--seed", type=int, default=0, help=f"overridden by ${SEED_ENV}")
    p.add_argument("--element", help="group element x1,...,xm,t (default 0.5,...,0.5,1)")
    p.add_argument("--transversal", help="basis label used as H0 for unimodular algebras")
    p.set_defaults(func=cmd_haar_check)

    p = sub.add_parser("sweep", help="box-family sweep approaching h(G)")
    p.add_argument("file")
    p.add_argument("--epsilon", type=float, default=0.05)
    p.add_argument("--b-max", type=float, default=12.0)
    p.add_argument("--b-step", type=float, default=0.5)
    p.add_argument("--k0-max", type=float, default=200.0)
    p.add_argument("--aspect", help="side-length ratios of K0, comma separated")
    p.add_argument("--quadrature-n", type=int, default=32)
    p.add_argument("--csv", help="write the sweep table here")
    p.add_argument("--transversal")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("catalog", help="built-in algebras")
    p.add_argument("action", choices=("list", "show"))
    p.add_argument("name", nargs="?")
    p.set_defaults(func=cmd_catalog)
    return parser


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out)
    except (SolvCheegerError, ValueError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
