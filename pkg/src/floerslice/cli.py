"""Command-line surface for the pipeline.

Subcommands:
    complex  build | show | tensor | dual | reduce | width | slices | canon
    refilter EXPR N M [--normalize] [--extend T]
    ddiff    N K
    obstruct sieve | roots | metabolizers | choose-kn | table

Exit codes: 0 success, 2 usage or validation failure, 3 internal consistency
failure (collapse or calibration).  Output is JSON by default; --format table
gives human-readable text (for complexes, an ASCII grid by (i, j) position).
"""

from __future__ import annotations

import argparse
import json
import sys

from . import algebra, models, obstruct, refilter, surgery
from .algebra import BifilteredComplex, ComplexError
from .surgery import ConsistencyError

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_INTERNAL = 3


def _load_complex(arg: str) -> BifilteredComplex:
    """Accept a knot expression or a path to a complex JSON file."""
    if arg.endswith(".json"):
        with open(arg) as fh:
            return BifilteredComplex.from_json(json.load(fh))
    return models.build_model(arg)


def _emit(payload, args, text: str | None = None) -> None:
    if getattr(args, "format", "json") == "table" and text is not None:
        out = text
    else:
        out = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    target = getattr(args, "output", None)
    if target:
        import os

        base = os.environ.get("FLOERSLICE_OUTPUT_DIR")
        if base and not os.path.isabs(target):
            target = os.path.join(base, target)
        with open(target, "w") as fh:
            fh.write(out)
    else:
        sys.stdout.write(out)


def _emit_complex(C: BifilteredComplex, args) -> None:
    _emit(C.to_json(), args, algebra.ascii_diagram(C))


def cmd_complex(args) -> int:
    action = args.action
    if action == "build":
        C = models.build_model(args.arg)
        report = algebra.validate(C)
        if not report:
            raise ComplexError("; ".join(report.problems))
        _emit_complex(C, args)
    elif action == "show":
        _emit_complex(_load_complex(args.arg), args)
    elif action == "tensor":
        if args.arg2 is None:
            raise ComplexError("tensor needs a second complex argument")
        C = algebra.tensor(_load_complex(args.arg), _load_complex(args.arg2))
        _emit_complex(C, args)
    elif action == "dual":
        _emit_complex(algebra.dualize(_load_complex(args.arg)), args)
    elif action == "reduce":
        _emit_complex(algebra.reduce_complex(_load_complex(args.arg)), args)
    elif action == "width":
        w = algebra.width(_load_complex(args.arg))
        _emit({"width": w}, args, f"{w}\n")
    elif action == "slices":
        if args.arg2 is None:
            raise ComplexError("slices needs a slice index argument")
        C = _load_complex(args.arg)
        j0 = int(args.arg2)
        ranks = algebra.slice_homology(C, j0)
        _emit(
            {"j": j0, "ranks": {str(g): r for g, r in sorted(ranks.items())}},
            args,
            "".join(f"grading {g}: rank {r}\n" for g, r in sorted(ranks.items()))
            or "(zero)\n",
        )
    elif action == "canon":
        form = algebra.canonical_form(_load_complex(args.arg))
        _emit(json.loads(form), args, form + "\n")
    else:
        raise ComplexError(f"unknown complex action {action!r}")
    return EXIT_OK


def cmd_refilter(args) -> int:
    C = _load_complex(args.expr)
    out = refilter.refilter(C, args.N, args.m)
    if args.extend:
        out = refilter.extend_spinc(out, args.extend)
    if args.normalize:
        out = refilter.normalize(out)
    if args.reduce:
        out = algebra.reduce_complex(out)
    _emit_complex(out, args)
    return EXIT_OK


def cmd_ddiff(args) -> int:
    d = surgery.branched_cover_d_diff(args.n, args.k,
                                      full_models=args.full_models)
    _emit({"n": args.n, "k": args.k, "d_difference": d}, args, f"{d}\n")
    return EXIT_OK


def cmd_obstruct(args) -> int:
    action = args.action
    if action == "sieve":
        fam = obstruct.sieve_family(args.count)
        _emit(
            [r.to_json() for r in fam],
            args,
            "".join(f"n={r.n}  value={r.value}  factors={r.factorization}\n"
                    for r in fam),
        )
    elif action == "roots":
        roots = obstruct.sqrt_minus_one(args.N)
        _emit({"N": args.N, "roots": roots}, args,
              " ".join(map(str, roots)) + "\n")
    elif action == "metabolizers":
        mets = obstruct.metabolizers(args.N)
        _emit(
            {"N": args.N, "generators": [list(m.generator) for m in mets]},
            args,
            "".join(f"(1,{m.generator[1]})\n" for m in mets),
        )
    elif action == "choose-kn":
        report = obstruct.choose_kn(args.N)
        _emit(report.to_json(), args)
    elif action == "table":
        table = _build_table(args.max_n, args.jobs)
        _emit(table, args)
    else:
        raise ComplexError(f"unknown obstruct action {action!r}")
    return EXIT_OK


def _build_table(max_n: int, jobs: int) -> dict:
    admissible_n = [n for n in range(2, max_n + 1)
                    if obstruct.admissible(n).admissible]
    if jobs > 1:
        from concurrent.futures import ProcessPoolExecutor

        table = {}
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for n, rep in zip(admissible_n,
                              pool.map(obstruct.choose_kn, admissible_n)):
                table[str(n)] = {
                    "k_n": rep.k_n,
                    "S_b": sorted(str(x) for x in rep.s_b),
                    "excluded": sorted(str(x) for x in rep.excluded),
                    "roots": rep.roots_b,
                    "note": rep.note,
                }
        return table
    return obstruct.kn_table(max_n)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="floerslice",
        description="Exact bifiltered complexes and the sliceness-obstruction pipeline.",
    )
    ap.add_argument("--format", choices=["json", "table"], default="json")
    ap.add_argument("-o", "--output", help="write output to a file")
    sub = ap.add_subparsers(dest="command", required=True)

    pc = sub.add_parser("complex", help="structural operations on complexes")
    pc.add_argument("action", choices=[
        "build", "show", "tensor", "dual", "reduce", "width", "slices", "canon",
    ])
    pc.add_argument("arg", help="knot expression or complex JSON path")
    pc.add_argument("arg2", nargs="?",
                    help="second complex (tensor) or slice index (slices)")
    pc.set_defaults(func=cmd_complex)

    pr = sub.add_parser("refilter", help="meridian complex in the surgered manifold")
    pr.add_argument("expr", help="knot expression or complex JSON path")
    pr.add_argument("N", type=int, help="surgery magnitude (negative framing)")
    pr.add_argument("m", type=int, help="structure index in the base window")
    pr.add_argument("--extend", type=int, default=0, metavar="T",
                    help="shift to the structure T periods away")
    pr.add_argument("--normalize", action="store_true")
    pr.add_argument("--reduce", action="store_true")
    pr.set_defaults(func=cmd_refilter)

    pd = sub.add_parser("ddiff", help="correction-term difference of the two covers")
    pd.add_argument("n", type=int)
    pd.add_argument("k", type=int)
    pd.add_argument("--full-models", action="store_true",
                    help="use the full doubled-pattern models (slow)")
    pd.set_defaults(func=cmd_ddiff)

    po = sub.add_parser("obstruct", help="sieve, metabolizers, witness selection")
    po.add_argument("action", choices=[
        "sieve", "roots", "metabolizers", "choose-kn", "table",
    ])
    po.add_argument("N", type=int, nargs="?", default=0,
                    help="modulus (roots/metabolizers) or n (choose-kn)")
    po.add_argument("--count", type=int, default=3, help="family size (sieve)")
    po.add_argument("--max-n", type=int, default=10, help="table range")
    po.add_argument("--jobs", type=int, default=1,
                    help="parallel workers for the table")
    po.set_defaults(func=cmd_obstruct)
    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except ConsistencyError as exc:
        print(f"internal consistency error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except (ComplexError, ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
