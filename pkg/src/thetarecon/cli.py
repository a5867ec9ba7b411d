"""Command line entry point: ``thetarecon generate|recover|verify|full``.

Exit codes: 0 success, 2 validation or recovery failure (JSON error on
stderr), 1 internal error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from fractions import Fraction

from . import jsonio
from . import linalg as la
from .errors import ParseError, ThetaReconError
from .intersection import verify_reconstruction
from .oracle import HyperellipticConfig, generate_steiner, random_config
from .phi import PhiMap, verify_rank_one_preimages
from .pipeline import RunConfig, default_seed, ground_truth_gauge, reconstruct
from .quadrics import Quadric
from .steiner import validate_input, wedge_points


class VerificationFailed(ThetaReconError):
    pass


def _branch(text: str) -> tuple[Fraction, ...]:
    try:
        return tuple(Fraction(x) for x in text.split(","))
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"--branch: cannot parse {text!r}") from None


def _config(args) -> RunConfig:
    tol = args.tol
    if args.backend == "float" and tol is None:
        tol = la.DEFAULT_TOL
    return RunConfig(
        backend=args.backend,
        tol=tol if args.backend == "float" else None,
        seed=args.seed,
        max_restarts=args.restarts,
    )


def _generate(args):
    if args.branch:
        cfg = HyperellipticConfig(args.genus, _branch(args.branch))
    else:
        cfg = random_config(args.genus, args.seed)
    return generate_steiner(cfg, args.witnesses, args.seed)


def cmd_generate(args) -> int:
    jsonio.save_steiner(_generate(args), args.out)
    return 0


def _write_result(res, path):
    jsonio.save_result(path, res.inp.ctx.g, res.phi, res.prym, res.quadrics, res.diagnostics())


def cmd_recover(args) -> int:
    inp = jsonio.load_steiner(args.inp)
    res = reconstruct(inp, _config(args))
    _write_result(res, args.out)
    return 0


def cmd_full(args) -> int:
    inp = _generate(args)
    if args.input_out:
        jsonio.save_steiner(inp, args.input_out)
    res = reconstruct(inp, _config(args))
    _write_result(res, args.out)
    if not (res.report.all_vanish and res.rank_one.all_ok):
        raise VerificationFailed(f"quadrics fail on pairs {res.report.offending_ids}")
    return 0


def cmd_verify(args) -> int:
    inp = jsonio.load_steiner(args.inp)
    tol = args.tol or la.DEFAULT_TOL
    peek = jsonio.read_json(args.result)
    field = "float" if peek.get("diagnostics", {}).get("backend") == "float" else "rational"
    if field == "float" and inp.exact:
        inp = inp.to_float()
    validate_input(inp, tol)
    result = jsonio.load_result(args.result, field)
    phi = PhiMap(inp.ctx.g, result["phi"])
    rank_one = verify_rank_one_preimages(phi, wedge_points(inp, tol), tol)
    witnesses, gauge = [], None
    if inp.ground_truth is not None and inp.witnesses:
        gauge = ground_truth_gauge(inp, phi, tol)
        witnesses = inp.witnesses
    quads = [Quadric(i, s, m) for i, s, m in result["quadrics"]]
    report = verify_reconstruction(quads, witnesses, inp.ctx, tol=tol, gauge=gauge)
    summary = report.as_dict()
    summary["rank_one_failures"] = rank_one.failures
    sys.stdout.write(jsonio.dumps(summary))
    if not (report.all_vanish and rank_one.all_ok):
        raise VerificationFailed(f"offending pairs {sorted(set(report.offending_ids) | set(rank_one.failures))}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="thetarecon", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def run_opts(p):
        p.add_argument("--backend", choices=("exact", "float"), default="exact")
        p.add_argument("--tol", type=float, default=None)
        p.add_argument("--seed", type=int, default=default_seed())
        p.add_argument("--restarts", type=int, default=64)

    def gen_opts(p):
        p.add_argument("--genus", type=int, required=True)
        p.add_argument("--branch", help="comma separated 2g+2 distinct rationals")
        p.add_argument("--witnesses", type=int, default=24)

    p = sub.add_parser("generate", help="write a synthetic hyperelliptic Steiner input")
    gen_opts(p)
    p.add_argument("--seed", type=int, default=default_seed())
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("recover", help="recover phi and the quadrics from a Steiner input")
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--out", required=True)
    run_opts(p)
    p.set_defaults(func=cmd_recover)

    p = sub.add_parser("verify", help="check a result file against its input")
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--result", required=True)
    p.add_argument("--tol", type=float, default=None)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("full", help="generate, recover and verify in one run")
    gen_opts(p)
    run_opts(p)
    p.add_argument("--out", required=True)
    p.add_argument("--input-out", default=None)
    p.set_defaults(func=cmd_full)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
    try:
        return args.func(args)
    except ThetaReconError as exc:
        sys.stderr.write(json.dumps(exc.payload(), sort_keys=True) + "\n")
        return 2
    except ValueError as exc:
        sys.stderr.write(json.dumps({"error": "ValueError", "message": str(exc)}) + "\n")
        return 2
    except Exception as exc:  # noqa: BLE001
        sys.stderr.write(json.dumps({"error": "InternalError", "message": repr(exc)}) + "\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
