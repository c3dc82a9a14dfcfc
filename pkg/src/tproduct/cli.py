"""Command-line interface: ``tproduct <command> ...``.

Exit codes: 0 success, 1 a mathematical failure (singular tensor, SMW
conditions not met, a violated bound, or with ``--strict`` a violated
hypothesis), 2 usage or input errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .algebra import tprod
from .errors import ConditionsNotSatisfied, DimensionMismatch, ParseError, SingularTensor
from .experiment import (COLUMNS, ExperimentConfig, Theorem, format_csv, format_json,
                         golden_names, load_golden, run_experiment)
from .instances import conditioned, gaussian
from .inverse import inv, multirank, pinv
from .io import read_tensor, tensor_to_json, write_tensor
from .smw import build_smw_factors, construct_conditioned_instance, smw_inverse, smw_pinv
from .solve import lstsq_min_norm, solve_exact
from .tensor import identity, transpose

__all__ = ["main", "build_parser"]


class UsageError(Exception):
    pass


def _int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _emit(args, T) -> None:
    if args.output:
        write_tensor(args.output, T)
    else:
        print(json.dumps(tensor_to_json(T)))


def _cmd_tprod(args) -> int:
    _emit(args, tprod(read_tensor(args.a), read_tensor(args.b)))
    return 0


def _cmd_transpose(args) -> int:
    _emit(args, transpose(read_tensor(args.a)))
    return 0


def _cmd_inv(args) -> int:
    _emit(args, inv(read_tensor(args.a)))
    return 0


def _cmd_pinv(args) -> int:
    _emit(args, pinv(read_tensor(args.a), tol=args.tol))
    return 0


def _cmd_multirank(args) -> int:
    mr = multirank(read_tensor(args.a), tol=args.tol)
    print(json.dumps({"multirank": list(mr.ranks), "tol": mr.tol}))
    return 0


def _cmd_solve(args) -> int:
    A, D = read_tensor(args.a), read_tensor(args.d)
    free = read_tensor(args.free) if args.free else None
    res = solve_exact(A, D, free)
    _emit(args, res.solution)
    print(json.dumps({"consistent": res.consistent, "residual": res.consistency_residual}),
          file=sys.stderr if not args.output else sys.stdout)
    return 0


def _cmd_lstsq(args) -> int:
    _emit(args, lstsq_min_norm(read_tensor(args.a), read_tensor(args.b)))
    return 0


def _read_bundle(args):
    return tuple(read_tensor(p) for p in (args.a, args.u, args.b, args.v))


def _cmd_smw_inv(args) -> int:
    _emit(args, smw_inverse(*_read_bundle(args)))
    return 0


def _cmd_smw_pinv(args) -> int:
    A, U, B, V = _read_bundle(args)
    _emit(args, smw_pinv(A, build_smw_factors(A, U, B, V)))
    return 0


def _cmd_bounds(args) -> int:
    if args.list_golden:
        print("\n".join(golden_names()))
        return 0
    if args.config:
        p = Path(args.config)
        cfg = (ExperimentConfig.from_dict(json.loads(p.read_text())) if p.suffix == ".json"
               else load_golden(args.config))
    else:
        if args.theorem is None or args.dims is None:
            raise UsageError("bounds needs --theorem and --dims (or --config)")
        rp = args.rank_profile
        if rp is not None and rp not in ("full", "deficient"):
            rp = _int_list(rp)
        cfg = ExperimentConfig(theorem=args.theorem, dims=args.dims, trials=args.trials,
                               seed=args.seed, scale=args.scale, rank_profile=rp,
                               width=args.width, start=args.start)
    result = run_experiment(cfg, threads=args.threads)
    fmt = args.format or ("json" if args.out and args.out.endswith(".json") else "csv")
    text = format_csv(result) if fmt == "csv" else format_json(result)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    s = result.summary()
    print(f"{cfg.theorem.value}: {s['trials']} trials, {s['applicable']} applicable, "
          f"{s['hypothesis_violated']} hypothesis violations, {s['violations']} bound "
          f"violations, max ratio {s['max_ratio']:.6g}", file=sys.stderr)
    if result.violations:
        bad = [r.trial for r in result.rows if r.violated][:10]
        print(f"bound violated in trials {bad}", file=sys.stderr)
        return 1
    if args.strict and result.hypothesis_violations:
        return 1
    return 0


def _cmd_gen(args) -> int:
    rng = np.random.default_rng(args.seed)
    dims = args.dims
    if args.kind == "smw":
        if len(dims) != 3:
            raise UsageError("gen smw needs --dims n1,k,n3")
        A, f = construct_conditioned_instance(dims, rng, family=args.family)
        out = Path(args.output or "smw.t3b")
        for name, T in (("A", A), ("U", f.U), ("B", f.B), ("V", f.V)):
            write_tensor(out.with_name(f"{out.stem}_{name}{out.suffix}"), T)
        return 0
    if args.kind == "identity":
        if len(dims) != 2:
            raise UsageError("gen identity needs --dims n,n3")
        T = identity(*dims)
    else:
        if len(dims) != 3:
            raise UsageError(f"gen {args.kind} needs --dims n1,n2,n3")
        if args.kind == "gaussian":
            T = gaussian(dims, rng)
        else:
            T = conditioned(*dims, rng, ranks=args.ranks)
    _emit(args, T)
    return 0


_BOUNDS_EPILOG = (
    "CSV columns: " + ", ".join(COLUMNS) + ". Floats use 17 significant digits; "
    "the last line is '# summary theorem=... trials=... applicable=... "
    "hypothesis_violated=... violations=... max_ratio=...'. Trial i uses the "
    "sub-seed SeedSequence([seed, i]).generate_state(1, uint64)[0]. The env var "
    "TPROD_THREADS caps --threads. Exit 1 when any applicable trial violates its "
    "bound (or, with --strict, when any hypothesis fails)."
)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="tproduct",
                                description="t-product tensor algebra and perturbation bounds")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    def unary(name, fn, help_):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("a", help="input tensor (.json or .t3b)")
        sp.add_argument("-o", "--output", help="output file (default: JSON on stdout)")
        sp.set_defaults(func=fn)
        return sp

    sp = sub.add_parser("tprod", help="t-product A * B")
    sp.add_argument("a")
    sp.add_argument("b")
    sp.add_argument("-o", "--output")
    sp.set_defaults(func=_cmd_tprod)

    unary("transpose", _cmd_transpose, "tensor transpose")
    unary("inv", _cmd_inv, "tensor inverse")
    unary("pinv", _cmd_pinv, "Moore-Penrose inverse").add_argument(
        "--tol", type=float, help="singular value cutoff")
    sp = sub.add_parser("multirank", help="per-face numerical ranks")
    sp.add_argument("a")
    sp.add_argument("--tol", type=float)
    sp.set_defaults(func=_cmd_multirank)

    sp = sub.add_parser("solve", help="general solution of A * X = D")
    sp.add_argument("a")
    sp.add_argument("d")
    sp.add_argument("--free", help="arbitrary n2 x n4 x n3 tensor of the general solution")
    sp.add_argument("-o", "--output")
    sp.set_defaults(func=_cmd_solve)

    sp = sub.add_parser("lstsq", help="minimal-norm least-squares solution")
    sp.add_argument("a")
    sp.add_argument("b")
    sp.add_argument("-o", "--output")
    sp.set_defaults(func=_cmd_lstsq)

    for name, fn, what in (("smw-inv", _cmd_smw_inv, "(A + U*B*V)^-1 by SMW"),
                           ("smw-pinv", _cmd_smw_pinv, "(A + U*B*V)^+ by SMW")):
        sp = sub.add_parser(name, help=what)
        for arg in ("a", "u", "b", "v"):
            sp.add_argument(arg)
        sp.add_argument("-o", "--output")
        sp.set_defaults(func=fn)

    sp = sub.add_parser("bounds", help="verify a perturbation bound on seeded instances",
                        epilog=_BOUNDS_EPILOG)
    sp.add_argument("--theorem", choices=[t.value for t in Theorem])
    sp.add_argument("--dims", type=_int_list, help="n1,n2,n3[,n4]")
    sp.add_argument("--trials", type=int, default=100)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--scale", type=float, default=1e-3,
                    help="perturbation size relative to the unperturbed data")
    sp.add_argument("--rank-profile", help="'full', 'deficient' or comma-separated ranks")
    sp.add_argument("--width", type=int, default=1, help="SMW update width")
    sp.add_argument("--start", type=int, default=0, help="index of the first trial")
    sp.add_argument("--config", help="JSON config file or shipped golden config name")
    sp.add_argument("--list-golden", action="store_true")
    sp.add_argument("--out")
    sp.add_argument("--format", choices=["csv", "json"])
    sp.add_argument("--strict", action="store_true",
                    help="also exit 1 when a hypothesis is violated")
    sp.add_argument("--threads", type=int, default=1)
    sp.set_defaults(func=_cmd_bounds)

    sp = sub.add_parser("gen", help="write a seeded random or structured tensor")
    sp.add_argument("kind", choices=["gaussian", "conditioned", "identity", "smw"])
    sp.add_argument("--dims", type=_int_list, required=True)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--ranks", type=_int_list, help="multirank for 'conditioned'")
    sp.add_argument("--family", choices=["lifted", "trivial"], default="lifted")
    sp.add_argument("-o", "--output",
                    help="output file; for 'smw' a stem expanded to <stem>_A/_U/_B/_V")
    sp.set_defaults(func=_cmd_gen)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (SingularTensor, ConditionsNotSatisfied) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (UsageError, ParseError, DimensionMismatch, ValueError, OSError,
            argparse.ArgumentTypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
