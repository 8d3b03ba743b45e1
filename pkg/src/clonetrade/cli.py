"""Command-line interface.

Subcommands: symfid, gram, oracle, check, region, verify.  Floats are printed
with 15 significant digits and rationals alongside when they exist.  ``check``
exits 0 for Feasible, 1 for Infeasible, 2 for Undetermined and 3 for
unsupported problems.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from fractions import Fraction
from itertools import product
from typing import Optional, Sequence

import numpy as np

from . import acceptance
from . import casestudy24 as cs
from . import gram, hilbert, tradeoff
from .bitstrings import BitString, as_bits, enumerate_weight

EXIT = {tradeoff.Verdict.FEASIBLE: 0, tradeoff.Verdict.INFEASIBLE: 1, tradeoff.Verdict.UNDETERMINED: 2}
UNSUPPORTED = 3


def fmt(x) -> str:
    return f"{float(x):.15g}"


def _positive(v: str) -> int:
    n = int(v)
    if n < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return n


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, Fraction):
        return f"{obj.numerator}/{obj.denominator}"
    if isinstance(obj, (np.floating, float)):
        return float(fmt(obj))
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    return obj


def cmd_symfid(args) -> int:
    try:
        tradeoff.CloneProblem(args.M, args.N, args.d, args.L)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    f = tradeoff.symmetric_fidelity(args.M, args.L, args.N, args.d)
    w = tradeoff.wang_formula(args.M, args.L, args.N, args.d)
    print(f"{f.numerator}/{f.denominator}")
    print(fmt(f))
    print(f"literature formula: {w.numerator}/{w.denominator} ({'agrees' if w == f else 'differs'})")
    return 0


def cmd_gram(args) -> int:
    y = args.y if args.y is not None else "0" * args.N
    try:
        if args.L is None:
            G = gram.build_G_y(args.M, args.N, args.d, y)
        else:
            G = gram.build_G_ML(args.M, args.N, args.d, args.L, y)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(G.to_json())
    return 0


def cmd_oracle(args) -> int:
    try:
        tradeoff.CloneProblem(args.M, args.N, args.d, args.L)
        lam, _ = hilbert.max_eig(hilbert.build_R(args.M, args.N, args.d, hilbert.uniform_weights(args.N, args.L)))
    except (ValueError, hilbert.BudgetError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    f = tradeoff.symmetric_fidelity(args.M, args.L, args.N, args.d)
    print(json.dumps({"max_eig": float(fmt(lam)), "closed_form": f"{f.numerator}/{f.denominator}", "difference": float(fmt(lam - float(f)))}))
    return 0


def _read_targets(path: str) -> dict:
    with open(path, encoding="utf-8") as fh:
        spec = json.load(fh)
    for key in ("M", "N", "d", "targets"):
        if key not in spec:
            raise ValueError(f"missing key {key!r}")
    targets = {as_bits(k): (Fraction(v) if isinstance(v, str) else v) for k, v in spec["targets"].items()}
    if not targets:
        raise ValueError("no targets")
    weights = {y.weight for y in targets}
    L = spec.get("L")
    if L is None:
        if len(weights) != 1:
            raise ValueError("targets mix weights; give L explicitly")
        L = weights.pop()
    return {"M": int(spec["M"]), "N": int(spec["N"]), "d": int(spec["d"]), "L": int(L), "targets": targets}


def _conjugate_symmetric(targets: dict) -> bool:
    for y, v in targets.items():
        yb = BitString(tuple(1 - b for b in y.bits))
        if yb in targets and abs(float(targets[yb]) - float(v)) > 1e-12:
            return False
    return True


def _route(req: dict) -> tuple[int, dict]:
    M, N, d, L, t = req["M"], req["N"], req["d"], req["L"], req["targets"]
    tradeoff.CloneProblem(M, N, d, L)
    if any(y.length != N for y in t):
        raise ValueError("target strings must have length N")
    if M == N - 1:
        res = tradeoff.solve_Nminus1(N, d, list(t), t)
        return EXIT[res.verdict], res.to_dict()
    if M == 1 and L < N:
        res = tradeoff.feasibility_1LN(N, d, L, t)
        return EXIT[res.verdict], res.to_dict()
    if (M, N, L, d) == (2, 4, 2, 2) and _conjugate_symmetric(t):
        F = cs.PairFidelities(*[float(t.get(as_bits(k), t.get(BitString(tuple(1 - b for b in as_bits(k).bits)), 0))) for k in cs.LABELS])
        rep = cs.region_report(F)
        verdict = tradeoff.Verdict.FEASIBLE if rep["member"] else tradeoff.Verdict.INFEASIBLE
        out = {
            "verdict": str(verdict),
            "witness": None if rep["witness"] is None else dict(zip(cs.CASE_ORDER, (cs.basis_change() @ rep["witness"]).tolist())),
            "residuals": {"class": rep["class"], "achieved": rep.get("achieved"), "scope": "class-1 and class-2 surfaces"},
        }
        return EXIT[verdict], out
    cls = tradeoff.rank1_classification(M, L, N)
    return UNSUPPORTED, {
        "verdict": "Unsupported",
        "witness": None,
        "residuals": {"rank1_classification": str(cls), "reason": f"no solver for M={M}, L={L}, N={N}; rank-1 reduction {str(cls).lower()}"},
    }


def cmd_check(args) -> int:
    try:
        req = _read_targets(args.targets)
        code, out = _route(req)
        extra = {k: out.pop(k) for k in list(out) if k not in ("verdict", "witness", "residuals")}
        out["residuals"] = {**(out.get("residuals") or {}), **extra}
    except (OSError, ValueError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return UNSUPPORTED
    print(json.dumps(_jsonable(out), sort_keys=True))
    return code


def _region_2to4(args, fh) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["F_1100", "F_1010", "F_0110", "member", "class"])
    for a, b, c, member, cls in cs.region_grid(args.grid, args.kernel):
        w.writerow([fmt(a), fmt(b), fmt(c), "true" if member else "false", "" if cls is None else cls])


def _region_one_to_n(args, fh) -> None:
    N, d = args.N, args.d
    w = csv.writer(fh, lineterminator="\n")
    w.writerow([f"F_{k}" for k in range(1, N + 1)])
    axis = np.linspace(1 / (d + 1), 1, args.grid)
    for known in product(axis, repeat=N - 1):
        try:
            last = fmt(tradeoff.tradeoff_1_to_N(N, d, list(known)))
        except ValueError:
            last = ""
        w.writerow([fmt(v) for v in known] + [last])


def cmd_region(args) -> int:
    if args.grid < 2:
        print("error: grid must be at least 2", file=sys.stderr)
        return 2
    if args.mode == "one-to-n" and (args.N < 2 or args.d < 2):
        print("error: one-to-n needs N >= 2 and d >= 2", file=sys.stderr)
        return 2
    writer = _region_2to4 if args.mode == "2to4" else _region_one_to_n
    try:
        if args.output in (None, "-"):
            writer(args, sys.stdout)
        else:
            with open(args.output, "w", encoding="utf-8", newline="") as fh:
                writer(args, fh)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


def cmd_verify(args) -> int:
    results = acceptance.run(args.scope)
    print(acceptance.format_table(results))
    failed = [r.key for r in results if not r.passed]
    if failed:
        print(f"failed: {', '.join(failed)}", file=sys.stderr)
        return 1
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="clonetrade", description="Fidelity trade-offs for universal quantum cloning.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("symfid", help="symmetric cloner fidelity")
    for k in ("M", "N", "L", "d"):
        s.add_argument(f"--{k}", type=_positive, required=True)
    s.set_defaults(func=cmd_symfid)

    s = sub.add_parser("gram", help="dump a Gram matrix as JSON")
    for k in ("M", "N", "d"):
        s.add_argument(f"--{k}", type=int, required=True)
    s.add_argument("--y", help="label bit string (default all zeros)")
    s.add_argument("--L", type=int, help="aggregate over weight-L strings")
    s.set_defaults(func=cmd_gram)

    s = sub.add_parser("oracle", help="dense dominant eigenvalue for uniform weights")
    for k in ("M", "N", "L", "d"):
        s.add_argument(f"--{k}", type=_positive, required=True)
    s.set_defaults(func=cmd_oracle)

    s = sub.add_parser("check", help="decide a targets file")
    s.add_argument("targets", help="JSON file with M, N, d, optional L and a targets map")
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("region", help="export region samples as CSV")
    s.add_argument("--mode", choices=("2to4", "one-to-n"), required=True)
    s.add_argument("--grid", type=int, default=50)
    s.add_argument("--N", type=int, default=3)
    s.add_argument("--d", type=int, default=2)
    s.add_argument("--kernel", choices=cs.KERNELS, default=cs.DEFAULT_KERNEL)
    s.add_argument("--output", "-o")
    s.set_defaults(func=cmd_region)

    s = sub.add_parser("verify", help="run the acceptance suite")
    s.add_argument("--scope", choices=("fast", "full"), default="fast")
    s.set_defaults(func=cmd_verify)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
