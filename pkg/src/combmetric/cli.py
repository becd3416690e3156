"""Command-line front end.

Exit codes: 0 success or affirmative verdict, 1 refutation with a witness,
2 usage, input or cap errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Sequence

import numpy as np

from . import code as code_mod
from . import enumerator, gf, isometry, mep, metric
from .covering import Covering, load_covering
from .errors import CombMetricError, NotDecomposable
from .gf import FieldContext, Matrix

EXIT_OK, EXIT_REFUTED, EXIT_ERROR = 0, 1, 2


class UsageError(Exception):
    pass


def _parse_vector(text: str, ctx: FieldContext, n: int) -> gf.Vector:
    try:
        entries = [int(t) for t in text.split(",")]
    except ValueError as exc:
        raise UsageError(f"bad vector {text!r}: expected comma-separated integers") from exc
    if len(entries) != n:
        raise UsageError(f"vector {text!r} has length {len(entries)}, covering has n = {n}")
    return ctx.vector(entries)


def _covering(args) -> Covering:
    if not args.covering:
        raise UsageError("--covering is required")
    return load_covering(args.covering).covering


def _ctx(args) -> FieldContext:
    try:
        return FieldContext(args.q)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _load_matrix(path: str, ctx: FieldContext, n: int) -> Matrix:
    data = json.loads(Path(path).read_text())
    rows = data["rows"] if isinstance(data, dict) else data
    if isinstance(data, dict) and "q" in data and int(data["q"]) != ctx.q:
        raise UsageError(f"matrix file is over F_{data['q']} but --q is {ctx.q}")
    m = ctx.matrix(rows)
    if m.shape != (n, n):
        raise UsageError(f"matrix must be {n}x{n}, got {m.shape[0]}x{m.shape[1]}")
    return m


def _rows(m: Matrix) -> list[list[int]]:
    return [list(r) for r in m.rows]


# -- subcommands --------------------------------------------------------------


def cmd_normalize(args):
    res = load_covering(args.covering) if args.covering else None
    if res is None:
        raise UsageError("--covering is required")
    doc = res.covering.to_json() | {"dropped": [list(s) for s in res.dropped]}
    text = f"{res.covering}\ndropped: {[list(s) for s in res.dropped]}"
    return EXIT_OK, doc, text


def cmd_weight(args):
    f, ctx = _covering(args), _ctx(args)
    x = _parse_vector(args.vector, ctx, f.n)
    w = metric.weight(f, x)
    return EXIT_OK, {"vector": list(x), "weight": w}, str(w)


def cmd_distance(args):
    f, ctx = _covering(args), _ctx(args)
    x = _parse_vector(args.x, ctx, f.n)
    y = _parse_vector(args.y, ctx, f.n)
    d = metric.distance(f, x, y)
    return EXIT_OK, {"x": list(x), "y": list(y), "distance": d}, str(d)


def cmd_axioms(args):
    f, ctx = _covering(args), _ctx(args)
    res = metric.check_axioms(f, ctx.q, args.samples, args.seed)
    bad = res["symmetry_violations"] + res["identity_violations"] + res["triangle_violations"]
    text = "\n".join(f"{k}: {v}" for k, v in res.items())
    return (EXIT_REFUTED if bad else EXIT_OK), res, text


def _code_arg(args) -> code_mod.LinearCode:
    if not args.code:
        raise UsageError("--code is required")
    c = code_mod.load_code(args.code)
    if args.q is not None and args.q != c.q:
        raise UsageError(f"code file is over F_{c.q} but --q is {args.q}")
    return c


def cmd_enumerator(args):
    f = _covering(args)
    c = _code_arg(args)
    dist = enumerator.enumerate_weights(f, c, args.max_enum)
    doc = {"degree": dist.degree, "coefficients": list(dist.coeffs), "polynomial": dist.polynomial()}
    text = f"A = {dist}\nW(x,y) = {dist.polynomial()}"
    return EXIT_OK, doc, text


def cmd_dual(args):
    c = _code_arg(args)
    d = code_mod.dual(c)
    lines = [f"dual of {c}: dimension {d.k}"] + [" ".join(map(str, r)) for r in d.generator.rows]
    return EXIT_OK, d.to_json(), "\n".join(lines)


def cmd_identity_check(args):
    f, ctx = _covering(args), _ctx(args)
    verdict = enumerator.identity_verdict_structural(f, ctx)
    doc = {"structural": verdict.to_json()}
    lines = []
    if verdict.admits:
        lines.append(f"admits, k={verdict.k}")
    else:
        w = verdict.witness
        lines += [
            "refuted",
            f"  C1 = {w.code1}, C2 = {w.code2}",
            f"  W(C1) = W(C2) = {w.dist1.polynomial()}",
            f"  W(C1^perp) = {w.dual_dist1.polynomial()}",
            f"  W(C2^perp) = {w.dual_dist2.polynomial()}",
        ]
    if args.exhaustive:
        ex = enumerator.identity_verdict_exhaustive(f, ctx, args.max_dim)
        doc["exhaustive"] = ex.to_json()
        agree = ex.admits == verdict.admits
        doc["agree"] = agree
        lines.append(f"exhaustive scan (max_dim={args.max_dim}): "
                     f"{'admits' if ex.admits else 'refuted'}; agrees: {agree}")
    return (EXIT_OK if verdict.admits else EXIT_REFUTED), doc, "\n".join(lines)


def cmd_isometry_group(args):
    f, ctx = _covering(args), _ctx(args)
    g = isometry.group_G(f, ctx)
    km = isometry.group_K_M(f, ctx, args.max_group)
    full = isometry.full_isometry_group(f, ctx, args.max_group)
    doc = {"order": len(full), "G": len(g), "K_M": len(km), "certified": full.certified}
    lines = [f"|G| = {len(g)}", f"|K_M| = {len(km)}", f"order of <G, K_M> = {len(full)}"]
    code = EXIT_OK
    if args.brute_force:
        brute = isometry.brute_force_isometries(f, ctx, args.max_enum)
        doc["brute_force_order"] = len(brute)
        doc["equal"] = brute == full
        lines.append(f"brute-force |GL(n,F)_q| = {len(brute)}; equal: {brute == full}")
        if brute != full:
            code = EXIT_REFUTED
            missing = np.setdiff1d(brute.keys, full.keys)[:1]
            m = gf.decode(missing, ctx.q, (f.n, f.n))[0]
            doc["witness"] = m.tolist()
            lines.append("isometry outside <G, K_M>:")
            lines += ["  " + " ".join(map(str, r)) for r in m]
    if args.dump:
        doc["elements"] = [m.tolist() for m in full.matrices()]
        for m in full.matrices():
            lines.append("")
            lines += [" ".join(map(str, r)) for r in m]
    return code, doc, "\n".join(lines)


def cmd_decompose(args):
    f, ctx = _covering(args), _ctx(args)
    if not args.matrix:
        raise UsageError("--matrix is required")
    m = _load_matrix(args.matrix, ctx, f.n)
    t = isometry.certify(f, m)
    if not t.certified:
        raise UsageError("matrix is not a linear F-isometry")
    try:
        phi, b = isometry.decompose(f, t)
    except NotDecomposable:
        doc = {"decomposable": False, "matrix": _rows(m)}
        return EXIT_REFUTED, doc, "not decomposable as T_phi * B with B respecting M"
    doc = {"decomposable": True, "phi": list(phi.phi), "B": _rows(b)}
    text = f"phi = {phi}  ({list(phi.phi)})\nB =\n{b}"
    return EXIT_OK, doc, text


def cmd_mep_check(args):
    f, ctx = _covering(args), _ctx(args)
    mode = "exhaustive" if args.exhaustive else "conjecture"
    verdict = mep.mep_verdict(f, ctx, mode=mode, max_dim=args.max_dim)
    doc = {"verdict": verdict.to_json()}
    lines = [f"{'satisfies MEP' if verdict.satisfies else 'fails MEP'} ({verdict.reason}, "
             f"{verdict.components} component(s))"]
    if verdict.witness is not None:
        w = verdict.witness
        lines.append(f"  non-extendable local equivalence {w.source} -> {w.target}")
        for src, img in zip(w.source.generator.rows, w.images.rows):
            lines.append(f"    {gf.Vector(ctx, src)} -> {gf.Vector(ctx, img)}")
    if args.exhaustive and verdict.reason != "exhaustive":
        scan = mep.exhaustive_mep_scan(f, ctx, args.max_dim)
        doc["exhaustive"] = scan.to_json()
        doc["agree"] = scan.satisfies == verdict.satisfies
        lines.append(f"exhaustive scan (max_dim={args.max_dim}): "
                     f"{'satisfies' if scan.satisfies else 'fails'}; agrees: {doc['agree']}")
    return (EXIT_OK if verdict.satisfies else EXIT_REFUTED), doc, "\n".join(lines)


def cmd_conjecture_scan(args):
    ctx = _ctx(args)
    if args.covering:
        fs = [load_covering(p).covering for p in args.covering]
        records = mep.conjecture_scan(fs[0].n, ctx, args.max_dim, fs)
    else:
        if args.n is None:
            raise UsageError("give --n or one or more --covering files")
        records = mep.conjecture_scan(args.n, ctx, args.max_dim)
    out = []
    for rec in records:
        out.append(rec)
        if not args.json:
            print(json.dumps(rec), flush=True)
    errors = sum(1 for r in out if r["error"])
    disagreements = sum(1 for r in out if r["agree"] is False)
    doc = {"records": out, "coverings": len(out), "errors": errors, "disagreements": disagreements}
    summary = f"# {len(out)} coverings, {disagreements} disagreements, {errors} errors"
    return (EXIT_ERROR if errors else EXIT_OK), doc, summary


COMMANDS = {
    "normalize": (cmd_normalize, "normalize a covering file"),
    "weight": (cmd_weight, "F-weight of a vector"),
    "distance": (cmd_distance, "F-distance between two vectors"),
    "axioms": (cmd_axioms, "check the metric axioms over F_q^n"),
    "enumerator": (cmd_enumerator, "F-weight distribution of a code"),
    "dual": (cmd_dual, "dual code"),
    "identity-check": (cmd_identity_check, "MacWilliams-type identity verdict"),
    "isometry-group": (cmd_isometry_group, "linear isometry group sizes"),
    "decompose": (cmd_decompose, "write an isometry as T_phi * B"),
    "mep-check": (cmd_mep_check, "MacWilliams extension property verdict"),
    "conjecture-scan": (cmd_conjecture_scan, "connected coverings: conjecture vs exhaustive scan"),
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--q", type=int, default=None, help="field size (prime); default 2")
    common.add_argument("--json", action="store_true", help="emit one JSON document")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--max-enum", type=int, default=gf.DEFAULT_ENUM_CAP)
    common.add_argument("--max-group", type=int, default=isometry.DEFAULT_GROUP_CAP)
    common.add_argument("--max-dim", type=int, default=2)

    parser = argparse.ArgumentParser(prog="combmetric", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_text) in COMMANDS.items():
        p = sub.add_parser(name, parents=[common], help=help_text)
        if name == "conjecture-scan":
            p.add_argument("--n", type=int)
            p.add_argument("--covering", action="append", help="covering JSON file (repeatable)")
        elif name != "dual":
            p.add_argument("--covering", help="covering JSON file")
        if name == "weight":
            p.add_argument("--vector", required=True)
        elif name == "distance":
            p.add_argument("--x", required=True)
            p.add_argument("--y", required=True)
        elif name == "axioms":
            p.add_argument("--samples", type=int, default=None,
                           help="sample this many triples instead of all")
        elif name in ("enumerator", "dual"):
            p.add_argument("--code")
        elif name in ("identity-check", "mep-check"):
            p.add_argument("--exhaustive", action="store_true")
        elif name == "isometry-group":
            p.add_argument("--dump", action="store_true")
            p.add_argument("--brute-force", action="store_true")
        elif name == "decompose":
            p.add_argument("--matrix")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_ERROR if exc.code else EXIT_OK
    if args.q is None and args.command not in ("enumerator", "dual"):
        args.q = 2
    handler = COMMANDS[args.command][0]
    try:
        code, doc, text = handler(args)
    except (UsageError, CombMetricError, ValueError, KeyError, OSError) as exc:
        msg = f"{type(exc).__name__}: {exc}"
        if args.json:
            print(json.dumps({"error": msg}))
        print(f"combmetric {args.command}: {msg}", file=sys.stderr)
        return EXIT_ERROR
    if args.json:
        print(json.dumps(doc))
    else:
        print(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
