"""Command-line interface: validation, center solving, law checks, reports.

Inputs are fusion-data JSON files or the names of built-in corpora
(vec_z2, vec_z3, fib, ising).  Reports are deterministic for a fixed seed:
the JSON output is byte-stable and wall time goes to stderr only.
"""

from __future__ import annotations

import argparse
import sys
import time

from . import io as cio
from .canonical import (
    CanonicalAlgebra,
    bimodule_assoc_residual,
    bimodule_star_residual,
    bimodule_to_hb,
    count_equivalence,
    gamma_norm,
    hb_to_bimodule,
    mult_S,
    mult_assoc_residual,
    star_monoidality_residual,
)
from .center import solve_center
from .deligne import deligne_product, monoidal_opposite
from .fusion import FusionDataError, validate
from .ind import ALGEBRAIC, UNITARY
from .monad import Context, bimonad_law_residuals, monad_law_residuals
from .report import Report
from .sampling import random_ind_object, trial_rng

__all__ = ["main"]


def _load(spec: str, name: str | None = None):
    if spec in cio.BUILTIN_NAMES:
        return cio.builtin(spec)
    return cio.load_fusion_data(spec, name=name)


def _config(args) -> dict:
    out = {"tolerance": args.tolerance}
    for key in ("seed", "trials", "mode"):
        if hasattr(args, key):
            out[key] = getattr(args, key)
    return out


def _emit(report: Report, args, t0: float) -> int:
    text = report.as_json() if args.json else report.as_table()
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    print(f"wall_time_s: {time.time() - t0:.3f}", file=sys.stderr)
    return 0 if report.passed else 1


def _cmd_validate(args) -> int:
    t0 = time.time()
    cat = _load(args.input)
    rep = validate(cat, tolerance=args.tolerance)
    report = Report("validate", cio.fingerprint(cat), _config(args))
    for name, value in rep.records():
        report.add(name, value, threshold=args.tolerance)
    return _emit(report, args, t0)


def _cmd_center(args) -> int:
    t0 = time.time()
    cat = _load(args.input)
    simples = solve_center(cat, seed=args.seed, tolerance=args.tolerance)
    report = Report("center", cio.fingerprint(cat), _config(args))
    rows = []
    for s in simples:
        ur = s.hb.unitarity_residual()
        report.add(f"unitary_residual_{s.id_tag}", ur, threshold=1e-9)
        rows.append({
            "ordinal": s.id_tag,
            "qdim": round(s.qdim, 9),
            "carrier": "+".join(f"{n}*{lbl}" if n > 1 else lbl
                                for lbl, n in s.hb.carrier.mult),
            "unitary_residual": f"{ur:.2e}",
        })
    total = sum(s.qdim ** 2 for s in simples)
    gd2 = cat.global_dim() ** 2
    report.add("global_dim_relative", abs(total - gd2) / gd2, threshold=1e-6)
    report.add("simple_count", len(simples), threshold=len(simples), kind="count")
    report.data["simples"] = rows
    if args.emit_braidings:
        braid = {}
        for s in simples:
            mats = {}
            for a in cat.labels:
                if a == cat.unit:
                    continue
                comp = s.hb.component(a)
                mats[a] = {u: [[[float(z.real), float(z.imag)] for z in row]
                               for row in comp.block(u).tolist()]
                           for u in cat.labels if comp.block(u).size}
            braid[str(s.id_tag)] = mats
        report.data["braidings"] = braid
    return _emit(report, args, t0)


def _cmd_monad_check(args) -> int:
    t0 = time.time()
    cat = _load(args.input)
    ctx = Context(cat, mode=args.mode, tolerance=args.tolerance)
    worst: dict[str, float] = {}
    for trial in range(args.trials):
        rng = trial_rng(args.seed, trial)
        x = random_ind_object(cat, rng)
        for k, v in monad_law_residuals(ctx, x).items():
            worst[k] = max(worst.get(k, 0.0), v)
    report = Report("monad-check", cio.fingerprint(cat), _config(args))
    for k in sorted(worst):
        report.add(k, worst[k], threshold=1e-9)
    return _emit(report, args, t0)


def _cmd_bimonad_check(args) -> int:
    t0 = time.time()
    cat = _load(args.input)
    ctx = Context(cat, mode=args.mode, tolerance=args.tolerance)
    worst: dict[str, float] = {}
    for trial in range(args.trials):
        rng = trial_rng(args.seed, trial, stream=1)
        xs = [random_ind_object(cat, rng) for _ in range(3)]
        for k, v in bimonad_law_residuals(ctx, *xs).items():
            worst[k] = max(worst.get(k, 0.0), v)
    report = Report("bimonad-check", cio.fingerprint(cat), _config(args))
    for k in sorted(worst):
        report.add(k, worst[k], threshold=1e-9)
    return _emit(report, args, t0)


def _cmd_canonical(args) -> int:
    t0 = time.time()
    cat = _load(args.input)
    alg = CanonicalAlgebra(cat)
    report = Report("canonical-algebra", cio.fingerprint(cat), _config(args))
    report.add("mult_associativity", mult_assoc_residual(alg), threshold=1e-10)
    report.add("star_monoidality", star_monoidality_residual(alg), threshold=1e-10)
    worst_gamma = 0.0
    rows = []
    for a in cat.labels:
        for a1 in cat.labels:
            for a2 in cat.labels:
                n = gamma_norm(alg, a, a1, a2)
                if n > 1e-12:
                    worst_gamma = max(worst_gamma, abs(n - 1.0))
                    rows.append({"a": a, "a1": a1, "a2": a2, "norm": round(n, 12)})
    report.add("gamma_norm_deviation", worst_gamma, threshold=1e-9)
    consts = []
    for a1 in cat.labels:
        for a2 in cat.labels:
            for a3, m in mult_S(alg, a1, a2).items():
                blk = m.block(alg.gen_label(a3))
                if blk.size:
                    consts.append({"a1": a1, "a2": a2, "a3": a3,
                                   "coeffs": [round(float(z.real), 12) for z in blk.ravel()]})
    report.data["gamma_norms"] = rows
    report.data["mult_structure"] = consts
    return _emit(report, args, t0)


def _cmd_bimodule_roundtrip(args) -> int:
    t0 = time.time()
    cat = _load(args.input)
    alg = CanonicalAlgebra(cat)
    simples = solve_center(cat, seed=args.seed, tolerance=args.tolerance)
    report = Report("bimodule-roundtrip", cio.fingerprint(cat), _config(args))
    for s in simples:
        bm = hb_to_bimodule(alg, s.hb)
        back = bimodule_to_hb(alg, bm, check=False)
        rt = max((back.component(a) - s.hb.component(a)).norm() for a in cat.labels)
        report.add(f"roundtrip_{s.id_tag}", rt, threshold=1e-10)
        report.add(f"assoc_{s.id_tag}", bimodule_assoc_residual(bm), threshold=1e-9)
        report.add(f"star_{s.id_tag}", bimodule_star_residual(bm), threshold=1e-9)
        flag = 1.0 if (bm.unitary == s.hb.unitary and back.unitary == s.hb.unitary) else 0.0
        report.add(f"unitary_flag_{s.id_tag}", flag, kind="equality")
    return _emit(report, args, t0)


def _cmd_count_equivalence(args) -> int:
    t0 = time.time()
    cat = _load(args.input)
    res = count_equivalence(cat, seed=args.seed, tolerance=args.tolerance)
    report = Report("count-equivalence", cio.fingerprint(cat), _config(args))
    report.add("center_simples", res["center_count"], threshold=res["bimodule_count"], kind="count")
    report.add("qdim_multisets_match",
               1.0 if sorted(res["qdims_center"]) == sorted(res["qdims_bimodule"]) else 0.0,
               kind="equality")
    report.add("hom_dims_match", 1.0 if res["hom_dims_match"] else 0.0, kind="equality")
    report.add("max_roundtrip", max(res["roundtrip_residuals"], default=0.0), threshold=1e-10)
    report.data["summary"] = f"{res['center_count']} = {res['bimodule_count']}"
    report.data["qdims"] = res["qdims_center"]
    return _emit(report, args, t0)


def _cmd_deligne(args) -> int:
    t0 = time.time()
    c1 = _load(args.left)
    c2 = _load(args.right)
    prod = deligne_product(c1, c2)
    rep = validate(prod, tolerance=args.tolerance)
    report = Report("deligne", cio.fingerprint(prod), _config(args))
    for name, value in rep.records():
        report.add(name, value, threshold=args.tolerance)
    text = cio.serialize_fusion_data(prod)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    print(report.as_table(), file=sys.stderr)
    print(f"wall_time_s: {time.time() - t0:.3f}", file=sys.stderr)
    return 0 if report.passed else 1


def _cmd_opposite(args) -> int:
    t0 = time.time()
    cat = _load(args.input)
    opp = monoidal_opposite(cat)
    rep = validate(opp, tolerance=args.tolerance)
    report = Report("opposite", cio.fingerprint(opp), _config(args))
    for name, value in rep.records():
        report.add(name, value, threshold=args.tolerance)
    text = cio.serialize_fusion_data(opp)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    print(report.as_table(), file=sys.stderr)
    print(f"wall_time_s: {time.time() - t0:.3f}", file=sys.stderr)
    return 0 if report.passed else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="centerkit",
        description="Drinfeld-center toolkit for unitary fusion categories")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, trials=False, mode=False, emit=False, output=True):
        p.add_argument("--tolerance", type=float, default=1e-9)
        p.add_argument("--seed", type=int, default=0)
        if trials:
            p.add_argument("--trials", type=int, default=50)
        if mode:
            p.add_argument("--mode", choices=[ALGEBRAIC, UNITARY], default=ALGEBRAIC)
        if emit:
            p.add_argument("--emit-braidings", action="store_true")
        p.add_argument("--json", action="store_true", help="emit the JSON report")
        if output:
            p.add_argument("--output", default=None, help="write the report/data to a file")

    p = sub.add_parser("validate", help="certify pentagon/unitarity/conjugate equations")
    p.add_argument("input")
    common(p)
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("center", help="enumerate the simple objects of the center")
    p.add_argument("input")
    common(p, emit=True)
    p.set_defaults(func=_cmd_center)

    p = sub.add_parser("monad-check", help="seeded monad-law residuals")
    p.add_argument("input")
    common(p, trials=True, mode=True)
    p.set_defaults(func=_cmd_monad_check)

    p = sub.add_parser("bimonad-check", help="seeded op-lax law residuals")
    p.add_argument("input")
    common(p, trials=True, mode=True)
    p.set_defaults(func=_cmd_bimonad_check)

    p = sub.add_parser("canonical-algebra", help="canonical algebra structure and norms")
    p.add_argument("input")
    common(p)
    p.set_defaults(func=_cmd_canonical)

    p = sub.add_parser("bimodule-roundtrip", help="half-braiding/bimodule conversions")
    p.add_argument("input")
    common(p)
    p.set_defaults(func=_cmd_bimodule_roundtrip)

    p = sub.add_parser("count-equivalence", help="center vs bimodule count-level check")
    p.add_argument("input")
    common(p)
    p.set_defaults(func=_cmd_count_equivalence)

    p = sub.add_parser("deligne", help="emit the Deligne product of two categories")
    p.add_argument("left")
    p.add_argument("right")
    common(p)
    p.set_defaults(func=_cmd_deligne)

    p = sub.add_parser("opposite", help="emit the monoidal opposite")
    p.add_argument("input")
    common(p)
    p.set_defaults(func=_cmd_opposite)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except FusionDataError as exc:
        print(f"error {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
