"""Command line entry point: ``mtt verify|det|forests|expand``."""

from __future__ import annotations

import argparse
import json
import sys

from . import forests, harness, lift, simplicial
from .determinant import SizeCapError, tau_det
from .graph import InstanceError, build_laplacian, load_instance, principal_submatrix
from .algebra import MATRIX, RingError
from .report import render_report


def _read_instance(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise InstanceError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InstanceError(f"{path}: malformed JSON: {exc}") from None
    if isinstance(doc, dict) and "complex" in doc:
        return simplicial.load_complex_instance(doc)
    return load_instance(doc)


def _out(text: str):
    sys.stdout.write(text if text.endswith("\n") else text + "\n")


def cmd_verify(args) -> int:
    inst = _read_instance(args.instance) if args.instance else None
    if inst is None and not args.random:
        raise InstanceError("give --instance FILE or --random")
    cfg = harness.CampaignConfig(
        args.theorem, instance=inst, seed=args.seed, n=args.n, m=args.m, N=args.fiber, ring=args.ring,
        trace=args.trace, preset=args.preset, trials=args.trials, det_cap=args.det_cap, enum_cap=args.enum_cap,
        force=args.force_large, workers=args.workers, params={"block": args.block})
    reports, status, err = harness.run_campaign(cfg)
    if err:
        sys.stderr.write(f"mtt: error: {err}\n")
        return status
    if args.format == "json":
        _out(json.dumps([json.loads(render_report(r, "json", timings=args.timings)) for r in reports],
                        indent=2, ensure_ascii=False))
    else:
        for r in reports:
            _out(render_report(r, "text", timings=args.timings))
        failed = sum(not r.ok for r in reports)
        _out(f"{len(reports)} checks, {failed} failed")
    return status


def cmd_det(args) -> int:
    inst = _read_instance(args.instance)
    if isinstance(inst, simplicial.ComplexInstance):
        M = simplicial.build_simplicial_laplacian(inst)
        trace = inst.trace
        k = args.minor
    elif inst.ring.kind == MATRIX:
        L = lift.LiftedInstance(inst)
        M = lift.assemble_laplacian(L)
        trace = inst.trace
        k = args.minor * L.N
    else:
        M = build_laplacian(inst)
        trace = inst.trace
        k = args.minor
    if not 0 <= k <= M.size:
        raise InstanceError(f"minor must be between 0 and {M.size}")
    _out(tau_det(principal_submatrix(M, k), trace, force=args.force_large).render())
    return 0


def cmd_forests(args) -> int:
    n, m = args.n, args.m
    if not (n >= 1 and 0 <= m <= n):
        raise InstanceError("need n >= 1 and 0 <= m <= n")
    if args.classes:
        count = 0
        for fc in forests.forest_classes(n, m):
            dec = forests.classify_forest(fc.representative, n, m)
            _out(f"{_fmt_forest(fc.representative)}  cycles={_fmt_cycles(dec.cycles)}  orbit={fc.orbit_size}")
            count += 1
        _out(f"{count} classes")
        return 0
    count = 0
    for F in forests.enumerate_forests(n, m):
        dec = forests.classify_forest(F, n, m)
        _out(f"{_fmt_forest(F)}  cycles={_fmt_cycles(dec.cycles)}")
        count += 1
    _out(f"{count} forests")
    return 0


def _fmt_forest(F) -> str:
    return " ".join(f"{i}->{j}" for i, j in F.edges()) or "(empty)"


def _fmt_cycles(cycles) -> str:
    return "[" + ", ".join("(" + " ".join(map(str, c)) + ")" for c in cycles) + "]"


def cmd_expand(args) -> int:
    inst = _read_instance(args.instance)
    th = args.theorem
    if isinstance(inst, simplicial.ComplexInstance):
        if th != "cw":
            raise InstanceError(f"a simplicial instance only expands theorem cw, not {th}")
        P = simplicial.rhs_cw(inst)
    elif th == "mtkz":
        P = forests.rhs_mtkz(inst)
    elif th == "sym":
        P = forests.rhs_sym(inst if inst.weight_mode != "symbolic" else inst.with_(weight_mode="symmetric"))
    elif th in ("mtkzn", "mttnall"):
        L = lift.LiftedInstance(lift.as_matrix_instance(inst))
        P = lift.rhs_mtkzn(L) if th == "mtkzn" else lift.rhs_mttnall(L)
    else:
        raise InstanceError(f"theorem {th} has no single right-hand side to expand")
    _out(P.render())
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="mtt", description="Exact checks of holonomy-twisted matrix-tree identities.")
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="verify an identity on a file instance or a seeded random campaign")
    v.add_argument("--theorem", required=True, choices=harness.THEOREMS)
    src = v.add_mutually_exclusive_group()
    src.add_argument("--instance", metavar="FILE")
    src.add_argument("--random", action="store_true")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--n", type=int)
    v.add_argument("--m", type=int)
    v.add_argument("--fiber", type=int, help="matrix size N (for cw: the dimension d)")
    v.add_argument("--ring")
    v.add_argument("--trace", choices=("id", "re", "ntr"))
    v.add_argument("--preset")
    v.add_argument("--block", type=int, default=1, help="block size p for factorization on a file instance")
    v.add_argument("--trials", type=int, default=1)
    v.add_argument("--format", choices=("text", "json"), default="text")
    v.add_argument("--timings", action="store_true", help="include elapsed times (output no longer byte-stable)")
    v.add_argument("--force-large", action="store_true")
    v.add_argument("--det-cap", type=int)
    v.add_argument("--enum-cap", type=int)
    v.add_argument("--workers", type=int, default=1)
    v.set_defaults(func=cmd_verify)

    d = sub.add_parser("det", help="tau-determinant of a leading principal minor")
    d.add_argument("--instance", required=True, metavar="FILE")
    d.add_argument("--minor", type=int, required=True)
    d.add_argument("--force-large", action="store_true")
    d.set_defaults(func=cmd_det)

    f = sub.add_parser("forests", help="list cycle-and-well-rooted spanning forests of K_n")
    f.add_argument("--n", type=int, required=True)
    f.add_argument("--m", type=int, required=True)
    f.add_argument("--classes", action="store_true", help="one line per orientation class")
    f.set_defaults(func=cmd_forests)

    e = sub.add_parser("expand", help="print the forest-sum polynomial")
    e.add_argument("--theorem", required=True, choices=("mtkz", "sym", "mtkzn", "mttnall", "cw"))
    e.add_argument("--instance", required=True, metavar="FILE")
    e.set_defaults(func=cmd_expand)
    return p


def main(argv=None) -> int:
    if hasattr(sys.stdout, "reconfigure"):
        sys.stdout.reconfigure(encoding="utf-8")
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (InstanceError, RingError, SizeCapError, forests.EnumerationCapError, lift.PreconditionError) as exc:
        sys.stderr.write(f"mtt: error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
