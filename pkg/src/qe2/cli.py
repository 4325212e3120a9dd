"""Command-line interface.

Exit codes: 0 when every check passes, 1 when any check fails, 2 on usage or
parse errors.  ``QE2_SEED`` sets the seed of randomized checks (default 0).

The ``suite --json`` report has the shape
``{"version": str, "entries": [{"id", "anchor", "status", "residue", "elapsed_ms"}]}``
with ``status`` one of ``pass``/``fail`` and entries sorted by id.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
import time

from . import __version__
from .parser import ParseError, parse_element
from .pbw import PBWError, check_morphism
from .scalar import ScalarFraction

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

DEFAULT_A = "(1-q^-2)^-1*h^-1*(h - zeta)"


class UsageError(Exception):
    pass


def seed() -> int:
    raw = os.environ.get("QE2_SEED", "0")
    try:
        return int(raw)
    except ValueError as exc:
        raise UsageError(f"QE2_SEED must be an integer, got {raw!r}") from exc


def _algebra(name: str):
    from .catalog import build

    try:
        return build(name)
    except KeyError as exc:
        raise UsageError(str(exc.args[0])) from exc


# commands ------------------------------------------------------------------

def cmd_nf(args) -> int:
    A = _algebra(args.algebra)
    print(parse_element(args.expr, A).render())
    return EXIT_OK


def cmd_comm(args) -> int:
    A = _algebra(args.algebra)
    x, y = parse_element(args.expr1, A), parse_element(args.expr2, A)
    c = ScalarFraction.parse(args.factor)
    r = x * y - y * x * c
    print(r.render())
    return EXIT_OK if r.is_zero() else EXIT_FAIL


def _kv(pairs) -> dict:
    out = {}
    for p in pairs:
        if "=" not in p:
            raise UsageError(f"parameter {p!r} is not key=value")
        k, v = p.split("=", 1)
        out[k.strip()] = v.strip()
    return out


def cmd_check_map(args) -> int:
    from . import autgrp

    params = _kv(args.params)
    fam = args.family
    if args.random:
        rng = random.Random(seed())
        ok = True
        for n in range(args.random):
            if fam == "Dq.rho":
                f = autgrp.random_rho(rng)
            elif fam in ("Oq", "Uq"):
                f = autgrp.random_family_member(fam, rng)
            else:
                raise UsageError("--random supports Dq.rho, Oq and Uq")
            rep = check_morphism(f)
            tag = json.dumps(f.tag.to_json()) if f.tag else f.name
            print(f"[{n}] {rep.summary()} {tag}")
            ok &= rep.passed
        return EXIT_OK if ok else EXIT_FAIL
    if fam == "Dq.rho":
        for k in ("i", "j", "m", "n"):
            if k in params:
                params[k] = int(params[k])
        if args.matrix:
            try:
                i, j, m, n = (int(t) for t in args.matrix.replace(",", " ").split())
            except ValueError as exc:
                raise UsageError("--matrix takes four integers 'i j m n'") from exc
            params.update(i=i, j=j, m=m, n=n)
        tag = autgrp.AutTag(fam, {"rho": autgrp.RhoParams(**params)})
    else:
        if "i" in params:
            params["i"] = int(params["i"])
        if "swap" in params:
            params["swap"] = int(params["swap"])
        if "power" in params:
            params["power"] = int(params["power"])
        tag = autgrp.AutTag(fam, params)
    f = autgrp.make(tag, exponents=args.exponents)
    rep = check_morphism(f)
    print(rep.summary())
    for label, res in rep.failures:
        print(f"  {label}: {res.render()}")
    ok = rep.passed
    if fam == "Dq.rho":
        for r in autgrp.action_on_normals(f):
            print(f"{r.name} -> ({r.scalar.render()})*K^{r.s}*a^{r.t}*{r.name}; expected exponents {r.expected}: "
                  f"{'pass' if r.passed else 'FAIL'}")
            ok &= r.passed
    return EXIT_OK if ok else EXIT_FAIL


def cmd_suite(args) -> int:
    from .catalog import identity_suite

    entries = [e for e in identity_suite() if not args.filter or e.id.startswith(args.filter)]
    report = []
    failed = 0
    for e in entries:
        t0 = time.perf_counter()
        res = e.residue()
        ms = (time.perf_counter() - t0) * 1000
        status = "pass" if res.is_zero() else "fail"
        failed += status == "fail"
        report.append({"id": e.id, "anchor": e.anchor, "status": status, "residue": res.render(),
                       "elapsed_ms": round(ms, 3)})
        if not args.quiet:
            print(f"{status:4} {e.id:28} {e.anchor}")
    print(f"{len(entries) - failed}/{len(entries)} identities reduce to zero")
    if args.json:
        with open(args.json, "w") as fh:
            json.dump({"version": __version__, "entries": report}, fh, indent=2)
    return EXIT_OK if failed == 0 else EXIT_FAIL


def cmd_center(args) -> int:
    from . import zlattice

    src = args.matrix.removeprefix("builtin:")
    try:
        M = zlattice.load(src)
    except (OSError, ValueError, KeyError) as exc:
        raise UsageError(f"cannot read matrix {args.matrix!r}: {exc}") from exc
    try:
        basis = zlattice.torus_center(M)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    if basis:
        print(f"kernel rank {len(basis)}; center spanned by monomials with exponents:")
        for v in basis:
            print("  " + " ".join(map(str, v)))
    else:
        print("kernel rank 0; center trivial")
    return EXIT_OK


MODULE_TAGS = ("W(gamma)", "W", "W'", "X(gamma)", "Y(gamma)", "H", "L", "M", "N",
               "A-H", "A-L", "A-M", "A-N")


def _module(tag: str, a_poly: str, qpower: int):
    from . import repmod
    from .gwa import GwaConditionError, QgwaData

    if tag in ("W(gamma)", "W", "W'", "X(gamma)", "Y(gamma)"):
        try:
            d = QgwaData.parse(a_poly, qpower)
        except GwaConditionError as exc:
            raise UsageError(str(exc)) from exc
        if tag in ("X(gamma)", "Y(gamma)"):
            return repmod.gwa_torsionfree_module(tag, d)
        return repmod.gwa_torsion_module(tag, d)
    if tag in ("H", "L", "M", "N"):
        return repmod.cchi_module(tag)
    if tag.startswith("A-") and tag[2:] in ("H", "L", "M", "N"):
        return repmod.achi_module(tag[2:])
    raise UsageError(f"unknown module {tag!r}; choose from {', '.join(MODULE_TAGS)} or ind-<H|L|M|N>")


def cmd_module_audit(args) -> int:
    from . import repmod

    tag = args.module
    if tag.startswith("ind-"):
        base = tag[4:]
        M = repmod.induce(repmod.achi_module(base[2:]) if base.startswith("A-")
                          else repmod.cchi_module(base, algebra="C"))
    else:
        M = _module(tag, args.a, args.qpower)
    if args.window < 1:
        raise UsageError("--window must be >= 1")
    rep = repmod.relation_audit(M, args.window)
    print(rep.summary())
    for rid, idx, res in rep.failures[:20]:
        print(f"  {rid} at {idx}: {res.render()}")
    if args.window >= 2 and not tag.startswith("ind-"):
        print(repmod.connectivity_probe(M, args.window).summary())
    return EXIT_OK if rep.passed else EXIT_FAIL


def cmd_induce(args) -> int:
    from . import repmod
    from .catalog import build

    tag = args.module
    if tag.startswith("A-"):
        M = repmod.achi_module(tag[2:])
    elif tag in ("H", "L", "M", "N"):
        M = repmod.cchi_module(tag, algebra="C")
    else:
        raise UsageError("induce takes H, L, M, N (over C) or A-H, A-L, A-M, A-N (over A)")
    I = repmod.induce(M)
    g = I.generator
    print(f"{I.name}: basis Z x basis({M.name}), generator {g}")
    for name in build("Dq").gens:
        print(f"  {name} . {g} = {I.act_gen(name, repmod.ModVector.basis(g)).render()}")
    if I.meta["over"] == "C":
        for i, ev in repmod.weight_support(I, 2).items():
            print(f"  K-eigenvalue on stratum {i}: {ev.render()}")
    rep = repmod.relation_audit(I, args.window)
    print(rep.summary())
    return EXIT_OK if rep.passed else EXIT_FAIL


# entry point -----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qe2", description="Exact computations in O_q(E2), U_q(e2), D_q and relatives.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("nf", help="normal form of an expression")
    s.add_argument("--algebra", required=True)
    s.add_argument("expr")
    s.set_defaults(func=cmd_nf)

    s = sub.add_parser("comm", help="x*y - factor*y*x; exit 0 iff zero")
    s.add_argument("--algebra", required=True)
    s.add_argument("--factor", default="1")
    s.add_argument("expr1")
    s.add_argument("expr2")
    s.set_defaults(func=cmd_comm)

    s = sub.add_parser("check-map", help="build a family automorphism and check all relations")
    s.add_argument("--family", required=True)
    s.add_argument("--matrix", help="rho matrix as 'i j m n'")
    s.add_argument("--exponents", choices=("printed", "solved"), default="printed")
    s.add_argument("--random", type=int, default=0, help="check N seeded members instead")
    s.add_argument("params", nargs="*", help="key=value family parameters")
    s.set_defaults(func=cmd_check_map)

    s = sub.add_parser("suite", help="run the identity suite")
    s.add_argument("--filter", default="")
    s.add_argument("--json")
    s.add_argument("--quiet", action="store_true")
    s.set_defaults(func=cmd_suite)

    s = sub.add_parser("center", help="center lattice of a quantum torus from its skew-exponent matrix")
    s.add_argument("--matrix", required=True, help="JSON file or builtin id (D, D56, CX, UqE)")
    s.set_defaults(func=cmd_center)

    s = sub.add_parser("module-audit", help="check every relation on a window of basis vectors")
    s.add_argument("--module", required=True)
    s.add_argument("--window", type=int, default=8)
    s.add_argument("--a", default=DEFAULT_A, help="a(h) for the quantum GWA modules")
    s.add_argument("--qpower", type=int, default=1)
    s.set_defaults(func=cmd_module_audit)

    s = sub.add_parser("induce", help="induce a C- or A-module to D_q")
    s.add_argument("--module", required=True)
    s.add_argument("--window", type=int, default=2)
    s.set_defaults(func=cmd_induce)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        return args.func(args)
    except (UsageError, ParseError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except PBWError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, ZeroDivisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
